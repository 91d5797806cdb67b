#include "ekfrac/density.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ekfrac/errors.hpp"
#include "ekfrac/quadrature.hpp"
#include "ekfrac/rng.hpp"

namespace ekfrac {

namespace {

std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

Complex log_beta(Complex a, Complex b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

}  // namespace

// ---------------------------------------------------------------------------
// Type-1 beta

void Beta1Params::validate() const {
    if (!(lambda > 0.0) || !(alpha > 0.0) || !std::isfinite(lambda) || !std::isfinite(alpha)) {
        throw DomainError("Beta1Params: lambda and alpha must be positive");
    }
}

Beta1Params kober_second_kernel(double zeta, double alpha) { return {zeta + 1.0, alpha}; }

Beta1Params kober_first_kernel(double zeta, double alpha) { return {zeta, alpha}; }

double beta1_pdf(const Beta1Params& p, double x) {
    p.validate();
    if (!(x > 0.0 && x < 1.0)) {
        return 0.0;
    }
    return std::exp(-log_beta(p.lambda, p.alpha) + (p.lambda - 1.0) * std::log(x) +
                    (p.alpha - 1.0) * std::log1p(-x));
}

TestFunction beta1_density(const Beta1Params& p) {
    p.validate();
    const double log_norm = -log_beta(p.lambda, p.alpha);
    TestFunction f;
    f.name = "beta1:" + fmt_num(p.lambda) + "," + fmt_num(p.alpha);
    f.evaluator = [p, log_norm](double x) {
        return std::exp(log_norm + (p.lambda - 1.0) * std::log(x) + (p.alpha - 1.0) * std::log1p(-x));
    };
    f.near_upper = [p, log_norm](double x, double gap) {
        return std::exp(log_norm + (p.lambda - 1.0) * std::log(x) + (p.alpha - 1.0) * std::log(gap));
    };
    f.support = {0.0, 1.0};
    f.lower_exponent = p.lambda - 1.0;
    f.upper_exponent = p.alpha - 1.0;
    f.decay = Decay::compact();
    f.is_density = true;
    // E x^{s-1} = B(lambda + s - 1, alpha) / B(lambda, alpha)
    f.mellin_closed_form = [p, log_norm](Complex s) {
        return std::exp(log_norm + log_beta(p.lambda + s - 1.0, Complex(p.alpha)));
    };
    return f;
}

// ---------------------------------------------------------------------------
// Pathway family

PathwayRegime PathwayParams::regime() const {
    if (q < 1.0) {
        return PathwayRegime::Less;
    }
    if (q > 1.0) {
        return PathwayRegime::Greater;
    }
    return PathwayRegime::Limit;
}

double PathwayParams::mass_exponent(KernelKind kind) const {
    return kind == KernelKind::Second ? gamma + 1.0 : gamma;
}

double PathwayParams::support_end() const {
    if (regime() != PathwayRegime::Less) {
        return kInfinity;
    }
    return std::pow(a * (1.0 - q), -1.0 / delta);
}

void PathwayParams::validate(KernelKind kind) const {
    for (double v : {gamma, delta, eta, a, q}) {
        if (!std::isfinite(v)) {
            throw DomainError("PathwayParams: parameters must be finite");
        }
    }
    if (!(delta > 0.0) || !(a > 0.0)) {
        throw DomainError("PathwayParams: delta and a must be positive");
    }
    if (regime() == PathwayRegime::Less) {
        if (!(eta / (1.0 - q) > -1.0)) {
            throw DomainError("PathwayParams: q < 1 needs eta/(1-q) > -1");
        }
    } else if (!(eta > 0.0)) {
        throw DomainError("PathwayParams: q >= 1 needs eta > 0");
    }
    if (!(mass_exponent(kind) > 0.0)) {
        throw DomainError(kind == KernelKind::Second ? "PathwayParams: second-kind kernel needs gamma > -1"
                                                     : "PathwayParams: first-kind kernel needs gamma > 0");
    }
    if (regime() == PathwayRegime::Greater) {
        const double rho = eta / (q - 1.0);
        if (!(rho - mass_exponent(kind) / delta > 0.0)) {
            throw DomainError("PathwayParams: q > 1 needs eta/(q-1) - m/delta > 0 (m = " +
                              fmt_num(mass_exponent(kind)) + ")");
        }
    }
}

namespace {

// log of the regime's normalizing constant. The power [a|1-q|]^{m/delta} is
// merged with the leading term of the gamma ratio so nothing cancels as q -> 1.
double log_pathway_const(const PathwayParams& p, KernelKind kind) {
    const double h = p.mass_exponent(kind) / p.delta;
    switch (p.regime()) {
        case PathwayRegime::Less: {
            const double beta = p.eta / (1.0 - p.q);
            const double x = beta + 1.0;
            return std::log(p.delta) + h * std::log(p.a * p.eta + p.a * (1.0 - p.q)) +
                   log_gamma_shift_excess(x, h) - log_gamma(h);
        }
        case PathwayRegime::Greater: {
            const double rho = p.eta / (p.q - 1.0);
            const double x = rho - h;
            return std::log(p.delta) + h * std::log(p.a * p.eta - p.a * (p.q - 1.0) * h) +
                   log_gamma_shift_excess(x, h) - log_gamma(h);
        }
        case PathwayRegime::Limit:
            break;
    }
    return std::log(p.delta) + h * std::log(p.a * p.eta) - log_gamma(h);
}

double log_pathway_kernel(const PathwayParams& p, KernelKind kind, double x, double gap = std::nan("")) {
    const double m = p.mass_exponent(kind);
    const double xd = std::pow(x, p.delta);
    switch (p.regime()) {
        case PathwayRegime::Less: {
            const double beta = p.eta / (1.0 - p.q);
            if (beta == 0.0) {
                return (m - 1.0) * std::log(x);
            }
            const double end = p.support_end();
            if (gap >= 0.0 && gap < 0.5 * end) {
                // 1 - a(1-q) x^delta = 1 - (x/end)^delta with x = end - gap
                return (m - 1.0) * std::log(x) + beta * std::log(-std::expm1(p.delta * std::log1p(-gap / end)));
            }
            return (m - 1.0) * std::log(x) + beta * std::log1p(-p.a * (1.0 - p.q) * xd);
        }
        case PathwayRegime::Greater:
            return (m - 1.0) * std::log(x) - p.eta / (p.q - 1.0) * std::log1p(p.a * (p.q - 1.0) * xd);
        case PathwayRegime::Limit:
            break;
    }
    return (m - 1.0) * std::log(x) - p.a * p.eta * xd;
}

}  // namespace

double pathway_log_norm(const PathwayParams& p, KernelKind kind) {
    p.validate(kind);
    return log_pathway_const(p, kind);
}

double pathway_log_kernel(const PathwayParams& p, KernelKind kind, double x, double gap) {
    return log_pathway_kernel(p, kind, x, gap);
}

PathwayConstants pathway_norm_consts(const PathwayParams& p, KernelKind kind) {
    p.validate(kind);
    const double h = p.mass_exponent(kind) / p.delta;
    const double c_star = std::exp(std::log(p.delta) + h * std::log(p.a * p.eta) - log_gamma(h));
    return {std::exp(log_pathway_const(p, kind)), c_star};
}

double pathway_pdf(const PathwayParams& p, double x, KernelKind kind) {
    p.validate(kind);
    if (!(x > 0.0) || !(x < p.support_end())) {
        return 0.0;
    }
    return std::exp(log_pathway_const(p, kind) + log_pathway_kernel(p, kind, x));
}

TestFunction pathway_density(const PathwayParams& p, KernelKind kind) {
    p.validate(kind);
    const double log_c = log_pathway_const(p, kind);
    const double m = p.mass_exponent(kind);
    TestFunction f;
    f.name = "pathway:g=" + fmt_num(p.gamma) + ",d=" + fmt_num(p.delta) + ",e=" + fmt_num(p.eta) +
             ",a=" + fmt_num(p.a) + ",q=" + fmt_num(p.q) + (kind == KernelKind::First ? ",kind=1" : "");
    f.evaluator = [p, kind, log_c](double x) { return std::exp(log_c + log_pathway_kernel(p, kind, x)); };
    if (p.regime() == PathwayRegime::Less) {
        f.near_upper = [p, kind, log_c](double x, double gap) {
            return std::exp(log_c + log_pathway_kernel(p, kind, x, gap));
        };
    }
    f.support = {0.0, p.support_end()};
    f.lower_exponent = m - 1.0;
    f.is_density = true;
    switch (p.regime()) {
        case PathwayRegime::Less:
            f.upper_exponent = p.eta / (1.0 - p.q);
            f.decay = Decay::compact();
            break;
        case PathwayRegime::Greater:
            f.decay = Decay::power_law(p.delta * p.eta / (p.q - 1.0) - (m - 1.0));
            break;
        case PathwayRegime::Limit:
            f.decay = Decay::exponential();
            break;
    }
    // E x^{s-1}: beta/gamma integrals in w = (m + s - 1)/delta.
    f.mellin_closed_form = [p, log_c, m](Complex s) {
        const Complex w = (m + s - 1.0) / p.delta;
        Complex lg;
        switch (p.regime()) {
            case PathwayRegime::Less: {
                const double beta = p.eta / (1.0 - p.q);
                lg = log_gamma(w) + log_gamma(beta + 1.0) - log_gamma(w + beta + 1.0) -
                     w * std::log(p.a * (1.0 - p.q));
                break;
            }
            case PathwayRegime::Greater: {
                const double rho = p.eta / (p.q - 1.0);
                lg = log_gamma(w) + log_gamma(rho - w) - log_gamma(rho) - w * std::log(p.a * (p.q - 1.0));
                break;
            }
            case PathwayRegime::Limit:
                lg = log_gamma(w) - w * std::log(p.a * p.eta);
                break;
        }
        return std::exp(log_c - std::log(p.delta) + lg);
    };
    return f;
}

// ---------------------------------------------------------------------------
// Hypergeometric-appended beta kernels

void HyperDensityParams::validate() const {
    hyper.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !std::isfinite(zeta)) {
        throw DomainError("HyperDensityParams: alpha must be positive");
    }
    if (!(lambda() > 0.0)) {
        throw DomainError(kind == KernelKind::Second ? "HyperDensityParams: second kind needs zeta > -1"
                                                     : "HyperDensityParams: first kind needs zeta > 0");
    }
    if (hyper.p() == hyper.q() + 1) {
        double sup = hyper.scale;
        if (hyper.mode != ArgMode::X && hyper.mode != ArgMode::OneMinusX) {
            sup = std::pow(hyper.scale, hyper.exponents->d1);
        }
        if (!(sup < 1.0)) {
            throw DomainError("HyperDensityParams: p = q + 1 needs a scale below 1");
        }
    }
}

double hyper_kernel_unnormalized(const HyperDensityParams& p, double x, double one_minus_x) {
    if (!(x > 0.0) || !(one_minus_x > 0.0)) {
        return 0.0;
    }
    PfqOptions opts;
    opts.truncate_at = p.truncate_at;
    const double series = pfq(p.hyper.upper, p.hyper.lower, p.hyper.argument(x, one_minus_x), opts).value;
    return std::pow(x, p.x_exponent()) * std::pow(one_minus_x, p.alpha - 1.0) * series;
}

namespace {

// sum_k coef_k z^k / k! * B(lambda + kx k, alpha + ky k) / B(lambda, alpha)
double beta_series(const HyperDensityParams& p, double z, double kx, double ky) {
    const double lambda = p.lambda();
    double term = 1.0;
    double sum = 1.0;
    double prev_ratio = kInfinity;
    double log_b = log_beta(lambda, p.alpha);
    for (std::size_t k = 0; k < 1'000'000; ++k) {
        const double kk = static_cast<double>(k);
        double r = z / (kk + 1.0);
        for (double a : p.hyper.upper) {
            r *= a + kk;
        }
        for (double b : p.hyper.lower) {
            r /= b + kk;
        }
        const double log_b_next = log_beta(lambda + kx * (kk + 1.0), p.alpha + ky * (kk + 1.0));
        r *= std::exp(log_b_next - log_b);
        log_b = log_b_next;
        term *= r;
        sum += term;
        if (term == 0.0) {
            return sum;
        }
        if (r < 1.0 && r <= prev_ratio && term * r / (1.0 - r) <= 1e-15 * sum) {
            return sum;
        }
        prev_ratio = r;
    }
    throw NonConvergedError("hyper_norm_const: beta series did not converge");
}

}  // namespace

double hyper_norm_const(const HyperDensityParams& p) {
    p.validate();
    const double lambda = p.lambda();
    const double base = std::exp(log_beta(lambda, p.alpha));
    const HyperParams& h = p.hyper;
    double value = 0.0;
    switch (h.mode) {
        case ArgMode::X:
        case ArgMode::OneMinusX: {
            std::vector<double> upper = h.upper;
            std::vector<double> lower = h.lower;
            upper.push_back(h.mode == ArgMode::X ? lambda : p.alpha);
            lower.push_back(p.alpha + lambda);
            value = base * pfq(upper, lower, h.scale).value;
            break;
        }
        case ArgMode::PowerX:
            value = base * beta_series(p, std::pow(h.scale, h.exponents->d1), h.exponents->d2, 0.0);
            break;
        case ArgMode::PowerOneMinusX:
            value = base * beta_series(p, std::pow(h.scale, h.exponents->d1), 0.0, h.exponents->d2);
            break;
        case ArgMode::Mixed:
            value = base * beta_series(p, std::pow(h.scale, h.exponents->d1), h.exponents->d3, h.exponents->d2);
            break;
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError("hyper_norm_const: constant is not finite and positive");
    }
    return value;
}

double hyper_density_pdf(const HyperDensityParams& p, double x) {
    const double c = hyper_norm_const(p);
    if (!(x > 0.0 && x < 1.0)) {
        return 0.0;
    }
    return hyper_kernel_unnormalized(p, x, 1.0 - x) / c;
}

TestFunction hyper_density(const HyperDensityParams& p) {
    const double c = hyper_norm_const(p);
    TestFunction f;
    std::ostringstream os;
    os << "hyper:" << p.hyper.p() << "F" << p.hyper.q() << (p.kind == KernelKind::Second ? ",kind=2" : ",kind=1")
       << ",zeta=" << p.zeta << ",alpha=" << p.alpha << ",a=" << p.hyper.scale;
    f.name = os.str();
    f.evaluator = [p, c](double x) { return hyper_kernel_unnormalized(p, x, 1.0 - x) / c; };
    f.near_upper = [p, c](double x, double gap) { return hyper_kernel_unnormalized(p, x, gap) / c; };
    f.support = {0.0, 1.0};
    f.lower_exponent = p.x_exponent();
    f.upper_exponent = p.alpha - 1.0;
    f.decay = Decay::compact();
    f.is_density = !p.truncate_at.has_value();
    const bool closed = (p.hyper.mode == ArgMode::X || p.hyper.mode == ArgMode::OneMinusX) && !p.truncate_at;
    if (closed) {
        // E x^{s-1} = B(lambda+s-1, alpha) p+1Fq+1(..., lambda+s-1 | alpha; ..., alpha+lambda+s-1; a) / c
        f.mellin_closed_form = [p, c](Complex s) {
            const Complex shifted = p.lambda() + s - 1.0;
            std::vector<Complex> upper(p.hyper.upper.begin(), p.hyper.upper.end());
            std::vector<Complex> lower(p.hyper.lower.begin(), p.hyper.lower.end());
            upper.push_back(p.hyper.mode == ArgMode::X ? shifted : Complex(p.alpha));
            lower.push_back(p.alpha + shifted);
            const Complex series = pfq(upper, lower, Complex(p.hyper.scale)).value;
            return std::exp(log_beta(shifted, Complex(p.alpha))) * series / c;
        };
    }
    return f;
}

namespace {
HyperDensityParams saigo(double a1, double a2, double b1, double scale, double zeta, double alpha, KernelKind kind) {
    HyperDensityParams p;
    p.hyper.upper = {a1, a2};
    p.hyper.lower = {b1};
    p.hyper.scale = scale;
    p.hyper.mode = ArgMode::OneMinusX;
    p.zeta = zeta;
    p.alpha = alpha;
    p.kind = kind;
    p.validate();
    return p;
}
}  // namespace

HyperDensityParams saigo_second(double a1, double a2, double b1, double scale, double zeta, double alpha) {
    return saigo(a1, a2, b1, scale, zeta, alpha, KernelKind::Second);
}

HyperDensityParams saigo_first(double a1, double a2, double b1, double scale, double zeta, double alpha) {
    return saigo(a1, a2, b1, scale, zeta, alpha, KernelKind::First);
}

// ---------------------------------------------------------------------------
// CDF table

CdfTable::CdfTable(TestFunction f, const CdfOptions& opts) : f_(std::move(f)), opts_(opts) {
    const double lo = f_.support.lo;
    if (!(lo >= 0.0) || !std::isfinite(lo)) {
        throw DomainError("CdfTable: support must start at a finite non-negative point");
    }
    singular_lo_ = f_.lower_exponent < 0.0;
    singular_hi_ = f_.support.bounded() && f_.upper_exponent < 0.0;

    double hi = f_.support.hi;
    if (!f_.support.bounded()) {
        quad::Options qo;
        qo.abs_tol = 1e-15;
        auto tail_at = [&](double r) {
            return quad::integrate([this](double x) { return f_(x); }, r, kInfinity, qo, std::max(1.0, r)).value;
        };
        double r = std::max(lo + 1.0, 2.0 * lo);
        int doublings = 0;
        while ((tail_ = tail_at(r)) > opts_.tail_mass) {
            r = lo + 2.0 * (r - lo);
            if (++doublings > 400) {
                throw DomainError("CdfTable: tail mass does not vanish for " + f_.name);
            }
        }
        hi = r;
    }

    const double width = hi - lo;
    std::vector<double> seed_nodes{lo, hi};
    for (int j = 1; j < 32; ++j) {
        seed_nodes.push_back(lo + width * j / 32.0);
    }
    for (int j = 2; j <= 100; ++j) {
        const double off = width * std::exp2(-0.5 * j);
        seed_nodes.push_back(lo + off);
        if (f_.support.bounded()) {
            seed_nodes.push_back(hi - off);
        }
    }
    std::sort(seed_nodes.begin(), seed_nodes.end());
    seed_nodes.erase(std::unique(seed_nodes.begin(), seed_nodes.end()), seed_nodes.end());

    // Depth-first refinement keeps the accepted intervals in order.
    std::vector<std::pair<double, double>> stack;
    for (std::size_t i = seed_nodes.size() - 1; i > 0; --i) {
        stack.emplace_back(seed_nodes[i - 1], seed_nodes[i]);
    }
    std::size_t count = seed_nodes.size();
    nodes_ = {lo};
    cum_ = {0.0};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const double m = 0.5 * (a + b);
        const bool first = a == lo;
        const bool last = b == hi;
        const double whole = interval_mass(a, b, first, last);
        const double halves = interval_mass(a, m, first, false) + interval_mass(m, b, false, last);
        const bool splittable = count < opts_.max_nodes && m > a && m < b;
        if (std::abs(whole - halves) > opts_.interval_tol && splittable) {
            stack.emplace_back(m, b);
            stack.emplace_back(a, m);
            ++count;
            continue;
        }
        nodes_.push_back(b);
        cum_.push_back(cum_.back() + halves);
    }
    total_ = cum_.back() + tail_;
    if (!(total_ > 0.0) || !std::isfinite(total_)) {
        throw DomainError("CdfTable: density has no mass: " + f_.name);
    }
}

// Integral from the lower end of the support to b with x = lo + h w^{1/lambda},
// which absorbs a (x - lo)^{lambda - 1} singularity.
double CdfTable::from_lower(double a, double b) const {
    const double lambda = f_.lower_exponent + 1.0;
    const double h = b - a;
    return quad::gauss_legendre_20(
        [&](double w) {
            const double t = std::pow(w, 1.0 / lambda);
            return f_(a + h * t) * h / lambda * t / w;
        },
        0.0, 1.0);
}

// Integral from a to the upper end b with x = hi - h w^{1/lambda}.
double CdfTable::to_upper(double a, double b) const {
    const double lambda = f_.upper_exponent + 1.0;
    const double h = b - a;
    return quad::gauss_legendre_20(
        [&](double w) {
            const double t = std::pow(w, 1.0 / lambda);
            const double gap = h * t;
            return (b == f_.support.hi ? f_.at_gap(b - gap, gap) : f_(b - gap)) * h / lambda * t / w;
        },
        0.0, 1.0);
}

double CdfTable::interval_mass(double a, double b, bool first, bool last) const {
    const bool lo_sing = first && singular_lo_;
    const bool hi_sing = last && singular_hi_;
    if (lo_sing && hi_sing) {
        const double m = 0.5 * (a + b);
        return from_lower(a, m) + to_upper(m, b);
    }
    if (lo_sing) {
        return from_lower(a, b);
    }
    if (hi_sing) {
        return to_upper(a, b);
    }
    return plain_mass(a, b);
}

// Gauss-Legendre mass; in the upper half of a bounded support the nodes are
// placed in the gap hi - x so that they resolve the end.
double CdfTable::plain_mass(double a, double b) const {
    const double hi = f_.support.hi;
    if (f_.support.bounded() && f_.near_upper && a > 0.5 * (f_.support.lo + hi)) {
        return quad::gauss_legendre_20([this, hi](double g) { return f_.at_gap(hi - g, g); }, hi - b, hi - a);
    }
    return quad::gauss_legendre_20([this](double x) { return f_(x); }, a, b);
}

double CdfTable::partial(std::size_t k, double x) const {
    const double a = nodes_[k];
    const double b = nodes_[k + 1];
    const bool first = k == 0;
    const bool last = k + 2 == nodes_.size();
    if (first && singular_lo_ && !(last && singular_hi_ && x > 0.5 * (a + b))) {
        return from_lower(a, x);
    }
    if (last && singular_hi_) {
        return (cum_[k + 1] - cum_[k]) - to_upper(x, b);
    }
    return plain_mass(a, x);
}

double CdfTable::cdf(double x) const {
    if (!(x > nodes_.front())) {
        return 0.0;
    }
    const double end = nodes_.back();
    if (x >= end) {
        if (f_.support.bounded()) {
            return 1.0;
        }
        const double extra = quad::integrate([this](double t) { return f_(t); }, end, x).value;
        return std::clamp((cum_.back() + extra) / total_, 0.0, 1.0);
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::clamp((cum_[k] + partial(k, x)) / total_, 0.0, 1.0);
}

double CdfTable::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("quantile: u must lie in (0, 1)");
    }
    const double target = u * total_;
    if (target >= cum_.back()) {
        // Beyond the tabulated range: bisect on a geometric bracket.
        double lo = nodes_.back();
        double hi = 2.0 * lo + 1.0;
        while (cdf(hi) < u) {
            lo = hi;
            hi *= 2.0;
        }
        for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (cdf(mid) < u ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    std::size_t k = static_cast<std::size_t>(it - cum_.begin());
    k = std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, nodes_.size() - 2);
    const double rem = target - cum_[k];
    double lo = nodes_[k];
    double hi = nodes_[k + 1];
    const double mass = cum_[k + 1] - cum_[k];
    double x = mass > 0.0 ? lo + (hi - lo) * std::clamp(rem / mass, 0.0, 1.0) : 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) {
        x = 0.5 * (lo + hi);
    }
    const double tol = opts_.quantile_tol * total_;
    for (int iter = 0; iter < 100; ++iter) {
        const double g = partial(k, x) - rem;
        if (std::abs(g) <= tol) {
            break;
        }
        (g > 0.0 ? hi : lo) = x;
        const double d = f_(x);
        double next = (d > 0.0 && std::isfinite(d)) ? x - g / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Density

Density::Density(TestFunction f, const CdfOptions& opts) {
    if (!f.is_density) {
        throw DomainError("Density: '" + f.name + "' is not registered as a density");
    }
    fn_ = std::make_shared<const TestFunction>(f);
    table_ = std::make_shared<const CdfTable>(std::move(f), opts);
}

std::vector<double> Density::sample(std::size_t n, std::uint64_t seed, std::uint64_t stream) const {
    std::vector<double> out(n);
    const CounterRng rng(seed, stream);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = table_->quantile(rng.uniform(i));
        }
    });
    return out;
}

std::vector<double> sample(const Density& d, std::size_t n, std::uint64_t seed) { return d.sample(n, seed); }

double cdf(const Density& d, double x) { return d.cdf(x); }

}  // namespace ekfrac
