#include "ekfrac/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstring>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ekfrac/errors.hpp"
#include "ekfrac/operators.hpp"

namespace ekfrac {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

std::string strip_text(const MellinStrip& s) { return "(" + num(s.lower) + ", " + num(s.upper) + ")"; }

// Memoizes f so the real and imaginary passes share evaluations.
class CachedFunction {
public:
    explicit CachedFunction(const TestFunction& f) : f_(f) {}

    /// to_hi is the distance to the upper end of the support.
    double operator()(double x, double to_hi) {
        const std::pair<double, double> key{x, to_hi};
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        const double v = f_.at_gap(x, to_hi);
        cache_.emplace(key, v);
        return v;
    }

private:
    const TestFunction& f_;
    std::map<std::pair<double, double>, double> cache_;
};

Complex log_gamma_ratio(Complex a, Complex b) { return log_gamma(a) - log_gamma(b); }

bool is_hyper(MultiplierTag t) {
    return t == MultiplierTag::Hyper2ArgX || t == MultiplierTag::Hyper2Arg1mX || t == MultiplierTag::Hyper1ArgX ||
           t == MultiplierTag::Hyper1Arg1mX;
}

bool is_first_kind_hyper(MultiplierTag t) {
    return t == MultiplierTag::Hyper1ArgX || t == MultiplierTag::Hyper1Arg1mX;
}

}  // namespace

Complex mellin_numeric(const TestFunction& f, Complex s, double abs_tol) {
    const MellinStrip strip = f.strip();
    if (!strip.contains(s.real())) {
        throw StripError("mellin_numeric: Re(s) = " + num(s.real()) + " outside the strip " + strip_text(strip) +
                         " of " + f.name);
    }
    CachedFunction cached(f);
    quad::Options o;
    o.abs_tol = abs_tol;
    o.rel_tol = 1e-10;
    const double sigma = s.real() - 1.0;
    const double tau = s.imag();
    const double breaks[] = {1.0};
    auto part = [&](bool imag) {
        auto integrand = [&](double x, double, double to_b) {
            const double fv = cached(x, to_b);
            if (fv == 0.0) {
                return 0.0;
            }
            const double lx = std::log(x);
            const double w = fv > 0.0 ? std::exp(sigma * lx + std::log(fv)) : std::exp(sigma * lx) * fv;
            return imag ? w * std::sin(tau * lx) : w * std::cos(tau * lx);
        };
        try {
            return quad::integrate_pieces(integrand, f.support.lo, f.support.hi, breaks, o).value;
        } catch (const QuadratureError& e) {
            throw QuadratureError(std::string("mellin_numeric at s = ") + num(s.real()) + (tau < 0 ? "" : "+") +
                                  num(tau) + "i: " + e.what());
        }
    };
    const double re = part(false);
    const double im = tau == 0.0 ? 0.0 : part(true);
    return {re, im};
}

Complex mellin_transform(const TestFunction& f, Complex s) {
    if (f.has_closed_mellin()) {
        return f.mellin_closed_form(s);
    }
    return mellin_numeric(f, s);
}

std::string to_string(MultiplierTag tag) {
    switch (tag) {
        case MultiplierTag::Kober2:
            return "KOBER_2";
        case MultiplierTag::Kober1:
            return "KOBER_1";
        case MultiplierTag::Hyper2ArgX:
            return "HYPER_2_ARGX";
        case MultiplierTag::Hyper2Arg1mX:
            return "HYPER_2_ARG1MX";
        case MultiplierTag::Hyper1ArgX:
            return "HYPER_1_ARGX";
        case MultiplierTag::Hyper1Arg1mX:
            return "HYPER_1_ARG1MX";
        case MultiplierTag::RlLeft:
            return "RL_LEFT";
        case MultiplierTag::WeylProduct:
            return "WEYL_PRODUCT";
        case MultiplierTag::RatioGeneric:
            return "RATIO_GENERIC";
    }
    return "?";
}

HyperDensityParams MultiplierSpec::hyper_density_params() const {
    if (!is_hyper(tag)) {
        throw DomainError("MultiplierSpec: " + to_string(tag) + " has no hypergeometric kernel");
    }
    HyperDensityParams p;
    p.hyper = hyper;
    p.hyper.mode = (tag == MultiplierTag::Hyper2ArgX || tag == MultiplierTag::Hyper1ArgX) ? ArgMode::X
                                                                                         : ArgMode::OneMinusX;
    p.hyper.exponents.reset();
    p.zeta = zeta;
    p.alpha = alpha;
    p.kind = is_first_kind_hyper(tag) ? KernelKind::First : KernelKind::Second;
    p.validate();
    return p;
}

MellinStrip multiplier_strip(const MultiplierSpec& spec) {
    switch (spec.tag) {
        case MultiplierTag::Kober2:
        case MultiplierTag::Hyper2ArgX:
        case MultiplierTag::Hyper2Arg1mX:
            return {-spec.zeta, kInfinity};
        case MultiplierTag::Kober1:
        case MultiplierTag::Hyper1ArgX:
        case MultiplierTag::Hyper1Arg1mX:
            return {-kInfinity, spec.zeta + 1.0};
        case MultiplierTag::RlLeft:
            return {-kInfinity, 1.0 - spec.alpha};
        case MultiplierTag::WeylProduct:
            return {0.0, kInfinity};
        case MultiplierTag::RatioGeneric: {
            if (!spec.f1) {
                throw DomainError("MultiplierSpec: RATIO_GENERIC needs a kernel density f1");
            }
            const MellinStrip s1 = spec.f1->strip();
            return {2.0 - s1.upper, 2.0 - s1.lower};
        }
    }
    return {};
}

MultiplierValue multiplier(const MultiplierSpec& spec, Complex s) {
    const MellinStrip strip = multiplier_strip(spec);
    if (strip.empty()) {
        throw StripError(to_string(spec.tag) + ": empty strip");
    }
    if (!strip.contains(s.real())) {
        throw StripError(to_string(spec.tag) + ": Re(s) = " + num(s.real()) + " outside " + strip_text(strip));
    }
    const double z = spec.zeta;
    const double a = spec.alpha;
    switch (spec.tag) {
        case MultiplierTag::Kober2:
            return {std::exp(log_gamma_ratio(z + s, a + z + s)), 0.0};
        case MultiplierTag::Kober1:
            return {std::exp(log_gamma_ratio(z + 1.0 - s, a + z + 1.0 - s)), 0.0};
        case MultiplierTag::RlLeft:
            return {std::exp(log_gamma_ratio(1.0 - a - s, 1.0 - s)), a};
        case MultiplierTag::WeylProduct:
            return {std::exp(log_gamma_ratio(s, a + s)), a};
        case MultiplierTag::RatioGeneric:
            return {mellin_transform(*spec.f1, 2.0 - s), 0.0};
        case MultiplierTag::Hyper2ArgX:
        case MultiplierTag::Hyper2Arg1mX:
        case MultiplierTag::Hyper1ArgX:
        case MultiplierTag::Hyper1Arg1mX:
            break;
    }
    const HyperDensityParams hp = spec.hyper_density_params();
    const double c = hyper_norm_const(hp);
    // w = zeta + s (second kind) or zeta + 1 - s (first kind)
    const Complex w = is_first_kind_hyper(spec.tag) ? z + 1.0 - s : z + s;
    std::vector<Complex> upper(spec.hyper.upper.begin(), spec.hyper.upper.end());
    std::vector<Complex> lower(spec.hyper.lower.begin(), spec.hyper.lower.end());
    upper.push_back(hp.hyper.mode == ArgMode::X ? w : Complex(a));
    lower.push_back(a + w);
    const Complex series = pfq(upper, lower, Complex(spec.hyper.scale)).value;
    return {std::exp(log_gamma(a) - std::log(c) + log_gamma_ratio(w, a + w)) * series, 0.0};
}

double apply_operator(const MultiplierSpec& spec, const TestFunction& f, double u) {
    switch (spec.tag) {
        case MultiplierTag::Kober2:
            return kober_second(f, {spec.zeta, spec.alpha}, u).value;
        case MultiplierTag::Kober1:
            return kober_first(f, {spec.zeta, spec.alpha}, u).value;
        case MultiplierTag::Hyper2ArgX:
        case MultiplierTag::Hyper2Arg1mX:
            return hyper_second(f, spec.hyper_density_params(), u).value;
        case MultiplierTag::Hyper1ArgX:
        case MultiplierTag::Hyper1Arg1mX:
            return hyper_first(f, spec.hyper_density_params(), u).value;
        case MultiplierTag::RlLeft:
            return rl_left(f, spec.alpha, u).value;
        case MultiplierTag::WeylProduct:
            return weyl_right(f, spec.alpha, u).value;
        case MultiplierTag::RatioGeneric:
            if (!spec.f1) {
                throw DomainError("MultiplierSpec: RATIO_GENERIC needs a kernel density f1");
            }
            return ratio_density(*spec.f1, f, u).value;
    }
    return 0.0;
}

MellinStrip output_strip(const MultiplierSpec& spec, const TestFunction& f) {
    double shift = 0.0;
    if (spec.tag == MultiplierTag::RlLeft || spec.tag == MultiplierTag::WeylProduct) {
        shift = spec.alpha;
    }
    return multiplier_strip(spec).intersect(f.strip().shifted(-shift));
}

TestFunction operator_output(const MultiplierSpec& spec, const TestFunction& f) {
    TestFunction g;
    g.name = to_string(spec.tag) + "[" + f.name + "]";
    g.evaluator = [spec, f](double u) { return apply_operator(spec, f, u); };
    switch (spec.tag) {
        case MultiplierTag::Kober2:
        case MultiplierTag::Hyper2ArgX:
        case MultiplierTag::Hyper2Arg1mX:
        case MultiplierTag::WeylProduct:
            g.support = {0.0, f.support.hi};
            break;
        case MultiplierTag::Kober1:
        case MultiplierTag::Hyper1ArgX:
        case MultiplierTag::Hyper1Arg1mX:
        case MultiplierTag::RlLeft:
            g.support = {f.support.lo, kInfinity};
            break;
        case MultiplierTag::RatioGeneric: {
            const Interval s1 = spec.f1->support;
            g.support = {f.support.lo / s1.hi, s1.lo > 0.0 ? f.support.hi / s1.lo : kInfinity};
            break;
        }
    }
    const MellinStrip strip = output_strip(spec, f);
    g.strip_override = strip;
    g.decay = std::isfinite(strip.upper) ? Decay::power_law(strip.upper) : Decay::exponential();
    g.mellin_closed_form = [spec, f](Complex s) {
        const MultiplierValue m = multiplier(spec, s);
        return m.factor * mellin_transform(f, s + m.f_shift);
    };
    return g;
}

MultiplierReport verify_multiplier(const MultiplierSpec& spec, const TestFunction& f,
                                   const std::vector<Complex>& probes) {
    MultiplierReport report;
    report.tag = to_string(spec.tag);
    const TestFunction g = operator_output(spec, f);
    for (const Complex& s : probes) {
        MellinProbe p;
        p.s = s;
        p.closed = g.mellin_closed_form(s);
        p.numeric = mellin_numeric(g, s, 1e-9);
        p.rel_error = std::abs(p.numeric - p.closed) / std::max(std::abs(p.closed), 1e-300);
        report.max_rel_error = std::max(report.max_rel_error, p.rel_error);
        report.probes.push_back(p);
    }
    return report;
}

InverseMellinResult inverse_mellin(const std::function<Complex(Complex)>& fstar, double c, double u,
                                   const InverseMellinOptions& opts) {
    if (!(u > 0.0) || !std::isfinite(u)) {
        throw DomainError("inverse_mellin: u must be positive");
    }
    const double log_u = std::log(u);
    auto integrand = [&](double y) {
        const Complex s(c, y);
        return std::real(fstar(s) * std::exp(-s * log_u));
    };
    auto envelope = [&](double y) {
        const Complex s(c, y);
        return std::abs(fstar(s)) * std::exp(-c * log_u);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    double total = 0.0;
    std::vector<double> env{envelope(0.0)};
    for (int k = 0; k < static_cast<int>(std::ceil(opts.h_max)); ++k) {
        double err = 0.0;
        total += GK::integrate(integrand, static_cast<double>(k), k + 1.0, 12, opts.segment_tol, &err);
        env.push_back(envelope(k + 1.0));
        const double e = env.back();
        if (e == 0.0) {
            return {total / std::numbers::pi, k + 1.0, 0.0};
        }
        if (k < 3) {
            continue;
        }
        // Decay ratio over the last three segments, taken pessimistically.
        const std::size_t n = env.size();
        double r = 0.0;
        for (std::size_t j = n - 3; j < n; ++j) {
            r = std::max(r, env[j] / std::max(env[j - 1], 1e-300));
        }
        if (r < 1.0) {
            const double tail = e / (1.0 - r) / std::numbers::pi;
            if (tail < opts.tail_tol) {
                return {total / std::numbers::pi, k + 1.0, tail};
            }
        }
    }
    throw TruncationError("inverse_mellin: contour integrand has not decayed by H = " + num(opts.h_max) +
                          " (u = " + num(u) + ", c = " + num(c) + ")");
}

}  // namespace ekfrac
