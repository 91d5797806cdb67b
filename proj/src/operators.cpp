#include "ekfrac/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ekfrac/errors.hpp"

namespace ekfrac {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void check_u(double u, const char* what) {
    if (!(u > 0.0) || !std::isfinite(u)) {
        throw DomainError(std::string(what) + ": evaluation point must be positive and finite, got " + num(u));
    }
}

// Kernel of x1 at x, with 1 - x or the gap to the kernel's right end supplied
// when the quadrature knows it more precisely than x does.
using Kernel = std::function<double(double x, double gap)>;

struct KernelShape {
    double top = 1.0;            // right end of the kernel support (may be infinite)
    double exponent_at_0 = 0.0;  // kernel ~ x^e as x -> 0
    double split = 1.0;          // scale used to split infinite ranges
};

OperatorResult to_result(const quad::Result& r) {
    OperatorResult out;
    out.value = r.value;
    out.abs_error_estimate = r.abs_error;
    out.nodes_used = r.evals;
    return out;
}

// Geometric cuts between u and 1: the integrands below have structure at both
// scales.
std::vector<double> scale_breaks(double u) {
    std::vector<double> cuts;
    if (u < 0.125) {
        for (double c = 8.0 * u; c < 1.0; c *= 8.0) {
            cuts.push_back(c);
        }
        cuts.push_back(1.0);
    } else if (u > 8.0) {
        for (double c = u / 8.0; c > 1.0; c /= 8.0) {
            cuts.push_back(c);
        }
        cuts.push_back(1.0);
    }
    return cuts;
}

// Cuts for the x-integrals: the kernel scale, and t where f(u / x) or f(u x) turns on.
std::vector<double> kernel_breaks(const KernelShape& shape, double t) {
    std::vector<double> cuts = scale_breaks(t);
    cuts.push_back(t);
    if (!std::isfinite(shape.top)) {
        cuts.push_back(shape.split);
    }
    return cuts;
}

// int k(x) / x * f(u / x) dx over the kernel support.
quad::Result second_kind(const Kernel& k, const KernelShape& shape, const TestFunction& f, double u,
                         const quad::Options& opts, const char* what) {
    const double x_lo = f.support.bounded() ? u / f.support.hi : 0.0;
    const double x_hi = std::min(shape.top, f.support.lo > 0.0 ? u / f.support.lo : kInfinity);
    if (!(x_hi > x_lo)) {
        return {};
    }
    if (x_lo == 0.0) {
        // x -> 0 probes f at infinity: x^{e-1} f(u/x).
        if (f.decay.kind == Decay::Kind::None) {
            throw DecayError(std::string(what) + ": " + f.name + " does not decay at infinity");
        }
        if (f.decay.kind == Decay::Kind::Power && !(shape.exponent_at_0 + f.decay.power > 0.0)) {
            throw DecayError(std::string(what) + ": " + f.name + " decays too slowly (t^-" + num(f.decay.power) +
                             ") for kernel exponent " + num(shape.exponent_at_0));
        }
    }
    const bool top_is_end = x_hi == shape.top;
    auto integrand = [&](double x, double, double to_b) {
        const double gap = top_is_end ? to_b : std::nan("");
        const double kv = k(x, gap);
        if (kv == 0.0) {
            return 0.0;
        }
        const double fv = f(u / x);
        return fv == 0.0 ? 0.0 : kv * fv / x;
    };
    return quad::integrate_pieces(integrand, x_lo, x_hi, kernel_breaks(shape, u), opts);
}

// log f(y) for y next to 0 where f itself overflows, from its power law there.
double log_f_near_zero(const TestFunction& f, double y) {
    double y0 = y;
    double f0 = f(y0);
    while (!std::isfinite(f0) && y0 < 1e-8) {
        y0 *= 1e8;
        f0 = f(y0);
    }
    return std::log(f0) + f.lower_exponent * std::log(y / y0);
}

// int x k(x) f(u x) dx over the kernel support.
quad::Result first_kind(const Kernel& k, const KernelShape& shape, const TestFunction& f, double u,
                        const quad::Options& opts, const char* what) {
    const double x_lo = f.support.lo / u;
    const double x_hi = std::min(shape.top, f.support.hi / u);
    if (!(x_hi > x_lo)) {
        return {};
    }
    if (x_lo == 0.0 && !(shape.exponent_at_0 + 1.0 + f.lower_exponent > -1.0)) {
        throw DomainError(std::string(what) + ": integrand not integrable at 0 for " + f.name);
    }
    if (!std::isfinite(x_hi) && f.decay.kind == Decay::Kind::None) {
        throw DecayError(std::string(what) + ": " + f.name + " does not decay at infinity");
    }
    const bool top_is_end = x_hi == shape.top;
    auto integrand = [&](double x, double, double to_b) {
        const double gap = top_is_end ? to_b : std::nan("");
        const double kv = k(x, gap);
        if (kv == 0.0) {
            return 0.0;
        }
        const double fv = f(u * x);
        if (std::isfinite(fv) || x_lo != 0.0) {
            return kv * x * fv;
        }
        return std::exp(std::log(kv) + std::log(x) + log_f_near_zero(f, u * x));
    };
    return quad::integrate_pieces(integrand, x_lo, x_hi, kernel_breaks(shape, 1.0 / u), opts);
}

double one_minus(double x, double gap) { return gap >= 0.0 ? gap : 1.0 - x; }

Kernel beta_kernel(double e, double alpha, double log_norm) {
    return [=](double x, double gap) {
        const double omx = one_minus(x, gap);
        if (!(omx > 0.0) || !(x > 0.0)) {
            return 0.0;
        }
        return std::exp(log_norm + e * std::log(x) + (alpha - 1.0) * std::log(omx));
    };
}

Kernel pathway_kernel(const PathwayParams& p, KernelKind kind) {
    const double log_c = pathway_log_norm(p, kind);
    const double end = p.support_end();
    return [=](double x, double gap) {
        // x may round to the end while the gap is still positive.
        if (!(x > 0.0) || (!(x < end) && !(gap > 0.0))) {
            return 0.0;
        }
        return std::exp(log_c + pathway_log_kernel(p, kind, x, gap));
    };
}

KernelShape pathway_shape(const PathwayParams& p, KernelKind kind) {
    KernelShape s;
    s.top = p.support_end();
    s.exponent_at_0 = p.mass_exponent(kind) - 1.0;
    switch (p.regime()) {
        case PathwayRegime::Greater:
            s.split = std::pow(p.a * (p.q - 1.0), -1.0 / p.delta);
            break;
        case PathwayRegime::Limit:
            s.split = std::pow(p.a * p.eta, -1.0 / p.delta);
            break;
        case PathwayRegime::Less:
            break;
    }
    return s;
}

Kernel hyper_kernel(const HyperDensityParams& p) {
    const double c = hyper_norm_const(p);
    return [p, c](double x, double gap) {
        const double omx = one_minus(x, gap);
        return hyper_kernel_unnormalized(p, x, omx) / c;
    };
}

}  // namespace

void KoberParams::validate(KernelKind kind) const {
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !std::isfinite(zeta)) {
        throw DomainError("KoberParams: alpha must be positive and zeta finite");
    }
    if (kind == KernelKind::Second && !(zeta > -1.0)) {
        throw DomainError("KoberParams: second kind needs zeta > -1");
    }
    if (kind == KernelKind::First && !(zeta >= 0.0)) {
        throw DomainError("KoberParams: first kind needs zeta >= 0");
    }
}

quad::Options default_operator_options() {
    quad::Options o;
    o.abs_tol = 1e-10;
    o.rel_tol = 1e-9;
    return o;
}

OperatorResult kober_second(const TestFunction& f, const KoberParams& p, double u, const quad::Options& opts) {
    p.validate(KernelKind::Second);
    check_u(u, "kober_second");
    // t = u / x: (1/Gamma(alpha)) int_0^1 x^{zeta-1} (1-x)^{alpha-1} f(u/x) dx
    const KernelShape shape{1.0, p.zeta, 1.0};
    const auto r = second_kind(beta_kernel(p.zeta, p.alpha, -log_gamma(p.alpha)), shape, f, u, opts, "kober_second");
    OperatorResult out = to_result(r);
    out.density = gamma_ratio({p.alpha + p.zeta + 1.0}, {p.zeta + 1.0}) * out.value;
    return out;
}

OperatorResult kober_first(const TestFunction& f, const KoberParams& p, double u, const quad::Options& opts) {
    p.validate(KernelKind::First);
    check_u(u, "kober_first");
    // v = u x: (1/Gamma(alpha)) int_0^1 x^zeta (1-x)^{alpha-1} f(u x) dx
    const KernelShape shape{1.0, p.zeta - 1.0, 1.0};
    const auto r = first_kind(beta_kernel(p.zeta - 1.0, p.alpha, -log_gamma(p.alpha)), shape, f, u, opts,
                              "kober_first");
    OperatorResult out = to_result(r);
    if (p.zeta > 0.0) {
        out.density = gamma_ratio({p.zeta + p.alpha}, {p.zeta}) * out.value;
    } else {
        out.warning = "zeta = 0: no density convention (Gamma(zeta) has a pole)";
    }
    return out;
}

OperatorResult pathway_second(const TestFunction& f, const PathwayParams& p, double u, const quad::Options& opts) {
    p.validate(KernelKind::Second);
    check_u(u, "pathway_second");
    const auto r = second_kind(pathway_kernel(p, KernelKind::Second), pathway_shape(p, KernelKind::Second), f, u,
                               opts, "pathway_second");
    OperatorResult out = to_result(r);
    out.density = out.value;
    return out;
}

OperatorResult pathway_first(const TestFunction& f, const PathwayParams& p, double u, const quad::Options& opts) {
    p.validate(KernelKind::First);
    check_u(u, "pathway_first");
    const auto r = first_kind(pathway_kernel(p, KernelKind::First), pathway_shape(p, KernelKind::First), f, u, opts,
                              "pathway_first");
    OperatorResult out = to_result(r);
    out.density = out.value;
    return out;
}

OperatorResult hyper_second(const TestFunction& f, const HyperDensityParams& p, double u, const quad::Options& opts) {
    if (p.kind != KernelKind::Second) {
        throw DomainError("hyper_second: parameters are for the first kind");
    }
    check_u(u, "hyper_second");
    const KernelShape shape{1.0, p.x_exponent(), 1.0};
    const auto r = second_kind(hyper_kernel(p), shape, f, u, opts, "hyper_second");
    OperatorResult out = to_result(r);
    out.density = out.value;
    return out;
}

OperatorResult hyper_first(const TestFunction& f, const HyperDensityParams& p, double u, const quad::Options& opts) {
    if (p.kind != KernelKind::First) {
        throw DomainError("hyper_first: parameters are for the second kind");
    }
    check_u(u, "hyper_first");
    const KernelShape shape{1.0, p.x_exponent(), 1.0};
    const auto r = first_kind(hyper_kernel(p), shape, f, u, opts, "hyper_first");
    OperatorResult out = to_result(r);
    out.density = out.value;
    return out;
}

OperatorResult weyl_right(const TestFunction& f, double alpha, double x, const quad::Options& opts) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("weyl_right: alpha must be positive");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("weyl_right: x must be non-negative and finite");
    }
    if (!f.support.bounded()) {
        if (f.decay.kind == Decay::Kind::None) {
            throw DecayError("weyl_right: " + f.name + " does not decay at infinity");
        }
        if (f.decay.kind == Decay::Kind::Power && !(f.decay.power > alpha)) {
            throw DecayError("weyl_right: " + f.name + " needs power decay faster than t^-" + num(alpha));
        }
    }
    // s = t - x
    const double s_lo = std::max(0.0, f.support.lo - x);
    const double s_hi = f.support.hi - x;
    if (!(s_hi > s_lo)) {
        return {};
    }
    const double log_norm = -log_gamma(alpha);
    auto integrand = [&](double s, double from_a, double) {
        const double ds = s_lo == 0.0 ? from_a : s;
        const double fv = f(x + ds);
        if (fv == 0.0) {
            return 0.0;
        }
        return std::exp(log_norm + (alpha - 1.0) * std::log(ds)) * fv;
    };
    return to_result(quad::integrate(integrand, s_lo, s_hi, opts, std::max(1.0, s_lo)));
}

OperatorResult rl_left(const TestFunction& f, double alpha, double x, const quad::Options& opts) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("rl_left: alpha must be positive");
    }
    check_u(x, "rl_left");
    if (f.support.lo == 0.0 && !(f.lower_exponent > -1.0)) {
        throw DomainError("rl_left: " + f.name + " is not integrable at 0");
    }
    // v = x y: x^alpha / Gamma(alpha) int_0^1 (1-y)^{alpha-1} f(x y) dy
    const double y_lo = f.support.lo / x;
    const double y_hi = std::min(1.0, f.support.hi / x);
    if (!(y_hi > y_lo)) {
        return {};
    }
    const double log_norm = alpha * std::log(x) - log_gamma(alpha);
    auto integrand = [&](double y, double, double to_b) {
        const double omy = y_hi == 1.0 ? to_b : 1.0 - y;
        const double fv = f(x * y);
        if (fv == 0.0) {
            return 0.0;
        }
        return std::exp(log_norm + (alpha - 1.0) * std::log(omy)) * fv;
    };
    return to_result(quad::integrate(integrand, y_lo, y_hi, opts));
}

OperatorResult product_density(const TestFunction& f1, const TestFunction& f2, double u, const quad::Options& opts) {
    check_u(u, "product_density");
    // u = x1 x2 with x2 = v: x1 = u / v must lie in the support of f1.
    const double v_lo = std::max(f2.support.lo, f1.support.bounded() ? u / f1.support.hi : 0.0);
    const double v_hi = std::min(f2.support.hi, f1.support.lo > 0.0 ? u / f1.support.lo : kInfinity);
    if (!(v_hi > v_lo)) {
        OperatorResult out;
        out.density = 0.0;
        return out;
    }
    if (!std::isfinite(v_hi) && (f2.decay.kind == Decay::Kind::None)) {
        throw DecayError("product_density: " + f2.name + " does not decay at infinity");
    }
    if (v_lo == 0.0 && f1.decay.kind == Decay::Kind::None) {
        throw DecayError("product_density: " + f1.name + " does not decay at infinity");
    }
    // Next to v_lo = u / hi the gap hi - u/v is hi (v - v_lo) / v.
    const bool gap_end = f1.support.bounded() && v_lo == u / f1.support.hi;
    auto integrand = [&](double v, double from_a, double) {
        const double b = f2(v);
        if (b == 0.0) {
            return 0.0;
        }
        const double x = u / v;
        return (gap_end ? f1.at_gap(x, f1.support.hi * from_a / v) : f1(x)) * b / v;
    };
    OperatorResult out = to_result(quad::integrate_pieces(integrand, v_lo, v_hi, scale_breaks(u), opts));
    out.density = out.value;
    return out;
}

OperatorResult ratio_density(const TestFunction& f1, const TestFunction& f2, double u, const quad::Options& opts) {
    check_u(u, "ratio_density");
    // u = x2 / x1 with x2 = v: x1 = v / u must lie in the support of f1.
    const double v_lo = std::max(f2.support.lo, u * f1.support.lo);
    const double v_hi = std::min(f2.support.hi, u * f1.support.hi);
    if (!(v_hi > v_lo)) {
        OperatorResult out;
        out.density = 0.0;
        return out;
    }
    if (!std::isfinite(v_hi) && (f2.decay.kind == Decay::Kind::None || f1.decay.kind == Decay::Kind::None)) {
        throw DecayError("ratio_density: integrand does not decay at infinity");
    }
    // Next to v_hi = u hi the gap hi - v/u is (v_hi - v) / u.
    const bool gap_end = f1.support.bounded() && v_hi == u * f1.support.hi;
    auto integrand = [&](double v, double, double to_b) {
        const double b = f2(v);
        if (b == 0.0) {
            return 0.0;
        }
        const double x = v / u;
        return (gap_end ? f1.at_gap(x, to_b / u) : f1(x)) * b * x / u;
    };
    OperatorResult out = to_result(quad::integrate_pieces(integrand, v_lo, v_hi, scale_breaks(u), opts));
    out.density = out.value;
    return out;
}

// ---------------------------------------------------------------------------

bool within(double lhs, double rhs, double tol) {
    return std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs));
}

namespace {

// (u^zeta / c) int_u^inf (v-u)^{alpha-1} v^{-zeta-alpha} 2F1(a (1 - u/v)) f(v) dv, integrated in v.
double saigo_second_direct(const TestFunction& f, const HyperDensityParams& p, double u) {
    const double c = hyper_norm_const(p);
    const double lo = std::max(u, f.support.lo);
    const double hi = f.support.hi;
    if (!(hi > lo)) {
        return 0.0;
    }
    auto integrand = [&](double v, double from_a, double) {
        const double d = lo == u ? from_a : v - u;
        const double fv = f(v);
        if (fv == 0.0) {
            return 0.0;
        }
        const double series = pfq(p.hyper.upper, p.hyper.lower, p.hyper.scale * d / v).value;
        return std::exp((p.alpha - 1.0) * std::log(d) - (p.zeta + p.alpha) * std::log(v)) * series * fv;
    };
    quad::Options o = default_operator_options();
    o.abs_tol = 1e-12;
    return std::pow(u, p.zeta) / c * quad::integrate(integrand, lo, hi, o, std::max(1.0, lo)).value;
}

// (u^{-zeta-alpha} / c) int_0^u v^zeta (u-v)^{alpha-1} 2F1(a (1 - v/u)) f(v) dv.
double saigo_first_direct(const TestFunction& f, const HyperDensityParams& p, double u) {
    const double c = hyper_norm_const(p);
    const double lo = f.support.lo;
    const double hi = std::min(u, f.support.hi);
    if (!(hi > lo)) {
        return 0.0;
    }
    auto integrand = [&](double v, double, double to_b) {
        const double d = hi == u ? to_b : u - v;
        const double fv = f(v);
        if (fv == 0.0) {
            return 0.0;
        }
        const double series = pfq(p.hyper.upper, p.hyper.lower, p.hyper.scale * d / u).value;
        const double w = p.zeta * std::log(v) + (p.alpha - 1.0) * std::log(d);
        if (std::isfinite(fv) || lo != 0.0) {
            return std::exp(w) * series * fv;
        }
        return std::exp(w + log_f_near_zero(f, v)) * series;
    };
    quad::Options o = default_operator_options();
    o.abs_tol = 1e-12;
    return std::pow(u, -p.zeta - p.alpha) / c * quad::integrate(integrand, lo, hi, o).value;
}

HyperDensityParams zero_scale(double zeta, double alpha, KernelKind kind) {
    HyperDensityParams h;
    h.hyper.upper = {1.0, 1.0};
    h.hyper.lower = {2.0};
    h.hyper.scale = 0.0;
    h.hyper.mode = ArgMode::X;
    h.zeta = zeta;
    h.alpha = alpha;
    h.kind = kind;
    return h;
}

}  // namespace

std::vector<ReductionCheck> reduction_suite(const TestFunction& f, std::span<const double> us, double zeta,
                                            double alpha, double tol) {
    std::vector<ReductionCheck> out;
    auto add = [&](const std::string& name, double u, double lhs, double rhs) {
        out.push_back({name, u, lhs, rhs, tol, within(lhs, rhs, tol)});
    };
    const KoberParams kp{zeta, alpha};
    // First-kind checks need x^zeta f(u x) integrable at 0.
    const bool first_ok = zeta > 0.0 && (f.support.lo > 0.0 || zeta + f.lower_exponent > -1.0);
    PathwayParams pw;
    pw.gamma = zeta;
    pw.delta = 1.0;
    pw.eta = alpha - 1.0;
    pw.a = 1.0;
    pw.q = 0.0;
    for (double u : us) {
        const OperatorResult k2 = kober_second(f, kp, u);
        add("pathway_second(q=0) -> kober_second", u,
            gamma_ratio({zeta + 1.0}, {zeta + 1.0 + alpha}) * pathway_second(f, pw, u).value, k2.value);
        add("kober_second(zeta=0) -> weyl_right(t^-alpha f)", u, kober_second(f, {0.0, alpha}, u).value,
            weyl_right(times_power(f, -alpha), alpha, u).value);
        add("hyper_second(scale=0) -> kober_second", u,
            hyper_second(f, zero_scale(zeta, alpha, KernelKind::Second), u).value, *k2.density);
        const HyperDensityParams s2 = saigo_second(0.5, 1.5, 2.0, 0.5, zeta, alpha);
        add("saigo_second preset -> direct 2F1 integral", u, hyper_second(f, s2, u).value,
            saigo_second_direct(f, s2, u));
        if (first_ok) {
            const OperatorResult k1 = kober_first(f, kp, u);
            add("pathway_first(q=0) -> kober_first", u,
                gamma_ratio({zeta}, {zeta + alpha}) * pathway_first(f, pw, u).value, k1.value);
            add("hyper_first(scale=0) -> kober_first", u,
                hyper_first(f, zero_scale(zeta, alpha, KernelKind::First), u).value, *k1.density);
            const HyperDensityParams s1 = saigo_first(0.5, 1.5, 2.0, 0.5, zeta, alpha);
            add("saigo_first preset -> direct 2F1 integral", u, hyper_first(f, s1, u).value,
                saigo_first_direct(f, s1, u));
        }
    }
    return out;
}

}  // namespace ekfrac
