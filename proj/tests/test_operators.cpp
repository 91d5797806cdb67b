#include <cmath>
#include <vector>

#include "doctest.h"
#include "ekfrac/errors.hpp"
#include "ekfrac/operators.hpp"
#include "ekfrac/registry.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace ekfrac;

namespace {

const TestFunction kExp = exp1_density();
const TestFunction kGamma2 = gamma_density(2.0);

// Bare Kober operators straight from their defining integrals.
double oracle_kober_second(const std::function<long double(long double)>& f, double zeta, double alpha, double u) {
    const double i = oracle::integrate_to_inf_ends(
        [&](long double t, long double from_u) {
            return std::pow(from_u, alpha - 1.0L) * std::pow(t, -zeta - alpha) * f(t);
        },
        u);
    return std::pow(u, zeta) / std::tgamma(alpha) * i;
}

double oracle_kober_first(const std::function<long double(long double)>& f, double zeta, double alpha, double u) {
    const double i = oracle::integrate_ends(
        [&](long double v, long double, long double to_u) {
            return std::pow(to_u, alpha - 1.0L) * std::pow(v, zeta) * f(v);
        },
        0.0, u);
    return std::pow(u, -zeta - alpha) / std::tgamma(alpha) * i;
}

long double exp_ld(long double t) { return std::exp(-t); }
long double gamma2_ld(long double t) { return t * std::exp(-t); }

}  // namespace

TEST_CASE("kober_second examples") {
    CHECK(kober_second(power_function(-1.0), {1.0, 1.0}, 2.0).value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(kober_second(power_function(-2.0), {0.5, 1.5}, 1.0).value ==
          doctest::Approx(oracle::kGamma25OverGamma4).epsilon(1e-11));
    const OperatorResult e1 = kober_second(kExp, {0.0, 1.0}, 1.0);
    CHECK(e1.value == doctest::Approx(oracle::kE1At1).epsilon(1e-11));
    CHECK(*e1.density == doctest::Approx(oracle::kE1At1).epsilon(1e-11));
    const OperatorResult k = kober_second(kExp, {1.0, 1.0}, 1.0);
    CHECK(k.value == doctest::Approx(oracle::kKober2Exp).epsilon(1e-11));
    CHECK(*k.density == doctest::Approx(2.0 * oracle::kKober2Exp).epsilon(1e-11));
    CHECK(k.abs_error_estimate >= 0.0);
    CHECK(k.nodes_used > 0);
}

TEST_CASE("kober_first examples") {
    for (double u : {0.1, 1.0, 7.0}) {
        CHECK(kober_first(power_function(0.0), {1.0, 1.0}, u).value == doctest::Approx(0.5).epsilon(1e-12));
    }
    CHECK(kober_first(power_function(2.0), {1.0, 0.5}, 3.0).value ==
          doctest::Approx(oracle::kNineGamma4OverGamma45).epsilon(1e-11));
    CHECK(kober_first(kExp, {1.0, 1.0}, 1.0).value == doctest::Approx(oracle::kOneMinusTwoOverE).epsilon(1e-11));
    const OperatorResult z = kober_first(kExp, {0.0, 1.0}, 1.0);
    CHECK_FALSE(z.warning.empty());
    CHECK_FALSE(z.density.has_value());
    CHECK(z.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-11));
}

TEST_CASE("Kober parameter and decay errors") {
    CHECK_THROWS_AS(kober_second(kExp, {-1.0, 1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(kober_second(kExp, {1.0, 0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(kober_first(kExp, {-0.5, 1.0}, 1.0), DomainError);
    CHECK_THROWS_AS(kober_second(kExp, {1.0, 1.0}, -1.0), DomainError);
    CHECK_THROWS_AS(kober_second(exp_growth(), {1.0, 1.0}, 1.0), DecayError);
    // t^2 t^{-zeta-alpha} = t^{-1}: not integrable.
    CHECK_THROWS_AS(kober_second(power_function(2.0), {2.0, 1.0}, 1.0), DecayError);
    CHECK_THROWS_AS(weyl_right(power_function(-1.0), 1.0, 1.0), DecayError);
}

TEST_CASE("Kober operators against direct integrals") {
    gen::for_all(60, 77, [](gen::Gen& g) {
        const double zeta = g.uniform(-0.5, 3.0);
        const double alpha = g.uniform(0.3, 3.0);
        const double u = g.log_uniform(0.05, 8.0);
        const bool use_exp = g.integer(0, 1) == 1;
        const TestFunction& f = use_exp ? kExp : kGamma2;
        auto fl = use_exp ? exp_ld : gamma2_ld;
        CAPTURE(zeta);
        CAPTURE(alpha);
        CAPTURE(u);
        CAPTURE(f.name);
        const double k2 = kober_second(f, {zeta, alpha}, u).value;
        CHECK(oracle::rel_gap(k2, oracle_kober_second(fl, zeta, alpha, u)) < 1e-9);
        if (zeta >= 0.0) {
            const double k1 = kober_first(f, {zeta, alpha}, u).value;
            CHECK(oracle::rel_gap(k1, oracle_kober_first(fl, zeta, alpha, u)) < 1e-9);
        }
    });
}

TEST_CASE("power eigenrelations") {
    gen::for_all(100, 5150, [](gen::Gen& g) {
        const double zeta = g.uniform(0.0, 3.0);
        const double alpha = g.uniform(0.2, 3.0);
        const double p = g.uniform(0.1, 3.0);
        const double u = g.log_uniform(0.1, 10.0);
        CAPTURE(zeta);
        CAPTURE(alpha);
        CAPTURE(p);
        CAPTURE(u);
        const double first = std::pow(u, p) * oracle::gamma_ratio({zeta + p + 1.0}, {alpha + zeta + p + 1.0});
        CHECK(oracle::rel_gap(kober_first(power_function(p), {zeta, alpha}, u).value, first) < 1e-9);
        const double second = std::pow(u, -p) * oracle::gamma_ratio({zeta + p}, {alpha + zeta + p});
        CHECK(oracle::rel_gap(kober_second(power_function(-p), {zeta, alpha}, u).value, second) < 1e-9);
    });
}

TEST_CASE("pathway operator examples") {
    // q = 0, eta = alpha - 1 = 0: constant Gamma(3)/Gamma(2) = 2 times K^{1,1} t^{-1} at u = 2.
    CHECK(pathway_second(power_function(-1.0), {1.0, 1.0, 0.0, 1.0, 0.0}, 2.0).value ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pathway_second(kExp, {0.0, 1.0, 1.0, 1.0, 1.0}, 1.0).value ==
          doctest::Approx(oracle::kTwoK0At2).epsilon(1e-11));
    CHECK(pathway_first(lookup_function("uniform"), {1.0, 1.0, 0.0, 1.0, 0.0}, 1.0).value ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pathway_first(kExp, {1.0, 1.0, 1.0, 1.0, 1.0}, 1.0).value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("pathway operator across q matches the oracle sweep") {
    const std::vector<std::pair<double, double>> sweep{
        {0.5, oracle::kSweepQ05},     {0.999, oracle::kSweepQ0999}, {1.0, oracle::kTwoK0At2},
        {1.001, oracle::kSweepQ1001}, {1.25, oracle::kSweepQ125},   {1.5, oracle::kSweepQ15},
    };
    for (const auto& [q, ref] : sweep) {
        CAPTURE(q);
        CHECK(pathway_second(kExp, {0.0, 1.0, 1.0, 1.0, q}, 1.0).value == doctest::Approx(ref).epsilon(1e-10));
    }
    // q = 0.5, 0.999, 1 approach the limit monotonically.
    CHECK(oracle::kSweepQ05 < oracle::kSweepQ0999);
    CHECK(oracle::kSweepQ0999 < oracle::kTwoK0At2);
}

TEST_CASE("pathway continuity at q = 1, both kinds") {
    for (const TestFunction* f : {&kExp, &kGamma2}) {
        for (double u : {0.5, 1.0, 2.0}) {
            const PathwayParams lim2{0.5, 1.5, 1.0, 1.0, 1.0};
            const PathwayParams lim1{1.5, 1.5, 1.0, 1.0, 1.0};
            const double ref2 = pathway_second(*f, lim2, u).value;
            const double ref1 = pathway_first(*f, lim1, u).value;
            for (double sign : {-1.0, 1.0}) {
                // Not monotone in eps: for gamma:2 at u = 2 the gap at q = 1.01 exceeds the one at 1.1.
                std::vector<double> gaps2;
                std::vector<double> gaps1;
                for (double eps : {0.1, 0.01, 0.001}) {
                    PathwayParams p2 = lim2;
                    PathwayParams p1 = lim1;
                    p2.q = p1.q = 1.0 + sign * eps;
                    gaps2.push_back(std::abs(pathway_second(*f, p2, u).value - ref2));
                    gaps1.push_back(std::abs(pathway_first(*f, p1, u).value - ref1));
                }
                CAPTURE(f->name);
                CAPTURE(u);
                CAPTURE(sign);
                CHECK(gaps2[2] < std::min(gaps2[0], gaps2[1]));
                CHECK(gaps1[2] < std::min(gaps1[0], gaps1[1]));
                CHECK(gaps2[2] < 1e-3);
                CHECK(gaps1[2] < 1e-3);
            }
        }
    }
}

TEST_CASE("pathway operators against the product and ratio of the kernel") {
    gen::for_all(30, 880, [](gen::Gen& g) {
        PathwayParams p;
        p.q = g.pick(std::vector<double>{-0.5, 0.3, 0.8, 1.0, 1.3, 1.7});
        p.delta = g.uniform(0.7, 2.0);
        p.a = g.uniform(0.5, 2.0);
        const bool second = g.integer(0, 1) == 1;
        const KernelKind kind = second ? KernelKind::Second : KernelKind::First;
        p.gamma = second ? g.uniform(-0.3, 1.5) : g.uniform(0.5, 2.0);
        p.eta = p.q > 1.0 ? (p.q - 1.0) * (p.mass_exponent(kind) / p.delta + g.uniform(1.0, 3.0)) : g.uniform(0.3, 2.0);
        const double u = g.log_uniform(0.2, 4.0);
        CAPTURE(g.seed());
        const TestFunction kernel = pathway_density(p, kind);
        if (second) {
            CHECK(oracle::rel_gap(pathway_second(kGamma2, p, u).value, product_density(kernel, kGamma2, u).value) < 1e-9);
        } else {
            CHECK(oracle::rel_gap(pathway_first(kGamma2, p, u).value, ratio_density(kernel, kGamma2, u).value) < 1e-9);
        }
    });
}

TEST_CASE("narrow f reproduces the kernel density") {
    // x2 concentrated at 1/2: u = x1 x2 has density ~ 2 f1(2u); u = x2 / x1 has density ~ f1(1/(2u)) / (2u^2).
    const TestFunction bump = beta1_density({4000.0, 4000.0});
    const PathwayParams p2{0.5, 1.5, 1.0, 1.0, 0.5};
    const PathwayParams p1{1.5, 1.0, 1.0, 1.0, 1.5};
    for (double u : {0.3, 0.6, 1.0}) {
        CAPTURE(u);
        const double want2 = 2.0 * pathway_pdf(p2, 2.0 * u, KernelKind::Second);
        CHECK(std::abs(pathway_second(bump, p2, u).value - want2) < 1e-3 * std::max(1.0, want2));
        const double want1 = pathway_pdf(p1, 0.5 / u, KernelKind::First) * 0.5 / (u * u);
        CHECK(std::abs(pathway_first(bump, p1, u).value - want1) < 1e-3 * std::max(1.0, want1));
    }
}

TEST_CASE("hypergeometric operators: examples and reductions") {
    HyperDensityParams h;
    h.hyper.scale = 0.5;
    h.zeta = 1.0;
    h.alpha = 1.0;
    CHECK(hyper_second(power_function(-3.0), h, 1.0).value ==
          doctest::Approx(oracle::kHyper2PowMinus3).epsilon(1e-11));
    HyperDensityParams h1;
    h1.hyper.scale = 1.0;
    h1.zeta = 1.0;
    h1.alpha = 1.0;
    h1.kind = KernelKind::First;
    CHECK(hyper_first(lookup_function("uniform"), h1, 1.0).value ==
          doctest::Approx(oracle::kOneOverEMinus1).epsilon(1e-11));

    HyperDensityParams z;
    z.hyper.upper = {1.0, 2.5};
    z.hyper.lower = {3.0};
    z.hyper.scale = 0.0;
    z.zeta = 1.5;
    z.alpha = 0.75;
    for (double u : {0.25, 1.0, 4.0}) {
        const double k2 = kober_second(kGamma2, {z.zeta, z.alpha}, u).value;
        CHECK(oracle::rel_gap(hyper_second(kGamma2, z, u).value,
                              oracle::gamma_ratio({z.alpha + z.zeta + 1.0}, {z.zeta + 1.0}) * k2) < 1e-10);
        HyperDensityParams f = z;
        f.kind = KernelKind::First;
        const double k1 = kober_first(kGamma2, {z.zeta, z.alpha}, u).value;
        CHECK(oracle::rel_gap(hyper_first(kGamma2, f, u).value,
                              oracle::gamma_ratio({z.zeta + z.alpha}, {z.zeta}) * k1) < 1e-10);
    }
}

TEST_CASE("series exchange: truncated hyper operators are sums of shifted Kober operators") {
    const std::vector<ArgMode> modes{ArgMode::X, ArgMode::OneMinusX};
    gen::for_all(24, 1234, [&](gen::Gen& g) {
        HyperDensityParams h;
        h.hyper.upper = {g.uniform(0.5, 2.5), g.uniform(0.5, 2.5)};
        h.hyper.lower = {g.uniform(0.5, 3.0)};
        h.hyper.scale = g.uniform(0.05, 0.5);
        h.hyper.mode = g.pick(modes);
        h.kind = g.integer(0, 1) ? KernelKind::Second : KernelKind::First;
        h.zeta = g.uniform(0.5, 2.0);
        h.alpha = g.uniform(0.5, 2.0);
        const std::size_t K = g.integer(0, 1) ? 3 : 8;
        h.truncate_at = K;
        const double u = g.log_uniform(0.25, 4.0);
        const TestFunction& f = g.integer(0, 1) ? kExp : kGamma2;
        CAPTURE(g.seed());
        const double c = hyper_norm_const(h);
        double sum = 0.0;
        double coef = 1.0;
        for (std::size_t k = 0; k <= K; ++k) {
            const double kk = static_cast<double>(k);
            const bool x_mode = h.hyper.mode == ArgMode::X;
            const KoberParams kp{x_mode ? h.zeta + kk : h.zeta, x_mode ? h.alpha : h.alpha + kk};
            const double bare = h.kind == KernelKind::Second ? kober_second(f, kp, u).value : kober_first(f, kp, u).value;
            sum += coef * std::tgamma(kp.alpha) * bare;
            coef *= (h.hyper.upper[0] + kk) * (h.hyper.upper[1] + kk) / (h.hyper.lower[0] + kk) * h.hyper.scale / (kk + 1.0);
        }
        sum /= c;
        const double got = h.kind == KernelKind::Second ? hyper_second(f, h, u).value : hyper_first(f, h, u).value;
        CHECK(oracle::rel_gap(got, sum) < 1e-8);
    });
}

TEST_CASE("Saigo presets are the 2F1 one-minus-x operators") {
    const HyperDensityParams s2 = saigo_second(0.5, 1.5, 2.5, 0.4, 1.0, 0.75);
    HyperDensityParams manual;
    manual.hyper.upper = {0.5, 1.5};
    manual.hyper.lower = {2.5};
    manual.hyper.scale = 0.4;
    manual.hyper.mode = ArgMode::OneMinusX;
    manual.zeta = 1.0;
    manual.alpha = 0.75;
    CHECK(hyper_second(kExp, s2, 1.3).value == doctest::Approx(hyper_second(kExp, manual, 1.3).value).epsilon(1e-14));
    // Against a direct integral of the kernel in t.
    const double c = hyper_norm_const(s2);
    const double u = 1.3;
    const double direct = oracle::integrate_to_inf_ends(
        [&](long double t, long double from_u) {
            const long double x = u / t;
            const long double omx = from_u / t;
            return std::pow(x, 1.0L) * std::pow(omx, -0.25L) *
                   oracle::pfq({0.5, 1.5}, {2.5}, static_cast<double>(0.4L * omx)) * std::exp(-t) / t;
        },
        u);
    CHECK(hyper_second(kExp, s2, u).value == doctest::Approx(direct / c).epsilon(1e-9));
}

TEST_CASE("Weyl and Riemann-Liouville examples") {
    for (double alpha : {0.3, 1.0, 2.7}) {
        CHECK(weyl_right(kExp, alpha, 1.0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
    }
    CHECK(weyl_right(kExp, 2.0, 0.0).value == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(weyl_right(power_function(-2.0), 1.0, 2.0).value == doctest::Approx(0.5).epsilon(1e-11));
    for (double x : {0.5, 3.0}) {
        CHECK(rl_left(power_function(0.0), 1.0, x).value == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(rl_left(power_function(1.0), 0.5, 1.0).value == doctest::Approx(oracle::kGamma2OverGamma25).epsilon(1e-11));
    CHECK(rl_left(exp_growth(), 1.0, 1.0).value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("product and ratio densities") {
    const TestFunction uni = lookup_function("uniform");
    CHECK(product_density(uni, uni, 0.5).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(product_density(kExp, kExp, 1.0).value == doctest::Approx(oracle::kTwoK0At2).epsilon(1e-11));
    CHECK(ratio_density(uni, uni, 2.0).value == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(ratio_density(uni, uni, 0.5).value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(product_density(uni, uni, 1.5).value == 0.0);
}

TEST_CASE("product and ratio densities keep precision at extreme u") {
    const TestFunction b = beta1_density({2.0, 1.5});
    // u -> 0: x1 x2 with x1 ~ Beta(2, 1.5), x2 ~ Exp(1) has density -> E(1/x1) = (lambda+alpha-1)/(lambda-1) = 2.5.
    for (double u : {1e-12, 1e-50, 1e-200}) {
        CAPTURE(u);
        CHECK(product_density(b, kExp, u).value == doctest::Approx(2.5).epsilon(1e-8));
        // x2 / x1 near 0 has density f2(0) E(x1) = 4/7.
        CHECK(ratio_density(b, kExp, u).value == doctest::Approx(4.0 / 7.0).epsilon(1e-8));
    }
    CHECK(product_density(b, kExp, 800.0).value >= 0.0);
    CHECK(ratio_density(b, kExp, 800.0).value >= 0.0);
}

TEST_CASE("theorem identities pointwise") {
    gen::for_all(60, 606, [](gen::Gen& g) {
        const double zeta = g.uniform(0.2, 3.0);
        const double alpha = g.uniform(0.2, 3.0);
        const double u = g.log_uniform(0.05, 10.0);
        const TestFunction& f = g.integer(0, 1) ? kExp : kGamma2;
        CAPTURE(zeta);
        CAPTURE(alpha);
        CAPTURE(u);
        const double prod = product_density(beta1_density(kober_second_kernel(zeta, alpha)), f, u).value;
        CHECK(oracle::rel_gap(prod, *kober_second(f, {zeta, alpha}, u).density) < 1e-9);
        CHECK(oracle::rel_gap(prod, oracle::gamma_ratio({alpha + zeta + 1.0}, {zeta + 1.0}) *
                                        kober_second(f, {zeta, alpha}, u).value) < 1e-9);
        const double rat = ratio_density(beta1_density(kober_first_kernel(zeta, alpha)), f, u).value;
        CHECK(oracle::rel_gap(rat, oracle::gamma_ratio({zeta + alpha}, {zeta}) * kober_first(f, {zeta, alpha}, u).value) <
              1e-9);
    });
}

TEST_CASE("reduction suite") {
    const double us[] = {0.25, 1.0, 4.0};
    for (const TestFunction& f : {kExp, kGamma2, power_function(-2.5)}) {
        for (double zeta : {0.5, 1.0, 2.0}) {
            for (double alpha : {0.5, 1.0, 2.0}) {
                const auto checks = reduction_suite(f, us, zeta, alpha);
                CHECK_FALSE(checks.empty());
                for (const ReductionCheck& c : checks) {
                    CAPTURE(f.name);
                    CAPTURE(c.name);
                    CAPTURE(c.u);
                    CHECK(c.pass);
                    CHECK(within(c.lhs, c.rhs, 1e-9));
                }
            }
        }
    }
    CHECK(within(1.0, 1.0 + 5e-10, 1e-9));
    CHECK_FALSE(within(1e3, 1e3 + 1e-5, 1e-9));
}
