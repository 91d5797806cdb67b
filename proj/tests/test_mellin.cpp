#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ekfrac/errors.hpp"
#include "ekfrac/mellin.hpp"
#include "ekfrac/operators.hpp"
#include "ekfrac/registry.hpp"
#include "gen.hpp"
#include "oracle.hpp"

using namespace ekfrac;

namespace {

const TestFunction kExp = exp1_density();
const TestFunction kGamma2 = gamma_density(2.0);

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

MultiplierSpec hyper_spec(MultiplierTag tag, double zeta, double alpha) {
    MultiplierSpec s;
    s.tag = tag;
    s.zeta = zeta;
    s.alpha = alpha;
    s.hyper.upper = {1.0};
    s.hyper.lower = {2.0};
    s.hyper.scale = 0.5;
    return s;
}

}  // namespace

TEST_CASE("mellin_numeric examples") {
    CHECK(std::abs(mellin_numeric(kExp, Complex(2.0, 0.0)) - 1.0) < 1e-9);
    CHECK(std::abs(mellin_numeric(kExp, Complex(3.0, 0.0)) - 2.0) < 1e-9);
    CHECK(std::abs(mellin_numeric(beta1_density({2.0, 2.0}), Complex(2.0, 0.0)) - 0.5) < 1e-9);
    CHECK_THROWS_AS(mellin_numeric(kExp, Complex(-0.5, 0.0)), StripError);
    CHECK_THROWS_AS(mellin_numeric(power_function(-2.0), Complex(2.5, 0.0)), StripError);
}

TEST_CASE("mellin_numeric against closed forms off the real axis") {
    gen::for_all(40, 2718, [](gen::Gen& g) {
        const double k = g.uniform(0.5, 4.0);
        const TestFunction f = gamma_density(k);
        const Complex s(g.uniform(1.0 - k + 0.2, 6.0), g.uniform(-5.0, 5.0));
        CAPTURE(k);
        CAPTURE(s);
        CHECK(rel(mellin_numeric(f, s), f.mellin_closed_form(s)) < 1e-9);
        const TestFunction b = beta1_density({g.uniform(0.3, 4.0), g.uniform(0.3, 4.0)});
        const Complex t(g.uniform(0.8, 4.0) - b.lower_exponent, g.uniform(-3.0, 3.0));
        CHECK(rel(mellin_numeric(b, t), b.mellin_closed_form(t)) < 1e-9);
    });
}

TEST_CASE("multiplier examples") {
    MultiplierSpec k2;
    k2.tag = MultiplierTag::Kober2;
    k2.zeta = 1.0;
    k2.alpha = 1.0;
    CHECK(std::abs(multiplier(k2, Complex(1.0, 0.0)).factor - 0.5) < 1e-15);
    MultiplierSpec k1 = k2;
    k1.tag = MultiplierTag::Kober1;
    CHECK(std::abs(multiplier(k1, Complex(1.0, 0.0)).factor - 1.0) < 1e-15);
    // Zero scale: (Gamma(alpha)/c) Gamma(zeta+s)/Gamma(alpha+zeta+s), c = B(zeta+1, alpha).
    MultiplierSpec h = hyper_spec(MultiplierTag::Hyper2ArgX, 1.5, 0.75);
    h.hyper.scale = 0.0;
    const Complex s(1.2, 0.7);
    const double c = oracle::gamma_ratio({0.75, 2.5}, {3.25});
    const Complex want = std::tgamma(0.75) / c * std::exp(log_gamma(1.5 + s) - log_gamma(2.25 + s));
    CHECK(rel(multiplier(h, s).factor, want) < 1e-13);
    MultiplierSpec rl;
    rl.tag = MultiplierTag::RlLeft;
    rl.alpha = 0.5;
    CHECK(multiplier(rl, Complex(0.25, 0.0)).f_shift == 0.5);
    CHECK_THROWS_AS(multiplier(rl, Complex(0.75, 0.0)), StripError);
    CHECK(to_string(MultiplierTag::Hyper1Arg1mX) == "HYPER_1_ARG1MX");
}

TEST_CASE("first and second kind multipliers reflect under s -> 1 - s") {
    gen::for_all(100, 11, [](gen::Gen& g) {
        MultiplierSpec k2;
        k2.tag = MultiplierTag::Kober2;
        k2.zeta = g.uniform(0.05, 3.0);
        k2.alpha = g.uniform(0.2, 3.0);
        MultiplierSpec k1 = k2;
        k1.tag = MultiplierTag::Kober1;
        const Complex s(g.uniform(-k2.zeta + 0.05, 1.0 + k2.zeta - 0.05), g.uniform(-10.0, 10.0));
        CAPTURE(s);
        CHECK(rel(multiplier(k2, s).factor, multiplier(k1, 1.0 - s).factor) < 1e-13);
        MultiplierSpec h2 = hyper_spec(MultiplierTag::Hyper2ArgX, k2.zeta, k2.alpha);
        MultiplierSpec h1 = hyper_spec(MultiplierTag::Hyper1ArgX, k2.zeta, k2.alpha);
        // Same Gamma parts; the kernels x^zeta and x^{zeta-1} only differ in their normalization.
        const double c2 = hyper_norm_const(h2.hyper_density_params());
        const double c1 = hyper_norm_const(h1.hyper_density_params());
        CHECK(rel(c2 * multiplier(h2, s).factor, c1 * multiplier(h1, 1.0 - s).factor) < 1e-12);
    });
}

TEST_CASE("verify_multiplier examples") {
    MultiplierSpec k2;
    k2.tag = MultiplierTag::Kober2;
    k2.zeta = 1.0;
    k2.alpha = 1.0;
    const auto r = verify_multiplier(k2, kExp, {Complex(1.5, 0.0), Complex(2.0, 0.0), Complex(2.5, 1.0)});
    CHECK(r.probes.size() == 3);
    CHECK(r.max_rel_error < 1e-6);

    MultiplierSpec ratio;
    ratio.tag = MultiplierTag::RatioGeneric;
    ratio.f1 = beta1_density({2.0, 1.0});
    CHECK(verify_multiplier(ratio, kExp, {Complex(2.0, 0.0)}).max_rel_error < 1e-6);
    const Complex both = mellin_transform(*ratio.f1, Complex(0.0, 0.0)) * mellin_transform(kExp, Complex(2.0, 0.0));
    CHECK(rel(mellin_numeric(operator_output(ratio, kExp), Complex(2.0, 0.0)), both) < 1e-6);

    MultiplierSpec rl;
    rl.tag = MultiplierTag::RlLeft;
    rl.alpha = 0.5;
    const TestFunction f = times_power(kExp, -0.5);
    const auto r3 = verify_multiplier(rl, f, {Complex(0.25, 0.0)});
    CHECK(r3.max_rel_error < 1e-6);
    const Complex closed = std::exp(log_gamma(Complex(0.25)) - log_gamma(Complex(0.75))) * std::exp(log_gamma(Complex(0.25)));
    CHECK(rel(r3.probes[0].numeric, closed) < 1e-6);
}

TEST_CASE("verify_multiplier over every tag") {
    std::vector<MultiplierSpec> specs;
    for (MultiplierTag t : {MultiplierTag::Kober2, MultiplierTag::Kober1, MultiplierTag::Hyper2ArgX,
                            MultiplierTag::Hyper2Arg1mX, MultiplierTag::Hyper1ArgX, MultiplierTag::Hyper1Arg1mX,
                            MultiplierTag::RlLeft, MultiplierTag::WeylProduct}) {
        specs.push_back(hyper_spec(t, 1.5, 0.75));
    }
    MultiplierSpec ratio;
    ratio.tag = MultiplierTag::RatioGeneric;
    ratio.f1 = beta1_density({2.5, 1.5});
    specs.push_back(ratio);
    for (const MultiplierSpec& spec : specs) {
        for (const TestFunction* f : {&kExp, &kGamma2}) {
            const MellinStrip st = output_strip(spec, *f);
            REQUIRE_FALSE(st.empty());
            const double c = st.midpoint();
            CAPTURE(to_string(spec.tag));
            CAPTURE(f->name);
            const auto r = verify_multiplier(spec, *f, {Complex(c, 0.0), Complex(c, 1.0)});
            CHECK(r.max_rel_error < 1e-6);
        }
    }
}

TEST_CASE("inverse_mellin examples") {
    auto gamma_s = [](Complex s) { return std::exp(log_gamma(s)); };
    CHECK(inverse_mellin(gamma_s, 2.0, 1.0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
    CHECK(inverse_mellin(gamma_s, 2.0, 2.0).value == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
    auto kober = [&](Complex s) { return std::exp(log_gamma(1.0 + s) - log_gamma(2.0 + s)) * gamma_s(s); };
    CHECK(std::abs(inverse_mellin(kober, 2.0, 1.0).value - kober_second(kExp, {1.0, 1.0}, 1.0).value) < 1e-6);
    const auto r = inverse_mellin(gamma_s, 2.0, 1.0);
    CHECK(r.height > 0.0);
    CHECK(r.tail_bound < 1e-8);
    // 1/s decays too slowly along the contour.
    CHECK_THROWS_AS(inverse_mellin([](Complex s) { return 1.0 / s; }, 0.5, 1.0), TruncationError);
}

TEST_CASE("inverse Mellin round trip") {
    std::vector<TestFunction> fs{kExp, kGamma2, gamma_density(0.7), lookup_function("pathway:g=0.5,d=2,e=1,a=1,q=1")};
    for (const TestFunction& f : fs) {
        const double c = f.strip().midpoint();
        for (double u : {0.5, 1.0, 2.0}) {
            CAPTURE(f.name);
            CAPTURE(u);
            CHECK(std::abs(inverse_mellin(f.mellin_closed_form, c, u).value - f(u)) < 1e-6);
        }
    }
}

TEST_CASE("route equivalence: quadrature against inverse Mellin of the multiplier") {
    for (MultiplierTag t : {MultiplierTag::Kober1, MultiplierTag::Kober2, MultiplierTag::Hyper2ArgX,
                            MultiplierTag::Hyper2Arg1mX, MultiplierTag::Hyper1ArgX, MultiplierTag::Hyper1Arg1mX,
                            MultiplierTag::RlLeft}) {
        const MultiplierSpec spec = hyper_spec(t, 1.5, 0.75);
        for (const TestFunction* f : {&kExp, &kGamma2}) {
            const double c = output_strip(spec, *f).midpoint();
            auto fstar = [&](Complex s) {
                const MultiplierValue m = multiplier(spec, s);
                return m.factor * f->mellin_closed_form(s + m.f_shift);
            };
            for (double u : {0.5, 1.0, 2.0}) {
                CAPTURE(to_string(t));
                CAPTURE(f->name);
                CAPTURE(u);
                CHECK(std::abs(inverse_mellin(fstar, c, u).value - apply_operator(spec, *f, u)) < 1e-6);
            }
        }
    }
}

TEST_CASE("product and ratio transforms factorize") {
    gen::for_all(12, 4040, [](gen::Gen& g) {
        const double a1 = g.uniform(1.0, 3.0);
        const TestFunction f1 = beta1_density({a1, g.uniform(0.5, 3.0)});
        const TestFunction& f2 = g.integer(0, 1) ? kExp : kGamma2;
        const double s = g.uniform(1.2, 2.8);
        // The ratio has a u^{-1-a1} tail: its strip ends at 1 + a1.
        const double sr = g.uniform(1.2, std::min(2.8, 0.7 + a1));
        CAPTURE(g.seed());
        CAPTURE(s);
        TestFunction prod;
        prod.name = "product";
        prod.evaluator = [&](double u) { return product_density(f1, f2, u).value; };
        prod.lower_exponent = 0.0;
        prod.strip_override = MellinStrip{0.0, 3.0};
        TestFunction rat = prod;
        rat.name = "ratio";
        rat.evaluator = [&](double u) { return ratio_density(f1, f2, u).value; };
        rat.strip_override = MellinStrip{0.0, 1.0 + a1};
        const Complex ss(s, 0.0);
        CHECK(rel(mellin_numeric(prod, ss), f1.mellin_closed_form(ss) * f2.mellin_closed_form(ss)) < 1e-6);
        CAPTURE(sr);
        const Complex sq(sr, 0.0);
        CHECK(rel(mellin_numeric(rat, sq), f1.mellin_closed_form(2.0 - sq) * f2.mellin_closed_form(sq)) < 1e-6);
    });
}

TEST_CASE("operator_output carries strip and closed form") {
    MultiplierSpec k2;
    k2.tag = MultiplierTag::Kober2;
    k2.zeta = 1.0;
    k2.alpha = 2.0;
    const TestFunction g = operator_output(k2, kExp);
    CHECK(g.has_closed_mellin());
    CHECK(g(1.0) == doctest::Approx(kober_second(kExp, {1.0, 2.0}, 1.0).value));
    CHECK(rel(g.mellin_closed_form(Complex(2.0, 0.0)), mellin_numeric(g, Complex(2.0, 0.0))) < 1e-8);
    CHECK(rel(mellin_transform(kExp, Complex(4.0, 0.0)), Complex(6.0, 0.0)) < 1e-13);
}
