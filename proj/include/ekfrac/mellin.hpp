#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ekfrac/density.hpp"
#include "ekfrac/function.hpp"
#include "ekfrac/quadrature.hpp"

namespace ekfrac {

/// int_0^inf x^{s-1} f(x) dx, split at x = 1. Throws StripError when Re(s) is
/// outside f.strip().
Complex mellin_numeric(const TestFunction& f, Complex s, double abs_tol = 1e-11);

/// f*(s) from the closed form when f has one, numerically otherwise.
Complex mellin_transform(const TestFunction& f, Complex s);

enum class MultiplierTag {
    Kober2,
    Kober1,
    Hyper2ArgX,
    Hyper2Arg1mX,
    Hyper1ArgX,
    Hyper1Arg1mX,
    RlLeft,
    WeylProduct,
    RatioGeneric,
};

std::string to_string(MultiplierTag tag);

struct MultiplierSpec {
    MultiplierTag tag = MultiplierTag::Kober2;
    double zeta = 0.0;
    double alpha = 1.0;
    /// Upper/lower parameters and scale for the Hyper* tags; the mode, zeta,
    /// alpha and kind are filled in from the tag.
    HyperParams hyper;
    /// Kernel density f1 for RatioGeneric.
    std::optional<TestFunction> f1;

    /// The hypergeometric-appended kernel the Hyper* tags describe.
    HyperDensityParams hyper_density_params() const;
};

/// M{T f; s} = factor * f*(s + f_shift).
struct MultiplierValue {
    Complex factor;
    double f_shift = 0.0;
};

/// Re(s) range where the multiplier itself is defined.
MellinStrip multiplier_strip(const MultiplierSpec& spec);

/// Closed-form multiplier. The Kober, Weyl and Riemann-Liouville tags refer to
/// the bare operators; the Hyper* tags to the normalized densities g(u), with
/// the constant that normalizes g and the f*(s) factor included.
MultiplierValue multiplier(const MultiplierSpec& spec, Complex s);

/// The operator the multiplier describes, applied to f at u (same convention).
double apply_operator(const MultiplierSpec& spec, const TestFunction& f, double u);

/// Strip where M{T f; s} converges: the multiplier strip intersected with the
/// shifted strip of f.
MellinStrip output_strip(const MultiplierSpec& spec, const TestFunction& f);

/// The operator output u -> (T f)(u) wrapped as a TestFunction, with support,
/// strip and a closed-form Mellin transform from the multiplier.
TestFunction operator_output(const MultiplierSpec& spec, const TestFunction& f);

struct MellinProbe {
    Complex s;
    Complex numeric;
    Complex closed;
    double rel_error = 0.0;
};

struct MultiplierReport {
    std::string tag;
    std::vector<MellinProbe> probes;
    double max_rel_error = 0.0;
};

/// Compares mellin_numeric of the operator output against
/// multiplier * f*(s + shift) at each probe.
MultiplierReport verify_multiplier(const MultiplierSpec& spec, const TestFunction& f,
                                   const std::vector<Complex>& probes);

struct InverseMellinOptions {
    double tail_tol = 1e-8;
    double h_max = 400.0;
    double segment_tol = 1e-12;
};

struct InverseMellinResult {
    double value = 0.0;
    double height = 0.0;
    double tail_bound = 0.0;
};

/// (1 / 2 pi i) int_{c - iH}^{c + iH} F(s) u^{-s} ds for F real on the real
/// axis, computed as (1/pi) int_0^H Re[F(c+iy) u^{-c-iy}] dy on unit segments
/// (adaptive Gauss-Kronrod 21). H grows until a geometric bound on the rest of
/// the contour falls below tail_tol; TruncationError at h_max.
InverseMellinResult inverse_mellin(const std::function<Complex(Complex)>& fstar, double c, double u,
                                   const InverseMellinOptions& opts = {});

}  // namespace ekfrac
