#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "ekfrac/special_fn.hpp"

namespace ekfrac {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi) inside (0, inf); hi may be infinite.
struct Interval {
    double lo = 0.0;
    double hi = kInfinity;

    bool contains(double x) const { return x > lo && x < hi; }
    bool bounded() const { return hi < kInfinity; }
};

/// Range of Re(s) where a Mellin transform converges.
struct MellinStrip {
    double lower = -kInfinity;
    double upper = kInfinity;

    bool contains(double re_s) const { return re_s > lower && re_s < upper; }
    bool empty() const { return !(lower < upper); }
    double midpoint() const;
    MellinStrip intersect(const MellinStrip& o) const;
    MellinStrip shifted(double by) const { return {lower + by, upper + by}; }
};

/// Behaviour of f(t) as t -> inf.
struct Decay {
    enum class Kind {
        Exponential,  ///< faster than any power
        Power,        ///< f ~ t^{-power}
        Compact,      ///< bounded support
        None,         ///< grows or does not decay; not integrable at infinity
    };
    Kind kind = Kind::Exponential;
    double power = 0.0;

    static Decay exponential() { return {Kind::Exponential, 0.0}; }
    static Decay power_law(double p) { return {Kind::Power, p}; }
    static Decay compact() { return {Kind::Compact, 0.0}; }
    static Decay none() { return {Kind::None, 0.0}; }

    /// Supremum of exponents e for which t^e f(t) is integrable at infinity
    /// (that is, e < power - 1 for power decay).
    double integrable_power_bound() const;
};

using MellinFn = std::function<Complex(Complex)>;

/// A function on (0, inf) together with the metadata the operators and the
/// Mellin machinery need: support, endpoint exponents, decay at infinity and
/// an optional closed-form Mellin transform.
struct TestFunction {
    std::string name;
    std::function<double(double)> evaluator;
    Interval support;
    /// f ~ (x - lo)^lower_exponent as x -> lo.
    double lower_exponent = 0.0;
    /// f ~ (hi - x)^upper_exponent as x -> hi (bounded support only).
    double upper_exponent = 0.0;
    Decay decay = Decay::exponential();
    bool is_density = false;
    MellinFn mellin_closed_form;
    /// Overrides the strip derived from the metadata.
    std::optional<MellinStrip> strip_override;
    /// f(x) given gap = hi - x as well, for bounded supports where forming
    /// hi - x from x would cost precision next to hi.
    std::function<double(double x, double gap)> near_upper;

    /// f(x) inside the support, zero outside.
    double operator()(double x) const { return support.contains(x) ? evaluator(x) : 0.0; }

    /// f(x) with x = hi - gap; uses near_upper when set.
    double at_gap(double x, double gap) const {
        if (!near_upper || !support.bounded()) {
            return (*this)(x);
        }
        return x > support.lo && gap > 0.0 ? near_upper(x, gap) : 0.0;
    }

    MellinStrip strip() const;
    bool has_closed_mellin() const { return static_cast<bool>(mellin_closed_form); }
};

/// x^p f(x), with support, exponents, decay and Mellin data carried over.
TestFunction times_power(const TestFunction& f, double p);

}  // namespace ekfrac
