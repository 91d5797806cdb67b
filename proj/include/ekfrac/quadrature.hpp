#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace ekfrac::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    /// Tolerance handed to the double-exponential rules; they usually land
    /// far below it, which gives the headroom the tolerance check needs.
    double rule_tol = 1e-13;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evals = 0;

    Result& operator+=(const Result& o) {
        value += o.value;
        abs_error += o.abs_error;
        evals += o.evals;
        return *this;
    }
};

/// Integrand receiving x together with its distances to the interval ends
/// (x - a, b - x), each accurate even where x sits next to an endpoint.
using EndpointIntegrand = std::function<double(double x, double from_a, double to_b)>;
using Integrand = std::function<double(double x)>;

/// Integral over (a, b); b may be +infinity. Finite intervals use tanh-sinh,
/// so integrable endpoint singularities are fine. Semi-infinite ranges are
/// split at a + split_scale: tanh-sinh before, exp-sinh after.
/// Throws QuadratureError when the error estimate exceeds the tolerance or
/// the integrand produces non-finite values.
Result integrate(const EndpointIntegrand& f, double a, double b, const Options& opts = {},
                 double split_scale = 1.0);
Result integrate(const Integrand& f, double a, double b, const Options& opts = {}, double split_scale = 1.0);

/// Sum of integrals over the pieces that the sorted, de-duplicated breakpoints
/// cut out of (a, b). Breakpoints outside (a, b) are ignored.
Result integrate_pieces(const EndpointIntegrand& f, double a, double b, std::span<const double> breakpoints,
                        const Options& opts = {});

/// Fixed 20-point Gauss-Legendre rule on [a, b].
double gauss_legendre_20(const Integrand& f, double a, double b);

}  // namespace ekfrac::quad
