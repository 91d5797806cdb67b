#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ekfrac/density.hpp"
#include "ekfrac/function.hpp"
#include "ekfrac/quadrature.hpp"

namespace ekfrac {

/// (zeta, alpha) of a Kober operator. Second kind needs zeta > -1, first kind
/// zeta >= 0 (zeta = 0 evaluates with a warning and no density value).
struct KoberParams {
    double zeta = 0.0;
    double alpha = 1.0;

    void validate(KernelKind kind) const;
};

struct OperatorResult {
    /// The operator value: the bare operator for Kober, Weyl and
    /// Riemann-Liouville; the normalized density g(u) for the pathway,
    /// hypergeometric and product/ratio operators.
    double value = 0.0;
    /// Density convention g(u), where one exists.
    std::optional<double> density;
    double abs_error_estimate = 0.0;
    std::size_t nodes_used = 0;
    std::string warning;

    /// density when present, else value.
    double density_or_value() const { return density.value_or(value); }
};

/// Default tolerances: 1e-10 absolute, 1e-9 relative.
quad::Options default_operator_options();

/// K_u^{zeta,alpha} f = (u^zeta / Gamma(alpha)) int_u^inf (t-u)^{alpha-1} t^{-zeta-alpha} f(t) dt.
/// density = Gamma(alpha+zeta+1)/Gamma(zeta+1) * value.
OperatorResult kober_second(const TestFunction& f, const KoberParams& p, double u,
                            const quad::Options& opts = default_operator_options());

/// I_u^{zeta,alpha} f = (u^{-zeta-alpha} / Gamma(alpha)) int_0^u (u-v)^{alpha-1} v^zeta f(v) dv.
/// density = Gamma(zeta+alpha)/Gamma(zeta) * value.
OperatorResult kober_first(const TestFunction& f, const KoberParams& p, double u,
                           const quad::Options& opts = default_operator_options());

/// Density of x1 x2 with x1 pathway-distributed (second-kind constant).
OperatorResult pathway_second(const TestFunction& f, const PathwayParams& p, double u,
                              const quad::Options& opts = default_operator_options());

/// Density of x2 / x1 with x1 pathway-distributed (first-kind constant). For
/// q < 1 the kernel support limits the range to v < u [a(1-q)]^{-1/delta}.
OperatorResult pathway_first(const TestFunction& f, const PathwayParams& p, double u,
                             const quad::Options& opts = default_operator_options());

/// Density of x1 x2 with x1 following the hypergeometric-appended kernel (kind Second).
OperatorResult hyper_second(const TestFunction& f, const HyperDensityParams& p, double u,
                            const quad::Options& opts = default_operator_options());

/// Density of x2 / x1 with x1 following the hypergeometric-appended kernel (kind First).
OperatorResult hyper_first(const TestFunction& f, const HyperDensityParams& p, double u,
                           const quad::Options& opts = default_operator_options());

/// Right-sided Weyl integral (1/Gamma(alpha)) int_x^inf (t-x)^{alpha-1} f(t) dt, x >= 0.
OperatorResult weyl_right(const TestFunction& f, double alpha, double x,
                          const quad::Options& opts = default_operator_options());

/// Left-sided Riemann-Liouville integral (1/Gamma(alpha)) int_0^x (x-v)^{alpha-1} f(v) dv.
OperatorResult rl_left(const TestFunction& f, double alpha, double x,
                       const quad::Options& opts = default_operator_options());

/// int (1/v) f1(u/v) f2(v) dv over the overlap of the supports.
OperatorResult product_density(const TestFunction& f1, const TestFunction& f2, double u,
                               const quad::Options& opts = default_operator_options());

/// int f1(v/u) f2(v) v/u^2 dv over the overlap of the supports.
OperatorResult ratio_density(const TestFunction& f1, const TestFunction& f2, double u,
                             const quad::Options& opts = default_operator_options());

// ---------------------------------------------------------------------------
// Reduction identities

struct ReductionCheck {
    std::string name;
    double u = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// |lhs - rhs| <= tol * max(1, |rhs|).
bool within(double lhs, double rhs, double tol);

/// Evaluates every reduction identity between the operators for function f at
/// each u: pathway (q = 0) to Kober of both kinds, Kober (zeta = 0) to Weyl,
/// hypergeometric (scale 0) to Kober of both kinds, and the Saigo presets
/// against a direct integral of the 2F1 kernel.
std::vector<ReductionCheck> reduction_suite(const TestFunction& f, std::span<const double> us, double zeta,
                                            double alpha, double tol = 1e-9);

}  // namespace ekfrac
