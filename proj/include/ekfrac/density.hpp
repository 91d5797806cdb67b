#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ekfrac/function.hpp"
#include "ekfrac/special_fn.hpp"

namespace ekfrac {

/// Which convention a kernel density follows. Second-kind kernels carry the
/// power x^gamma (product/Kober II side); first-kind kernels carry x^{gamma-1}
/// (ratio/Kober I side).
enum class KernelKind { Second, First };

// ---------------------------------------------------------------------------
// Type-1 beta

/// Beta(lambda, alpha) on (0, 1).
struct Beta1Params {
    double lambda = 1.0;
    double alpha = 1.0;

    void validate() const;
};

/// Kernel of the Kober operator of the second kind: Beta(zeta + 1, alpha).
Beta1Params kober_second_kernel(double zeta, double alpha);
/// Kernel of the Kober operator of the first kind: Beta(zeta, alpha).
Beta1Params kober_first_kernel(double zeta, double alpha);

double beta1_pdf(const Beta1Params& p, double x);
TestFunction beta1_density(const Beta1Params& p);

// ---------------------------------------------------------------------------
// Pathway family

enum class PathwayRegime { Less, Greater, Limit };

/// x^gamma [1 - a(1-q) x^delta]^{eta/(1-q)} and its q > 1 and q -> 1 forms.
struct PathwayParams {
    double gamma = 0.0;
    double delta = 1.0;
    double eta = 1.0;
    double a = 1.0;
    double q = 0.0;

    PathwayRegime regime() const;
    /// Power of x in the density plus one: gamma + 1 (second kind) or gamma (first kind).
    double mass_exponent(KernelKind kind) const;
    /// Right end of the support: [a(1-q)]^{-1/delta} for q < 1, infinity otherwise.
    double support_end() const;
    /// Throws DomainError when the density is not normalizable.
    /// q < 1 needs eta/(1-q) > -1; q >= 1 needs eta > 0.
    void validate(KernelKind kind) const;
};

struct PathwayConstants {
    double c_value = 0.0;  ///< normalizing constant of the regime
    double c_star = 0.0;   ///< q -> 1 limit, delta (a eta)^{m/delta} / Gamma(m/delta)
};

PathwayConstants pathway_norm_consts(const PathwayParams& p, KernelKind kind = KernelKind::Second);
double pathway_pdf(const PathwayParams& p, double x, KernelKind kind = KernelKind::Second);

/// log of the normalizing constant, stable as q -> 1.
double pathway_log_norm(const PathwayParams& p, KernelKind kind);
/// log of the unnormalized kernel at x. For q < 1, gap = support_end() - x
/// may be passed to keep precision next to the end of the support (NaN when
/// unknown).
double pathway_log_kernel(const PathwayParams& p, KernelKind kind, double x, double gap);
TestFunction pathway_density(const PathwayParams& p, KernelKind kind = KernelKind::Second);

// ---------------------------------------------------------------------------
// Beta kernels with an appended hypergeometric series

struct HyperDensityParams {
    HyperParams hyper;
    double zeta = 0.0;
    double alpha = 1.0;
    KernelKind kind = KernelKind::Second;
    /// Sum only the series terms k <= truncate_at. The normalizing constant is
    /// left untouched, so truncated kernels are for series-exchange checks.
    std::optional<std::size_t> truncate_at;

    /// Power of x in the kernel: zeta (second kind) or zeta - 1 (first kind).
    double x_exponent() const { return kind == KernelKind::Second ? zeta : zeta - 1.0; }
    double lambda() const { return x_exponent() + 1.0; }
    void validate() const;
};

/// x^e (1-x)^{alpha-1} pFq(argument(x)) without the normalizing constant.
double hyper_kernel_unnormalized(const HyperDensityParams& p, double x, double one_minus_x);

/// Normalizing constant: B(lambda, alpha) p+1Fq+1(...; a) in closed form for
/// the a*x and a*(1-x) arguments; a series of beta functions for the power
/// arguments.
double hyper_norm_const(const HyperDensityParams& p);

/// Normalized density value. Recomputes the constant; use hyper_density() to
/// evaluate many points.
double hyper_density_pdf(const HyperDensityParams& p, double x);
TestFunction hyper_density(const HyperDensityParams& p);

/// Saigo-type kernels: 2F1(a1, a2; b1; scale * (1 - x)) appended to the beta
/// kernel of the requested kind.
HyperDensityParams saigo_second(double a1, double a2, double b1, double scale, double zeta, double alpha);
HyperDensityParams saigo_first(double a1, double a2, double b1, double scale, double zeta, double alpha);

// ---------------------------------------------------------------------------
// Tabulated CDF and inverse-CDF sampling

struct CdfOptions {
    std::size_t max_nodes = 2048;
    /// Split an interval while its 20-point mass and the two-half mass differ by more.
    double interval_tol = 1e-14;
    /// Truncate infinite supports where the remaining mass drops below this.
    double tail_mass = 1e-13;
    /// Quantile solve stops once |F(x) - u| is below this.
    double quantile_tol = 1e-12;
};

/// Monotone CDF table over the support of a density. Nodes are refined where
/// the mass is hard to integrate; inside each interval the CDF is evaluated
/// exactly by Gauss-Legendre, after a power substitution on intervals that
/// touch a singular endpoint.
class CdfTable {
public:
    explicit CdfTable(TestFunction f, const CdfOptions& opts = {});

    double cdf(double x) const;
    double quantile(double u) const;

    std::size_t nodes() const { return nodes_.size(); }
    double total_mass() const { return total_; }
    double range_end() const { return nodes_.back(); }

private:
    double partial(std::size_t k, double x) const;
    double interval_mass(double a, double b, bool first, bool last) const;
    double plain_mass(double a, double b) const;
    double from_lower(double a, double b) const;
    double to_upper(double a, double b) const;

    TestFunction f_;
    CdfOptions opts_;
    bool singular_lo_ = false;
    bool singular_hi_ = false;
    std::vector<double> nodes_;
    std::vector<double> cum_;
    double tail_ = 0.0;
    double total_ = 0.0;
};

/// A registered density: the function plus its CDF table. Immutable and cheap
/// to copy.
class Density {
public:
    /// Throws DomainError unless f.is_density.
    explicit Density(TestFunction f, const CdfOptions& opts = {});

    const TestFunction& function() const { return *fn_; }
    const std::string& name() const { return fn_->name; }
    double pdf(double x) const { return (*fn_)(x); }
    double cdf(double x) const { return table_->cdf(x); }
    double quantile(double u) const { return table_->quantile(u); }
    const CdfTable& table() const { return *table_; }

    /// n i.i.d. draws by inverse CDF; draw i uses uniform i of the stream
    /// (seed, stream), so the output does not depend on the thread count.
    std::vector<double> sample(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) const;

private:
    std::shared_ptr<const TestFunction> fn_;
    std::shared_ptr<const CdfTable> table_;
};

std::vector<double> sample(const Density& d, std::size_t n, std::uint64_t seed);
double cdf(const Density& d, double x);

}  // namespace ekfrac
