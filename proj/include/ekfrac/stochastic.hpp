#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ekfrac/density.hpp"

namespace ekfrac {

enum class SampleOp { Product, Ratio };

/// n values of x1 * x2 or x2 / x1, with x1 drawn from stream 0 of d1 and x2
/// from stream 1 of d2. x2 is multiplied by scale2 before combining.
std::vector<double> mc_transform_sample(const Density& d1, const Density& d2, SampleOp op, std::size_t n,
                                        std::uint64_t seed, double scale2 = 1.0);

/// Binned counts over fixed edges; values outside the edges are dropped from
/// the counts (n counts only values inside).
struct DensityEstimate {
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;
    std::size_t n = 0;

    /// counts[i] / (n * width_i).
    double density(std::size_t i) const;
};

DensityEstimate estimate_density(std::span<const double> sample, std::vector<double> edges);

/// sup |F_n - F| over the sample, counting both one-sided deviations.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& model_cdf);
double ks_distance_sorted(std::span<const double> sorted, const std::function<double(double)>& model_cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// 1.63 / sqrt(n): the one-sample KS line at level about 0.01.
double ks_threshold(std::size_t n);

enum class TheoremId { T1_1, T2_1, T3_1, T3_2, Pathway2, Pathway1, Hyper2, Hyper1 };

std::string to_string(TheoremId id);
/// Accepts "T1_1", "t1.1", "pathway2", "PATHWAY_2", ...
TheoremId parse_theorem(const std::string& text);

/// Which constant scales the bare operator in the model density.
enum class ConstantOverride {
    Theorem,  ///< the theorem's constant
    One,      ///< 1 (negative control)
    Swapped,  ///< the reciprocal of the theorem's constant (negative control)
};

std::string to_string(ConstantOverride c);

struct TheoremParams {
    double zeta = 1.0;
    double alpha = 1.0;
    /// Kernel for PATHWAY_2 / PATHWAY_1.
    std::optional<PathwayParams> pathway;
    /// Kernel for HYPER_2 / HYPER_1 (kind is set from the theorem).
    std::optional<HyperDensityParams> hyper;
};

struct VerificationReport {
    TheoremId theorem = TheoremId::T1_1;
    TheoremParams params;
    std::string f2_name;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    ConstantOverride constant = ConstantOverride::Theorem;
    double constant_value = 0.0;
    double ks_stat = 0.0;
    double ks_threshold = 0.0;
    /// Largest gap between the binned empirical density and the model's mean
    /// density over the model-CDF node intervals.
    double max_pointwise_gap = 0.0;
    bool pass = false;
};

/// The theorem's construction: kernel density x1, how u is formed, the
/// constant and the bare operator whose product is the model density of u.
struct TheoremSetup {
    Density x1;
    SampleOp op;
    double constant;
    std::function<double(double)> bare;
};

TheoremSetup theorem_setup(TheoremId id, const TheoremParams& params, const TestFunction& f2);

/// Samples u per the theorem, builds the model CDF from constant * bare
/// operator and returns the one-sample KS verdict.
VerificationReport verify_theorem(TheoremId id, const TheoremParams& params, const Density& f2, std::size_t n,
                                  std::uint64_t seed, ConstantOverride constant = ConstantOverride::Theorem);

/// Same sample and model, one report per requested constant.
std::vector<VerificationReport> verify_theorem_constants(TheoremId id, const TheoremParams& params,
                                                         const Density& f2, std::size_t n, std::uint64_t seed,
                                                         std::span<const ConstantOverride> constants);

/// JSON document: theorem, params, f2, n, seed, constant, ks_stat,
/// ks_threshold, max_pointwise_gap, pass.
std::string to_json(const VerificationReport& r, int indent = 2);

}  // namespace ekfrac
