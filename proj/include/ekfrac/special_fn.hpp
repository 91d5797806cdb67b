#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ekfrac {

using Complex = std::complex<double>;

/// Principal branch of log Gamma for Re z >= 1/2 (Lanczos); the left half-plane
/// goes through reflection and matches the principal branch modulo 2*pi*i.
/// Throws PoleError at 0, -1, -2, ...
Complex log_gamma(Complex z);

/// log|Gamma(x)| for real x. Throws PoleError at non-positive integers.
double log_gamma(double x);

/// Sign of Gamma(x) (+1 or -1) for real x away from poles.
int gamma_sign(double x);

/// Gamma(x) for real x, via log_gamma with tracked sign.
double gamma_fn(double x);

/// prod Gamma(num_i) / prod Gamma(den_j) evaluated in log space with the sign
/// of every negative non-integer argument tracked.
double gamma_ratio(std::span<const double> num, std::span<const double> den);
double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den);

/// log Gamma(x + h) - log Gamma(x) for x > 0, x + h > 0. Stays accurate when
/// x is large and h moderate, where the two log-gammas nearly cancel.
double log_gamma_shift(double x, double h);

/// log Gamma(x + h) - log Gamma(x) - h log x, which tends to 0 as x grows.
/// Lets callers fold h log x into other logarithms before it can cancel.
double log_gamma_shift_excess(double x, double h);

/// Rising factorial (x)_k. Products longer than 30 factors go through log space.
double pochhammer(double x, std::size_t k);
Complex pochhammer(Complex x, std::size_t k);

enum class ArgMode {
    X,                 ///< a * x
    OneMinusX,         ///< a * (1 - x)
    PowerX,            ///< a^d1 * x^d2
    PowerOneMinusX,    ///< a^d1 * (1 - x)^d2
    Mixed,             ///< a^d1 * (1 - x)^d2 * x^d3
};

struct HyperExponents {
    double d1 = 1.0;
    double d2 = 1.0;
    double d3 = 1.0;
};

/// Parameters of a pFq series appended to a beta kernel.
struct HyperParams {
    std::vector<double> upper;
    std::vector<double> lower;
    double scale = 0.0;
    ArgMode mode = ArgMode::X;
    std::optional<HyperExponents> exponents;

    std::size_t p() const { return upper.size(); }
    std::size_t q() const { return lower.size(); }

    /// Throws DomainError unless every upper/lower entry is positive, the scale
    /// is non-negative, p <= q + 1, the exponents (if any) are positive, and
    /// the power modes carry exponents.
    void validate() const;

    /// Series argument at kernel point x, with 1 - x supplied separately so
    /// callers near x = 1 keep full precision.
    double argument(double x, double one_minus_x) const;
    double argument(double x) const { return argument(x, 1.0 - x); }
};

struct PfqOptions {
    double rel_tol = 1e-14;
    std::size_t max_terms = 1'000'000;
    /// When set, sum exactly terms k = 0..truncate_at and skip the tail test.
    std::optional<std::size_t> truncate_at;
};

struct PfqResult {
    double value = 0.0;
    std::size_t terms = 0;
};

struct ComplexPfqResult {
    Complex value;
    std::size_t terms = 0;
};

/// Generalized hypergeometric series pFq(upper; lower; z) for real arguments.
PfqResult pfq(std::span<const double> upper, std::span<const double> lower, double z,
              const PfqOptions& opts = {});

/// Same series with complex parameters and argument; used by the Mellin
/// multipliers whose parameters carry the Mellin variable.
ComplexPfqResult pfq(std::span<const Complex> upper, std::span<const Complex> lower, Complex z,
                     const PfqOptions& opts = {});

}  // namespace ekfrac
