#include "ekfrac/special_fn.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ekfrac/errors.hpp"

namespace ekfrac {

namespace {

// Lanczos approximation, g = 607/128 with 15 terms (Godfrey's coefficients).
// Relative error of Gamma below 1e-15 for Re z >= 1/2.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoef = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5,
};
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

template <class T>
T lanczos_log_gamma(T z) {
    z -= 1.0;
    T series = kLanczosCoef[0];
    for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
        series += kLanczosCoef[i] / (z + static_cast<double>(i));
    }
    const T t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(w) without overflow for large |Im w|.
Complex log_sin(Complex w) {
    if (std::abs(w.imag()) < 20.0) {
        return std::log(std::sin(w));
    }
    if (w.imag() < 0.0) {
        return std::conj(log_sin(std::conj(w)));
    }
    // sin w = e^{-iw} (1 - e^{2iw}) i / 2, and e^{2iw} is tiny here.
    const Complex i{0.0, 1.0};
    return -i * w + std::log(0.5 * i * (1.0 - std::exp(2.0 * i * w)));
}

// Stirling correction sum_{k} B_2k / (2k (2k-1) y^{2k-1}), adequate for y >= 20.
double stirling_correction(double y) {
    constexpr std::array<double, 7> c = {1.0 / 12.0,   -1.0 / 360.0,         1.0 / 1260.0, -1.0 / 1680.0,
                                         1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0};
    const double inv = 1.0 / y;
    const double inv2 = inv * inv;
    double acc = 0.0;
    double pw = inv;
    for (double ck : c) {
        acc += ck * pw;
        pw *= inv2;
    }
    return acc;
}

}  // namespace

Complex log_gamma(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("log_gamma: non-finite argument");
    }
    if (z.imag() == 0.0 && is_nonpositive_integer(z.real())) {
        throw PoleError("log_gamma: pole at " + std::to_string(z.real()));
    }
    if (z.real() >= 0.5) {
        return lanczos_log_gamma(z);
    }
    // Reflection; values in the left half-plane agree with the continuous
    // branch modulo 2*pi*i, which cancels in every exp() taken downstream.
    return kLogPi - log_sin(kPi * z) - lanczos_log_gamma(1.0 - z);
}

double log_gamma(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("log_gamma: non-finite argument");
    }
    if (is_nonpositive_integer(x)) {
        throw PoleError("log_gamma: pole at " + std::to_string(x));
    }
    if (x >= 0.5) {
        return lanczos_log_gamma(x);
    }
    const double reduced = x - 2.0 * std::floor(0.5 * x);
    return kLogPi - std::log(std::abs(std::sin(kPi * reduced))) - lanczos_log_gamma(1.0 - x);
}

int gamma_sign(double x) {
    if (x > 0.0) {
        return 1;
    }
    if (is_nonpositive_integer(x)) {
        throw PoleError("gamma_sign: pole at " + std::to_string(x));
    }
    return (static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
}

double gamma_fn(double x) { return gamma_sign(x) * std::exp(log_gamma(x)); }

double gamma_ratio(std::span<const double> num, std::span<const double> den) {
    double log_sum = 0.0;
    int sign = 1;
    for (double x : num) {
        sign *= gamma_sign(x);
        log_sum += log_gamma(x);
    }
    for (double x : den) {
        sign *= gamma_sign(x);
        log_sum -= log_gamma(x);
    }
    return sign * std::exp(log_sum);
}

double gamma_ratio(std::initializer_list<double> num, std::initializer_list<double> den) {
    return gamma_ratio(std::span<const double>(num.begin(), num.size()),
                       std::span<const double>(den.begin(), den.size()));
}

double log_gamma_shift_excess(double x, double h) {
    if (!(x > 0.0) || !(x + h > 0.0)) {
        throw DomainError("log_gamma_shift: requires x > 0 and x + h > 0");
    }
    if (x < 20.0 || x + h < 20.0) {
        return log_gamma(x + h) - log_gamma(x) - h * std::log(x);
    }
    return (x + h - 0.5) * std::log1p(h / x) - h + stirling_correction(x + h) - stirling_correction(x);
}

double log_gamma_shift(double x, double h) { return h * std::log(x) + log_gamma_shift_excess(x, h); }

double pochhammer(double x, std::size_t k) {
    if (k == 0) {
        return 1.0;
    }
    if (k <= 30) {
        double prod = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            prod *= x + static_cast<double>(i);
        }
        return prod;
    }
    if (is_nonpositive_integer(x)) {
        // -x < k here, so one factor of the product is zero.
        return 0.0;
    }
    return gamma_ratio({x + static_cast<double>(k)}, {x});
}

Complex pochhammer(Complex x, std::size_t k) {
    if (k == 0) {
        return 1.0;
    }
    if (k <= 30) {
        Complex prod = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            prod *= x + static_cast<double>(i);
        }
        return prod;
    }
    if (x.imag() == 0.0) {
        return pochhammer(x.real(), k);
    }
    return std::exp(log_gamma(x + static_cast<double>(k)) - log_gamma(x));
}

void HyperParams::validate() const {
    for (double a : upper) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw DomainError("HyperParams: upper parameters must be positive");
        }
    }
    for (double b : lower) {
        if (!(b > 0.0) || !std::isfinite(b)) {
            throw DomainError("HyperParams: lower parameters must be positive");
        }
    }
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        throw DomainError("HyperParams: scale must be non-negative");
    }
    if (p() > q() + 1) {
        throw DomainError("HyperParams: requires p <= q + 1");
    }
    const bool power_mode = mode == ArgMode::PowerX || mode == ArgMode::PowerOneMinusX || mode == ArgMode::Mixed;
    if (power_mode && !exponents) {
        throw DomainError("HyperParams: power argument modes need exponents (d1, d2, d3)");
    }
    if (exponents && !(exponents->d1 > 0.0 && exponents->d2 > 0.0 && exponents->d3 > 0.0)) {
        throw DomainError("HyperParams: exponents must be positive");
    }
}

double HyperParams::argument(double x, double one_minus_x) const {
    switch (mode) {
        case ArgMode::X:
            return scale * x;
        case ArgMode::OneMinusX:
            return scale * one_minus_x;
        case ArgMode::PowerX:
            return std::pow(scale, exponents->d1) * std::pow(x, exponents->d2);
        case ArgMode::PowerOneMinusX:
            return std::pow(scale, exponents->d1) * std::pow(one_minus_x, exponents->d2);
        case ArgMode::Mixed:
            return std::pow(scale, exponents->d1) * std::pow(one_minus_x, exponents->d2) *
                   std::pow(x, exponents->d3);
    }
    return 0.0;
}

namespace {

template <class T>
void check_series_shape(std::size_t p, std::size_t q, T z) {
    if (p > q + 1) {
        throw DivergenceError("pfq: p > q + 1 diverges for non-zero argument");
    }
    if (p == q + 1 && std::abs(z) >= 1.0) {
        throw ConvergenceError("pfq: p = q + 1 requires |z| < 1");
    }
}

// Shared summation loop. Stops once terms decrease and the geometric bound on
// the remaining tail, built from the ratio of the last two terms, drops below
// rel_tol * |sum|. For p = q + 1 the ratio tends to |z| from below, so the
// bound uses max(ratio, |z|).
template <class T, class Ratio>
std::pair<T, std::size_t> sum_series(Ratio&& ratio, std::size_t p, std::size_t q, double abs_z,
                                     const PfqOptions& opts) {
    T term = 1.0;
    T sum = 1.0;
    if (opts.truncate_at) {
        for (std::size_t k = 0; k < *opts.truncate_at; ++k) {
            term *= ratio(k);
            sum += term;
        }
        return {sum, *opts.truncate_at + 1};
    }
    double prev_ratio = std::numeric_limits<double>::infinity();
    double max_term = 1.0;
    for (std::size_t k = 0;; ++k) {
        if (k + 1 >= opts.max_terms) {
            throw NonConvergedError("pfq: term cap reached (" + std::to_string(opts.max_terms) + ")");
        }
        const T r = ratio(k);
        const T next = term * r;
        if (next == T(0.0)) {
            return {sum, k + 1};
        }
        sum += next;
        const double ar = std::abs(r);
        max_term = std::max(max_term, std::abs(next));
        const bool settled = ar < 1.0 && (p == q + 1 || ar <= prev_ratio);
        const double r_eff = (p == q + 1) ? std::max(ar, abs_z) : ar;
        if (settled && r_eff < 1.0) {
            const double tail = std::abs(next) * r_eff / (1.0 - r_eff);
            const double scale = std::max(std::abs(sum), 1e-2 * std::numeric_limits<double>::epsilon() * max_term);
            if (tail <= opts.rel_tol * scale) {
                return {sum, k + 2};
            }
        }
        prev_ratio = ar;
        term = next;
    }
}

}  // namespace

PfqResult pfq(std::span<const double> upper, std::span<const double> lower, double z, const PfqOptions& opts) {
    for (double b : lower) {
        if (is_nonpositive_integer(b)) {
            throw DomainError("pfq: lower parameter is zero or a negative integer");
        }
    }
    if (z == 0.0) {
        return {1.0, 1};
    }
    check_series_shape(upper.size(), lower.size(), z);
    auto ratio = [&](std::size_t k) {
        const double kk = static_cast<double>(k);
        double r = z / (kk + 1.0);
        for (double a : upper) {
            r *= a + kk;
        }
        for (double b : lower) {
            r /= b + kk;
        }
        return r;
    };
    auto [value, terms] = sum_series<double>(ratio, upper.size(), lower.size(), std::abs(z), opts);
    return {value, terms};
}

ComplexPfqResult pfq(std::span<const Complex> upper, std::span<const Complex> lower, Complex z,
                     const PfqOptions& opts) {
    for (const Complex& b : lower) {
        if (b.imag() == 0.0 && is_nonpositive_integer(b.real())) {
            throw DomainError("pfq: lower parameter is zero or a negative integer");
        }
    }
    if (z == Complex(0.0)) {
        return {Complex(1.0), 1};
    }
    check_series_shape(upper.size(), lower.size(), z);
    auto ratio = [&](std::size_t k) {
        const double kk = static_cast<double>(k);
        Complex r = z / (kk + 1.0);
        for (const Complex& a : upper) {
            r *= a + kk;
        }
        for (const Complex& b : lower) {
            r /= b + kk;
        }
        return r;
    };
    auto [value, terms] = sum_series<Complex>(ratio, upper.size(), lower.size(), std::abs(z), opts);
    return {value, terms};
}

}  // namespace ekfrac
