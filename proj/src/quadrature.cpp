#include "ekfrac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ekfrac/errors.hpp"

namespace ekfrac::quad {

namespace {

// One rule object per thread. The complement-aware tanh-sinh overload is
// non-const in Boost 1.74, so the objects are not shared.
boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule;
}

boost::math::quadrature::exp_sinh<double>& exp_sinh_rule() {
    thread_local boost::math::quadrature::exp_sinh<double> rule(9);
    return rule;
}

std::string describe(double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << a << ", " << b << ")";
    return os.str();
}

struct CountingIntegrand {
    const EndpointIntegrand& f;
    std::size_t evals = 0;
    bool non_finite = false;

    double operator()(double x, double from_a, double to_b) {
        ++evals;
        const double y = f(x, from_a, to_b);
        if (!std::isfinite(y)) {
            non_finite = true;
            return 0.0;
        }
        return y;
    }
};

Result finite_piece(const EndpointIntegrand& f, double a, double b, const Options& opts) {
    CountingIntegrand counted{f};
    const double width = b - a;
    // The rule runs on (0, 1): its error estimate is not scale invariant.
    auto g = [&](double /*t*/, double tc) {
        if (tc < 0.0) {
            const double from_a = -tc * width;
            return counted(a + from_a, from_a, width - from_a);
        }
        const double to_b = tc * width;
        return counted(b - to_b, width - to_b, to_b);
    };
    double error = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    try {
        value = width * tanh_sinh_rule().integrate(g, 0.0, 1.0, opts.rule_tol, &error, &l1);
        error *= width;
    } catch (const std::exception& e) {
        throw QuadratureError(std::string("tanh-sinh failed on ") + describe(a, b) + ": " + e.what());
    }
    if (counted.non_finite) {
        throw QuadratureError("integrand not finite inside " + describe(a, b));
    }
    return {value, error, counted.evals};
}

// Integral over (start, inf); distances are reported from the original origin.
Result infinite_piece(const EndpointIntegrand& f, double origin, double start, const Options& opts) {
    CountingIntegrand counted{f};
    auto g = [&](double x) { return counted(x, x - origin, kInf); };
    const double a = start;
    double error = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    try {
        value = exp_sinh_rule().integrate(g, a, kInf, opts.rule_tol, &error, &l1);
    } catch (const std::exception& e) {
        throw QuadratureError(std::string("exp-sinh failed on ") + describe(a, kInf) + ": " + e.what());
    }
    if (counted.non_finite) {
        throw QuadratureError("integrand not finite inside " + describe(a, kInf));
    }
    return {value, error, counted.evals};
}

void check_tolerance(const Result& r, double a, double b, const Options& opts) {
    const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value));
    if (!(r.abs_error <= allowed) || !std::isfinite(r.value)) {
        std::ostringstream os;
        os.precision(3);
        os << "quadrature tolerance unmet on " << describe(a, b) << ": error estimate " << r.abs_error
           << " > " << allowed;
        throw QuadratureError(os.str());
    }
}

}  // namespace

Result integrate(const EndpointIntegrand& f, double a, double b, const Options& opts, double split_scale) {
    if (!(b > a)) {
        return {};
    }
    if (!std::isfinite(a)) {
        throw QuadratureError("integrate: lower limit must be finite");
    }
    Result total;
    if (std::isfinite(b)) {
        total = finite_piece(f, a, b, opts);
    } else {
        const double split = a + std::max(split_scale, 1e-300);
        auto head = [&f](double x, double from_a, double) { return f(x, from_a, kInf); };
        total = finite_piece(head, a, split, opts);
        total += infinite_piece(f, a, split, opts);
    }
    check_tolerance(total, a, b, opts);
    return total;
}

Result integrate(const Integrand& f, double a, double b, const Options& opts, double split_scale) {
    return integrate([&f](double x, double, double) { return f(x); }, a, b, opts, split_scale);
}

Result integrate_pieces(const EndpointIntegrand& f, double a, double b, std::span<const double> breakpoints,
                        const Options& opts) {
    std::vector<double> cuts{a};
    for (double c : breakpoints) {
        if (c > a && c < b && std::isfinite(c)) {
            cuts.push_back(c);
        }
    }
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(b);
    Result total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        if (!(hi > lo)) {
            continue;
        }
        // Endpoint distances are reported relative to the whole (a, b) range.
        auto piece = [&](double x, double from_lo, double to_hi) {
            const double from_a = (lo == a) ? from_lo : x - a;
            const double to_b = (hi == b) ? to_hi : b - x;
            return f(x, from_a, to_b);
        };
        const double scale = std::max(1.0, std::abs(lo));
        total += integrate(piece, lo, hi, opts, scale);
    }
    return total;
}

double gauss_legendre_20(const Integrand& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

}  // namespace ekfrac::quad
