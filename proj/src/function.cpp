#include "ekfrac/function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ekfrac {

double MellinStrip::midpoint() const {
    if (std::isfinite(lower) && std::isfinite(upper)) {
        return 0.5 * (lower + upper);
    }
    if (std::isfinite(lower)) {
        return lower + 1.0;
    }
    if (std::isfinite(upper)) {
        return upper - 1.0;
    }
    return 1.0;
}

MellinStrip MellinStrip::intersect(const MellinStrip& o) const {
    return {std::max(lower, o.lower), std::min(upper, o.upper)};
}

double Decay::integrable_power_bound() const {
    switch (kind) {
        case Kind::Exponential:
        case Kind::Compact:
            return kInfinity;
        case Kind::Power:
            return power - 1.0;
        case Kind::None:
            return -kInfinity;
    }
    return -kInfinity;
}

MellinStrip TestFunction::strip() const {
    if (strip_override) {
        return *strip_override;
    }
    MellinStrip s;
    // x^{s-1} f(x) near 0 behaves like x^{s - 1 + b} when the support starts at 0.
    if (support.lo == 0.0) {
        s.lower = -lower_exponent;
    }
    if (!support.bounded()) {
        // x^{s-1} f(x) at infinity: need s - 1 < power - 1.
        s.upper = decay.integrable_power_bound() + 1.0;
    }
    return s;
}

TestFunction times_power(const TestFunction& f, double p) {
    TestFunction g;
    std::ostringstream os;
    os << "x^" << p << "*" << f.name;
    g.name = os.str();
    g.evaluator = [ev = f.evaluator, p](double x) { return std::pow(x, p) * ev(x); };
    g.support = f.support;
    g.lower_exponent = f.support.lo == 0.0 ? f.lower_exponent + p : f.lower_exponent;
    g.upper_exponent = f.upper_exponent;
    g.decay = f.decay;
    if (f.decay.kind == Decay::Kind::Power) {
        g.decay.power = f.decay.power - p;
    }
    g.is_density = false;
    if (f.near_upper) {
        g.near_upper = [nu = f.near_upper, p](double x, double gap) { return std::pow(x, p) * nu(x, gap); };
    }
    if (f.mellin_closed_form) {
        g.mellin_closed_form = [m = f.mellin_closed_form, p](Complex s) { return m(s + p); };
    }
    if (f.strip_override) {
        g.strip_override = f.strip_override->shifted(-p);
    }
    return g;
}

}  // namespace ekfrac
