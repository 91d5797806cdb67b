#include "ekfrac/registry.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "ekfrac/errors.hpp"
#include "ekfrac/mellin.hpp"
#include "ekfrac/quadrature.hpp"

namespace ekfrac {

namespace {

double parse_number(const std::string& text, const std::string& context) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
        throw DomainError("bad number '" + text + "' in " + context);
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

TestFunction parse_pathway(const std::string& args, const std::string& name) {
    std::map<std::string, double> kv;
    for (const std::string& item : split(args, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw DomainError("pathway: expected key=value, got '" + item + "' in " + name);
        }
        kv[item.substr(0, eq)] = parse_number(item.substr(eq + 1), name);
    }
    PathwayParams p;
    auto take = [&](const char* key, double& dst) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw DomainError(std::string("pathway: missing ") + key + " in " + name);
        }
        dst = it->second;
        kv.erase(it);
    };
    take("g", p.gamma);
    take("d", p.delta);
    take("e", p.eta);
    take("a", p.a);
    take("q", p.q);
    KernelKind kind = KernelKind::Second;
    if (auto it = kv.find("kind"); it != kv.end()) {
        if (it->second == 1.0) {
            kind = KernelKind::First;
        } else if (it->second != 2.0) {
            throw DomainError("pathway: kind must be 1 or 2 in " + name);
        }
        kv.erase(it);
    }
    if (!kv.empty()) {
        throw DomainError("pathway: unknown key '" + kv.begin()->first + "' in " + name);
    }
    return pathway_density(p, kind);
}

}  // namespace

TestFunction gamma_density(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("gamma: shape must be positive");
    }
    const double log_norm = -log_gamma(k);
    TestFunction f;
    f.name = "gamma:" + fmt(k);
    f.evaluator = [k, log_norm](double t) { return std::exp(log_norm + (k - 1.0) * std::log(t) - t); };
    f.support = {0.0, kInfinity};
    f.lower_exponent = k - 1.0;
    f.decay = Decay::exponential();
    f.is_density = true;
    f.mellin_closed_form = [k, log_norm](Complex s) { return std::exp(log_norm + log_gamma(s + k - 1.0)); };
    return f;
}

TestFunction exp1_density() {
    TestFunction f = gamma_density(1.0);
    f.name = "exp1";
    f.evaluator = [](double t) { return std::exp(-t); };
    f.mellin_closed_form = [](Complex s) { return std::exp(log_gamma(s)); };
    return f;
}

TestFunction power_function(double k) {
    if (!std::isfinite(k)) {
        throw DomainError("pow: exponent must be finite");
    }
    TestFunction f;
    f.name = "pow:" + fmt(k);
    f.evaluator = [k](double t) { return std::pow(t, k); };
    f.support = {0.0, kInfinity};
    f.lower_exponent = k;
    f.decay = k < 0.0 ? Decay::power_law(-k) : Decay::none();
    return f;
}

TestFunction exp_growth() {
    TestFunction f;
    f.name = "expgrow";
    f.evaluator = [](double t) { return std::exp(t); };
    f.support = {0.0, kInfinity};
    f.decay = Decay::none();
    return f;
}

TestFunction lookup_function(const std::string& name) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : name.substr(colon + 1);
    const bool has_args = colon != std::string::npos;
    if (head == "exp1" && !has_args) {
        return exp1_density();
    }
    if (head == "expgrow" && !has_args) {
        return exp_growth();
    }
    if (head == "uniform" && !has_args) {
        TestFunction f = beta1_density({1.0, 1.0});
        f.name = "uniform";
        return f;
    }
    if (head == "gamma" && has_args) {
        return gamma_density(parse_number(args, name));
    }
    if (head == "pow" && has_args) {
        return power_function(parse_number(args, name));
    }
    if (head == "beta1" && has_args) {
        const auto parts = split(args, ',');
        if (parts.size() != 2) {
            throw DomainError("beta1: expected beta1:lambda,alpha, got " + name);
        }
        return beta1_density({parse_number(parts[0], name), parse_number(parts[1], name)});
    }
    if (head == "pathway" && has_args) {
        return parse_pathway(args, name);
    }
    throw DomainError("unknown function '" + name + "' (see 'list')");
}

Density lookup_density(const std::string& name) {
    TestFunction f = lookup_function(name);
    if (!f.is_density) {
        throw DomainError("'" + name + "' is not a density");
    }
    check_registration(f);
    return Density(std::move(f));
}

std::vector<RegistryEntry> registry_entries() {
    return {
        {"exp1", "unit exponential e^-t", true},
        {"gamma:k", "gamma density t^(k-1) e^-t / Gamma(k)", true},
        {"uniform", "uniform density on (0, 1)", true},
        {"beta1:lambda,alpha", "type-1 beta density on (0, 1)", true},
        {"pathway:g=,d=,e=,a=,q=[,kind=1|2]", "pathway density, all q regimes (kind 2 default)", true},
        {"pow:k", "power function t^k", false},
        {"expgrow", "e^t (no decay; rejected by the right-sided operators)", false},
    };
}

RegistrationReport check_registration(const TestFunction& f) {
    RegistrationReport rep;
    if (f.is_density) {
        quad::Options o;
        o.abs_tol = 1e-11;
        o.rel_tol = 1e-11;
        const double breaks[] = {1.0};
        double negative_at = kInfinity;
        auto integrand = [&f, &negative_at](double x, double, double to_b) {
            const double y = f.at_gap(x, to_b);
            if (y < 0.0) {
                negative_at = x;
            }
            return y;
        };
        double mass = 0.0;
        try {
            mass = quad::integrate_pieces(integrand, f.support.lo, f.support.hi, breaks, o).value;
        } catch (const QuadratureError&) {
            if (!std::isfinite(negative_at)) throw;
        }
        if (std::isfinite(negative_at)) {
            throw DomainError("registration: " + f.name + " is negative at x = " + fmt(negative_at));
        }
        rep.mass_error = std::abs(mass - 1.0);
        if (!(rep.mass_error <= 1e-8)) {
            throw DomainError("registration: " + f.name + " integrates to " + fmt(mass));
        }
    }
    if (f.has_closed_mellin()) {
        const MellinStrip strip = f.strip();
        if (strip.empty()) {
            throw DomainError("registration: " + f.name + " has a closed-form Mellin transform but an empty strip");
        }
        double sig[3];
        if (std::isfinite(strip.lower) && std::isfinite(strip.upper)) {
            const double w = strip.upper - strip.lower;
            sig[0] = strip.lower + 0.25 * w;
            sig[1] = strip.lower + 0.5 * w;
            sig[2] = strip.lower + 0.75 * w;
        } else {
            const double m = strip.midpoint();
            sig[0] = m;
            sig[1] = std::isfinite(strip.upper) ? m - 0.5 : m + 0.5;
            sig[2] = std::isfinite(strip.upper) ? m - 0.25 : m + 1.0;
        }
        const Complex probes[3] = {{sig[0], 0.0}, {sig[1], 0.5}, {sig[2], 1.0}};
        for (const Complex& s : probes) {
            const Complex closed = f.mellin_closed_form(s);
            const Complex numeric = mellin_numeric(f, s);
            const double err = std::abs(closed - numeric) / std::max(1.0, std::abs(closed));
            rep.mellin_max_error = std::max(rep.mellin_max_error, err);
            ++rep.mellin_probes;
        }
        if (!(rep.mellin_max_error <= 1e-8)) {
            throw DomainError("registration: closed-form Mellin transform of " + f.name + " is off by " +
                              fmt(rep.mellin_max_error));
        }
    }
    return rep;
}

}  // namespace ekfrac
