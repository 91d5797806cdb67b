#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ekfrac/errors.hpp"
#include "ekfrac/mellin.hpp"
#include "ekfrac/operators.hpp"
#include "ekfrac/registry.hpp"
#include "ekfrac/rng.hpp"
#include "ekfrac/stochastic.hpp"

namespace ekfrac::cli {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string key_of(const std::string& text) {
    std::string k;
    for (char c : text) {
        if (c != '_' && c != '-' && c != '.') {
            k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return k;
}

double parse_double(const std::string& text, const std::string& what) {
    const char* b = text.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (text.empty() || e != b + text.size() || !std::isfinite(v)) {
        throw DomainError("bad " + what + " '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

/// "1.5", "1.5+0.5i", "2-1i".
Complex parse_complex(const std::string& text) {
    if (text.empty()) {
        throw DomainError("empty probe");
    }
    if (text.back() != 'i') {
        return {parse_double(text, "probe"), 0.0};
    }
    const std::string body = text.substr(0, text.size() - 1);
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            return {parse_double(body.substr(0, i), "probe"), parse_double(body.substr(i), "probe")};
        }
    }
    throw DomainError("bad probe '" + text + "'");
}

ArgMode parse_mode(const std::string& text) {
    const std::string k = key_of(text);
    if (k == "x") return ArgMode::X;
    if (k == "1mx" || k == "oneminusx") return ArgMode::OneMinusX;
    if (k == "powx" || k == "powerx") return ArgMode::PowerX;
    if (k == "pow1mx" || k == "poweroneminusx") return ArgMode::PowerOneMinusX;
    if (k == "mixed") return ArgMode::Mixed;
    throw DomainError("unknown argument mode '" + text + "' (x, 1mx, powx, pow1mx, mixed)");
}

MultiplierTag parse_tag(const std::string& text) {
    const std::string k = key_of(text);
    if (k == "kober2") return MultiplierTag::Kober2;
    if (k == "kober1") return MultiplierTag::Kober1;
    if (k == "hyper2argx") return MultiplierTag::Hyper2ArgX;
    if (k == "hyper2arg1mx") return MultiplierTag::Hyper2Arg1mX;
    if (k == "hyper1argx") return MultiplierTag::Hyper1ArgX;
    if (k == "hyper1arg1mx") return MultiplierTag::Hyper1Arg1mX;
    if (k == "rlleft" || k == "rl") return MultiplierTag::RlLeft;
    if (k == "weylproduct" || k == "weyl") return MultiplierTag::WeylProduct;
    if (k == "ratiogeneric" || k == "ratio") return MultiplierTag::RatioGeneric;
    throw DomainError("unknown multiplier tag '" + text + "' (see 'list')");
}

ConstantOverride parse_constant(const std::string& text) {
    const std::string k = key_of(text);
    if (k == "theorem") return ConstantOverride::Theorem;
    if (k == "one") return ConstantOverride::One;
    if (k == "swapped" || k == "swap") return ConstantOverride::Swapped;
    throw DomainError("unknown constant '" + text + "' (theorem, one, swapped)");
}

HyperParams hyper_params(const RunConfig& cfg) {
    HyperParams h;
    h.upper = cfg.upper;
    h.lower = cfg.lower;
    h.scale = cfg.scale;
    h.mode = parse_mode(cfg.mode);
    if (!cfg.exponents.empty()) {
        if (cfg.exponents.size() > 3) {
            throw DomainError("--exponents takes at most three values d1,d2,d3");
        }
        HyperExponents e;
        e.d1 = cfg.exponents[0];
        if (cfg.exponents.size() > 1) e.d2 = cfg.exponents[1];
        if (cfg.exponents.size() > 2) e.d3 = cfg.exponents[2];
        h.exponents = e;
    }
    return h;
}

PathwayParams pathway_params(const RunConfig& cfg, double q) { return {cfg.gamma, cfg.delta, cfg.eta, cfg.a, q}; }

HyperDensityParams hyper_density_params(const RunConfig& cfg, KernelKind kind) {
    HyperDensityParams p;
    p.hyper = hyper_params(cfg);
    p.zeta = cfg.zeta;
    p.alpha = cfg.alpha;
    p.kind = kind;
    return p;
}

std::vector<double> eval_points(const RunConfig& cfg) {
    if (cfg.grid) {
        return cfg.grid->points();
    }
    if (!cfg.us.empty()) {
        return cfg.us;
    }
    throw DomainError("give --grid or --u");
}

/// Evaluates fn at each point in parallel; a numerical failure names the point.
template <typename Fn>
std::vector<OperatorResult> evaluate_all(const std::vector<double>& pts, const char* var, Fn fn) {
    std::vector<OperatorResult> out(pts.size());
    std::vector<std::exception_ptr> errors(pts.size());
    parallel_for(pts.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            try {
                out[i] = fn(pts[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }, 1);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!errors[i]) {
            continue;
        }
        try {
            std::rethrow_exception(errors[i]);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string("at ") + var + " = " + num(pts[i]) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw DomainError(std::string("at ") + var + " = " + num(pts[i]) + ": " + e.what());
        }
    }
    return out;
}

std::function<OperatorResult(double)> operator_fn(const RunConfig& cfg, const TestFunction& f) {
    quad::Options o;
    o.abs_tol = cfg.abs_tol;
    o.rel_tol = cfg.rel_tol;
    const std::string k = key_of(cfg.target);
    if (k == "kober2" || k == "kober1") {
        const KoberParams kp{cfg.zeta, cfg.alpha};
        kp.validate(k == "kober2" ? KernelKind::Second : KernelKind::First);
        if (k == "kober2") {
            return [f, kp, o](double u) { return kober_second(f, kp, u, o); };
        }
        return [f, kp, o](double u) { return kober_first(f, kp, u, o); };
    }
    if (k == "pathway2" || k == "pathway1") {
        const PathwayParams p = pathway_params(cfg, cfg.q);
        const KernelKind kind = k == "pathway2" ? KernelKind::Second : KernelKind::First;
        p.validate(kind);
        if (kind == KernelKind::Second) {
            return [f, p, o](double u) { return pathway_second(f, p, u, o); };
        }
        return [f, p, o](double u) { return pathway_first(f, p, u, o); };
    }
    if (k == "hyper2" || k == "hyper1") {
        const HyperDensityParams p =
            hyper_density_params(cfg, k == "hyper2" ? KernelKind::Second : KernelKind::First);
        p.validate();
        if (k == "hyper2") {
            return [f, p, o](double u) { return hyper_second(f, p, u, o); };
        }
        return [f, p, o](double u) { return hyper_first(f, p, u, o); };
    }
    if (k == "weyl") {
        return [f, a = cfg.alpha, o](double x) { return weyl_right(f, a, x, o); };
    }
    if (k == "rl") {
        return [f, a = cfg.alpha, o](double x) { return rl_left(f, a, x, o); };
    }
    if (k == "product" || k == "ratio") {
        if (cfg.f1.empty()) {
            throw DomainError(cfg.target + " needs --f1 (the kernel density)");
        }
        const TestFunction f1 = lookup_function(cfg.f1);
        if (k == "product") {
            return [f1, f, o](double u) { return product_density(f1, f, u, o); };
        }
        return [f1, f, o](double u) { return ratio_density(f1, f, u, o); };
    }
    throw DomainError("unknown operator '" + cfg.target + "' (see 'list')");
}

std::string cmd_eval(const RunConfig& cfg, std::ostream& warn) {
    const TestFunction f = lookup_function(cfg.f);
    const auto fn = operator_fn(cfg, f);
    const std::vector<double> us = eval_points(cfg);
    const auto results = evaluate_all(us, "u", fn);
    std::ostringstream os;
    os << "u,value,abs_err\n";
    for (std::size_t i = 0; i < us.size(); ++i) {
        const OperatorResult& r = results[i];
        const double v = cfg.bare ? r.value : r.density_or_value();
        const double err = cfg.bare || !r.density || r.value == 0.0
                               ? r.abs_error_estimate
                               : r.abs_error_estimate * std::abs(*r.density / r.value);
        os << num(us[i]) << ',' << num(v) << ',' << num(err) << '\n';
        if (!r.warning.empty()) {
            warn << "warning: u = " << num(us[i]) << ": " << r.warning << '\n';
        }
    }
    return os.str();
}

std::vector<Complex> default_probes(const MellinStrip& strip) {
    double sig[3];
    if (std::isfinite(strip.lower) && std::isfinite(strip.upper)) {
        const double w = strip.upper - strip.lower;
        sig[0] = strip.lower + 0.25 * w;
        sig[1] = strip.lower + 0.5 * w;
        sig[2] = strip.lower + 0.75 * w;
    } else {
        const double m = strip.midpoint();
        const double dir = std::isfinite(strip.upper) ? -1.0 : 1.0;
        sig[0] = m;
        sig[1] = m + 0.25 * dir;
        sig[2] = m + 0.5 * dir;
    }
    return {{sig[0], 0.0}, {sig[1], 0.5}, {sig[2], 1.0}};
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

std::string cmd_mellin_check(const RunConfig& cfg, bool& pass) {
    const TestFunction f = lookup_function(cfg.f);
    MultiplierSpec spec;
    spec.tag = parse_tag(cfg.target);
    spec.zeta = cfg.zeta;
    spec.alpha = cfg.alpha;
    spec.hyper = hyper_params(cfg);
    if (spec.tag == MultiplierTag::RatioGeneric) {
        if (cfg.f1.empty()) {
            throw DomainError("RATIO needs --f1 (the kernel density)");
        }
        spec.f1 = lookup_function(cfg.f1);
    }
    const MellinStrip strip = output_strip(spec, f);
    if (strip.empty()) {
        throw StripError("empty output strip for " + to_string(spec.tag) + " with " + f.name);
    }
    std::vector<Complex> probes;
    for (const std::string& p : cfg.probes) {
        probes.push_back(parse_complex(p));
    }
    if (probes.empty()) {
        probes = default_probes(strip);
    }
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-6;
    MultiplierReport rep;
    try {
        rep = verify_multiplier(spec, f, probes);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("mellin-check: ") + e.what());
    }
    pass = rep.max_rel_error <= tol;
    ordered_json j;
    j["tag"] = rep.tag;
    j["f"] = f.name;
    j["zeta"] = cfg.zeta;
    j["alpha"] = cfg.alpha;
    j["strip"] = ordered_json::array({strip.lower + 0.0, strip.upper + 0.0});
    if (std::isinf(strip.lower)) j["strip"][0] = nullptr;
    if (std::isinf(strip.upper)) j["strip"][1] = nullptr;
    j["tolerance"] = tol;
    j["probes"] = ordered_json::array();
    for (const MellinProbe& p : rep.probes) {
        j["probes"].push_back({{"s", complex_json(p.s)},
                               {"numeric", complex_json(p.numeric)},
                               {"closed", complex_json(p.closed)},
                               {"rel_error", p.rel_error}});
    }
    j["max_rel_error"] = rep.max_rel_error;
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

TheoremParams theorem_params(const RunConfig& cfg, TheoremId id) {
    TheoremParams p;
    p.zeta = cfg.zeta;
    p.alpha = cfg.alpha;
    if (id == TheoremId::Pathway2 || id == TheoremId::Pathway1) {
        p.pathway = pathway_params(cfg, cfg.q);
    }
    if (id == TheoremId::Hyper2 || id == TheoremId::Hyper1) {
        p.hyper = hyper_density_params(cfg, id == TheoremId::Hyper2 ? KernelKind::Second : KernelKind::First);
    }
    return p;
}

std::string cmd_mc_verify(const RunConfig& cfg, bool& pass) {
    const TheoremId id = parse_theorem(cfg.target);
    const Density f2 = lookup_density(cfg.f);
    const VerificationReport r =
        verify_theorem(id, theorem_params(cfg, id), f2, cfg.n, cfg.seed, parse_constant(cfg.constant));
    pass = r.pass;
    return to_json(r) + "\n";
}

std::string cmd_sweep_q(const RunConfig& cfg) {
    const std::string k = key_of(cfg.target);
    if (k != "pathway2" && k != "pathway1") {
        throw DomainError("sweep-q takes pathway2 or pathway1");
    }
    if (!cfg.q_range) {
        throw DomainError("sweep-q needs --q start:step:stop");
    }
    const KernelKind kind = k == "pathway2" ? KernelKind::Second : KernelKind::First;
    const TestFunction f = lookup_function(cfg.f);
    const std::vector<double> qs = cfg.q_range->points();
    const std::vector<double> us = eval_points(cfg);
    for (double q : qs) {
        try {
            pathway_params(cfg, q).validate(kind);
        } catch (const ValidationError& e) {
            throw DomainError("at q = " + num(q) + ": " + e.what());
        }
    }
    quad::Options o;
    o.abs_tol = cfg.abs_tol;
    o.rel_tol = cfg.rel_tol;
    std::vector<double> flat_q;
    std::vector<double> flat_u;
    for (double q : qs) {
        for (double u : us) {
            flat_q.push_back(q);
            flat_u.push_back(u);
        }
    }
    std::vector<double> index(flat_q.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        index[i] = static_cast<double>(i);
    }
    std::vector<OperatorResult> results;
    try {
        results = evaluate_all(index, "point", [&](double idx) {
            const auto i = static_cast<std::size_t>(idx);
            const PathwayParams p = pathway_params(cfg, flat_q[i]);
            return kind == KernelKind::Second ? pathway_second(f, p, flat_u[i], o) : pathway_first(f, p, flat_u[i], o);
        });
    } catch (const Error& e) {
        // Name q and u instead of the flat index.
        std::string msg = e.what();
        const auto at = msg.find("at point = ");
        if (at != std::string::npos) {
            const auto end = msg.find(':', at);
            const auto i = static_cast<std::size_t>(std::stod(msg.substr(at + 11, end - at - 11)));
            msg = "at q = " + num(flat_q[i]) + ", u = " + num(flat_u[i]) + msg.substr(end);
        }
        if (dynamic_cast<const NumericalError*>(&e)) {
            throw NumericalError(msg);
        }
        throw DomainError(msg);
    }
    std::ostringstream os;
    os << "q,u,value\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        os << num(flat_q[i]) << ',' << num(flat_u[i]) << ',' << num(results[i].value) << '\n';
    }
    return os.str();
}

std::string cmd_reduce_check(const RunConfig& cfg, bool& pass) {
    const TestFunction f = lookup_function(cfg.f);
    std::vector<double> us = cfg.us;
    if (cfg.grid) {
        us = cfg.grid->points();
    }
    if (us.empty()) {
        us = {0.5, 1.0, 2.0};
    }
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-9;
    std::vector<ReductionCheck> checks;
    try {
        checks = reduction_suite(f, us, cfg.zeta, cfg.alpha, tol);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("reduce-check: ") + e.what());
    }
    pass = true;
    ordered_json j;
    j["f"] = f.name;
    j["zeta"] = cfg.zeta;
    j["alpha"] = cfg.alpha;
    j["tolerance"] = tol;
    j["checks"] = ordered_json::array();
    for (const ReductionCheck& c : checks) {
        pass = pass && c.pass;
        j["checks"].push_back({{"name", c.name},
                               {"u", c.u},
                               {"lhs", c.lhs},
                               {"rhs", c.rhs},
                               {"abs_diff", std::abs(c.lhs - c.rhs)},
                               {"pass", c.pass}});
    }
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

std::string cmd_list() {
    std::ostringstream os;
    os << "functions (--f, --f1):\n";
    for (const RegistryEntry& e : registry_entries()) {
        os << "  " << e.pattern << (e.density ? "  [density]  " : "  ") << e.description << '\n';
    }
    os << "operators (eval):\n"
       << "  kober2    Kober, second kind (--zeta --alpha)\n"
       << "  kober1    Kober, first kind (--zeta --alpha)\n"
       << "  pathway2  pathway, second kind (--gamma --delta --eta --a --q)\n"
       << "  pathway1  pathway, first kind (--gamma --delta --eta --a --q)\n"
       << "  hyper2    beta kernel with pFq, second kind (--zeta --alpha --upper --lower --scale --mode)\n"
       << "  hyper1    beta kernel with pFq, first kind (same options)\n"
       << "  weyl      right-sided Weyl integral (--alpha)\n"
       << "  rl        left-sided Riemann-Liouville integral (--alpha)\n"
       << "  product   density of x1 x2 (--f1 kernel, --f)\n"
       << "  ratio     density of x2 / x1 (--f1 kernel, --f)\n";
    os << "multiplier tags (mellin-check):\n";
    for (MultiplierTag t : {MultiplierTag::Kober2, MultiplierTag::Kober1, MultiplierTag::Hyper2ArgX,
                            MultiplierTag::Hyper2Arg1mX, MultiplierTag::Hyper1ArgX, MultiplierTag::Hyper1Arg1mX,
                            MultiplierTag::RlLeft, MultiplierTag::WeylProduct, MultiplierTag::RatioGeneric}) {
        os << "  " << to_string(t) << '\n';
    }
    os << "theorems (mc-verify):\n";
    for (TheoremId t : {TheoremId::T1_1, TheoremId::T2_1, TheoremId::T3_1, TheoremId::T3_2, TheoremId::Pathway2,
                        TheoremId::Pathway1, TheoremId::Hyper2, TheoremId::Hyper1}) {
        os << "  " << to_string(t) << '\n';
    }
    return os.str();
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3 && parts.size() != 4) {
        throw DomainError("grid must be min:max:count[:log], got '" + text + "'");
    }
    GridSpec g;
    g.min = parse_double(parts[0], "grid min");
    g.max = parse_double(parts[1], "grid max");
    const double count = parse_double(parts[2], "grid count");
    if (!(count >= 2.0) || count != std::floor(count) || count > 1e7) {
        throw DomainError("grid count must be an integer >= 2, got '" + parts[2] + "'");
    }
    g.count = static_cast<std::size_t>(count);
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            g.log = true;
        } else if (parts[3] != "lin") {
            throw DomainError("grid spacing must be lin or log, got '" + parts[3] + "'");
        }
    }
    if (!(g.min < g.max)) {
        throw DomainError("grid needs min < max");
    }
    if (g.log && !(g.min > 0.0)) {
        throw DomainError("log grid needs min > 0");
    }
    return g;
}

std::vector<double> GridSpec::points() const {
    std::vector<double> pts(count);
    const double last = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / last;
        pts[i] = log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min);
    }
    pts.front() = min;
    pts.back() = max;
    return pts;
}

RangeSpec RangeSpec::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw DomainError("range must be start:step:stop, got '" + text + "'");
    }
    RangeSpec r{parse_double(parts[0], "range start"), parse_double(parts[1], "range step"),
                parse_double(parts[2], "range stop")};
    if (!(r.step > 0.0) || !(r.stop >= r.start)) {
        throw DomainError("range needs step > 0 and stop >= start");
    }
    if ((r.stop - r.start) / r.step > 1e6) {
        throw DomainError("range has too many points");
    }
    return r;
}

std::vector<double> RangeSpec::points() const {
    std::vector<double> pts;
    const auto steps = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) {
        pts.push_back(start + static_cast<double>(i) * step);
    }
    return pts;
}

void RunConfig::validate() const {
    if (grid) {
        if (grid->count < 2 || !(grid->min < grid->max)) {
            throw DomainError("grid needs count >= 2 and min < max");
        }
    }
    if (!(tol >= 0.0) || !(abs_tol > 0.0) || !(rel_tol > 0.0)) {
        throw DomainError("tolerances must be positive");
    }
    for (double u : us) {
        if (!(u > 0.0) || !std::isfinite(u)) {
            throw DomainError("--u values must be positive and finite");
        }
    }
    if (command == Command::McVerify && n < 2) {
        throw DomainError("--n must be at least 2");
    }
    if (command != Command::List && command != Command::ReduceCheck && target.empty()) {
        throw DomainError("missing target (operator, tag or theorem)");
    }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string artifact;
    bool pass = true;
    try {
        cfg.validate();
        switch (cfg.command) {
            case Command::Eval: artifact = cmd_eval(cfg, err); break;
            case Command::MellinCheck: artifact = cmd_mellin_check(cfg, pass); break;
            case Command::McVerify: artifact = cmd_mc_verify(cfg, pass); break;
            case Command::SweepQ: artifact = cmd_sweep_q(cfg); break;
            case Command::ReduceCheck: artifact = cmd_reduce_check(cfg, pass); break;
            case Command::List: artifact = cmd_list(); break;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    }
    if (cfg.output.empty()) {
        out << artifact;
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        file << artifact;
        if (!file) {
            err << "error: cannot write " << cfg.output << '\n';
            return kValidationError;
        }
    }
    if (!pass) {
        err << "verification failed\n";
        return kVerificationFailed;
    }
    return kOk;
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Erdelyi-Kober and related fractional integral operators"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string grid_text;
    std::string q_text;
    std::string u_text;
    std::string probe_text;
    bool density_flag = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--f", cfg.f, "function name (see list)");
        sub->add_option("--zeta", cfg.zeta, "zeta");
        sub->add_option("--alpha", cfg.alpha, "alpha");
        sub->add_option("--out", cfg.output, "output file (default stdout)");
        sub->add_option("--abs-tol", cfg.abs_tol, "absolute quadrature tolerance");
        sub->add_option("--rel-tol", cfg.rel_tol, "relative quadrature tolerance");
    };
    auto kernel_opts = [&](CLI::App* sub) {
        sub->add_option("--f1", cfg.f1, "kernel density for product/ratio");
        sub->add_option("--gamma", cfg.gamma, "pathway gamma");
        sub->add_option("--delta", cfg.delta, "pathway delta");
        sub->add_option("--eta", cfg.eta, "pathway eta");
        sub->add_option("--a", cfg.a, "pathway a");
        sub->add_option("--upper", cfg.upper, "pFq upper parameters")->delimiter(',');
        sub->add_option("--lower", cfg.lower, "pFq lower parameters")->delimiter(',');
        sub->add_option("--scale", cfg.scale, "pFq argument scale a");
        sub->add_option("--mode", cfg.mode, "pFq argument mode: x, 1mx, powx, pow1mx, mixed");
        sub->add_option("--exponents", cfg.exponents, "d1,d2,d3 for the power modes")->delimiter(',');
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate an operator on a grid (CSV u,value,abs_err)");
    eval->add_option("operator", cfg.target, "operator (see list)")->required();
    common(eval);
    kernel_opts(eval);
    eval->add_option("--q", cfg.q, "pathway q");
    eval->add_option("--grid", grid_text, "min:max:count[:log]");
    eval->add_option("--u", u_text, "comma-separated u values");
    auto* bare = eval->add_flag("--bare", cfg.bare, "print the bare operator");
    auto* dens = eval->add_flag("--density", density_flag, "print the density g(u) (default)");
    bare->excludes(dens);

    CLI::App* mellin = app.add_subcommand("mellin-check", "compare numeric and closed-form Mellin transforms (JSON)");
    mellin->add_option("tag", cfg.target, "multiplier tag (see list)")->required();
    common(mellin);
    kernel_opts(mellin);
    mellin->add_option("--probes", probe_text, "comma-separated s values, e.g. 1.5,2+0.5i");
    mellin->add_option("--tol", cfg.tol, "relative tolerance (default 1e-6)");

    CLI::App* mc = app.add_subcommand("mc-verify", "Monte Carlo check of a product/ratio theorem (JSON)");
    mc->add_option("theorem", cfg.target, "theorem id (see list)")->required();
    common(mc);
    kernel_opts(mc);
    mc->add_option("--q", cfg.q, "pathway q");
    mc->add_option("--n", cfg.n, "sample size");
    mc->add_option("--seed", cfg.seed, "seed");
    mc->add_option("--constant", cfg.constant, "theorem, one or swapped");

    CLI::App* sweep = app.add_subcommand("sweep-q", "pathway operator across q (CSV q,u,value)");
    sweep->add_option("operator", cfg.target, "pathway2 or pathway1")->required();
    common(sweep);
    kernel_opts(sweep);
    sweep->add_option("--q", q_text, "start:step:stop")->required();
    sweep->add_option("--u", u_text, "comma-separated u values");
    sweep->add_option("--grid", grid_text, "min:max:count[:log]");

    CLI::App* reduce = app.add_subcommand("reduce-check", "reduction identities between the operators (JSON)");
    common(reduce);
    reduce->add_option("--u", u_text, "comma-separated u values (default 0.5,1,2)");
    reduce->add_option("--tol", cfg.tol, "relative tolerance (default 1e-9)");

    CLI::App* list = app.add_subcommand("list", "registered functions, operators, tags and theorems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidationError;
    }

    try {
        if (eval->parsed()) cfg.command = Command::Eval;
        if (mellin->parsed()) cfg.command = Command::MellinCheck;
        if (mc->parsed()) cfg.command = Command::McVerify;
        if (sweep->parsed()) cfg.command = Command::SweepQ;
        if (reduce->parsed()) cfg.command = Command::ReduceCheck;
        if (list->parsed()) cfg.command = Command::List;
        if (!grid_text.empty()) {
            cfg.grid = GridSpec::parse(grid_text);
        }
        if (!q_text.empty()) {
            cfg.q_range = RangeSpec::parse(q_text);
        }
        if (!u_text.empty()) {
            for (const std::string& s : split(u_text, ',')) {
                cfg.us.push_back(parse_double(s, "u"));
            }
        }
        if (!probe_text.empty()) {
            cfg.probes = split(probe_text, ',');
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
    return run(cfg, out, err);
}

}  // namespace ekfrac::cli
