#include "ekfrac/stochastic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "json.hpp"

#include "ekfrac/errors.hpp"
#include "ekfrac/operators.hpp"
#include "ekfrac/quadrature.hpp"
#include "ekfrac/rng.hpp"

namespace ekfrac {

std::vector<double> mc_transform_sample(const Density& d1, const Density& d2, SampleOp op, std::size_t n,
                                        std::uint64_t seed, double scale2) {
    std::vector<double> x1 = d1.sample(n, seed, 0);
    const std::vector<double> x2 = d2.sample(n, seed, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double b = scale2 * x2[i];
        x1[i] = op == SampleOp::Product ? x1[i] * b : b / x1[i];
    }
    return x1;
}

double DensityEstimate::density(std::size_t i) const {
    const double w = bin_edges[i + 1] - bin_edges[i];
    return n == 0 ? 0.0 : static_cast<double>(counts[i]) / (static_cast<double>(n) * w);
}

DensityEstimate estimate_density(std::span<const double> sample, std::vector<double> edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw DomainError("estimate_density: need at least two strictly increasing edges");
    }
    DensityEstimate est;
    est.counts.assign(edges.size() - 1, 0);
    for (double x : sample) {
        if (x < edges.front() || x >= edges.back()) {
            continue;
        }
        const auto it = std::upper_bound(edges.begin(), edges.end(), x);
        ++est.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
        ++est.n;
    }
    est.bin_edges = std::move(edges);
    return est;
}

double ks_distance_sorted(std::span<const double> sorted, const std::function<double(double)>& model_cdf) {
    if (sorted.empty()) {
        throw DomainError("ks_distance: empty sample");
    }
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = model_cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    return d;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& model_cdf) {
    std::sort(sample.begin(), sample.end());
    return ks_distance_sorted(sample, model_cdf);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw DomainError("ks_two_sample: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_threshold(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

std::string to_string(TheoremId id) {
    switch (id) {
        case TheoremId::T1_1: return "T1_1";
        case TheoremId::T2_1: return "T2_1";
        case TheoremId::T3_1: return "T3_1";
        case TheoremId::T3_2: return "T3_2";
        case TheoremId::Pathway2: return "PATHWAY_2";
        case TheoremId::Pathway1: return "PATHWAY_1";
        case TheoremId::Hyper2: return "HYPER_2";
        case TheoremId::Hyper1: return "HYPER_1";
    }
    return "?";
}

TheoremId parse_theorem(const std::string& text) {
    std::string key;
    for (char c : text) {
        if (c != '.' && c != '_' && c != '-') {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (key == "t11") return TheoremId::T1_1;
    if (key == "t21") return TheoremId::T2_1;
    if (key == "t31") return TheoremId::T3_1;
    if (key == "t32") return TheoremId::T3_2;
    if (key == "pathway2") return TheoremId::Pathway2;
    if (key == "pathway1") return TheoremId::Pathway1;
    if (key == "hyper2") return TheoremId::Hyper2;
    if (key == "hyper1") return TheoremId::Hyper1;
    throw DomainError("unknown theorem '" + text + "'");
}

std::string to_string(ConstantOverride c) {
    switch (c) {
        case ConstantOverride::Theorem: return "theorem";
        case ConstantOverride::One: return "one";
        case ConstantOverride::Swapped: return "swapped";
    }
    return "?";
}

TheoremSetup theorem_setup(TheoremId id, const TheoremParams& params, const TestFunction& f2) {
    const double z = params.zeta;
    const double a = params.alpha;
    const quad::Options opts = default_operator_options();
    switch (id) {
        case TheoremId::T1_1: {
            const KoberParams kp{z, a};
            kp.validate(KernelKind::Second);
            return {Density(beta1_density({z + 1.0, a})), SampleOp::Product,
                    gamma_ratio({a + z + 1.0}, {z + 1.0}),
                    [f2, kp, opts](double u) { return kober_second(f2, kp, u, opts).value; }};
        }
        case TheoremId::T2_1: {
            const KoberParams kp{z, a};
            kp.validate(KernelKind::First);
            if (!(z > 0.0)) {
                throw DomainError("T2_1 needs zeta > 0");
            }
            return {Density(beta1_density({z, a})), SampleOp::Ratio, gamma_ratio({z + a}, {z}),
                    [f2, kp, opts](double u) { return kober_first(f2, kp, u, opts).value; }};
        }
        case TheoremId::T3_1: {
            const TestFunction h = times_power(f2, -a);
            return {Density(beta1_density({1.0, a})), SampleOp::Product, gamma_fn(a + 1.0),
                    [h, a, opts](double u) { return weyl_right(h, a, u, opts).value; }};
        }
        case TheoremId::T3_2: {
            if (!(z > 0.0)) {
                throw DomainError("T3_2 needs zeta > 0");
            }
            const TestFunction h = times_power(f2, z);
            return {Density(beta1_density({z, a})), SampleOp::Ratio, gamma_ratio({z + a}, {z}),
                    [h, z, a, opts](double u) { return std::pow(u, -z - a) * rl_left(h, a, u, opts).value; }};
        }
        case TheoremId::Pathway2:
        case TheoremId::Pathway1: {
            if (!params.pathway) {
                throw DomainError(to_string(id) + " needs pathway parameters");
            }
            const PathwayParams p = *params.pathway;
            const bool second = id == TheoremId::Pathway2;
            const KernelKind kind = second ? KernelKind::Second : KernelKind::First;
            const double c = pathway_norm_consts(p, kind).c_value;
            return {Density(pathway_density(p, kind)), second ? SampleOp::Product : SampleOp::Ratio, c,
                    [f2, p, second, c, opts](double u) {
                        return (second ? pathway_second(f2, p, u, opts) : pathway_first(f2, p, u, opts)).value / c;
                    }};
        }
        case TheoremId::Hyper2:
        case TheoremId::Hyper1: {
            if (!params.hyper) {
                throw DomainError(to_string(id) + " needs hypergeometric kernel parameters");
            }
            HyperDensityParams p = *params.hyper;
            const bool second = id == TheoremId::Hyper2;
            p.kind = second ? KernelKind::Second : KernelKind::First;
            const double C = hyper_norm_const(p);
            return {Density(hyper_density(p)), second ? SampleOp::Product : SampleOp::Ratio, 1.0 / C,
                    [f2, p, second, C, opts](double u) {
                        return (second ? hyper_second(f2, p, u, opts) : hyper_first(f2, p, u, opts)).value * C;
                    }};
        }
    }
    throw DomainError("unknown theorem");
}

namespace {

/// CDF of the bare operator at the sorted sample: sample-quantile nodes,
/// denser in both tails, with monotone Hermite interpolation between them.
struct ModelCdf {
    std::vector<double> nodes;
    std::vector<double> cum;
    std::vector<double> pdf;

    double at(std::size_t k, double x) const {
        const double h = nodes[k + 1] - nodes[k];
        const double mass = cum[k + 1] - cum[k];
        // Slopes limited to 3 * secant keep the cubic monotone.
        const double m0 = h * std::min(pdf[k], 3.0 * mass / h);
        const double m1 = h * std::min(pdf[k + 1], 3.0 * mass / h);
        const double t = std::clamp((x - nodes[k]) / h, 0.0, 1.0);
        const double t2 = t * t;
        const double t3 = t2 * t;
        return cum[k] + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * mass + (t3 - t2) * m1;
    }
};

std::vector<std::size_t> node_ranks(std::size_t n) {
    constexpr std::size_t kCentral = 256;
    std::vector<std::size_t> r;
    for (std::size_t j = 0; j <= kCentral; ++j) {
        r.push_back((j * (n - 1) + kCentral / 2) / kCentral);
    }
    for (std::size_t step = 1; step < n / kCentral; step *= 2) {
        r.push_back(step);
        r.push_back(n - 1 - step);
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

// int_0^x0 g in t = log(x0 / u): smooth panels, mass below x0 e^-32 dropped.
double mass_below(const std::function<double(double)>& g, double x0) {
    static constexpr double kPanels[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    auto h = [&](double t) {
        const double u = x0 * std::exp(-t);
        return g(u) * u;
    };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < std::size(kPanels); ++i) {
        acc += quad::gauss_legendre_20(h, kPanels[i], kPanels[i + 1]);
    }
    return acc;
}

ModelCdf build_model(std::span<const double> sorted, const std::function<double(double)>& g) {
    ModelCdf m;
    for (std::size_t idx : node_ranks(sorted.size())) {
        if (m.nodes.empty() || sorted[idx] > m.nodes.back()) {
            m.nodes.push_back(sorted[idx]);
        }
    }
    const std::size_t k = m.nodes.size();
    m.pdf.resize(k);
    m.cum.resize(k);
    std::vector<double> piece(k, 0.0);
    parallel_for(k, [&](std::size_t b, std::size_t e) {
        quad::Options o;
        o.abs_tol = 1e-10;
        o.rel_tol = 1e-8;
        for (std::size_t i = b; i < e; ++i) {
            m.pdf[i] = g(m.nodes[i]);
            if (i == 0) {
                piece[0] = mass_below(g, m.nodes[0]);
                continue;
            }
            const double lo = m.nodes[i - 1];
            const double hi = m.nodes[i];
            const double mid = 0.5 * (lo + hi);
            const double whole = quad::gauss_legendre_20(g, lo, hi);
            const double halves = quad::gauss_legendre_20(g, lo, mid) + quad::gauss_legendre_20(g, mid, hi);
            piece[i] = std::abs(whole - halves) <= 1e-9
                           ? halves
                           : quad::integrate([&g](double x) { return g(x); }, lo, hi, o).value;
        }
    }, 16);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        acc += piece[i];
        m.cum[i] = acc;
    }
    return m;
}

}  // namespace

std::vector<VerificationReport> verify_theorem_constants(TheoremId id, const TheoremParams& params,
                                                         const Density& f2, std::size_t n, std::uint64_t seed,
                                                         std::span<const ConstantOverride> constants) {
    if (n < 2) {
        throw DomainError("verify_theorem: n must be at least 2");
    }
    const TheoremSetup setup = theorem_setup(id, params, f2.function());
    std::vector<double> u = mc_transform_sample(setup.x1, f2, setup.op, n, seed);
    std::sort(u.begin(), u.end());
    if (!(u.front() > 0.0) || !std::isfinite(u.back())) {
        throw NumericalError("verify_theorem: sample left (0, inf)");
    }
    const ModelCdf model = build_model(u, setup.bare);

    // Bare CDF at every sample point and empirical mass per node interval.
    std::vector<double> F(n);
    std::vector<std::size_t> counts(model.nodes.size(), 0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k + 2 < model.nodes.size() && u[i] > model.nodes[k + 1]) {
            ++k;
        }
        F[i] = model.nodes.size() == 1 ? model.cum[0] : model.at(k, u[i]);
        if (u[i] > model.nodes[0]) {
            ++counts[k + 1];
        }
    }

    std::vector<VerificationReport> out;
    for (ConstantOverride c : constants) {
        VerificationReport r;
        r.theorem = id;
        r.params = params;
        r.f2_name = f2.name();
        r.n = n;
        r.seed = seed;
        r.constant = c;
        r.constant_value = c == ConstantOverride::Theorem ? setup.constant
                           : c == ConstantOverride::One ? 1.0
                                                        : 1.0 / setup.constant;
        const double scale = r.constant_value;
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double Fi = scale * F[i];
            d = std::max({d, static_cast<double>(i + 1) / static_cast<double>(n) - Fi,
                          Fi - static_cast<double>(i) / static_cast<double>(n)});
        }
        r.ks_stat = d;
        r.ks_threshold = ks_threshold(n);
        double gap = 0.0;
        for (std::size_t j = 1; j < model.nodes.size(); ++j) {
            const double w = model.nodes[j] - model.nodes[j - 1];
            const double emp = static_cast<double>(counts[j]) / (static_cast<double>(n) * w);
            const double mod = scale * (model.cum[j] - model.cum[j - 1]) / w;
            gap = std::max(gap, std::abs(emp - mod));
        }
        r.max_pointwise_gap = gap;
        r.pass = r.ks_stat < r.ks_threshold;
        out.push_back(std::move(r));
    }
    return out;
}

VerificationReport verify_theorem(TheoremId id, const TheoremParams& params, const Density& f2, std::size_t n,
                                  std::uint64_t seed, ConstantOverride constant) {
    const ConstantOverride cs[] = {constant};
    return verify_theorem_constants(id, params, f2, n, seed, cs).front();
}

std::string to_json(const VerificationReport& r, int indent) {
    using nlohmann::ordered_json;
    ordered_json params;
    params["zeta"] = r.params.zeta;
    params["alpha"] = r.params.alpha;
    if (r.params.pathway) {
        const PathwayParams& p = *r.params.pathway;
        params["pathway"] = {{"gamma", p.gamma}, {"delta", p.delta}, {"eta", p.eta}, {"a", p.a}, {"q", p.q}};
    }
    if (r.params.hyper) {
        const HyperDensityParams& h = *r.params.hyper;
        params["hyper"] = {{"upper", h.hyper.upper},
                           {"lower", h.hyper.lower},
                           {"scale", h.hyper.scale},
                           {"zeta", h.zeta},
                           {"alpha", h.alpha}};
    }
    ordered_json j;
    j["theorem"] = to_string(r.theorem);
    j["params"] = params;
    j["f2"] = r.f2_name;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["constant"] = to_string(r.constant);
    j["constant_value"] = r.constant_value;
    j["ks_stat"] = r.ks_stat;
    j["ks_threshold"] = r.ks_threshold;
    j["max_pointwise_gap"] = r.max_pointwise_gap;
    j["pass"] = r.pass;
    return j.dump(indent);
}

}  // namespace ekfrac
