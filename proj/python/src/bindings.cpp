#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ekfrac/errors.hpp"
#include "ekfrac/mellin.hpp"
#include "ekfrac/operators.hpp"
#include "ekfrac/registry.hpp"
#include "ekfrac/special_fn.hpp"
#include "ekfrac/stochastic.hpp"

namespace py = pybind11;
using namespace ekfrac;

namespace {

ArgMode mode_from(const std::string& text) {
    if (text == "x") return ArgMode::X;
    if (text == "1mx") return ArgMode::OneMinusX;
    throw DomainError("hypergeometric argument mode must be 'x' or '1mx', got '" + text + "'");
}

HyperDensityParams hyper_params(std::vector<double> upper, std::vector<double> lower, double scale,
                                const std::string& mode, double zeta, double alpha, KernelKind kind) {
    HyperDensityParams h;
    h.hyper.upper = std::move(upper);
    h.hyper.lower = std::move(lower);
    h.hyper.scale = scale;
    h.hyper.mode = mode_from(mode);
    h.zeta = zeta;
    h.alpha = alpha;
    h.kind = kind;
    h.validate();
    return h;
}

ConstantOverride constant_from(const std::string& text) {
    if (text == "theorem") return ConstantOverride::Theorem;
    if (text == "one") return ConstantOverride::One;
    if (text == "swapped") return ConstantOverride::Swapped;
    throw DomainError("constant must be theorem, one or swapped, got '" + text + "'");
}

py::dict report_dict(const ReductionCheck& c) {
    py::dict d;
    d["name"] = c.name;
    d["u"] = c.u;
    d["lhs"] = c.lhs;
    d["rhs"] = c.rhs;
    d["tolerance"] = c.tolerance;
    d["pass"] = c.pass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kober-type fractional operators, their densities and Mellin transforms.";

    static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
    static py::exception<ValidationError> validation(m, "ValidationError", base.ptr());
    static py::exception<NumericalError> numerical(m, "NumericalError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            py::set_error(validation, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    py::class_<OperatorResult>(m, "OperatorResult")
        .def_readonly("value", &OperatorResult::value)
        .def_readonly("density", &OperatorResult::density)
        .def_readonly("abs_error_estimate", &OperatorResult::abs_error_estimate)
        .def_readonly("nodes_used", &OperatorResult::nodes_used)
        .def_readonly("warning", &OperatorResult::warning)
        .def("__repr__", [](const OperatorResult& r) {
            return "OperatorResult(value=" + py::repr(py::float_(r.value)).cast<std::string>() + ")";
        });

    m.def("log_gamma", py::overload_cast<double>(&log_gamma), py::arg("x"));
    m.def("log_gamma", py::overload_cast<Complex>(&log_gamma), py::arg("z"));
    m.def(
        "pfq",
        [](const std::vector<double>& upper, const std::vector<double>& lower, double z) {
            return pfq(upper, lower, z).value;
        },
        py::arg("upper"), py::arg("lower"), py::arg("z"));

    m.def("registry", [] {
        py::list out;
        for (const RegistryEntry& e : registry_entries()) {
            py::dict d;
            d["pattern"] = e.pattern;
            d["description"] = e.description;
            d["density"] = e.density;
            out.append(d);
        }
        return out;
    });
    m.def(
        "evaluate", [](const std::string& name, double x) { return lookup_function(name)(x); }, py::arg("name"),
        py::arg("x"));
    m.def(
        "sample",
        [](const std::string& name, std::size_t n, std::uint64_t seed) {
            const std::vector<double> xs = lookup_density(name).sample(n, seed);
            return py::array_t<double>(static_cast<py::ssize_t>(xs.size()), xs.data());
        },
        py::arg("name"), py::arg("n"), py::arg("seed") = 42);

    m.def(
        "kober_second",
        [](const std::string& f, double zeta, double alpha, double u) {
            return kober_second(lookup_function(f), {zeta, alpha}, u);
        },
        py::arg("f"), py::arg("zeta"), py::arg("alpha"), py::arg("u"));
    m.def(
        "kober_first",
        [](const std::string& f, double zeta, double alpha, double u) {
            return kober_first(lookup_function(f), {zeta, alpha}, u);
        },
        py::arg("f"), py::arg("zeta"), py::arg("alpha"), py::arg("u"));
    m.def(
        "pathway_second",
        [](const std::string& f, double gamma, double delta, double eta, double a, double q, double u) {
            return pathway_second(lookup_function(f), {gamma, delta, eta, a, q}, u);
        },
        py::arg("f"), py::arg("gamma"), py::arg("delta"), py::arg("eta"), py::arg("a"), py::arg("q"), py::arg("u"));
    m.def(
        "pathway_first",
        [](const std::string& f, double gamma, double delta, double eta, double a, double q, double u) {
            return pathway_first(lookup_function(f), {gamma, delta, eta, a, q}, u);
        },
        py::arg("f"), py::arg("gamma"), py::arg("delta"), py::arg("eta"), py::arg("a"), py::arg("q"), py::arg("u"));
    m.def(
        "hyper_second",
        [](const std::string& f, std::vector<double> upper, std::vector<double> lower, double scale,
           const std::string& mode, double zeta, double alpha, double u) {
            return hyper_second(lookup_function(f),
                                hyper_params(std::move(upper), std::move(lower), scale, mode, zeta, alpha,
                                             KernelKind::Second),
                                u);
        },
        py::arg("f"), py::arg("upper"), py::arg("lower"), py::arg("scale"), py::arg("mode"), py::arg("zeta"),
        py::arg("alpha"), py::arg("u"));
    m.def(
        "hyper_first",
        [](const std::string& f, std::vector<double> upper, std::vector<double> lower, double scale,
           const std::string& mode, double zeta, double alpha, double u) {
            return hyper_first(lookup_function(f),
                               hyper_params(std::move(upper), std::move(lower), scale, mode, zeta, alpha,
                                            KernelKind::First),
                               u);
        },
        py::arg("f"), py::arg("upper"), py::arg("lower"), py::arg("scale"), py::arg("mode"), py::arg("zeta"),
        py::arg("alpha"), py::arg("u"));
    m.def(
        "weyl_right", [](const std::string& f, double alpha, double x) { return weyl_right(lookup_function(f), alpha, x); },
        py::arg("f"), py::arg("alpha"), py::arg("x"));
    m.def(
        "rl_left", [](const std::string& f, double alpha, double x) { return rl_left(lookup_function(f), alpha, x); },
        py::arg("f"), py::arg("alpha"), py::arg("x"));
    m.def(
        "product_density",
        [](const std::string& f1, const std::string& f2, double u) {
            return product_density(lookup_function(f1), lookup_function(f2), u);
        },
        py::arg("f1"), py::arg("f2"), py::arg("u"));
    m.def(
        "ratio_density",
        [](const std::string& f1, const std::string& f2, double u) {
            return ratio_density(lookup_function(f1), lookup_function(f2), u);
        },
        py::arg("f1"), py::arg("f2"), py::arg("u"));

    m.def(
        "mellin_transform", [](const std::string& f, Complex s) { return mellin_transform(lookup_function(f), s); },
        py::arg("f"), py::arg("s"));
    m.def(
        "mellin_numeric", [](const std::string& f, Complex s) { return mellin_numeric(lookup_function(f), s); },
        py::arg("f"), py::arg("s"));

    m.def(
        "reduction_suite",
        [](const std::string& f, const std::vector<double>& us, double zeta, double alpha) {
            py::list out;
            for (const ReductionCheck& c : reduction_suite(lookup_function(f), us, zeta, alpha)) {
                out.append(report_dict(c));
            }
            return out;
        },
        py::arg("f"), py::arg("us"), py::arg("zeta"), py::arg("alpha"));

    m.def(
        "verify_theorem_json",
        [](const std::string& theorem, double zeta, double alpha, const std::string& f2, std::size_t n,
           std::uint64_t seed, const std::string& constant) {
            const TheoremParams params{zeta, alpha, {}, {}};
            const Density d = lookup_density(f2);
            VerificationReport r;
            {
                py::gil_scoped_release release;
                r = verify_theorem(parse_theorem(theorem), params, d, n, seed, constant_from(constant));
            }
            return to_json(r);
        },
        py::arg("theorem"), py::arg("zeta"), py::arg("alpha"), py::arg("f2") = "exp1", py::arg("n") = 100000,
        py::arg("seed") = 42, py::arg("constant") = "theorem");
}
