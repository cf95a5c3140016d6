#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "agpk/cli.hpp"
#include "agpk/errors.hpp"
#include "agpk/idempotent_lab.hpp"
#include "agpk/json_io.hpp"
#include "agpk/norm_engine.hpp"
#include "agpk/pick_sdp.hpp"
#include "agpk/repsearch.hpp"

namespace py = pybind11;
using namespace agpk;

namespace {

/// Accepts a complex scalar or a 2-D array for each target.
std::vector<CMatrix> to_targets(const py::sequence& seq) {
    std::vector<CMatrix> out;
    for (const auto& item : seq) {
        if (py::isinstance<py::int_>(item) || py::isinstance<py::float_>(item) || PyComplex_Check(item.ptr())) {
            out.push_back(CMatrix::Constant(1, 1, item.cast<Complex>()));
        } else {
            out.push_back(item.cast<CMatrix>());
        }
    }
    return out;
}

py::dict certificate_dict(const Certificate& c) {
    py::dict d;
    d["gamma0"] = c.gamma0;
    d["gammas"] = c.gammas;
    d["R"] = c.r ? py::cast(*c.r) : py::none();
    d["residual"] = c.residual;
    d["min_eig"] = c.min_eig;
    d["level"] = c.level;
    return d;
}

Certificate certificate_from(const py::dict& d) {
    Certificate c;
    c.gamma0 = d["gamma0"].cast<CMatrix>();
    c.gammas = d["gammas"].cast<std::vector<CMatrix>>();
    if (d.contains("R") && !d["R"].is_none()) c.r = d["R"].cast<CMatrix>();
    if (d.contains("level")) c.level = d["level"].cast<double>();
    return c;
}

py::dict norm_dict(const NormResult& r) {
    py::dict d;
    d["lower"] = r.lower;
    d["upper"] = r.upper;
    d["witness"] = r.witness;
    d["certificate"] = certificate_dict(r.certificate);
    d["iterations"] = r.iterations;
    return d;
}

Presentation presentation_from(const py::object& domain) {
    if (py::isinstance<Presentation>(domain)) return domain.cast<Presentation>();
    // names and JSON text go through the same parser as the CLI
    const std::string text = py::isinstance<py::str>(domain) && domain.cast<std::string>().find('{') == std::string::npos
                                 ? "\"" + domain.cast<std::string>() + "\""
                                 : domain.cast<std::string>();
    return json_io::parse_presentation(json_io::parse_text(text));
}

FnMatrix function_from(const std::string& json_text, std::size_t dim) {
    return json_io::parse_fn_matrix(json_io::parse_text(json_text), dim);
}

}  // namespace

PYBIND11_MODULE(_agpk, m) {
    m.doc() = "Interpolation feasibility, quotient norms and Schur-Agler estimates on presented domains.";

    auto base = py::register_exception<Error>(m, "AgpkError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<DuplicatePointError>(m, "DuplicatePointError", base.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    py::class_<Presentation>(m, "Presentation")
        .def_readonly("name", &Presentation::name)
        .def_readonly("dim", &Presentation::dim)
        .def("__len__", &Presentation::size)
        .def("to_json", [](const Presentation& p) { return json_io::dump(json_io::presentation_to_json(p)); })
        .def("__repr__", [](const Presentation& p) {
            return "<Presentation " + p.name + " dim=" + std::to_string(p.dim) + " K=" + std::to_string(p.size()) + ">";
        });

    m.def(
        "preset",
        [](const std::string& name, std::size_t n, std::size_t rows, std::size_t cols, Complex a, Complex b, double r) {
            return preset(name, PresetParams{n, rows, cols, a, b, r});
        },
        py::arg("name"), py::arg("n") = 1, py::arg("rows") = 2, py::arg("cols") = 2, py::arg("a") = Complex(0.0),
        py::arg("b") = Complex(0.5), py::arg("r") = 0.5);
    m.def("preset_names", &preset_names);
    m.def("presentation_from_json", [](const std::string& text) { return presentation_from(py::str(text)); });

    m.def(
        "in_domain",
        [](const py::object& domain, const Point& z) {
            const DomainMembership dm = in_domain(presentation_from(domain), z);
            return py::make_tuple(dm.inside, dm.margin);
        },
        py::arg("domain"), py::arg("z"));
    m.def(
        "eval_constraints",
        [](const py::object& domain, const Point& z) {
            std::vector<CMatrix> out;
            for (const auto& f : presentation_from(domain).functions) out.push_back(eval_fn(f, z));
            return out;
        },
        py::arg("domain"), py::arg("z"));

    m.def("op_norm", &linalg::op_norm, py::arg("a"));
    m.def("psd_project", [](const CMatrix& a) { return linalg::psd_project(a); }, py::arg("a"));
    m.def(
        "hermitian_eig",
        [](const CMatrix& a) {
            const auto e = linalg::hermitian_eig(a);
            return py::make_tuple(e.eigenvalues, e.eigenvectors);
        },
        py::arg("a"));

    m.def(
        "certify",
        [](const py::object& domain, const std::vector<Point>& points, const py::sequence& targets, double strict_eps,
           std::size_t max_iter) {
            const InterpolationProblem prob(presentation_from(domain), points, to_targets(targets));
            SolverOptions opts;
            opts.max_iter = max_iter;
            const SolveOutcome out = [&] {
                py::gil_scoped_release release;
                return solve_feasibility(build_lmi(prob, strict_eps), opts);
            }();
            py::dict d;
            if (const auto* f = std::get_if<Feasible>(&out)) {
                d["status"] = "feasible";
                d["iterations"] = f->iterations;
                d["certificate"] = certificate_dict(f->certificate);
            } else {
                const auto& s = std::get<Stalled>(out);
                d["status"] = "infeasible";
                d["gap"] = s.gap;
                d["iterations"] = s.iterations;
            }
            return d;
        },
        py::arg("domain"), py::arg("points"), py::arg("targets"), py::arg("strict_eps") = 0.0,
        py::arg("max_iter") = 20000);

    m.def(
        "verify_certificate",
        [](const py::object& domain, const std::vector<Point>& points, const py::sequence& targets,
           const py::dict& cert) {
            const InterpolationProblem prob(presentation_from(domain), points, to_targets(targets));
            const VerificationReport rep = verify_certificate(prob, certificate_from(cert));
            py::dict d;
            d["verdict"] = rep.verdict;
            d["residual"] = rep.residual;
            d["min_eig_per_block"] = rep.min_eig_per_block;
            return d;
        },
        py::arg("domain"), py::arg("points"), py::arg("targets"), py::arg("certificate"));

    m.def(
        "quotient_norm",
        [](const py::object& domain, const std::vector<Point>& points, const py::sequence& targets, double tol) {
            BisectionOptions opts;
            opts.tol = tol;
            const Presentation p = presentation_from(domain);
            const auto w = to_targets(targets);
            const NormResult r = [&] {
                py::gil_scoped_release release;
                return quotient_norm(p, points, w, opts);
            }();
            return norm_dict(r);
        },
        py::arg("domain"), py::arg("points"), py::arg("targets"), py::arg("tol") = 1e-4);

    m.def(
        "schur_agler_norm_estimate",
        [](const py::object& domain, const std::string& function_json, std::size_t count, std::uint64_t seed,
           std::size_t max_subset, double tol) {
            const Presentation p = presentation_from(domain);
            SamplerOptions s;
            s.count = count;
            s.seed = seed;
            s.max_subset = max_subset;
            BisectionOptions opts;
            opts.tol = tol;
            return norm_dict(schur_agler_norm_estimate(function_from(function_json, p.dim), p, s, opts));
        },
        py::arg("domain"), py::arg("function"), py::arg("count") = 12, py::arg("seed") = 0, py::arg("max_subset") = 5,
        py::arg("tol") = 1e-4);

    m.def(
        "lower_bound",
        [](const py::object& domain, const std::string& function_json, const std::vector<Point>& points,
           std::size_t restarts, std::size_t steps, std::uint64_t seed) {
            const Presentation p = presentation_from(domain);
            SearchOptions opts;
            opts.restarts = restarts;
            opts.steps = steps;
            opts.seed = seed;
            const LowerBound lb = lower_bound(function_from(function_json, p.dim), p, points, opts);
            py::dict d;
            d["value"] = lb.value;
            d["margins"] = lb.best.margins;
            d["tuple"] = lb.best.matrices;
            d["seed"] = seed;
            return d;
        },
        py::arg("domain"), py::arg("function"), py::arg("points"), py::arg("restarts") = 32, py::arg("steps") = 200,
        py::arg("seed") = 0);

    m.def("pick_matrix", &pick_matrix, py::arg("points"), py::arg("targets"), py::arg("level") = 1.0);
    m.def(
        "classical_pick_test",
        [](const std::vector<Complex>& z, const std::vector<Complex>& w, double level) {
            return classical_pick_test(z, w, level);
        },
        py::arg("points"), py::arg("targets"), py::arg("level") = 1.0);

    m.def(
        "random_idempotents",
        [](std::size_t k, std::size_t d, std::uint64_t seed, double cond_cap) {
            return random_idempotents(k, d, seed, cond_cap).idempotents;
        },
        py::arg("k"), py::arg("d"), py::arg("seed") = 0, py::arg("cond_cap") = 20.0);
    m.def(
        "algebra_norm",
        [](const std::vector<CMatrix>& idempotents, const std::vector<Complex>& coeffs) {
            return algebra_norm(KIdempotentAlgebra{idempotents}, coeffs);
        },
        py::arg("idempotents"), py::arg("coeffs"));
    m.def(
        "multiplier_norm_via_kernel",
        [](const std::vector<CMatrix>& idempotents, const std::vector<Complex>& coeffs, double tol) {
            return multiplier_norm_via_kernel(KIdempotentAlgebra{idempotents}, coeffs, tol);
        },
        py::arg("idempotents"), py::arg("coeffs"), py::arg("tol") = 1e-6);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run one CLI command in-process; returns (exit_code, stdout, stderr).");
}
