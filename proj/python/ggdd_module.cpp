#include "ggdd/biharmonic.hpp"
#include "ggdd/complex_tools.hpp"
#include "ggdd/errors.hpp"
#include "ggdd/field_io.hpp"
#include "ggdd/identity_suite.hpp"
#include "ggdd/manufactured.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ggdd;

namespace {

py::dict report_dict(const SolveReport& r) {
    py::dict d;
    d["method"] = r.method;
    d["stage"] = r.stage;
    d["iterations"] = r.iterations;
    d["rel_residual"] = r.rel_residual;
    d["converged"] = r.converged;
    d["seconds"] = r.seconds;
    return d;
}

py::dict solution_dict(const BiharmonicSolution& s) {
    py::dict d;
    d["method"] = s.method;
    d["u"] = s.u.values();
    d["seconds"] = s.total_seconds();
    if (s.e) {
        d["v_norm"] = s.v_norm;
        d["e_norm"] = s.e_norm;
    }
    if (s.method == "decomposed2d") d["rm_defect"] = s.rm_defect;
    py::list reps;
    for (const auto& r : s.reports) reps.append(report_dict(r));
    d["reports"] = reps;
    return d;
}

Field load_on(const Grid& g, const Eigen::VectorXd& f) {
    const SpacePtr u = spaces::U(g);
    if (static_cast<std::size_t>(f.size()) != u->dof())
        throw Error(ErrorKind::DimMismatch, "load has " + std::to_string(f.size()) + " values, U has " +
                                                std::to_string(u->dof()));
    return Field(u, f);
}

}  // namespace

PYBIND11_MODULE(ggdd, m) {
    m.doc() = "Discrete gradgrad and divDiv complexes, decompositions and biharmonic solvers";
    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), e.what());
        }
    });

    py::class_<Grid>(m, "Grid")
        .def_static("box", py::overload_cast<int>(&Grid::box), py::arg("n"))
        .def_static("box", py::overload_cast<int, int, int, double, double, double>(&Grid::box), py::arg("n1"),
                    py::arg("n2"), py::arg("n3"), py::arg("L1") = 1.0, py::arg("L2") = 1.0, py::arg("L3") = 1.0)
        .def_static("torus", py::overload_cast<int>(&Grid::torus), py::arg("n"))
        .def_static("box2d", &Grid::box2d, py::arg("n1"), py::arg("n2"), py::arg("L1") = 1.0, py::arg("L2") = 1.0)
        .def("h", &Grid::h, py::arg("axis"))
        .def("periodic", &Grid::periodic)
        .def_readonly("dim", &Grid::dim)
        .def("__repr__", [](const Grid& g) { return "Grid(" + g.describe() + ")"; });

    m.def("identity_ids", [] {
        std::vector<std::string> ids;
        for (const auto& c : identity_registry()) ids.push_back(c.id);
        return ids;
    });
    m.def(
        "run_identity",
        [](const std::string& id, const Grid& g, std::uint64_t seed, int trials, bool negate) {
            IdentityOptions opt;
            opt.negate_rhs = negate;
            return run_identity(id, g, seed, trials, opt);
        },
        py::arg("id"), py::arg("grid"), py::arg("seed") = 1, py::arg("trials") = 1, py::arg("negate") = false);

    m.def(
        "cohomology_dims", [](const std::string& name, const Grid& g) { return cohomology_dims(make_complex(name, g)); },
        py::arg("complex"), py::arg("grid"));
    m.def(
        "complex_defect", [](const std::string& name, const Grid& g) { return complex_defect(make_complex(name, g)); },
        py::arg("complex"), py::arg("grid"));

    m.def(
        "estimate_constant",
        [](const std::string& tag, const Grid& g, double tol, bool dual) {
            const auto e = estimate_constant(tag, g, tol, dual);
            py::dict d;
            d["value"] = e.value;
            d["converged"] = e.converged;
            d["iterations"] = e.iterations;
            d["history"] = e.history;
            return d;
        },
        py::arg("tag"), py::arg("grid"), py::arg("tol") = 1e-10, py::arg("dual") = false);
    m.def("constant_dense", &constant_dense, py::arg("tag"), py::arg("grid"));

    m.def(
        "helmholtz",
        [](const std::string& kind, const Grid& g, std::uint64_t seed) {
            SpacePtr sp;
            if (kind == "dirichlet") sp = spaces::edges(g);
            else if (kind == "neumann") sp = spaces::faces(g);
            else if (kind == "S") sp = spaces::S(g);
            else if (kind == "T") sp = spaces::T(g);
            else throw Error(ErrorKind::InvalidArgument, "unknown decomposition " + kind);
            const Field in(sp, random_vector(sp->dof(), seed));
            const auto r = kind == "S" || kind == "T" ? helmholtz_tensor(in, kind) : helmholtz_vector(in, kind);
            py::dict d;
            py::dict parts;
            for (const auto& p : r.parts) parts[py::str(p.name)] = p.field.values();
            d["parts"] = parts;
            d["input"] = in.values();
            d["gram"] = r.gram;
            d["orthogonality_max"] = r.orthogonality_max;
            d["reconstruction_residual"] = r.reconstruction_residual;
            d["harmonic_dim"] = r.harmonic_dim;
            return d;
        },
        py::arg("kind"), py::arg("grid"), py::arg("seed") = 1);

    m.def("case_names", &case_names);
    m.def(
        "sample_f", [](const std::string& c, int n) { const auto mc = get_case(c); return sample_f(mc, mc.grid(n)).values(); },
        py::arg("case"), py::arg("n"));
    m.def(
        "sample_u", [](const std::string& c, int n) { const auto mc = get_case(c); return sample_u(mc, mc.grid(n)).values(); },
        py::arg("case"), py::arg("n"));
    m.def(
        "solve",
        [](const std::string& method, const Grid& g, const Eigen::VectorXd& f, double tol) {
            BiharmonicOptions opt;
            opt.tol = tol;
            return solution_dict(solve_by_name(method, load_on(g, f), opt));
        },
        py::arg("method"), py::arg("grid"), py::arg("f"), py::arg("tol") = 1e-10);
    m.def(
        "solve_case",
        [](const std::string& method, const std::string& c, int n, double tol) {
            const auto mc = get_case(c);
            BiharmonicOptions opt;
            opt.tol = tol;
            const Grid g = mc.grid(n);
            py::dict d = solution_dict(solve_by_name(method, sample_f(mc, g), opt));
            d["exact"] = sample_u(mc, g).values();
            return d;
        },
        py::arg("method"), py::arg("case"), py::arg("n"), py::arg("tol") = 1e-10);
    m.def(
        "l2_norm",
        [](const Grid& g, const Eigen::VectorXd& x) { return norm(load_on(g, x)); },
        py::arg("grid"), py::arg("values"), "discrete L2 norm of a scalar field on U");

    m.def(
        "convergence_study",
        [](const std::string& c, const std::string& method, const std::vector<int>& grids, double tol) {
            py::list rows;
            for (const auto& r : convergence_study(get_case(c), method, grids, tol)) {
                py::dict d;
                d["n"] = r.n;
                d["h"] = r.h;
                d["error"] = r.error;
                d["rate"] = r.rate;
                d["seconds"] = r.seconds;
                rows.append(d);
            }
            return rows;
        },
        py::arg("case"), py::arg("method"), py::arg("grids"), py::arg("tol") = 1e-10);

    m.def(
        "check_infsup",
        [](const Grid& g) {
            const auto r = check_infsup(g);
            py::dict d;
            d["value"] = r.value;
            d["c_g"] = r.c_g;
            d["bound"] = r.bound;
            d["test_quotient"] = r.test_quotient;
            return d;
        },
        py::arg("grid"));

    m.def(
        "read_field",
        [](const std::string& path) {
            const Field f = read_field(path);
            py::dict d;
            d["values"] = f.values();
            d["space"] = f.space()->name();
            d["grid"] = f.grid().describe();
            return d;
        },
        py::arg("path"));
}
