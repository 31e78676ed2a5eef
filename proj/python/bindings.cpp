// pybind11 surface: the solvers, the sphere oracles, and enough mesh/solute
// plumbing to drive them from python.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "solvbem/errors.hpp"
#include "solvbem/io.hpp"
#include "solvbem/mesh.hpp"
#include "solvbem/nlbc.hpp"
#include "solvbem/nonlocal.hpp"
#include "solvbem/oracles.hpp"
#include "solvbem/pcm.hpp"

namespace py = pybind11;
using namespace solvbem;

namespace {

Solute make_solute(const std::vector<std::array<double, 3>>& positions,
                   const std::vector<double>& charges, const std::vector<double>& radii,
                   double radius_scale) {
    Solute s;
    if (positions.size() != charges.size() ||
        (!radii.empty() && radii.size() != charges.size()))
        throw InputError("solute: positions/charges/radii lengths differ");
    for (std::size_t i = 0; i < charges.size(); ++i)
        s.charges.push_back({{positions[i][0], positions[i][1], positions[i][2]},
                             charges[i]});
    s.atom_radii = radii.empty() ? std::vector<double>(charges.size(), 1.0) : radii;
    s.radius_scale = radius_scale;
    s.validate();
    return s;
}

SolverConfig make_config(double tol, int max_iter, int restart, double picard_damping,
                         double picard_tol, int picard_max_outer, int quadrature_order,
                         std::size_t dense_threshold) {
    SolverConfig c;
    c.rel_tolerance = tol;
    c.max_iterations = max_iter;
    c.restart = restart;
    c.picard_damping = picard_damping;
    c.picard_tolerance = picard_tol;
    c.picard_max_outer = picard_max_outer;
    c.quadrature_order = quadrature_order;
    c.dense_threshold = dense_threshold;
    c.validate();
    return c;
}

}  // namespace

PYBIND11_MODULE(_solvbem, m) {
    m.doc() = "boundary-element solvers for implicit-solvent electrostatics";

    py::register_exception<InputError>(m, "InputError");
    py::register_exception<ConvergenceError>(m, "ConvergenceError");
    py::register_exception<SingularEvaluation>(m, "SingularEvaluation");

    py::class_<Solute>(m, "Solute")
        .def(py::init(&make_solute), py::arg("positions"), py::arg("charges"),
             py::arg("radii") = std::vector<double>{}, py::arg("radius_scale") = 1.0)
        .def_property_readonly("size", &Solute::size);

    py::class_<DielectricModel>(m, "DielectricModel")
        .def(py::init([](double eps_p, double eps_w, double eps_inf, double lambda_w) {
                 DielectricModel d{eps_p, eps_w, eps_inf, lambda_w};
                 d.validate();
                 return d;
             }),
             py::arg("eps_p"), py::arg("eps_w"), py::arg("eps_inf") = 1.8,
             py::arg("lambda_w") = 0.0)
        .def_readonly("eps_p", &DielectricModel::eps_p)
        .def_readonly("eps_w", &DielectricModel::eps_w)
        .def_readonly("eps_inf", &DielectricModel::eps_inf)
        .def_readonly("lambda_w", &DielectricModel::lambda_w)
        .def_property_readonly("capital_lambda", &DielectricModel::capital_lambda);

    py::class_<SurfaceMesh>(m, "SurfaceMesh")
        .def_property_readonly("panel_count", &SurfaceMesh::panel_count)
        .def_property_readonly("total_area", &SurfaceMesh::total_area)
        .def_property_readonly("enclosed_volume", &SurfaceMesh::enclosed_volume)
        .def_readonly("closed", &SurfaceMesh::closed);

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>())
        .def_readonly("x", &Vec3::x)
        .def_readonly("y", &Vec3::y)
        .def_readonly("z", &Vec3::z);

    py::class_<SolverConfig>(m, "SolverConfig");

    m.def("icosphere", &icosphere, py::arg("radius"), py::arg("subdivisions"),
          py::arg("center") = Vec3{});
    m.def(
        "load_mesh",
        [](const std::string& path, const std::string& format) {
            return load_mesh(path, format == "flat-tri" ? MeshFormat::FlatTri
                                                        : MeshFormat::Off);
        },
        py::arg("path"), py::arg("format") = "off");
    m.def("union_of_spheres_mesh", &union_of_spheres_mesh, py::arg("solute"),
          py::arg("subdivisions"));
    m.def("load_pqr", &load_pqr, py::arg("path"));

    m.def("solver_config", &make_config, py::arg("tol") = 1e-8,
          py::arg("max_iter") = 1000, py::arg("restart") = 60,
          py::arg("picard_damping") = 0.5, py::arg("picard_tol") = 1e-8,
          py::arg("picard_max_outer") = 100, py::arg("quadrature_order") = 7,
          py::arg("dense_threshold") = 4000);

    auto solution_dict = [](double energy, const SolverDiagnostics& diag,
                            const std::vector<double>& sigma) {
        py::dict d;
        d["energy_kcal_mol"] = energy;
        d["iterations"] = diag.iterations;
        d["outer_iterations"] = diag.outer_iterations;
        d["residual"] = diag.residual;
        d["delegated_local"] = diag.delegated_local;
        d["sigma"] = sigma;
        return d;
    };

    m.def(
        "solve_pcm",
        [solution_dict](const Solute& s, const SurfaceMesh& mesh,
                        const DielectricModel& d, const SolverConfig& cfg) {
            PcmSolution sol = solve_pcm(s, mesh, d, cfg);
            return solution_dict(sol.energy, sol.diagnostics, sol.sigma.values);
        },
        py::arg("solute"), py::arg("mesh"), py::arg("dielectrics"),
        py::arg("config") = SolverConfig{});

    m.def(
        "solve_nonlocal",
        [solution_dict](const Solute& s, const SurfaceMesh& mesh,
                        const DielectricModel& d, const SolverConfig& cfg) {
            NonlocalSolution sol = solve_nonlocal(s, mesh, d, cfg);
            py::dict out = solution_dict(sol.energy, sol.diagnostics, {});
            out["phi_trace"] = sol.traces.phi.values;
            out["dphi_dn_trace"] = sol.traces.dphi_dn.values;
            out["psi_trace"] = sol.traces.psi_cov.values;
            return out;
        },
        py::arg("solute"), py::arg("mesh"), py::arg("dielectrics"),
        py::arg("config") = SolverConfig{});

    m.def(
        "solve_nlbc",
        [solution_dict](const Solute& s, const SurfaceMesh& mesh,
                        const DielectricModel& d, double alpha, double beta, double gamma,
                        double mu, bool en_jump_term, const SolverConfig& cfg) {
            NlbcParams p{alpha, beta, gamma, mu, en_jump_term};
            NlbcSolution sol = solve_nlbc(s, mesh, d, p, cfg);
            py::dict out = solution_dict(sol.energy, sol.diagnostics, sol.sigma.values);
            out["outer_iterations"] = sol.outer_iterations;
            out["converged"] = sol.converged;
            out["nonlinear_residual"] = sol.nonlinear_residual;
            out["e_n"] = sol.e_n.values;
            return out;
        },
        py::arg("solute"), py::arg("mesh"), py::arg("dielectrics"), py::arg("alpha"),
        py::arg("beta"), py::arg("gamma"), py::arg("mu"),
        py::arg("en_jump_term") = false, py::arg("config") = SolverConfig{});

    m.def(
        "charging_curve",
        [](const Solute& s, const SurfaceMesh& mesh, const DielectricModel& d,
           double alpha, double beta, double gamma, double mu,
           const std::vector<double>& q_grid, const SolverConfig& cfg) {
            NlbcParams p{alpha, beta, gamma, mu, false};
            ChargingCurve c = charging_curve(s, mesh, d, p, q_grid, cfg);
            py::dict out;
            out["q"] = c.q;
            out["energy_kcal_mol"] = c.energy;
            out["e_n_max"] = c.e_n_max;
            out["l_plus"] = c.l_plus;
            out["l_minus"] = c.l_minus;
            out["phi_static"] = c.phi_static;
            return out;
        },
        py::arg("solute"), py::arg("mesh"), py::arg("dielectrics"), py::arg("alpha"),
        py::arg("beta"), py::arg("gamma"), py::arg("mu"), py::arg("q_grid"),
        py::arg("config") = SolverConfig{});

    m.def("born_energy", &oracles::born_energy, py::arg("q"), py::arg("a"),
          py::arg("eps_p"), py::arg("eps_w"));
    m.def("kirkwood_energy", &oracles::kirkwood_energy, py::arg("q"), py::arg("a"),
          py::arg("d"), py::arg("eps_p"), py::arg("eps_w"), py::arg("tol") = 1e-12);
    m.def(
        "nonlocal_sphere_energy",
        [](const std::vector<double>& charges, const std::vector<double>& axis_positions,
           double a, const DielectricModel& d, int n_max) {
            auto r = oracles::nonlocal_sphere_energy(charges, axis_positions, a, d, n_max);
            py::dict out;
            out["energy_kcal_mol"] = r.energy;
            out["truncation"] = r.truncation;
            out["n_used"] = r.n_used;
            return out;
        },
        py::arg("charges"), py::arg("axis_positions"), py::arg("a"),
        py::arg("dielectrics"), py::arg("n_max") = 400);
    m.def("asym_quadratic_model", &oracles::asym_quadratic_model, py::arg("q"),
          py::arg("l_plus"), py::arg("l_minus"), py::arg("phi_static"));
    m.def("h_of_en", [](double e_n, double alpha, double beta, double gamma, double mu) {
        return h_of_en(e_n, {alpha, beta, gamma, mu, false});
    });

    m.attr("coulomb_constant") = units::coulomb_constant;
}
