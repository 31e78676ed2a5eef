// solvbem command-line driver: solve / sweep / convergence / oracle.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solvbem/errors.hpp"
#include "solvbem/io.hpp"
#include "solvbem/mesh.hpp"
#include "solvbem/nlbc.hpp"
#include "solvbem/nonlocal.hpp"
#include "solvbem/oracles.hpp"
#include "solvbem/pcm.hpp"

using namespace solvbem;

namespace {

struct CommonArgs {
    std::string config_path, pqr_path, mesh_path, mesh_format = "off", sphere_spec;
    std::string out_path, surface_out, trace_path, dump_operator;
    bool trace = false;
    std::optional<double> eps_p, eps_w, eps_inf, lambda_w;
    std::optional<double> nlbc_alpha, nlbc_beta, nlbc_gamma, nlbc_mu;
    bool nlbc_en_jump = false;
    std::optional<double> tol;
    std::optional<int> quad_order, dense_threshold;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value config file");
        app->add_option("--pqr", pqr_path, "solute charges/radii (PQR)");
        app->add_option("--mesh", mesh_path, "surface mesh file");
        app->add_option("--mesh-format", mesh_format, "off | flat-tri")
            ->check(CLI::IsMember({"off", "flat-tri"}));
        app->add_option("--sphere", sphere_spec, "inline sphere 'a,subdiv,cx,cy,cz'");
        app->add_option("--out", out_path, "energy summary CSV path");
        app->add_option("--surface-out", surface_out, "per-panel surface CSV path");
        app->add_flag("--trace", trace, "emit residual history CSV (default trace.csv)");
        app->add_option("--trace-out", trace_path, "residual history CSV path");
        app->add_option("--dump-operator", dump_operator, "binary dump of the system operator");
        app->add_option("--eps-p", eps_p, "protein (interior) permittivity");
        app->add_option("--eps-w", eps_w, "solvent permittivity");
        app->add_option("--eps-inf", eps_inf, "optical permittivity");
        app->add_option("--lambda-w", lambda_w, "correlation length, Angstrom");
        app->add_option("--nlbc-alpha", nlbc_alpha, "NLBC asymmetry magnitude");
        app->add_option("--nlbc-beta", nlbc_beta, "NLBC inverse saturation field");
        app->add_option("--nlbc-gamma", nlbc_gamma, "NLBC orientation offset");
        app->add_option("--nlbc-mu", nlbc_mu, "NLBC constant offset");
        app->add_flag("--nlbc-en-jump-term", nlbc_en_jump, "include the -sigma/2 jump in E_n");
        app->add_option("--tol", tol, "GMRES relative tolerance");
        app->add_option("--quadrature-order", quad_order, "panel rule: 1, 3, or 7");
        app->add_option("--dense-threshold", dense_threshold,
                        "dense operator storage at or below this panel count");
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (!pqr_path.empty()) cfg.pqr_file = pqr_path;
        if (!mesh_path.empty()) cfg.mesh_file = mesh_path;
        if (!mesh_path.empty()) cfg.mesh_format = mesh_format;
        if (!sphere_spec.empty()) cfg.sphere = sphere_spec;
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!surface_out.empty()) cfg.surface_out_path = surface_out;
        if (!trace_path.empty()) cfg.trace_path = trace_path;
        if (trace && !cfg.trace_path) cfg.trace_path = "trace.csv";
        if (eps_p) cfg.eps_p = eps_p;
        if (eps_w) cfg.eps_w = eps_w;
        if (eps_inf) cfg.eps_inf = *eps_inf;
        if (lambda_w) cfg.lambda_w = *lambda_w;
        if (nlbc_alpha) cfg.nlbc_alpha = nlbc_alpha;
        if (nlbc_beta) cfg.nlbc_beta = nlbc_beta;
        if (nlbc_gamma) cfg.nlbc_gamma = nlbc_gamma;
        if (nlbc_mu) cfg.nlbc_mu = nlbc_mu;
        if (nlbc_en_jump) cfg.nlbc_en_jump_term = true;
        if (tol) cfg.solver.rel_tolerance = *tol;
        if (quad_order) cfg.solver.quadrature_order = *quad_order;
        if (dense_threshold) cfg.solver.dense_threshold = *dense_threshold;
        cfg.solver.validate();
        return cfg;
    }
};

SurfaceMesh build_mesh(const RunConfig& cfg) {
    if (cfg.sphere) {
        SphereSpec s = parse_sphere_spec(*cfg.sphere);
        return icosphere(s.radius, s.subdivisions, s.center);
    }
    if (cfg.mesh_file) {
        MeshFormat f = (cfg.mesh_format && *cfg.mesh_format == "flat-tri")
                           ? MeshFormat::FlatTri
                           : MeshFormat::Off;
        return load_mesh(*cfg.mesh_file, f);
    }
    throw InputError("no mesh source: pass --sphere or --mesh (or set mesh.* in the config)");
}

Solute build_solute(const RunConfig& cfg) {
    if (!cfg.pqr_file) throw InputError("no solute: pass --pqr (or set solute.pqr)");
    Solute s = load_pqr(*cfg.pqr_file);
    s.radius_scale = cfg.radius_scale;
    return s;
}

void write_energy_summary(const std::string& path, const std::string& model,
                          std::size_t panels, double energy, int iterations,
                          double residual, double wall_seconds) {
    std::vector<std::string> schema = {"model", "panels", "energy_kcal_mol",
                                       "iterations", "residual", "wall_seconds"};
    std::vector<std::vector<CsvCell>> rows = {
        {model, static_cast<long long>(panels), energy, static_cast<long long>(iterations),
         residual, wall_seconds}};
    if (!path.empty()) write_csv(path, schema, rows);
    std::printf("model,panels,energy_kcal_mol,iterations,residual,wall_seconds\n");
    std::printf("%s,%zu,%.17g,%d,%.17g,%.17g\n", model.c_str(), panels, energy, iterations,
                residual, wall_seconds);
}

void write_trace(const std::string& path, const std::vector<double>& hist, int outer) {
    std::vector<std::string> schema = {"outer_iter", "inner_iter", "relative_residual"};
    std::vector<std::vector<CsvCell>> rows;
    for (std::size_t i = 0; i < hist.size(); ++i)
        rows.push_back({static_cast<long long>(outer), static_cast<long long>(i + 1), hist[i]});
    write_csv(path, schema, rows);
}

int run_solve(const std::string& model, const CommonArgs& args) {
    RunConfig cfg = args.resolve();
    Solute solute = build_solute(cfg);
    SurfaceMesh mesh = build_mesh(cfg);
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (model == "pcm") {
        DielectricModel d = cfg.dielectrics();
        PcmSolution sol = solve_pcm(solute, mesh, d, cfg.solver);
        write_energy_summary(cfg.out_path.value_or(""), "pcm", mesh.panel_count(),
                             sol.energy, sol.diagnostics.iterations,
                             sol.diagnostics.residual, elapsed());
        if (cfg.surface_out_path) {
            std::vector<std::vector<CsvCell>> rows;
            for (std::size_t i = 0; i < mesh.panel_count(); ++i) {
                const Panel& p = mesh.panels[i];
                rows.push_back({static_cast<long long>(i), p.centroid.x, p.centroid.y,
                                p.centroid.z, p.area, sol.sigma.values[i]});
            }
            write_csv(*cfg.surface_out_path,
                      {"panel_id", "cx", "cy", "cz", "area", "sigma"}, rows);
        }
        if (cfg.trace_path)
            write_trace(*cfg.trace_path, sol.diagnostics.residual_history, 1);
        if (!args.dump_operator.empty()) {
            const TriangleRule& rule = triangle_rule(cfg.solver.quadrature_order);
            BoundaryOperator::assemble(OperatorKind::Kprime, KernelKind::laplace(), mesh,
                                       rule, cfg.solver.dense_threshold)
                .dump(args.dump_operator);
        }
        return 0;
    }

    if (model == "nonlocal") {
        DielectricModel d = cfg.dielectrics();
        NonlocalSolution sol = solve_nonlocal(solute, mesh, d, cfg.solver);
        if (sol.diagnostics.delegated_local)
            std::fprintf(stderr,
                         "note: lambda_w = 0 or eps_inf = eps_w is exactly local; "
                         "delegated to the pcm solver\n");
        write_energy_summary(cfg.out_path.value_or(""), "nonlocal", mesh.panel_count(),
                             sol.energy, sol.diagnostics.iterations,
                             sol.diagnostics.residual, elapsed());
        if (cfg.surface_out_path) {
            std::vector<double> map =
                nonlocal_surface_map(sol, solute, mesh, d.eps_p, cfg.solver);
            std::vector<std::vector<CsvCell>> rows;
            for (std::size_t i = 0; i < mesh.panel_count(); ++i) {
                const Panel& p = mesh.panels[i];
                rows.push_back({static_cast<long long>(i), p.centroid.x, p.centroid.y,
                                p.centroid.z, map[i]});
            }
            write_csv(*cfg.surface_out_path, {"panel_id", "cx", "cy", "cz", "phi_reac"},
                      rows);
        }
        if (cfg.trace_path)
            write_trace(*cfg.trace_path, sol.diagnostics.residual_history, 1);
        return 0;
    }

    if (model == "nlbc") {
        DielectricModel d = cfg.dielectrics();
        NlbcParams params = cfg.nlbc_params();
        NlbcSolution sol = solve_nlbc(solute, mesh, d, params, cfg.solver);
        write_energy_summary(cfg.out_path.value_or(""), "nlbc", mesh.panel_count(),
                             sol.energy, sol.outer_iterations, sol.nonlinear_residual,
                             elapsed());
        if (cfg.surface_out_path) {
            std::vector<std::vector<CsvCell>> rows;
            for (std::size_t i = 0; i < mesh.panel_count(); ++i) {
                const Panel& p = mesh.panels[i];
                rows.push_back({static_cast<long long>(i), p.centroid.x, p.centroid.y,
                                p.centroid.z, p.area, sol.sigma.values[i]});
            }
            write_csv(*cfg.surface_out_path,
                      {"panel_id", "cx", "cy", "cz", "area", "sigma"}, rows);
        }
        if (cfg.trace_path)
            write_trace(*cfg.trace_path, sol.diagnostics.residual_history, 1);
        return 0;
    }

    throw InputError("unknown model: " + model);
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::istringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ','))
        out.push_back(std::stod(part));
    if (out.empty()) throw InputError("--values: empty list");
    return out;
}

int run_sweep(const std::string& model, const std::string& param,
              const std::string& values_csv, const CommonArgs& args) {
    RunConfig cfg = args.resolve();
    std::vector<double> values = parse_values(values_csv);
    Solute solute = build_solute(cfg);
    SurfaceMesh mesh = build_mesh(cfg);

    std::vector<std::string> schema = {"value", "energy_kcal_mol"};
    bool charging = (param == "q" && model == "nlbc");
    if (charging) schema = {"q", "energy_kcal_mol", "e_n_max"};
    std::vector<std::vector<CsvCell>> rows;
    auto flush = [&] {
        if (cfg.out_path) write_csv(*cfg.out_path, schema, rows);
    };

    // lambda sweeps rebuild only the Yukawa-dependent operators
    NonlocalOperators laplace_cache;
    bool have_laplace = false;

    try {
        if (charging) {
            NlbcParams params = cfg.nlbc_params();
            DielectricModel d = cfg.dielectrics();
            ChargingCurve curve =
                charging_curve(solute, mesh, d, params, values, cfg.solver);
            for (std::size_t i = 0; i < curve.q.size(); ++i)
                rows.push_back({curve.q[i], curve.energy[i], curve.e_n_max[i]});
            flush();
            std::printf("q,energy_kcal_mol,e_n_max\n");
            for (std::size_t i = 0; i < curve.q.size(); ++i)
                std::printf("%.17g,%.17g,%.17g\n", curve.q[i], curve.energy[i],
                            curve.e_n_max[i]);
            std::printf("# fit: L_plus=%.17g L_minus=%.17g phi_static=%.17g\n",
                        curve.l_plus, curve.l_minus, curve.phi_static);
            return 0;
        }

        for (double v : values) {
            RunConfig c = cfg;
            Solute s = solute;
            if (param == "lambda_w")
                c.lambda_w = v;
            else if (param == "eps_p")
                c.eps_p = v;
            else if (param == "q") {
                if (s.size() != 1)
                    throw InputError("q sweep expects a single-charge solute");
                s.charges[0].charge = v;
            } else {
                throw InputError("unknown sweep parameter: " + param);
            }
            DielectricModel d = c.dielectrics();
            double energy = 0.0;
            if (model == "pcm") {
                energy = solve_pcm(s, mesh, d, c.solver).energy;
            } else if (model == "nonlocal") {
                if (d.lambda_w == 0.0 ||
                    std::abs(d.eps_inf - d.eps_w) <= 1e-14 * d.eps_w) {
                    energy = solve_nonlocal(s, mesh, d, c.solver).energy;
                } else {
                    NonlocalOperators ops = assemble_nonlocal_operators(
                        mesh, d.capital_lambda(), c.solver,
                        have_laplace ? &laplace_cache : nullptr);
                    if (!have_laplace) {
                        laplace_cache = ops;
                        have_laplace = true;
                    }
                    energy =
                        solve_nonlocal_with_operators(s, mesh, d, c.solver, ops).energy;
                }
            } else if (model == "nlbc") {
                energy = solve_nlbc(s, mesh, d, c.nlbc_params(), c.solver).energy;
            } else {
                throw InputError("unknown model: " + model);
            }
            rows.push_back({v, energy});
            std::printf("%.17g,%.17g\n", v, energy);
            std::fflush(stdout);
        }
    } catch (...) {
        flush();  // partial CSV on abort
        throw;
    }
    flush();
    return 0;
}

int run_convergence(const std::string& model, const std::string& subdiv_csv,
                    const CommonArgs& args) {
    RunConfig cfg = args.resolve();
    if (!cfg.sphere)
        throw InputError("convergence study needs --sphere (oracle geometries only)");
    SphereSpec sp = parse_sphere_spec(*cfg.sphere);
    Solute solute = build_solute(cfg);
    if (solute.size() != 1)
        throw InputError("convergence study expects a single-charge solute");
    DielectricModel d = cfg.dielectrics();
    double dist = distance(solute.charges[0].position, sp.center);

    std::vector<double> subdivs = parse_values(subdiv_csv);
    std::vector<std::vector<CsvCell>> rows;
    std::vector<double> errors;
    std::printf("panels,energy_kcal_mol,error_vs_oracle,observed_order\n");
    for (std::size_t k = 0; k < subdivs.size(); ++k) {
        SurfaceMesh mesh = icosphere(sp.radius, static_cast<int>(subdivs[k]), sp.center);
        double energy = 0.0, oracle = 0.0;
        if (model == "pcm") {
            energy = solve_pcm(solute, mesh, d, cfg.solver).energy;
            oracle = oracles::kirkwood_energy(solute.charges[0].charge, sp.radius, dist,
                                              d.eps_p, d.eps_w);
        } else if (model == "nonlocal") {
            energy = solve_nonlocal(solute, mesh, d, cfg.solver).energy;
            oracle = oracles::nonlocal_sphere_energy({solute.charges[0].charge}, {dist},
                                                     sp.radius, d, 400)
                         .energy;
        } else {
            throw InputError("convergence oracle available for pcm and nonlocal only");
        }
        double err = std::abs(energy - oracle) / std::abs(oracle);
        errors.push_back(err);
        std::vector<CsvCell> row = {static_cast<long long>(mesh.panel_count()), energy, err};
        if (k == 0) {
            row.push_back(std::string(""));
            std::printf("%zu,%.17g,%.17g,\n", mesh.panel_count(), energy, err);
        } else {
            double order = std::log(errors[k - 1] / errors[k]) / std::log(2.0);
            row.push_back(order);
            std::printf("%zu,%.17g,%.17g,%.17g\n", mesh.panel_count(), energy, err, order);
        }
        rows.push_back(row);
    }
    if (cfg.out_path)
        write_csv(*cfg.out_path, {"panels", "energy", "error_vs_oracle", "observed_order"},
                  rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boundary-element solvers for implicit-solvent electrostatics"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "run one model on one geometry");
    std::string model;
    solve_cmd->add_option("model", model, "pcm | nonlocal | nlbc")->required();
    CommonArgs solve_args;
    solve_args.attach(solve_cmd);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep, one solve per value");
    std::string sweep_model, sweep_param, sweep_values;
    sweep_cmd->add_option("model", sweep_model, "pcm | nonlocal | nlbc")->required();
    sweep_cmd->add_option("--param", sweep_param, "lambda_w | eps_p | q")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
    CommonArgs sweep_args;
    sweep_args.attach(sweep_cmd);

    // convergence
    auto* conv_cmd = app.add_subcommand("convergence", "mesh refinement vs oracle");
    std::string conv_model, conv_subdivs;
    conv_cmd->add_option("model", conv_model, "pcm | nonlocal")->required();
    conv_cmd->add_option("--subdivisions", conv_subdivs, "comma-separated levels")->required();
    CommonArgs conv_args;
    conv_args.attach(conv_cmd);

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "semi-analytic sphere references");
    std::string oracle_kind;
    oracle_cmd->add_option("kind", oracle_kind, "born | kirkwood | nonlocal-sphere")
        ->required();
    double oq = 1.0, oa = 1.0, od = 0.0, oep = 1.0, oew = 80.0, oeinf = 1.8, olam = 1.0;
    double otol = 1e-12;
    int onmax = 400;
    oracle_cmd->add_option("--q", oq, "charge, e");
    oracle_cmd->add_option("--a", oa, "sphere radius, Angstrom");
    oracle_cmd->add_option("--d", od, "charge distance from center, Angstrom");
    oracle_cmd->add_option("--eps-p", oep);
    oracle_cmd->add_option("--eps-w", oew);
    oracle_cmd->add_option("--eps-inf", oeinf);
    oracle_cmd->add_option("--lambda-w", olam);
    oracle_cmd->add_option("--tol", otol, "series truncation tolerance");
    oracle_cmd->add_option("--n-max", onmax, "harmonic cutoff");

    try {
        app.parse(argc, argv);
        if (*solve_cmd) return run_solve(model, solve_args);
        if (*sweep_cmd) return run_sweep(sweep_model, sweep_param, sweep_values, sweep_args);
        if (*conv_cmd) return run_convergence(conv_model, conv_subdivs, conv_args);
        if (*oracle_cmd) {
            if (oracle_kind == "born") {
                std::printf("energy_kcal_mol\n%.17g\n",
                            oracles::born_energy(oq, oa, oep, oew));
            } else if (oracle_kind == "kirkwood") {
                std::printf("energy_kcal_mol\n%.17g\n",
                            oracles::kirkwood_energy(oq, oa, od, oep, oew, otol));
            } else if (oracle_kind == "nonlocal-sphere") {
                DielectricModel d{oep, oew, oeinf, olam};
                auto r = oracles::nonlocal_sphere_energy({oq}, {od}, oa, d, onmax);
                std::printf("energy_kcal_mol,truncation,n_used\n%.17g,%.17g,%d\n", r.energy,
                            r.truncation, r.n_used);
            } else {
                throw InputError("unknown oracle: " + oracle_kind);
            }
            return 0;
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
