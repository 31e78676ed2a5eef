#include "solvbem/nonlocal.hpp"

#include <cmath>
#include <cstdio>

#include "solvbem/errors.hpp"
#include "solvbem/parallel.hpp"

namespace solvbem {

namespace {
constexpr double four_pi = 4.0 * 3.14159265358979323846;

/// Square system entries mirror the printed 3x3 boundary-integral system; the
/// sign of the V^Y flux block is the one consistent with the RHS (restoring
/// the exact local degeneration at eps_inf == eps_w).
struct Coeffs {
    double cpi, cpw, ciw;
    explicit Coeffs(const DielectricModel& d)
        : cpi(d.eps_p / d.eps_inf), cpw(d.eps_p / d.eps_w), ciw(d.eps_inf / d.eps_w) {}
};

std::vector<double> mol_potential(const Solute& s, const SurfaceMesh& m) {
    std::vector<double> p(m.panel_count());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = coulomb_potential(s, m.panels[i].centroid, 1.0);
    return p;
}

std::vector<double> mol_field(const Solute& s, const SurfaceMesh& m) {
    std::vector<double> g(m.panel_count());
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = coulomb_field_normal(s, m.panels[i].centroid, m.panels[i].normal, 1.0);
    return g;
}

bool exactly_local(const DielectricModel& d) {
    return d.lambda_w == 0.0 ||
           std::abs(d.eps_inf - d.eps_w) <= 1e-14 * std::abs(d.eps_w);
}

}  // namespace

NonlocalOperators assemble_nonlocal_operators(const SurfaceMesh& mesh,
                                              double capital_lambda,
                                              const SolverConfig& config,
                                              const NonlocalOperators* reuse_laplace) {
    if (!(capital_lambda > 0.0))
        throw InputError("nonlocal operators: lengthscale must be positive");
    const TriangleRule& rule = triangle_rule(config.quadrature_order);
    NonlocalOperators ops;
    ops.lengthscale = capital_lambda;
    if (reuse_laplace && reuse_laplace->v_l && reuse_laplace->k_l) {
        ops.v_l = reuse_laplace->v_l;
        ops.k_l = reuse_laplace->k_l;
    } else {
        ops.v_l = std::make_shared<BoundaryOperator>(BoundaryOperator::assemble(
            OperatorKind::V, KernelKind::laplace(), mesh, rule, config.dense_threshold));
        ops.k_l = std::make_shared<BoundaryOperator>(BoundaryOperator::assemble(
            OperatorKind::K, KernelKind::laplace(), mesh, rule, config.dense_threshold));
    }
    ops.v_y = std::make_shared<BoundaryOperator>(
        BoundaryOperator::assemble(OperatorKind::V, KernelKind::yukawa(capital_lambda),
                                   mesh, rule, config.dense_threshold));
    ops.k_y = std::make_shared<BoundaryOperator>(
        BoundaryOperator::assemble(OperatorKind::K, KernelKind::yukawa(capital_lambda),
                                   mesh, rule, config.dense_threshold));
    ops.v_dr = std::make_shared<BoundaryOperator>(BoundaryOperator::assemble_difference_from(
        ops.v_y, ops.v_l, OperatorKind::V, capital_lambda, mesh, rule));
    ops.k_dr = std::make_shared<BoundaryOperator>(BoundaryOperator::assemble_difference_from(
        ops.k_y, ops.k_l, OperatorKind::K, capital_lambda, mesh, rule));
    return ops;
}

BlockSystem assemble_nonlocal_system(const Solute& solute, const SurfaceMesh& mesh,
                                     const DielectricModel& diel,
                                     const NonlocalOperators& ops) {
    const std::size_t n = mesh.panel_count();
    Coeffs c(diel);

    BlockSystem sys;
    sys.blocks = 3;
    sys.block_dim = n;
    // row 0: (1/2 - K_Y) phiR + (cpi V_Y - cpw V_DR) gR + ciw K_DR Psi = xi
    sys.terms.push_back({0, 0, 0.5, nullptr, {}});
    sys.terms.push_back({0, 0, -1.0, ops.k_y.get(), {}});
    sys.terms.push_back({0, 1, c.cpi, ops.v_y.get(), {}});
    sys.terms.push_back({0, 1, -c.cpw, ops.v_dr.get(), {}});
    sys.terms.push_back({0, 2, c.ciw, ops.k_dr.get(), {}});
    // row 1: (1/2 + K_L) phiR - V_L gR = 0
    sys.terms.push_back({1, 0, 0.5, nullptr, {}});
    sys.terms.push_back({1, 0, 1.0, ops.k_l.get(), {}});
    sys.terms.push_back({1, 1, -1.0, ops.v_l.get(), {}});
    // row 2: cpi V_L gR + (1/2 - K_L) Psi = 0
    sys.terms.push_back({2, 1, c.cpi, ops.v_l.get(), {}});
    sys.terms.push_back({2, 2, 0.5, nullptr, {}});
    sys.terms.push_back({2, 2, -1.0, ops.k_l.get(), {}});

    // xi = -(1/2 - K_Y + cpw K_DR) phi_mol - (cpi V_Y - cpw V_DR) dphi_mol/dn
    std::vector<double> p = mol_potential(solute, mesh);
    std::vector<double> g = mol_field(solute, mesh);
    std::vector<double> t1(n), t2(n), t3(n), t4(n);
    ops.k_y->apply(p, t1);
    ops.k_dr->apply(p, t2);
    ops.v_y->apply(g, t3);
    ops.v_dr->apply(g, t4);
    sys.rhs.assign(3 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        sys.rhs[i] = -(0.5 * p[i] - t1[i] + c.cpw * t2[i]) - (c.cpi * t3[i] - c.cpw * t4[i]);
    return sys;
}

NonlocalSolution solve_nonlocal(const Solute& solute, const SurfaceMesh& mesh,
                                const DielectricModel& diel, const SolverConfig& config) {
    diel.validate();
    if (exactly_local(diel)) {
        // zero-amplitude nonlocal term: the model is the local one
        DielectricModel local = diel;
        PcmSolution p = solve_pcm(solute, mesh, local, config);
        const TriangleRule& rule = triangle_rule(config.quadrature_order);

        NonlocalSolution sol;
        sol.energy = p.energy;
        sol.diagnostics = p.diagnostics;
        sol.diagnostics.delegated_local = true;
        sol.traces.phi = BoundaryField(mesh, FieldTag::Phi);
        sol.traces.dphi_dn = BoundaryField(mesh, FieldTag::DphiDn);
        sol.traces.psi_cov = BoundaryField(mesh, FieldTag::PsiCov);
        // system-normalized traces from the local solution:
        //   phi_II = phi_mol + eps_p V sigma, dphi/dn = g_mol + eps_p (K' + 1/2) sigma
        BoundaryField vs = reaction_potential_surface(p, mesh, config);
        auto kp = BoundaryOperator::assemble(OperatorKind::Kprime, KernelKind::laplace(),
                                             mesh, rule, config.dense_threshold);
        std::vector<double> kps(mesh.panel_count());
        kp.apply(p.sigma.values, kps);
        for (std::size_t i = 0; i < mesh.panel_count(); ++i) {
            const Panel& pan = mesh.panels[i];
            double pm = coulomb_potential(solute, pan.centroid, 1.0);
            double gm = coulomb_field_normal(solute, pan.centroid, pan.normal, 1.0);
            sol.traces.phi.values[i] = pm + diel.eps_p * vs.values[i];
            sol.traces.dphi_dn.values[i] =
                gm + diel.eps_p * (kps[i] + 0.5 * p.sigma.values[i]);
        }
        return sol;
    }

    NonlocalOperators ops =
        assemble_nonlocal_operators(mesh, diel.capital_lambda(), config);
    return solve_nonlocal_with_operators(solute, mesh, diel, config, ops);
}

NonlocalSolution solve_nonlocal_with_operators(const Solute& solute,
                                               const SurfaceMesh& mesh,
                                               const DielectricModel& diel,
                                               const SolverConfig& config,
                                               const NonlocalOperators& ops) {
    solute.validate();
    diel.validate();
    config.validate();
    if (std::abs(ops.lengthscale - diel.capital_lambda()) >
        1e-12 * std::abs(diel.capital_lambda()))
        throw InputError("nonlocal solve: operator lengthscale does not match lambda_w");
    const TriangleRule& rule = triangle_rule(config.quadrature_order);
    require_charges_inside(solute, mesh, rule);

    BlockSystem sys = assemble_nonlocal_system(solute, mesh, diel, ops);
    GmresResult g = gmres(sys, config);

    const std::size_t n = mesh.panel_count();
    NonlocalSolution sol;
    sol.traces.phi = BoundaryField(mesh, FieldTag::Phi);
    sol.traces.dphi_dn = BoundaryField(mesh, FieldTag::DphiDn);
    sol.traces.psi_cov = BoundaryField(mesh, FieldTag::PsiCov);
    std::vector<double> p = mol_potential(solute, mesh);
    std::vector<double> gm = mol_field(solute, mesh);
    for (std::size_t i = 0; i < n; ++i) {
        sol.traces.phi.values[i] = g.x[i] + p[i];
        sol.traces.dphi_dn.values[i] = g.x[n + i] + gm[i];
        sol.traces.psi_cov.values[i] = g.x[2 * n + i];
    }
    sol.diagnostics.iterations = g.iterations;
    sol.diagnostics.residual = g.residual;
    sol.diagnostics.residual_history = std::move(g.residual_history);

    std::vector<Vec3> pts;
    pts.reserve(solute.size());
    for (const auto& c : solute.charges) pts.push_back(c.position);
    std::vector<double> reac =
        interior_reaction_potential(sol.traces, solute, mesh, pts, config);
    double e = 0.0;
    for (std::size_t i = 0; i < solute.size(); ++i)
        e += solute.charges[i].charge * reac[i];
    // the solved traces carry unit-permittivity sources; /eps_p restores the
    // physical reaction potential
    sol.energy = 0.5 * units::energy_conversion * e / diel.eps_p;
    return sol;
}

std::vector<double> interior_reaction_potential(const NonlocalTraces& traces,
                                                const Solute& solute,
                                                const SurfaceMesh& mesh,
                                                const std::vector<Vec3>& points,
                                                const SolverConfig& config) {
    traces.phi.validate();
    traces.dphi_dn.validate();
    const TriangleRule& rule = triangle_rule(config.quadrature_order);
    KernelKind lap = KernelKind::laplace();
    const std::size_t n = mesh.panel_count();

    std::vector<double> phi_r(n), g_r(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Panel& pan = mesh.panels[j];
        phi_r[j] = traces.phi.values[j] - coulomb_potential(solute, pan.centroid, 1.0);
        g_r[j] = traces.dphi_dn.values[j] -
                 coulomb_field_normal(solute, pan.centroid, pan.normal, 1.0);
    }

    bool warned = false;
    std::vector<double> out(points.size(), 0.0);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Vec3& pt = points[k];
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Panel& pan = mesh.panels[j];
            if (!warned && distance(pt, pan.centroid) < 2.0 * pan.diameter) {
                std::fprintf(stderr,
                             "warning: interior evaluation point within two panel "
                             "diameters of the surface; near-singular quadrature engaged\n");
                warned = true;
            }
            acc += g_r[j] * panel_potential(lap, mesh, pan, pt, rule) -
                   phi_r[j] * panel_normal_derivative(lap, mesh, pan, pt, pan.normal, rule,
                                                      DerivativeSide::RowNormal);
        }
        out[k] = acc;
    }
    return out;
}

std::vector<double> nonlocal_surface_map(const NonlocalSolution& solution,
                                         const Solute& solute, const SurfaceMesh& mesh,
                                         double eps_p, const SolverConfig& config) {
    const TriangleRule& rule = triangle_rule(config.quadrature_order);
    KernelKind lap = KernelKind::laplace();
    const std::size_t n = mesh.panel_count();

    std::vector<double> phi_r(n), g_r(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Panel& pan = mesh.panels[j];
        phi_r[j] =
            solution.traces.phi.values[j] - coulomb_potential(solute, pan.centroid, 1.0);
        g_r[j] = solution.traces.dphi_dn.values[j] -
                 coulomb_field_normal(solute, pan.centroid, pan.normal, 1.0);
    }

    std::vector<double> out(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const Panel& pi = mesh.panels[i];
        Vec3 pt = pi.centroid - pi.normal * (1e-3 * pi.diameter);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Panel& pj = mesh.panels[j];
            if (j == i) {
                // self panel: in-plane analytic single layer; exact solid-angle
                // double layer for the offset point
                const Vec3 &a = mesh.vertices[pj.verts[0]], &b = mesh.vertices[pj.verts[1]],
                           &c = mesh.vertices[pj.verts[2]];
                acc += g_r[j] * laplace_self_potential(a, b, c, pi.centroid);
                // the flat-panel double layer from pt is exactly -Omega/(4 pi)
                acc += phi_r[j] * triangle_solid_angle(a, b, c, pt) / four_pi;
                continue;
            }
            acc += g_r[j] * panel_potential(lap, mesh, pj, pt, rule) -
                   phi_r[j] * panel_normal_derivative(lap, mesh, pj, pt, pj.normal, rule,
                                                      DerivativeSide::RowNormal);
        }
        out[i] = acc / eps_p;
    });
    return out;
}

}  // namespace solvbem
