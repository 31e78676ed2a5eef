#include "solvbem/nlbc.hpp"

#include <cmath>
#include <memory>

#include "solvbem/errors.hpp"

namespace solvbem {

void NlbcParams::validate() const {
    if (!(alpha >= 0.0)) throw InputError("nlbc: alpha must be >= 0");
    for (double v : {alpha, beta, gamma, mu})
        if (!std::isfinite(v)) throw InputError("nlbc: non-finite parameter");
}

double h_of_en(double e_n, const NlbcParams& params) {
    return params.alpha * std::tanh(params.beta * e_n - params.gamma) + params.mu;
}

double f_of_en(double e_n, const NlbcParams& params, double eps1, double eps2) {
    if (eps1 == eps2) throw InputError("f_of_en: eps1 == eps2 leaves f undefined");
    return eps1 / (eps2 - eps1) - h_of_en(e_n, params);
}

namespace {

struct NlbcWorkspace {
    const Solute* solute;
    const SurfaceMesh* mesh;
    const DielectricModel* diel;
    const SolverConfig* config;
    const NlbcParams* params;
    std::shared_ptr<BoundaryOperator> kprime;
    std::vector<double> coulomb_en;  // -sum_i q_i dG^{(eps_p)}/dn at centroids
    std::vector<double> rhs;
    double eps_hat = 0.0;
    double rhs_norm = 0.0;

    std::vector<double> normal_field(const std::vector<double>& sigma) const {
        std::vector<double> en(sigma.size());
        std::vector<double> ks(sigma.size());
        kprime->apply(sigma, ks);
        for (std::size_t i = 0; i < en.size(); ++i) {
            en[i] = coulomb_en[i] - ks[i];
            if (params->en_jump_term) en[i] -= 0.5 * sigma[i];
        }
        return en;
    }

    std::vector<double> h_vector(const std::vector<double>& sigma) const {
        std::vector<double> en = normal_field(sigma);
        for (double& v : en) v = h_of_en(v, *params);
        return en;
    }

    BlockSystem system_with(const std::vector<double>& h) const {
        BlockSystem sys;
        sys.blocks = 1;
        sys.block_dim = mesh->panel_count();
        sys.terms.push_back({0, 0, 1.0 - 0.5 * eps_hat, nullptr, {}});
        sys.terms.push_back({0, 0, eps_hat, kprime.get(), {}});
        sys.terms.push_back({0, 0, 1.0, nullptr, h});
        sys.rhs = rhs;
        return sys;
    }

    /// Full nonlinear relative residual, re-evaluated from scratch.
    double nonlinear_residual(const std::vector<double>& sigma) const {
        if (rhs_norm == 0.0) return 0.0;
        BlockSystem sys = system_with(h_vector(sigma));
        std::vector<double> ax(sigma.size());
        sys.apply(sigma, ax);
        double r2 = 0.0;
        for (std::size_t i = 0; i < ax.size(); ++i) {
            double d = ax[i] - rhs[i];
            r2 += d * d;
        }
        return std::sqrt(r2) / rhs_norm;
    }
};

}  // namespace

NlbcSolution solve_nlbc(const Solute& solute, const SurfaceMesh& mesh,
                        const DielectricModel& diel, const NlbcParams& params,
                        const SolverConfig& config) {
    solute.validate();
    diel.validate();
    params.validate();
    config.validate();
    const TriangleRule& rule = triangle_rule(config.quadrature_order);
    require_charges_inside(solute, mesh, rule);

    NlbcWorkspace w;
    w.solute = &solute;
    w.mesh = &mesh;
    w.diel = &diel;
    w.config = &config;
    w.params = &params;
    w.eps_hat = (diel.eps_p - diel.eps_w) / diel.eps_p;
    w.kprime = std::make_shared<BoundaryOperator>(
        BoundaryOperator::assemble(OperatorKind::Kprime, KernelKind::laplace(), mesh, rule,
                                   config.dense_threshold));
    const std::size_t n = mesh.panel_count();
    w.coulomb_en.resize(n);
    w.rhs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double gm = coulomb_field_normal(solute, mesh.panels[i].centroid,
                                         mesh.panels[i].normal, diel.eps_p);
        w.coulomb_en[i] = -gm;
        w.rhs[i] = -w.eps_hat * gm;
    }
    double r2 = 0.0;
    for (double v : w.rhs) r2 += v * v;
    w.rhs_norm = std::sqrt(r2);

    // a linear inner solve leaves a residual at rel_tolerance, so the
    // fixed-point test cannot be tighter than that
    SolverConfig picard_cfg = config;
    picard_cfg.picard_tolerance =
        std::max(config.picard_tolerance, 2.0 * config.rel_tolerance);

    auto linearized = [&](const std::vector<double>& h) {
        BlockSystem sys = w.system_with(h);
        return gmres(sys, config).x;
    };
    auto update = [&](const std::vector<double>& sigma) { return w.h_vector(sigma); };
    auto residual = [&](const std::vector<double>& sigma) {
        return w.nonlinear_residual(sigma);
    };

    std::vector<double> x0(n, 0.0);
    PicardResult p = picard(linearized, update, x0, picard_cfg, residual);

    NlbcSolution sol;
    sol.sigma = BoundaryField(mesh, FieldTag::Sigma);
    sol.sigma.values = std::move(p.x);
    sol.e_n = BoundaryField(mesh, FieldTag::DphiDn);
    sol.e_n.values = w.normal_field(sol.sigma.values);
    sol.outer_iterations = p.outer_iterations;
    sol.converged = true;
    sol.nonlinear_residual = p.fixed_point_residual;
    sol.diagnostics.outer_iterations = p.outer_iterations;
    sol.diagnostics.residual = p.fixed_point_residual;
    sol.diagnostics.residual_history = std::move(p.history);

    KernelKind lap = KernelKind::laplace();
    double e = 0.0;
    for (const auto& c : solute.charges) {
        double phi = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            phi += sol.sigma.values[j] *
                   panel_potential(lap, mesh, mesh.panels[j], c.position, rule);
        e += c.charge * phi;
    }
    sol.energy = 0.5 * units::energy_conversion * e;
    return sol;
}

ChargingCurve charging_curve(const Solute& solute, const SurfaceMesh& mesh,
                             const DielectricModel& diel, const NlbcParams& params,
                             const std::vector<double>& q_grid,
                             const SolverConfig& config) {
    if (solute.size() != 1)
        throw InputError("charging_curve: expects a solute with a single charge");
    if (q_grid.empty()) throw InputError("charging_curve: empty q grid");

    ChargingCurve curve;
    for (double q : q_grid) {
        Solute s = solute;
        s.charges[0].charge = q;
        NlbcSolution sol = solve_nlbc(s, mesh, diel, params, config);
        curve.q.push_back(q);
        curve.energy.push_back(sol.energy);
        double mx = 0.0;
        for (double v : sol.e_n.values) mx = std::max(mx, std::abs(v));
        curve.e_n_max.push_back(mx);
    }

    // least squares for E(q) = 1/2 L± q² + phi_static q on the sign branches
    double m[3][3] = {};
    double b[3] = {};
    for (std::size_t k = 0; k < curve.q.size(); ++k) {
        double q = curve.q[k];
        double row[3] = {q > 0.0 ? 0.5 * q * q : 0.0, q < 0.0 ? 0.5 * q * q : 0.0, q};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] += row[i] * row[j];
            b[i] += row[i] * curve.energy[k];
        }
    }
    int idx[3], nact = 0;
    for (int i = 0; i < 3; ++i)
        if (m[i][i] > 0.0) idx[nact++] = i;
    // gaussian elimination on the active subset
    double a[3][4];
    for (int i = 0; i < nact; ++i) {
        for (int j = 0; j < nact; ++j) a[i][j] = m[idx[i]][idx[j]];
        a[i][nact] = b[idx[i]];
    }
    double fit[3] = {std::nan(""), std::nan(""), std::nan("")};
    bool singular = false;
    for (int c = 0; c < nact && !singular; ++c) {
        int piv = c;
        for (int r = c + 1; r < nact; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        for (int j = 0; j <= nact; ++j) std::swap(a[c][j], a[piv][j]);
        // under-determined grid (fewer than two points on a branch): report
        // NaN fits instead of failing the sweep
        singular = std::abs(a[c][c]) < 1e-12 * std::abs(m[idx[c]][idx[c]]) ||
                   a[c][c] == 0.0;
        if (singular) break;
        for (int r = 0; r < nact; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (int j = 0; j <= nact; ++j) a[r][j] -= f * a[c][j];
        }
    }
    if (!singular)
        for (int i = 0; i < nact; ++i) fit[idx[i]] = a[i][nact] / a[i][i];
    curve.l_plus = fit[0];
    curve.l_minus = fit[1];
    curve.phi_static = fit[2];
    return curve;
}

}  // namespace solvbem
