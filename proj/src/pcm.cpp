#include "solvbem/pcm.hpp"

#include <cmath>
#include <memory>

#include "solvbem/errors.hpp"
#include "solvbem/parallel.hpp"

namespace solvbem {

void require_charges_inside(const Solute& solute, const SurfaceMesh& mesh,
                            const TriangleRule& rule) {
    for (const auto& c : solute.charges) {
        double w = winding_sum(mesh, c.position, rule);
        if (!(w < -0.5))
            throw InputError("charge at (" + std::to_string(c.position.x) + ", " +
                             std::to_string(c.position.y) + ", " +
                             std::to_string(c.position.z) +
                             ") is not strictly inside the surface (winding " +
                             std::to_string(w) + ")");
    }
}

namespace {

std::vector<double> pcm_rhs(const Solute& solute, const SurfaceMesh& mesh,
                            double eps_hat, double eps_p) {
    std::vector<double> rhs(mesh.panel_count());
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs[i] = -eps_hat * coulomb_field_normal(solute, mesh.panels[i].centroid,
                                                 mesh.panels[i].normal, eps_p);
    return rhs;
}

}  // namespace

PcmSolution solve_pcm(const Solute& solute, const SurfaceMesh& mesh,
                      const DielectricModel& diel, const SolverConfig& config) {
    solute.validate();
    diel.validate();
    config.validate();
    const TriangleRule& rule = triangle_rule(config.quadrature_order);
    require_charges_inside(solute, mesh, rule);

    const double eps_hat = (diel.eps_p - diel.eps_w) / diel.eps_p;
    auto kprime = std::make_shared<BoundaryOperator>(
        BoundaryOperator::assemble(OperatorKind::Kprime, KernelKind::laplace(), mesh, rule,
                                   config.dense_threshold));

    BlockSystem sys;
    sys.blocks = 1;
    sys.block_dim = mesh.panel_count();
    sys.terms.push_back({0, 0, 1.0 - 0.5 * eps_hat, nullptr, {}});
    sys.terms.push_back({0, 0, eps_hat, kprime.get(), {}});
    sys.rhs = pcm_rhs(solute, mesh, eps_hat, diel.eps_p);

    GmresResult g = gmres(sys, config);

    PcmSolution sol;
    sol.sigma = BoundaryField(mesh, FieldTag::Sigma);
    sol.sigma.values = std::move(g.x);
    sol.diagnostics.iterations = g.iterations;
    sol.diagnostics.residual = g.residual;
    sol.diagnostics.residual_history = std::move(g.residual_history);

    // energy = 1/2 C_E sum_i q_i phiREAC(r_i), phiREAC = V sigma
    KernelKind lap = KernelKind::laplace();
    double e = 0.0;
    for (const auto& c : solute.charges) {
        double phi = 0.0;
        for (std::size_t j = 0; j < mesh.panel_count(); ++j)
            phi += sol.sigma.values[j] *
                   panel_potential(lap, mesh, mesh.panels[j], c.position, rule);
        e += c.charge * phi;
    }
    sol.energy = 0.5 * units::energy_conversion * e;
    return sol;
}

BoundaryField reaction_potential_surface(const PcmSolution& solution,
                                         const SurfaceMesh& mesh,
                                         const SolverConfig& config) {
    solution.sigma.validate();
    const TriangleRule& rule = triangle_rule(config.quadrature_order);
    KernelKind lap = KernelKind::laplace();
    BoundaryField out(mesh, FieldTag::Phi);
    parallel_for(mesh.panel_count(), [&](std::size_t i) {
        double phi = 0.0;
        for (std::size_t j = 0; j < mesh.panel_count(); ++j)
            phi += solution.sigma.values[j] *
                   panel_potential(lap, mesh, mesh.panels[j], mesh.panels[i].centroid, rule);
        out.values[i] = phi;
    });
    return out;
}

}  // namespace solvbem
