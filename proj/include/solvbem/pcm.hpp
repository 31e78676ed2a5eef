#pragma once

#include "solvbem/model.hpp"
#include "solvbem/operators.hpp"
#include "solvbem/solve.hpp"

namespace solvbem {

struct SolverDiagnostics {
    int iterations = 0;
    int outer_iterations = 0;
    double residual = 0.0;
    bool delegated_local = false;   // nonlocal solve routed to the local model
    std::vector<double> residual_history;
};

struct PcmSolution {
    BoundaryField sigma;
    double energy = 0.0;   // kcal/mol
    SolverDiagnostics diagnostics;
};

/// Local-dielectric apparent-surface-charge solve:
///   (I + ε̂(−½I + K'))σ = −ε̂ Σ_i q_i ∂G^{(ε_p)}/∂n,   ε̂ = (ε_p − ε_w)/ε_p,
/// energy = ½·C_E·Σ_i q_i φ^REAC(r_i) with φ^REAC = Vσ.
PcmSolution solve_pcm(const Solute& solute, const SurfaceMesh& mesh,
                      const DielectricModel& diel, const SolverConfig& config);

/// φ^REAC at the panel centroids (self panel via the analytic self-potential).
BoundaryField reaction_potential_surface(const PcmSolution& solution,
                                         const SurfaceMesh& mesh,
                                         const SolverConfig& config);

/// Throws InputError unless every charge is strictly inside the mesh
/// (winding-sum test).
void require_charges_inside(const Solute& solute, const SurfaceMesh& mesh,
                            const TriangleRule& rule);

}  // namespace solvbem
