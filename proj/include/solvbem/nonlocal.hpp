#pragma once

#include <memory>

#include "solvbem/pcm.hpp"

namespace solvbem {

/// Traces of the 3×3 nonlocal BIE solution. phi and dphi_dn are the full
/// interior traces in the system normalization ∇²φ_II = −ρ (unit-permittivity
/// sources); the physical interior potential is phi/ε_p. psi_cov is the
/// covariant auxiliary unknown Ψ.
struct NonlocalTraces {
    BoundaryField phi;
    BoundaryField dphi_dn;
    BoundaryField psi_cov;
};

struct NonlocalSolution {
    NonlocalTraces traces;
    double energy = 0.0;   // kcal/mol
    SolverDiagnostics diagnostics;
};

/// Operators backing the 3×3 system; kept so the caller can reuse them across
/// solves on the same mesh (λ sweeps rebuild only the Yukawa-dependent ones).
struct NonlocalOperators {
    std::shared_ptr<BoundaryOperator> v_l, k_l;          // Laplace
    std::shared_ptr<BoundaryOperator> v_y, k_y;          // Yukawa(Λ)
    std::shared_ptr<BoundaryOperator> v_dr, k_dr;        // Yukawa − Laplace
    double lengthscale = 0.0;
};

/// `reuse_laplace`, when given, supplies already-assembled V^L/K^L (λ sweeps
/// rebuild only the Yukawa-dependent operators).
NonlocalOperators assemble_nonlocal_operators(const SurfaceMesh& mesh,
                                              double capital_lambda,
                                              const SolverConfig& config,
                                              const NonlocalOperators* reuse_laplace = nullptr);

/// The 3×3 block system of the Lorentz nonlocal model with unknowns
/// [φ_II − φ_mol, ∂(φ_II − φ_mol)/∂n, Ψ] and RHS [ξ, 0, 0].
BlockSystem assemble_nonlocal_system(const Solute& solute, const SurfaceMesh& mesh,
                                     const DielectricModel& diel,
                                     const NonlocalOperators& ops);

/// Solves the nonlocal model. λ_W = 0 and ε_∞ = ε_w are exactly local and
/// delegate to solve_pcm (flagged in diagnostics).
NonlocalSolution solve_nonlocal(const Solute& solute, const SurfaceMesh& mesh,
                                const DielectricModel& diel, const SolverConfig& config);

/// Same, reusing preassembled operators (λ must match ops.lengthscale).
NonlocalSolution solve_nonlocal_with_operators(const Solute& solute,
                                               const SurfaceMesh& mesh,
                                               const DielectricModel& diel,
                                               const SolverConfig& config,
                                               const NonlocalOperators& ops);

/// Green's representation of the harmonic part φ_II − φ_mol at interior
/// points, from the stored traces (system normalization; divide by ε_p for
/// the physical reaction potential). Warns on stderr for points within two
/// panel diameters of the surface.
std::vector<double> interior_reaction_potential(const NonlocalTraces& traces,
                                                const Solute& solute,
                                                const SurfaceMesh& mesh,
                                                const std::vector<Vec3>& points,
                                                const SolverConfig& config);

/// Physical reaction potential just inside each panel (centroid offset
/// 10⁻³·diameter inward; self-panel double layer via the exact solid angle).
std::vector<double> nonlocal_surface_map(const NonlocalSolution& solution,
                                         const Solute& solute, const SurfaceMesh& mesh,
                                         double eps_p, const SolverConfig& config);

}  // namespace solvbem
