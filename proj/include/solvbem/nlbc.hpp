#pragma once

#include <optional>

#include "solvbem/pcm.hpp"

namespace solvbem {

/// Parameters of h(E_n) = α·tanh(β·E_n − γ) + μ. β is in inverse reduced
/// field units (kernel 1/(4πr), charges in e, lengths in Å).
struct NlbcParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double mu = 0.0;
    bool en_jump_term = false;  // include the −σ/2 jump in E_n

    void validate() const;
};

struct NlbcSolution {
    BoundaryField sigma;
    BoundaryField e_n;      // interior normal field at Γ
    double energy = 0.0;    // kcal/mol
    int outer_iterations = 0;
    bool converged = false;
    double nonlinear_residual = 0.0;
    SolverDiagnostics diagnostics;
};

double h_of_en(double e_n, const NlbcParams& params);

/// f(E_n) = ε₁/(ε₂ − ε₁) − h(E_n); throws InputError when ε₁ = ε₂.
double f_of_en(double e_n, const NlbcParams& params, double eps1, double eps2);

/// Damped-Picard solve of (I + ε̂(−½I + K') + diag(h(E_n)))σ = rhs_pcm with
/// E_n = −Σ q_i ∂G^{(ε_p)}/∂n − K'σ (− σ/2 when en_jump_term).
NlbcSolution solve_nlbc(const Solute& solute, const SurfaceMesh& mesh,
                        const DielectricModel& diel, const NlbcParams& params,
                        const SolverConfig& config);

struct ChargingCurve {
    std::vector<double> q;
    std::vector<double> energy;      // kcal/mol
    std::vector<double> e_n_max;     // max |E_n| over panels per solve
    double l_plus = 0.0;             // fitted ½L₊q² branch curvature, q > 0
    double l_minus = 0.0;
    double phi_static = 0.0;         // shared linear coefficient
};

/// Scales the single charge of `solute` over `q_grid`, solves per value, and
/// least-squares fits E(q) = ½L±q² + φ^static·q on the sign branches.
ChargingCurve charging_curve(const Solute& solute, const SurfaceMesh& mesh,
                             const DielectricModel& diel, const NlbcParams& params,
                             const std::vector<double>& q_grid,
                             const SolverConfig& config);

}  // namespace solvbem
