#pragma once

#include <functional>
#include <vector>

#include "solvbem/operators.hpp"

namespace solvbem {

struct SolverConfig {
    double rel_tolerance = 1e-8;
    int max_iterations = 1000;
    int restart = 60;
    double picard_damping = 0.5;   // θ ∈ (0, 1]
    double picard_tolerance = 1e-8;
    int picard_max_outer = 100;
    std::size_t dense_threshold = 4000;
    int quadrature_order = 7;
    bool trace = false;

    void validate() const;
};

/// One additive term of a block entry: coeff · op, coeff · I (op == nullptr),
/// coeff · diag(d) when diag is non-empty, or coeff · M for a raw row-major
/// dense matrix (tests and small embedded systems).
struct BlockTerm {
    int row = 0;
    int col = 0;
    double coeff = 1.0;
    const BoundaryOperator* op = nullptr;
    std::vector<double> diag;
    std::vector<double> matrix;
};

/// nb×nb grid of operator combinations over one mesh (block size = panel
/// count), with a concatenated right-hand side.
struct BlockSystem {
    int blocks = 1;
    std::size_t block_dim = 0;
    std::vector<BlockTerm> terms;
    std::vector<double> rhs;

    std::size_t dim() const { return blocks * block_dim; }
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    /// Diagonal of the diagonal blocks, used for right preconditioning.
    std::vector<double> diagonal() const;
    void validate() const;
};

struct GmresResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0;                  // final true relative residual
    std::vector<double> residual_history;   // one entry per inner iteration
};

/// Restarted GMRES with right diagonal-block preconditioning. Throws
/// ConvergenceError (with history) after max_iterations.
GmresResult gmres(const BlockSystem& system, const SolverConfig& config);

struct PicardResult {
    std::vector<double> x;
    int outer_iterations = 0;
    double fixed_point_residual = 0.0;
    std::vector<double> history;
};

/// Damped fixed-point iteration. `update` maps a state to the frozen
/// nonlinearity vector, `linearized_solve` solves with it frozen. Converges
/// when the candidate's implied nonlinearity is stationary, or when the
/// optional `residual` callable drops below picard_tolerance; the undamped
/// candidate is returned on convergence.
PicardResult picard(
    const std::function<std::vector<double>(const std::vector<double>&)>& linearized_solve,
    const std::function<std::vector<double>(const std::vector<double>&)>& update,
    const std::vector<double>& x0, const SolverConfig& config,
    const std::function<double(const std::vector<double>&)>& residual = nullptr);

}  // namespace solvbem
