#pragma once

#include <vector>

#include "solvbem/model.hpp"

namespace solvbem {
namespace oracles {

/// 332.0636·q²/(2a)·(1/ε_w − 1/ε_p), kcal/mol.
double born_energy(double q, double a, double eps_p, double eps_w);

/// Classical series for a charge at distance d from the center of a sphere of
/// radius a (0 ≤ d < a); summed until the term drops below tol·|partial sum|.
double kirkwood_energy(double q, double a, double d, double eps_p, double eps_w,
                       double tol = 1e-12);

/// Scalar action of each boundary operator on degree-n spherical harmonics
/// over a sphere of radius a, computed by Gauss–Legendre projection of the
/// kernels against Legendre polynomials (not closed forms).
struct HarmonicSymbolTable {
    double radius = 0.0;
    double lengthscale = 0.0;  // Λ for the Yukawa rows
    std::vector<double> v_laplace, k_laplace, kprime_laplace;
    std::vector<double> v_yukawa, k_yukawa;

    int n_max() const { return static_cast<int>(v_laplace.size()) - 1; }
};

HarmonicSymbolTable harmonic_symbols(double radius, double lengthscale, int n_max);

struct NonlocalSphereResult {
    double energy = 0.0;        // kcal/mol
    double truncation = 0.0;    // |last per-degree energy increment| / |energy|
    int n_used = 0;
};

/// Per-harmonic semi-analytic solve of the 3×3 nonlocal BIE for charges on a
/// common axis through the sphere center (m = 0 reduction). axis_positions
/// are signed distances along the axis, |z| < a.
NonlocalSphereResult nonlocal_sphere_energy(const std::vector<double>& charges,
                                            const std::vector<double>& axis_positions,
                                            double a, const DielectricModel& diel,
                                            int n_max);

/// Physical reaction potential on the sphere surface at polar angles `theta`
/// (same per-harmonic solve; local model when lambda_w == 0).
std::vector<double> nonlocal_sphere_surface_map(double q, double axis_position,
                                                double a, const DielectricModel& diel,
                                                int n_max,
                                                const std::vector<double>& theta);

/// Piecewise-quadratic charging model: ½L±q² + φ^static·q, branch by sign(q).
double asym_quadratic_model(double q, double l_plus, double l_minus,
                            double phi_static);

}  // namespace oracles
}  // namespace solvbem
