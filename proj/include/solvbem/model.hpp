#pragma once

#include <vector>

#include "solvbem/vec3.hpp"

namespace solvbem {

namespace units {

/// kcal·Å/(mol·e²); the Coulomb energy of two unit charges 1 Å apart.
constexpr double coulomb_constant = 332.0636;

/// Internal potentials use the 1/(4πr) kernel with relative permittivities
/// and ε₀ ≡ 1; this factor converts q·φ sums to kcal/mol. It is the single
/// unit-conversion point in the codebase.
constexpr double energy_conversion = 4.0 * 3.14159265358979323846 * coulomb_constant;

}  // namespace units

struct PointCharge {
    Vec3 position;   // Å
    double charge;   // e
};

struct Solute {
    std::vector<PointCharge> charges;
    std::vector<double> atom_radii;   // Å, one per charge
    double radius_scale = 1.0;

    std::size_t size() const { return charges.size(); }
    void validate() const;   // throws InputError on broken invariants
};

struct DielectricModel {
    double eps_p;            // region II (protein interior)
    double eps_w;            // region I (bulk solvent)
    double eps_inf = 1.8;    // short-range optical permittivity
    double lambda_w = 0.0;   // correlation length λ_W, Å

    /// Rescaled Yukawa lengthscale Λ = λ_W·sqrt(ε_∞/ε_w) of the nonlocal BIE.
    double capital_lambda() const;
    void validate() const;
};

/// Σ_i q_i/(4π·eps·|point − r_i|), reduced units.
double coulomb_potential(const Solute& solute, const Vec3& point, double eps);

/// Normal derivative of the above at `point` along `normal` (|normal| = 1).
double coulomb_field_normal(const Solute& solute, const Vec3& point,
                            const Vec3& normal, double eps);

}  // namespace solvbem
