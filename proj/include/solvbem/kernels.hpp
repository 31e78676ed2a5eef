#pragma once

#include "solvbem/mesh.hpp"
#include "solvbem/quadrature.hpp"
#include "solvbem/vec3.hpp"

namespace solvbem {

/// Laplace 1/(4πd) or Yukawa e^{−d/Λ}/(4πd).
struct KernelKind {
    enum class Family { Laplace, Yukawa } family = Family::Laplace;
    double lengthscale = 0.0;  // Λ, Å (Yukawa only)

    static KernelKind laplace() { return {Family::Laplace, 0.0}; }
    static KernelKind yukawa(double lam);
    bool is_yukawa() const { return family == Family::Yukawa; }
};

/// Which normal a double-layer entry differentiates along.
enum class DerivativeSide {
    RowNormal,     // source panel's normal: entries of K
    TargetNormal,  // target's normal: entries of K'
};

double green(const KernelKind& kind, const Vec3& r, const Vec3& rp);

/// dG/dn_y at y (source-side derivative). Used by K and the solid-angle sums.
double green_dn_source(const KernelKind& kind, const Vec3& x, const Vec3& y,
                       const Vec3& n_y);

/// dG/dn_x at x (target-side derivative). Used by K'.
double green_dn_target(const KernelKind& kind, const Vec3& x, const Vec3& y,
                       const Vec3& n_x);

/// ∫_panel G(target, y) dΓ_y for unit density. The self target (panel
/// centroid) uses the closed-form flat-triangle integral for Laplace and
/// singularity subtraction for Yukawa; targets within 2 panel diameters use
/// order-7 quadrature on a recursive 4-way subdivision.
double panel_potential(const KernelKind& kind, const SurfaceMesh& mesh,
                       const Panel& panel, const Vec3& target,
                       const TriangleRule& rule);

/// ∫_panel dG/dn dΓ_y; `side` picks the normal. Self target is exactly 0
/// (the centroid is coplanar with the panel).
double panel_normal_derivative(const KernelKind& kind, const SurfaceMesh& mesh,
                               const Panel& panel, const Vec3& target,
                               const Vec3& target_normal, const TriangleRule& rule,
                               DerivativeSide side);

/// ∫_panel (G_Y − G_L) dΓ_y integrated directly; the difference kernel is
/// bounded, so self/near targets need no subtraction. Used for the self/near
/// entries of V^DR.
double panel_potential_difference(double yukawa_lengthscale, const SurfaceMesh& mesh,
                                  const Panel& panel, const Vec3& target,
                                  const TriangleRule& rule);

/// Same for d(G_Y − G_L)/dn entries of K^DR.
double panel_normal_derivative_difference(double yukawa_lengthscale,
                                          const SurfaceMesh& mesh, const Panel& panel,
                                          const Vec3& target, const Vec3& target_normal,
                                          const TriangleRule& rule, DerivativeSide side);

/// Exact ∫_T dA/(4π|y − p|) for a point p in the plane of triangle (a,b,c).
double laplace_self_potential(const Vec3& a, const Vec3& b, const Vec3& c,
                              const Vec3& p);

/// Signed solid angle of triangle (a,b,c) seen from p (van Oosterom–Strackee);
/// positive when the vertices wind counterclockwise as seen from p.
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c,
                            const Vec3& p);

/// Σ_j ∫_panel_j dG_L/dn_y dΓ from `point`: ≈ −1 interior, 0 exterior.
double winding_sum(const SurfaceMesh& mesh, const Vec3& point,
                   const TriangleRule& rule);

}  // namespace solvbem
