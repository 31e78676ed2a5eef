#include "solvbem/kernels.hpp"

#include <cmath>
#include <functional>

#include "solvbem/errors.hpp"

namespace solvbem {

namespace {

constexpr double four_pi = 4.0 * 3.14159265358979323846;
constexpr int max_subdivision_depth = 12;
constexpr double near_factor = 2.0;  // targets within 2 diameters are "near"

double yukawa_radial(double d, double lam) { return std::exp(-d / lam) / (four_pi * d); }

/// dG/dd for each kernel family.
double radial_derivative(const KernelKind& kind, double d) {
    if (kind.is_yukawa())
        return -std::exp(-d / kind.lengthscale) * (1.0 + d / kind.lengthscale) /
               (four_pi * d * d);
    return -1.0 / (four_pi * d * d);
}

/// (G_Y - G_L)(d) = expm1(-d/Λ)/(4πd); finite at d → 0.
double diff_radial(double d, double lam) {
    if (d < 1e-300) return -1.0 / (four_pi * lam);
    return std::expm1(-d / lam) / (four_pi * d);
}

/// d(G_Y - G_L)/dd = [1 - (1+x)e^{-x}]/(4πd²), x = d/Λ; series below x = 1e-3.
double diff_radial_derivative(double d, double lam) {
    double x = d / lam;
    double bracket;
    if (x < 1e-3)
        bracket = x * x * (0.5 - x / 3.0 + x * x / 8.0);
    else
        bracket = 1.0 - (1.0 + x) * std::exp(-x);
    return bracket / (four_pi * d * d);
}

struct Tri {
    Vec3 a, b, c;
    Vec3 centroid() const { return (a + b + c) / 3.0; }
    double diameter() const {
        return std::max({distance(a, b), distance(b, c), distance(c, a)});
    }
    double area() const { return 0.5 * norm(cross(b - a, c - a)); }
};

double quad_tri(const Tri& t, const TriangleRule& rule,
                const std::function<double(const Vec3&)>& f) {
    double area = t.area();
    double sum = 0.0;
    for (const auto& nd : rule.nodes)
        sum += nd.w * f(t.a * nd.b0 + t.b * nd.b1 + t.c * nd.b2);
    return sum * area;
}

/// Recursive 4-way subdivision toward the target; stops when the child is far
/// (diam ≤ dist/2), smaller than the kernel's smoothness scale, or at depth.
double adapt_tri(const Tri& t, const Vec3& target, const TriangleRule& rule,
                 const std::function<double(const Vec3&)>& f, int depth,
                 double smooth_scale) {
    double diam = t.diameter();
    double dist = distance(target, t.centroid());
    bool refine = depth < max_subdivision_depth && diam > 0.5 * dist &&
                  diam > 0.5 * smooth_scale;
    if (!refine) return quad_tri(t, rule, f);
    Vec3 ab = (t.a + t.b) * 0.5, bc = (t.b + t.c) * 0.5, ca = (t.c + t.a) * 0.5;
    return adapt_tri({t.a, ab, ca}, target, rule, f, depth + 1, smooth_scale) +
           adapt_tri({t.b, bc, ab}, target, rule, f, depth + 1, smooth_scale) +
           adapt_tri({t.c, ca, bc}, target, rule, f, depth + 1, smooth_scale) +
           adapt_tri({ab, bc, ca}, target, rule, f, depth + 1, smooth_scale);
}

double integrate_panel(const SurfaceMesh& mesh, const Panel& panel, const Vec3& target,
                       const TriangleRule& rule,
                       const std::function<double(const Vec3&)>& f,
                       double smooth_scale = 0.0) {
    Tri t{mesh.vertices[panel.verts[0]], mesh.vertices[panel.verts[1]],
          mesh.vertices[panel.verts[2]]};
    double dist = distance(target, panel.centroid);
    if (dist >= near_factor * panel.diameter && smooth_scale == 0.0)
        return quad_tri(t, rule, f);
    return adapt_tri(t, target, triangle_rule(7), f, 0, smooth_scale);
}

bool target_in_panel_plane(const Panel& panel, const SurfaceMesh& mesh,
                           const Vec3& target) {
    const Vec3& v0 = mesh.vertices[panel.verts[0]];
    return std::abs(dot(target - v0, panel.normal)) < 1e-9 * panel.diameter;
}

}  // namespace

KernelKind KernelKind::yukawa(double lam) {
    if (!(lam > 0.0)) throw InputError("yukawa kernel: lengthscale must be positive");
    return {Family::Yukawa, lam};
}

double green(const KernelKind& kind, const Vec3& r, const Vec3& rp) {
    double d = distance(r, rp);
    if (d <= 0.0) throw SingularEvaluation("green: coincident points");
    if (kind.is_yukawa()) return yukawa_radial(d, kind.lengthscale);
    return 1.0 / (four_pi * d);
}

double green_dn_source(const KernelKind& kind, const Vec3& x, const Vec3& y,
                       const Vec3& n_y) {
    Vec3 rv = y - x;
    double d = norm(rv);
    if (d <= 0.0) throw SingularEvaluation("green_dn_source: coincident points");
    return radial_derivative(kind, d) * dot(n_y, rv) / d;
}

double green_dn_target(const KernelKind& kind, const Vec3& x, const Vec3& y,
                       const Vec3& n_x) {
    Vec3 rv = x - y;
    double d = norm(rv);
    if (d <= 0.0) throw SingularEvaluation("green_dn_target: coincident points");
    return radial_derivative(kind, d) * dot(n_x, rv) / d;
}

double laplace_self_potential(const Vec3& a, const Vec3& b, const Vec3& c,
                              const Vec3& p) {
    Vec3 n = normalized(cross(b - a, c - a));
    const Vec3* vs[4] = {&a, &b, &c, &a};
    double total = 0.0;
    for (int e = 0; e < 3; ++e) {
        Vec3 va = *vs[e] - p, vb = *vs[e + 1] - p;
        Vec3 edge = vb - va;
        double len = norm(edge);
        if (len < 1e-300) continue;
        Vec3 ehat = edge / len;
        double s1 = dot(va, ehat), s2 = dot(vb, ehat);
        Vec3 perp = va - ehat * s1;
        double h = norm(perp);
        if (h < 1e-14 * len) continue;  // p on the edge line: degenerate wedge
        double sign = dot(n, cross(va, vb)) >= 0.0 ? 1.0 : -1.0;
        total += sign * h * (std::asinh(s2 / h) - std::asinh(s1 / h));
    }
    return total / four_pi;
}

double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c,
                            const Vec3& p) {
    Vec3 v1 = a - p, v2 = b - p, v3 = c - p;
    double l1 = norm(v1), l2 = norm(v2), l3 = norm(v3);
    double num = dot(v1, cross(v2, v3));
    double den = l1 * l2 * l3 + dot(v1, v2) * l3 + dot(v1, v3) * l2 + dot(v2, v3) * l1;
    return 2.0 * std::atan2(num, den);
}

double panel_potential(const KernelKind& kind, const SurfaceMesh& mesh,
                       const Panel& panel, const Vec3& target,
                       const TriangleRule& rule) {
    const Vec3 &v0 = mesh.vertices[panel.verts[0]], &v1 = mesh.vertices[panel.verts[1]],
               &v2 = mesh.vertices[panel.verts[2]];
    if (target_in_panel_plane(panel, mesh, target)) {
        double lap = laplace_self_potential(v0, v1, v2, target);
        if (!kind.is_yukawa()) return lap;
        double lam = kind.lengthscale;
        return lap + integrate_panel(
                         mesh, panel, target, rule,
                         [&](const Vec3& y) { return diff_radial(distance(target, y), lam); },
                         0.3 * lam);
    }
    auto f = [&](const Vec3& y) { return green(kind, target, y); };
    return integrate_panel(mesh, panel, target, rule, f);
}

double panel_normal_derivative(const KernelKind& kind, const SurfaceMesh& mesh,
                               const Panel& panel, const Vec3& target,
                               const Vec3& target_normal, const TriangleRule& rule,
                               DerivativeSide side) {
    if (target_in_panel_plane(panel, mesh, target)) return 0.0;
    std::function<double(const Vec3&)> f;
    if (side == DerivativeSide::RowNormal) {
        f = [&](const Vec3& y) { return green_dn_source(kind, target, y, panel.normal); };
    } else {
        f = [&](const Vec3& y) { return green_dn_target(kind, target, y, target_normal); };
    }
    return integrate_panel(mesh, panel, target, rule, f);
}

double panel_potential_difference(double yukawa_lengthscale, const SurfaceMesh& mesh,
                                  const Panel& panel, const Vec3& target,
                                  const TriangleRule& rule) {
    double lam = yukawa_lengthscale;
    auto f = [&](const Vec3& y) { return diff_radial(distance(target, y), lam); };
    return integrate_panel(mesh, panel, target, rule, f, 0.3 * lam);
}

double panel_normal_derivative_difference(double yukawa_lengthscale,
                                          const SurfaceMesh& mesh, const Panel& panel,
                                          const Vec3& target, const Vec3& target_normal,
                                          const TriangleRule& rule, DerivativeSide side) {
    if (target_in_panel_plane(panel, mesh, target)) return 0.0;
    double lam = yukawa_lengthscale;
    std::function<double(const Vec3&)> f;
    if (side == DerivativeSide::RowNormal) {
        f = [&, lam](const Vec3& y) {
            Vec3 rv = y - target;
            double d = norm(rv);
            if (d < 1e-300) return 0.0;
            return diff_radial_derivative(d, lam) * dot(panel.normal, rv) / d;
        };
    } else {
        f = [&, lam](const Vec3& y) {
            Vec3 rv = target - y;
            double d = norm(rv);
            if (d < 1e-300) return 0.0;
            return diff_radial_derivative(d, lam) * dot(target_normal, rv) / d;
        };
    }
    return integrate_panel(mesh, panel, target, rule, f, 0.3 * lam);
}

double winding_sum(const SurfaceMesh& mesh, const Vec3& point,
                   const TriangleRule& rule) {
    double sum = 0.0;
    KernelKind lap = KernelKind::laplace();
    for (const auto& p : mesh.panels)
        sum += panel_normal_derivative(lap, mesh, p, point, p.normal, rule,
                                       DerivativeSide::RowNormal);
    return sum;
}

}  // namespace solvbem
