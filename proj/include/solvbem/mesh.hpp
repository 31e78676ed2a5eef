#pragma once

#include <array>
#include <string>
#include <vector>

#include "solvbem/model.hpp"
#include "solvbem/vec3.hpp"

namespace solvbem {

struct Panel {
    std::array<int, 3> verts;
    Vec3 centroid;
    Vec3 normal;     // unit, outward
    double area;     // Å²
    double diameter; // longest edge, Å
    double mean_curvature = 0.0;  // from interpolated vertex normals, 1/Å
};

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<Panel> panels;
    bool closed = true;   // false for trimmed union-of-spheres surfaces

    std::size_t panel_count() const { return panels.size(); }
    double total_area() const;
    /// Signed enclosed volume by the divergence theorem; positive for
    /// outward-oriented closed surfaces.
    double enclosed_volume() const;

    /// Checks closure (Σ area·n ≈ 0), positive volume, and per-panel
    /// invariants. Closure/volume checks are skipped when closed == false.
    void validate() const;
};

/// Builds panel geometry from vertices + index triples and validates.
SurfaceMesh make_mesh(std::vector<Vec3> vertices,
                      const std::vector<std::array<int, 3>>& faces,
                      bool closed = true);

/// Subdivided icosahedron projected to a sphere: 20·4^subdivisions panels.
SurfaceMesh icosphere(double radius, int subdivisions, const Vec3& center = {});

enum class MeshFormat { Off, FlatTri };

/// Loads OFF or flat-tri; inward-oriented closed input is flipped with a
/// warning on stderr; an orientation sum that is not closed is a hard error.
SurfaceMesh load_mesh(const std::string& path, MeshFormat format);

void write_off(const SurfaceMesh& mesh, const std::string& path);

/// Per-atom icospheres with panels whose centroids fall strictly inside any
/// other atom's sphere removed. The trimmed surface is not watertight; only
/// orientation consistency is validated. Radii are scaled by
/// solute.radius_scale.
SurfaceMesh union_of_spheres_mesh(const Solute& solute, int subdivisions);

}  // namespace solvbem
