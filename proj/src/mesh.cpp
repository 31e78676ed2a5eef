#include "solvbem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "solvbem/errors.hpp"

namespace solvbem {

namespace {

Panel make_panel(const std::vector<Vec3>& verts, const std::array<int, 3>& f) {
    const Vec3 &a = verts[f[0]], &b = verts[f[1]], &c = verts[f[2]];
    Vec3 n2 = cross(b - a, c - a);
    double n2len = norm(n2);
    Panel p;
    p.verts = f;
    p.centroid = (a + b + c) / 3.0;
    p.area = 0.5 * n2len;
    if (p.area <= 1e-12)
        throw InputError("mesh: degenerate panel (area <= 1e-12)");
    p.normal = n2 / n2len;
    p.diameter = std::max({distance(a, b), distance(b, c), distance(c, a)});
    return p;
}

}  // namespace

double SurfaceMesh::total_area() const {
    double s = 0.0;
    for (const auto& p : panels) s += p.area;
    return s;
}

double SurfaceMesh::enclosed_volume() const {
    // sum of signed tetrahedra against the origin
    double v6 = 0.0;
    for (const auto& p : panels) {
        const Vec3 &a = vertices[p.verts[0]], &b = vertices[p.verts[1]],
                   &c = vertices[p.verts[2]];
        v6 += dot(a, cross(b, c));
    }
    return v6 / 6.0;
}

void SurfaceMesh::validate() const {
    if (panels.empty()) throw InputError("mesh: no panels");
    for (const auto& p : panels) {
        for (int vi : p.verts)
            if (vi < 0 || vi >= static_cast<int>(vertices.size()))
                throw InputError("mesh: face index out of range");
        if (!(p.area > 1e-12)) throw InputError("mesh: degenerate panel");
        if (std::abs(norm(p.normal) - 1.0) > 1e-12)
            throw InputError("mesh: non-unit panel normal");
        const Vec3 &a = vertices[p.verts[0]], &b = vertices[p.verts[1]],
                   &c = vertices[p.verts[2]];
        if (std::abs(dot(p.normal, b - a)) > 1e-10 * norm(b - a) ||
            std::abs(dot(p.normal, c - a)) > 1e-10 * norm(c - a))
            throw InputError("mesh: normal not perpendicular to panel edges");
    }
    if (!closed) return;
    Vec3 closure{};
    for (const auto& p : panels) closure += p.normal * p.area;
    if (norm(closure) > 1e-8 * total_area())
        throw InputError("mesh: not closed (orientation sum " +
                         std::to_string(norm(closure)) + ")");
    if (!(enclosed_volume() > 0.0))
        throw InputError("mesh: non-positive enclosed volume (inward orientation)");
}

namespace {

/// Mean curvature per panel: H = 1/2 div_G of the linearly interpolated
/// vertex-normal field (vertex normals are area-weighted face averages).
void fill_mean_curvature(SurfaceMesh& m) {
    std::vector<Vec3> vnorm(m.vertices.size(), Vec3{});
    for (const auto& p : m.panels)
        for (int vi : p.verts) vnorm[vi] += p.normal * p.area;
    for (auto& n : vnorm) {
        double len = norm(n);
        if (len > 1e-300) n = n / len;
    }
    for (auto& p : m.panels) {
        const Vec3 &p0 = m.vertices[p.verts[0]], &p1 = m.vertices[p.verts[1]],
                   &p2 = m.vertices[p.verts[2]];
        const Vec3 &n0 = vnorm[p.verts[0]], &n1 = vnorm[p.verts[1]],
                   &n2 = vnorm[p.verts[2]];
        double inv2a = 1.0 / (2.0 * p.area);
        Vec3 g0 = cross(p.normal, p2 - p1) * inv2a;
        Vec3 g1 = cross(p.normal, p0 - p2) * inv2a;
        Vec3 g2 = cross(p.normal, p1 - p0) * inv2a;
        // div = tr(sum n_k grad(lambda_k)^T); the grads are in-plane so the
        // N^T M N term vanishes identically
        p.mean_curvature = 0.5 * (dot(n0, g0) + dot(n1, g1) + dot(n2, g2));
    }
}

}  // namespace

SurfaceMesh make_mesh(std::vector<Vec3> vertices,
                      const std::vector<std::array<int, 3>>& faces, bool closed) {
    SurfaceMesh m;
    m.vertices = std::move(vertices);
    m.closed = closed;
    m.panels.reserve(faces.size());
    for (const auto& f : faces) {
        for (int vi : f)
            if (vi < 0 || vi >= static_cast<int>(m.vertices.size()))
                throw InputError("mesh: face index out of range");
        m.panels.push_back(make_panel(m.vertices, f));
    }
    fill_mean_curvature(m);
    m.validate();
    return m;
}

SurfaceMesh icosphere(double radius, int subdivisions, const Vec3& center) {
    if (!(radius > 0.0)) throw InputError("icosphere: radius must be positive");
    if (subdivisions < 0 || subdivisions > 8)
        throw InputError("icosphere: subdivisions must be in [0, 8]");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};

    for (auto& v : verts) v = normalized(v);

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int i, int j) {
            auto key = std::minmax(i, j);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = normalized((verts[i] + verts[j]) * 0.5);
            verts.push_back(m);
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    for (auto& v : verts) v = center + v * radius;
    return make_mesh(std::move(verts), faces);
}

namespace {

SurfaceMesh finalize_loaded(std::vector<Vec3> verts,
                            std::vector<std::array<int, 3>> faces,
                            const std::string& path) {
    // orientation sum must close before we trust the volume sign
    SurfaceMesh probe;
    probe.vertices = verts;
    probe.closed = false;
    for (const auto& f : faces) {
        for (int vi : f)
            if (vi < 0 || vi >= static_cast<int>(verts.size()))
                throw InputError(path + ": face index out of range");
        probe.panels.push_back(make_panel(probe.vertices, f));
    }
    Vec3 closure{};
    for (const auto& p : probe.panels) closure += p.normal * p.area;
    if (norm(closure) > 1e-8 * probe.total_area())
        throw InputError(path + ": mesh is not closed (orientation sum test failed)");
    if (probe.enclosed_volume() < 0.0) {
        std::fprintf(stderr, "warning: %s is inward-oriented; flipping faces\n",
                     path.c_str());
        for (auto& f : faces) std::swap(f[1], f[2]);
    }
    return make_mesh(std::move(verts), faces);
}

double parse_double(const std::string& tok, const std::string& path, int line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw InputError(path + ":" + std::to_string(line) + ": bad number '" + tok + "'");
    }
}

}  // namespace

SurfaceMesh load_mesh(const std::string& path, MeshFormat format) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mesh file: " + path);

    if (format == MeshFormat::Off) {
        std::string header;
        int lineno = 0;
        auto next_line = [&](std::string& out) {
            while (std::getline(in, out)) {
                ++lineno;
                auto h = out.find('#');
                if (h != std::string::npos) out.erase(h);
                if (out.find_first_not_of(" \t\r\n") != std::string::npos) return true;
            }
            return false;
        };
        if (!next_line(header) || header.substr(0, 3) != "OFF")
            throw InputError(path + ":1: missing OFF header");
        std::string counts;
        if (!next_line(counts)) throw InputError(path + ": missing counts line");
        std::istringstream cs(counts);
        long nv = 0, nf = 0, ne = 0;
        if (!(cs >> nv >> nf >> ne) || nv <= 0 || nf <= 0)
            throw InputError(path + ":" + std::to_string(lineno) + ": bad counts line");
        std::vector<Vec3> verts;
        verts.reserve(nv);
        for (long i = 0; i < nv; ++i) {
            std::string line;
            if (!next_line(line)) throw InputError(path + ": unexpected end of vertices");
            std::istringstream ls(line);
            std::string a, b, c;
            if (!(ls >> a >> b >> c))
                throw InputError(path + ":" + std::to_string(lineno) + ": bad vertex line");
            verts.push_back({parse_double(a, path, lineno), parse_double(b, path, lineno),
                             parse_double(c, path, lineno)});
        }
        std::vector<std::array<int, 3>> faces;
        faces.reserve(nf);
        for (long i = 0; i < nf; ++i) {
            std::string line;
            if (!next_line(line)) throw InputError(path + ": unexpected end of faces");
            std::istringstream ls(line);
            int cnt = 0, a = 0, b = 0, c = 0;
            if (!(ls >> cnt >> a >> b >> c) || cnt != 3)
                throw InputError(path + ":" + std::to_string(lineno) +
                                 ": only triangular faces are supported");
            faces.push_back({a, b, c});
        }
        return finalize_loaded(std::move(verts), std::move(faces), path);
    }

    // flat-tri: nine floats per line, one triangle each; vertices deduplicated
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    std::map<std::array<double, 3>, int> seen;
    auto vertex_id = [&](const Vec3& v) {
        std::array<double, 3> key{v.x, v.y, v.z};
        auto it = seen.find(key);
        if (it != seen.end()) return it->second;
        verts.push_back(v);
        int idx = static_cast<int>(verts.size()) - 1;
        seen.emplace(key, idx);
        return idx;
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty()) continue;
        if (toks.size() != 9)
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": expected nine numbers per triangle");
        double v[9];
        for (int i = 0; i < 9; ++i) v[i] = parse_double(toks[i], path, lineno);
        faces.push_back({vertex_id({v[0], v[1], v[2]}), vertex_id({v[3], v[4], v[5]}),
                         vertex_id({v[6], v[7], v[8]})});
    }
    if (faces.empty()) throw InputError(path + ": no triangles");
    return finalize_loaded(std::move(verts), std::move(faces), path);
}

void write_off(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write mesh file: " + path);
    out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.panels.size() << " 0\n";
    char buf[96];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
        out << buf;
    }
    for (const auto& p : mesh.panels)
        out << "3 " << p.verts[0] << ' ' << p.verts[1] << ' ' << p.verts[2] << '\n';
    if (!out) throw InputError("write failed: " + path);
}

SurfaceMesh union_of_spheres_mesh(const Solute& solute, int subdivisions) {
    solute.validate();
    const std::size_t n = solute.size();
    for (double r : solute.atom_radii)
        if (!(r > 0.0)) throw InputError("union_of_spheres: all atom radii must be > 0");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(solute.charges[i].position, solute.charges[j].position) < 1e-12 &&
                std::abs(solute.atom_radii[i] - solute.atom_radii[j]) < 1e-12)
                throw InputError("union_of_spheres: duplicate atoms");
        }

    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    bool trimmed = false;
    for (std::size_t i = 0; i < n; ++i) {
        double ri = solute.atom_radii[i] * solute.radius_scale;
        SurfaceMesh s = icosphere(ri, subdivisions, solute.charges[i].position);
        int base = static_cast<int>(verts.size());
        verts.insert(verts.end(), s.vertices.begin(), s.vertices.end());
        for (const auto& p : s.panels) {
            bool buried = false;
            for (std::size_t j = 0; j < n && !buried; ++j) {
                if (j == i) continue;
                double rj = solute.atom_radii[j] * solute.radius_scale;
                buried = distance(p.centroid, solute.charges[j].position) < rj - 1e-9;
            }
            if (buried)
                trimmed = true;
            else
                faces.push_back({p.verts[0] + base, p.verts[1] + base, p.verts[2] + base});
        }
    }
    return make_mesh(std::move(verts), faces, /*closed=*/!trimmed);
}

}  // namespace solvbem
