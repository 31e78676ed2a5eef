#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>

#include "solvbem/errors.hpp"
#include "solvbem/operators.hpp"

using namespace solvbem;

TEST_CASE("V row sums are positive on the unit icosphere") {
    SurfaceMesh m = icosphere(1.0, 1);
    auto v = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m,
                                        triangle_rule(7));
    std::vector<double> ones(m.panel_count(), 1.0), out;
    v.apply(ones, out);
    for (double x : out) CHECK(x > 0.0);
}

TEST_CASE("K row sums approximate the on-surface solid angle") {
    SurfaceMesh m = icosphere(2.0, 3);
    auto k = BoundaryOperator::assemble(OperatorKind::K, KernelKind::laplace(), m,
                                        triangle_rule(7));
    std::vector<double> ones(m.panel_count(), 1.0), out;
    k.apply(ones, out);
    for (double x : out) CHECK(std::abs(x + 0.5) < 0.01);
}

TEST_CASE("K' applied to the constant field on a sphere") {
    SurfaceMesh m = icosphere(2.0, 3);
    auto kp = BoundaryOperator::assemble(OperatorKind::Kprime, KernelKind::laplace(), m,
                                         triangle_rule(7));
    std::vector<double> ones(m.panel_count(), 1.0), out;
    kp.apply(ones, out);
    // the constant-mode eigenvalue is the area-weighted projection of K'1
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        num += m.panels[i].area * out[i];
        den += m.panels[i].area;
        CHECK(std::abs(out[i] + 0.5) < 0.05 * 0.5);
    }
    CHECK(std::abs(num / den + 0.5) < 0.02 * 0.5);
}

TEST_CASE("V applied to the constant field approximates the sphere radius") {
    double a = 2.0;
    SurfaceMesh m = icosphere(a, 3);
    auto v = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m,
                                        triangle_rule(7));
    std::vector<double> ones(m.panel_count(), 1.0), out;
    v.apply(ones, out);
    for (double x : out) CHECK(std::abs(x - a) < 0.02 * a);
}

TEST_CASE("difference operator vanishes in the laplace limit") {
    SurfaceMesh m = icosphere(1.0, 1);
    auto vl = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m,
                                         triangle_rule(7));
    auto vdr = BoundaryOperator::assemble_difference(OperatorKind::V, 1e6, m,
                                                     triangle_rule(7));
    double vmax = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < m.panel_count(); ++i)
        for (std::size_t j = 0; j < m.panel_count(); ++j) {
            vmax = std::max(vmax, std::abs(vl.entry(i, j)));
            dmax = std::max(dmax, std::abs(vdr.entry(i, j)));
        }
    CHECK(dmax < 1e-6 * vmax);
}

TEST_CASE("identity composition (V - V) x = 0") {
    SurfaceMesh m = icosphere(1.0, 1);
    auto v = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m,
                                        triangle_rule(7));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> x(m.panel_count()), y1, y2;
    for (double& xi : x) xi = u(rng);
    v.apply(x, y1);
    v.apply(x, y2);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(y1[i] - y2[i] == 0.0);
}

TEST_CASE("dense and matrix-free paths agree to 1e-13") {
    SurfaceMesh m = icosphere(1.0, 2);
    const TriangleRule& rule = triangle_rule(7);
    for (auto kind : {OperatorKind::V, OperatorKind::K, OperatorKind::Kprime}) {
        auto dense = BoundaryOperator::assemble(kind, KernelKind::yukawa(0.8), m, rule,
                                                /*dense_threshold=*/100000);
        auto mfree = BoundaryOperator::assemble(kind, KernelKind::yukawa(0.8), m, rule,
                                                /*dense_threshold=*/0);
        CHECK(dense.is_dense());
        CHECK_FALSE(mfree.is_dense());
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> u(-1, 1);
        std::vector<double> x(m.panel_count()), yd, ym;
        for (double& xi : x) xi = u(rng);
        dense.apply(x, yd);
        mfree.apply(x, ym);
        double scale = 0.0;
        for (double v : yd) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(std::abs(yd[i] - ym[i]) < 1e-13 * std::max(scale, 1.0));
    }
}

TEST_CASE("difference operator assembly strategies agree on far entries") {
    SurfaceMesh m = icosphere(1.0, 2);
    const TriangleRule& rule = triangle_rule(7);
    double lam = 0.9;
    auto vdr = BoundaryOperator::assemble_difference(OperatorKind::V, lam, m, rule);
    auto vy = BoundaryOperator::assemble(OperatorKind::V, KernelKind::yukawa(lam), m, rule);
    auto vl = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m, rule);
    int checked = 0;
    for (std::size_t i = 0; i < m.panel_count() && checked < 200; i += 17)
        for (std::size_t j = 0; j < m.panel_count() && checked < 200; j += 13) {
            double dist = distance(m.panels[i].centroid, m.panels[j].centroid);
            if (dist < 3.0 * std::max(m.panels[i].diameter, m.panels[j].diameter)) continue;
            CHECK(vdr.entry(i, j) ==
                  doctest::Approx(vy.entry(i, j) - vl.entry(i, j)).epsilon(1e-8));
            ++checked;
        }
    CHECK(checked > 50);
}

TEST_CASE("operator dump round trip") {
    SurfaceMesh m = icosphere(1.0, 0);
    auto v = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m,
                                        triangle_rule(7));
    std::string path =
        (std::filesystem::temp_directory_path() / "op_dump.bin").string();
    v.dump(path);
    std::uint32_t dim = 0;
    std::vector<double> data = BoundaryOperator::read_dump(path, dim);
    REQUIRE(dim == v.dim());
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            CHECK(data[i * dim + j] == v.entry(i, j));
    std::filesystem::remove(path);
}

TEST_CASE("order-7 minus order-3 entry differences shrink under refinement") {
    // summed entries toward a fixed target: the panel-rule discrepancy must
    // fall as the panels shrink
    // target far enough that no panel triggers the near-singular upgrade
    KernelKind lap = KernelKind::laplace();
    Vec3 target{5.0, 0.4, 0.2};
    auto rule_gap = [&](int subdiv) {
        SurfaceMesh m = icosphere(1.0, subdiv);
        double s7 = 0.0, s3 = 0.0;
        for (const auto& p : m.panels) {
            s7 += panel_potential(lap, m, p, target, triangle_rule(7));
            s3 += panel_potential(lap, m, p, target, triangle_rule(3));
        }
        return std::abs(s7 - s3);
    };
    double g0 = rule_gap(0), g1 = rule_gap(1), g2 = rule_gap(2);
    CHECK(g1 < g0);
    CHECK(g2 < g1);
}

TEST_CASE("dense assembly is refused above 20000 panels") {
    SurfaceMesh m = icosphere(1.0, 6);  // 81920 panels
    CHECK_THROWS_AS(BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m,
                                               triangle_rule(7),
                                               /*dense_threshold=*/100000),
                    InputError);
}

TEST_CASE("apply rejects dimension mismatch") {
    SurfaceMesh m = icosphere(1.0, 0);
    auto v = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m,
                                        triangle_rule(7));
    std::vector<double> x(7, 1.0), y;
    CHECK_THROWS_AS(v.apply(x, y), InputError);
}
