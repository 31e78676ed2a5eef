#include <doctest.h>

#include <cmath>

#include "solvbem/errors.hpp"
#include "solvbem/operators.hpp"
#include "solvbem/oracles.hpp"

using namespace solvbem;
using namespace solvbem::oracles;

// goldens recorded from two independent series/quadrature evaluations
// agreeing below 1e-10 (see the matching assertions)
namespace golden {
constexpr double kirkwood_fig2_ep2 = -20.777857772090;
constexpr double kirkwood_fig2_ep4 = -9.964667580557;
constexpr double nonlocal_fig2_lam1 = -19.2740781631;
constexpr double nonlocal_fig2_lam10 = -11.8023824839;
}  // namespace golden

TEST_CASE("born energy") {
    CHECK(born_energy(1.0, 2.0, 1.0, 80.0) == doctest::Approx(-81.9782).epsilon(1e-5));
    CHECK(born_energy(1.0, 2.0, 80.0, 80.0) == 0.0);
    CHECK(born_energy(2.0, 2.0, 1.0, 80.0) ==
          doctest::Approx(4.0 * born_energy(1.0, 2.0, 1.0, 80.0)).epsilon(1e-14));
    CHECK_THROWS_AS(born_energy(1.0, 0.0, 1.0, 80.0), InputError);
}

TEST_CASE("kirkwood series") {
    // d = 0 leaves only the n = 0 term: exactly Born
    CHECK(kirkwood_energy(1.0, 2.0, 0.0, 2.0, 80.0) ==
          doctest::Approx(born_energy(1.0, 2.0, 2.0, 80.0)).epsilon(1e-14));

    // golden values: two truncation tolerances must agree below 1e-10 rel
    double tight = kirkwood_energy(1.0, 24.0, 22.0, 2.0, 80.0, 1e-14);
    double loose = kirkwood_energy(1.0, 24.0, 22.0, 2.0, 80.0, 1e-12);
    CHECK(std::abs(tight - loose) < 1e-10 * std::abs(tight));
    CHECK(tight == doctest::Approx(golden::kirkwood_fig2_ep2).epsilon(1e-9));
    CHECK(kirkwood_energy(1.0, 24.0, 22.0, 4.0, 80.0, 1e-14) ==
          doctest::Approx(golden::kirkwood_fig2_ep4).epsilon(1e-9));

    // |E| grows monotonically as the charge approaches the surface
    double prev = 0.0;
    for (double d : {0.0, 0.5, 1.0, 1.5, 1.9, 1.998}) {
        double e = kirkwood_energy(1.0, 2.0, d, 2.0, 80.0);
        CHECK(std::isfinite(e));
        CHECK(std::abs(e) > std::abs(prev));
        prev = e;
    }
    CHECK_THROWS_AS(kirkwood_energy(1.0, 2.0, 2.0, 2.0, 80.0), InputError);
    CHECK_THROWS_AS(kirkwood_energy(1.0, 2.0, 2.5, 2.0, 80.0), InputError);
}

TEST_CASE("harmonic symbols: sanity anchors and closed-form Yukawa n=0") {
    double a = 3.0, lam = 2.0;
    HarmonicSymbolTable t = harmonic_symbols(a, lam, 20);
    for (int n = 0; n <= 20; ++n) {
        CHECK(t.v_laplace[n] == doctest::Approx(a / (2 * n + 1)).epsilon(1e-12));
        CHECK(t.k_laplace[n] ==
              doctest::Approx(-1.0 / (2.0 * (2 * n + 1))).epsilon(1e-12));
        CHECK(t.kprime_laplace[n] == doctest::Approx(t.k_laplace[n]).epsilon(1e-14));
    }
    // independent closed forms for the n = 0 Yukawa symbols on the sphere
    double vy0 = lam / 2.0 * (1.0 - std::exp(-2.0 * a / lam));
    double ky0 = -lam / (2.0 * a) * (1.0 - std::exp(-2.0 * a / lam)) +
                 std::exp(-2.0 * a / lam) / 2.0;
    CHECK(t.v_yukawa[0] == doctest::Approx(vy0).epsilon(1e-12));
    CHECK(t.k_yukawa[0] == doctest::Approx(ky0).epsilon(1e-12));

    // Yukawa symbols approach the Laplace symbols as the lengthscale grows
    HarmonicSymbolTable big = harmonic_symbols(a, 1e6, 10);
    for (int n = 0; n <= 10; ++n) {
        CHECK(big.v_yukawa[n] == doctest::Approx(big.v_laplace[n]).epsilon(1e-5));
        CHECK(big.k_yukawa[n] == doctest::Approx(big.k_laplace[n]).epsilon(1e-4));
    }
}

TEST_CASE("nonlocal sphere: local degenerations") {
    // eps_inf == eps_w collapses the 3x3 system onto the local model exactly
    DielectricModel deg{2.0, 80.0, 80.0, 5.0};
    double e = nonlocal_sphere_energy({1.0}, {22.0}, 24.0, deg, 400).energy;
    CHECK(e == doctest::Approx(kirkwood_energy(1.0, 24.0, 22.0, 2.0, 80.0)).epsilon(1e-6));

    // lambda -> 0 on a mild geometry: within 1e-4 already at n_max = 50
    DielectricModel lam0{2.0, 80.0, 1.8, 1e-3};
    double e0 = nonlocal_sphere_energy({1.0}, {1.0}, 2.0, lam0, 50).energy;
    CHECK(e0 == doctest::Approx(kirkwood_energy(1.0, 2.0, 1.0, 2.0, 80.0)).epsilon(1e-4));
}

TEST_CASE("nonlocal sphere: Fig 2 goldens and lambda ordering") {
    DielectricModel d1{2.0, 80.0, 1.8, 1.0};
    DielectricModel d10{2.0, 80.0, 1.8, 10.0};
    NonlocalSphereResult r1 = nonlocal_sphere_energy({1.0}, {22.0}, 24.0, d1, 400);
    NonlocalSphereResult r10 = nonlocal_sphere_energy({1.0}, {22.0}, 24.0, d10, 400);
    CHECK(r1.energy == doctest::Approx(golden::nonlocal_fig2_lam1).epsilon(1e-6));
    CHECK(r10.energy == doctest::Approx(golden::nonlocal_fig2_lam10).epsilon(1e-6));
    CHECK(r1.truncation < 1e-10);

    // lambda = 10 sits closer to the eps_inf local limit than lambda = 1
    double kw_inf = kirkwood_energy(1.0, 24.0, 22.0, 2.0, 1.8);
    CHECK(std::abs(r10.energy - kw_inf) < std::abs(r1.energy - kw_inf));

    // |E| monotone between the two Kirkwood limits over the lambda grid
    double kw_w = kirkwood_energy(1.0, 24.0, 22.0, 2.0, 80.0);
    double prev = std::abs(kw_w);
    for (double lam : {0.1, 1.0, 3.0, 10.0}) {
        DielectricModel d{2.0, 80.0, 1.8, lam};
        double e = nonlocal_sphere_energy({1.0}, {22.0}, 24.0, d, 400).energy;
        CHECK(std::abs(e) < prev);
        CHECK(std::abs(e) > std::abs(kw_inf));
        prev = std::abs(e);
    }
}

TEST_CASE("nonlocal sphere: input guards") {
    DielectricModel d{2.0, 80.0, 1.8, 1.0};
    CHECK_THROWS_AS(nonlocal_sphere_energy({1.0}, {25.0}, 24.0, d, 100), InputError);
    CHECK_THROWS_AS(nonlocal_sphere_energy({1.0}, {1.0, 2.0}, 24.0, d, 100), InputError);
    CHECK_THROWS_AS(nonlocal_sphere_energy({}, {}, 24.0, d, 100), InputError);
}

TEST_CASE("nonlocal sphere: multiple on-axis charges superpose coherently") {
    // two well-separated interior charges: energy near the sum of singles plus
    // a finite interaction part; just a smoke sanity on the multi-charge path
    DielectricModel d{2.0, 80.0, 1.8, 1.0};
    double both = nonlocal_sphere_energy({1.0, -1.0}, {8.0, -8.0}, 24.0, d, 300).energy;
    CHECK(std::isfinite(both));
    // opposite charges near each other solvate less strongly than two isolated ones
    double single = nonlocal_sphere_energy({1.0}, {8.0}, 24.0, d, 300).energy;
    CHECK(std::abs(both) < 2.0 * std::abs(single));
}

TEST_CASE("surface maps: nonlocal contrast reduction orderings") {
    std::vector<double> theta;
    for (int k = 0; k <= 400; ++k) theta.push_back(M_PI * k / 400.0);
    auto supnorm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::abs(x));
        return s;
    };
    DielectricModel loc2{2.0, 80.0, 1.8, 0.0};
    DielectricModel loc4{4.0, 80.0, 1.8, 0.0};
    DielectricModel nl1{2.0, 80.0, 1.8, 1.0};
    DielectricModel nl10{2.0, 80.0, 1.8, 10.0};
    double s2 = supnorm(nonlocal_sphere_surface_map(1.0, 22.0, 24.0, loc2, 400, theta));
    double s4 = supnorm(nonlocal_sphere_surface_map(1.0, 22.0, 24.0, loc4, 400, theta));
    double n1 = supnorm(nonlocal_sphere_surface_map(1.0, 22.0, 24.0, nl1, 400, theta));
    double n10 = supnorm(nonlocal_sphere_surface_map(1.0, 22.0, 24.0, nl10, 400, theta));
    CHECK(s4 < s2);          // higher eps_p weakens the map
    CHECK(n1 < s2);          // nonlocality weakens it too
    CHECK(n1 > s4);          // lambda = 1 sits between the two local maps
    CHECK(n10 < n1);         // and longer correlation weakens it further
}

TEST_CASE("asymmetric quadratic charging model") {
    CHECK(asym_quadratic_model(0.0, -100.0, -120.0, 5.0) == 0.0);
    CHECK(asym_quadratic_model(1.0, -100.0, -120.0, 5.0) == doctest::Approx(-45.0));
    CHECK(asym_quadratic_model(-1.0, -100.0, -120.0, 5.0) == doctest::Approx(-65.0));
    CHECK(std::abs(asym_quadratic_model(-1.0, -100.0, -120.0, 5.0)) >
          std::abs(asym_quadratic_model(1.0, -100.0, -120.0, 5.0)));
}

TEST_CASE("symbols cross-checked against the discretized operators") {
    // apply the panel operators to discretized Legendre fields and project;
    // agreement validates that the quadrature symbols and the BEM share one
    // operator convention
    double a = 2.0;
    SurfaceMesh m = icosphere(a, 4);  // 5120 panels
    const TriangleRule& rule = triangle_rule(7);
    auto v = BoundaryOperator::assemble(OperatorKind::V, KernelKind::laplace(), m, rule,
                                        6000);
    auto k = BoundaryOperator::assemble(OperatorKind::K, KernelKind::laplace(), m, rule,
                                        6000);
    HarmonicSymbolTable sym = harmonic_symbols(a, 0.0, 10);

    for (int n = 1; n <= 10; n += 3) {
        std::vector<double> pn(m.panel_count()), out;
        for (std::size_t i = 0; i < m.panel_count(); ++i) {
            double c = m.panels[i].centroid.z / norm(m.panels[i].centroid);
            double p0 = 1.0, p1 = c;
            for (int kk = 1; kk < n; ++kk) {
                double p2 = ((2 * kk + 1) * c * p1 - kk * p0) / (kk + 1);
                p0 = p1;
                p1 = p2;
            }
            pn[i] = n == 0 ? 1.0 : p1;
        }
        double num_v = 0.0, num_k = 0.0, den = 0.0;
        v.apply(pn, out);
        for (std::size_t i = 0; i < m.panel_count(); ++i) {
            num_v += m.panels[i].area * pn[i] * out[i];
            den += m.panels[i].area * pn[i] * pn[i];
        }
        k.apply(pn, out);
        for (std::size_t i = 0; i < m.panel_count(); ++i)
            num_k += m.panels[i].area * pn[i] * out[i];
        CHECK(num_v / den == doctest::Approx(sym.v_laplace[n]).epsilon(0.02));
        CHECK(num_k / den == doctest::Approx(sym.k_laplace[n]).epsilon(0.02));
    }
}
