#include <doctest.h>

#include <cmath>

#include "solvbem/errors.hpp"
#include "solvbem/nonlocal.hpp"
#include "solvbem/oracles.hpp"

using namespace solvbem;

namespace {
Solute point_solute(double q, Vec3 pos) {
    Solute s;
    s.charges = {{pos, q}};
    s.atom_radii = {1.0};
    return s;
}
}  // namespace

TEST_CASE("exactly local parameters delegate to the pcm solver") {
    Solute s = point_solute(1.0, {0, 0, 0.8});
    SurfaceMesh m = icosphere(2.0, 2);
    SolverConfig cfg;

    DielectricModel lam0{2.0, 80.0, 1.8, 0.0};
    NonlocalSolution a = solve_nonlocal(s, m, lam0, cfg);
    CHECK(a.diagnostics.delegated_local);

    DielectricModel deg{2.0, 80.0, 80.0, 5.0};
    NonlocalSolution b = solve_nonlocal(s, m, deg, cfg);
    CHECK(b.diagnostics.delegated_local);

    PcmSolution p = solve_pcm(s, m, lam0, cfg);
    CHECK(a.energy == p.energy);
    CHECK(b.energy == p.energy);
}

TEST_CASE("lambda limits against the local oracles at 1280 panels") {
    Solute s = point_solute(1.0, {0, 0, 1.0});
    SurfaceMesh m = icosphere(2.0, 3);
    SolverConfig cfg;

    DielectricModel small{1.0, 80.0, 1.8, 1e-3};
    double e0 = solve_nonlocal(s, m, small, cfg).energy;
    CHECK(e0 == doctest::Approx(oracles::kirkwood_energy(1.0, 2.0, 1.0, 1.0, 80.0))
                    .epsilon(0.01));

    DielectricModel large{1.0, 80.0, 1.8, 1e4};
    double e8 = solve_nonlocal(s, m, large, cfg).energy;
    CHECK(e8 == doctest::Approx(oracles::kirkwood_energy(1.0, 2.0, 1.0, 1.0, 1.8))
                    .epsilon(0.02));
}

TEST_CASE("finite lambda tracks the per-harmonic oracle") {
    Solute s = point_solute(1.0, {0, 0, 1.0});
    SurfaceMesh m = icosphere(2.0, 3);
    SolverConfig cfg;
    DielectricModel d{2.0, 80.0, 1.8, 1.0};
    NonlocalSolution sol = solve_nonlocal(s, m, d, cfg);
    double oracle = oracles::nonlocal_sphere_energy({1.0}, {1.0}, 2.0, d, 300).energy;
    CHECK(sol.energy == doctest::Approx(oracle).epsilon(0.02));
    CHECK(sol.diagnostics.residual <= cfg.rel_tolerance);
    CHECK_FALSE(sol.diagnostics.delegated_local);
}

TEST_CASE("|energy| decreases monotonically in lambda") {
    Solute s = point_solute(1.0, {0, 0, 1.0});
    SurfaceMesh m = icosphere(2.0, 2);
    SolverConfig cfg;
    double prev = 1e300;
    for (double lam : {0.1, 1.0, 3.0, 10.0}) {
        DielectricModel d{2.0, 80.0, 1.8, lam};
        double e = solve_nonlocal(s, m, d, cfg).energy;
        CHECK(std::abs(e) < prev);
        prev = std::abs(e);
    }
}

TEST_CASE("lambda sweep reuses the Laplace operators") {
    Solute s = point_solute(1.0, {0, 0, 0.5});
    SurfaceMesh m = icosphere(2.0, 2);
    SolverConfig cfg;
    DielectricModel d1{2.0, 80.0, 1.8, 1.0};
    NonlocalOperators ops1 = assemble_nonlocal_operators(m, d1.capital_lambda(), cfg);
    double e_fresh = solve_nonlocal_with_operators(s, m, d1, cfg, ops1).energy;

    DielectricModel d2{2.0, 80.0, 1.8, 3.0};
    NonlocalOperators ops2 =
        assemble_nonlocal_operators(m, d2.capital_lambda(), cfg, &ops1);
    CHECK(ops2.v_l.get() == ops1.v_l.get());  // shared, not reassembled
    double e2 = solve_nonlocal_with_operators(s, m, d2, cfg, ops2).energy;
    double e2_fresh = solve_nonlocal(s, m, d2, cfg).energy;
    CHECK(e2 == doctest::Approx(e2_fresh).epsilon(1e-12));
    CHECK(e_fresh == doctest::Approx(solve_nonlocal(s, m, d1, cfg).energy).epsilon(1e-12));
}

TEST_CASE("interior representation reproduces manufactured Kirkwood traces") {
    // build exact local-solution traces from the Kirkwood expansion in the
    // system normalization and check the representation energy
    double q = 1.0, a = 2.0, d0 = 0.9, ep = 2.0, ew = 80.0;
    SurfaceMesh m = icosphere(a, 3);
    Solute s = point_solute(q, {0, 0, d0});
    SolverConfig cfg;

    NonlocalTraces traces;
    traces.phi = BoundaryField(m, FieldTag::Phi);
    traces.dphi_dn = BoundaryField(m, FieldTag::DphiDn);
    traces.psi_cov = BoundaryField(m, FieldTag::PsiCov);
    const double four_pi = 4.0 * M_PI;
    for (std::size_t i = 0; i < m.panel_count(); ++i) {
        const Vec3& c = m.panels[i].centroid;
        double r = norm(c);
        double cth = c.z / r;
        double p0 = 1.0, p1 = cth, reac = 0.0, dreac = 0.0;
        for (int n = 0; n < 200; ++n) {
            double pn = n == 0 ? 1.0 : p1;
            double an = q / four_pi * std::pow(d0, n) / std::pow(a, 2 * n + 1) *
                        ((ep - ew) * (n + 1) / (ep * (ep * n + ew * (n + 1))));
            reac += an * std::pow(r, n) * pn;
            dreac += n > 0 ? an * n * std::pow(r, n - 1) * pn : 0.0;
            if (n >= 1) {
                double p2 = ((2 * n + 1) * cth * p1 - n * p0) / (n + 1);
                p0 = p1;
                p1 = p2;
            }
        }
        double pm = coulomb_potential(s, c, 1.0);
        double gm = coulomb_field_normal(s, c, m.panels[i].normal, 1.0);
        // system scaling: phi_II = phi_mol + ep * phiREAC_phys
        traces.phi.values[i] = pm + ep * reac;
        traces.dphi_dn.values[i] = gm + ep * dreac;
        traces.psi_cov.values[i] = 0.0;
    }
    std::vector<double> reac_at_charge =
        interior_reaction_potential(traces, s, m, {{0, 0, d0}}, cfg);
    double energy = 0.5 * units::energy_conversion * q * reac_at_charge[0] / ep;
    double kw = oracles::kirkwood_energy(q, a, d0, ep, ew);
    CHECK(energy == doctest::Approx(kw).epsilon(0.02));
}

TEST_CASE("interior representation: Green identity checks") {
    double a = 2.0;
    SurfaceMesh m = icosphere(a, 3);
    Solute s = point_solute(1.0, {0, 0, 0.6});
    SolverConfig cfg;

    // traces of a known interior-harmonic function u = 3 + 0.5 z reproduce u
    NonlocalTraces traces;
    traces.phi = BoundaryField(m, FieldTag::Phi);
    traces.dphi_dn = BoundaryField(m, FieldTag::DphiDn);
    traces.psi_cov = BoundaryField(m, FieldTag::PsiCov);
    for (std::size_t i = 0; i < m.panel_count(); ++i) {
        const Vec3& c = m.panels[i].centroid;
        double u = 3.0 + 0.5 * c.z;
        double dudn = 0.5 * m.panels[i].normal.z;
        traces.phi.values[i] = u + coulomb_potential(s, c, 1.0);
        traces.dphi_dn.values[i] =
            dudn + coulomb_field_normal(s, c, m.panels[i].normal, 1.0);
    }
    std::vector<Vec3> pts = {{0, 0, 0}, {0.5, -0.3, 0.2}};
    std::vector<double> rep = interior_reaction_potential(traces, s, m, pts, cfg);
    CHECK(rep[0] == doctest::Approx(3.0).epsilon(0.01));
    CHECK(rep[1] == doctest::Approx(3.0 + 0.5 * 0.2).epsilon(0.01));

    // zero traces: the representation of (-phi_mol, -g_mol) cancels by the
    // Green identity (the Newtonian potential of the sources is phi_mol)
    std::fill(traces.phi.values.begin(), traces.phi.values.end(), 0.0);
    std::fill(traces.dphi_dn.values.begin(), traces.dphi_dn.values.end(), 0.0);
    std::vector<double> zero_rep = interior_reaction_potential(traces, s, m, {{0, 0, 0}}, cfg);
    double scale = std::abs(coulomb_potential(s, {0, 0, 0}, 1.0));
    CHECK(std::abs(zero_rep[0]) < 0.01 * scale);
}

TEST_CASE("interior representation is linear in the traces") {
    double a = 2.0;
    SurfaceMesh m = icosphere(a, 2);
    Solute s = point_solute(1.0, {0, 0, 0.5});
    SolverConfig cfg;
    DielectricModel d{2.0, 80.0, 1.8, 1.0};
    NonlocalSolution sol = solve_nonlocal(s, m, d, cfg);

    NonlocalTraces scaled = sol.traces;
    // scale the reaction part by 2 (phi_mol subtraction is affine)
    for (std::size_t i = 0; i < m.panel_count(); ++i) {
        const Vec3& c = m.panels[i].centroid;
        double pm = coulomb_potential(s, c, 1.0);
        double gm = coulomb_field_normal(s, c, m.panels[i].normal, 1.0);
        scaled.phi.values[i] = pm + 2.0 * (sol.traces.phi.values[i] - pm);
        scaled.dphi_dn.values[i] = gm + 2.0 * (sol.traces.dphi_dn.values[i] - gm);
    }
    std::vector<Vec3> pts = {{0.2, 0.1, 0.0}};
    double r1 = interior_reaction_potential(sol.traces, s, m, pts, cfg)[0];
    double r2 = interior_reaction_potential(scaled, s, m, pts, cfg)[0];
    CHECK(r2 == doctest::Approx(2.0 * r1).epsilon(1e-12));
}

TEST_CASE("nonlocal energy invariant under rigid motion") {
    SolverConfig cfg;
    cfg.rel_tolerance = 1e-13;
    DielectricModel d{2.0, 80.0, 1.8, 1.0};
    SurfaceMesh m = icosphere(2.0, 2);
    Solute s = point_solute(1.0, {0, 0, 0.8});
    double e0 = solve_nonlocal(s, m, d, cfg).energy;

    Vec3 shift{5.0, 1.0, -2.0};
    Solute s2 = s;
    s2.charges[0].position += shift;
    std::vector<Vec3> verts;
    for (const auto& v : m.vertices) verts.push_back(v + shift);
    std::vector<std::array<int, 3>> faces;
    for (const auto& p : m.panels) faces.push_back(p.verts);
    SurfaceMesh m2 = make_mesh(std::move(verts), faces);
    double e1 = solve_nonlocal(s2, m2, d, cfg).energy;
    CHECK(std::abs(e1 - e0) < 1e-10 * std::abs(e0));
}

TEST_CASE("surface map peaks near the charge and weakens with lambda") {
    Solute s = point_solute(1.0, {0, 0, 1.5});
    SurfaceMesh m = icosphere(2.0, 2);
    SolverConfig cfg;
    auto supnorm = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::abs(x));
        return s;
    };
    DielectricModel d1{2.0, 80.0, 1.8, 0.5};
    NonlocalSolution s1 = solve_nonlocal(s, m, d1, cfg);
    std::vector<double> map1 = nonlocal_surface_map(s1, s, m, d1.eps_p, cfg);
    DielectricModel d2{2.0, 80.0, 1.8, 5.0};
    NonlocalSolution s2 = solve_nonlocal(s, m, d2, cfg);
    std::vector<double> map2 = nonlocal_surface_map(s2, s, m, d2.eps_p, cfg);

    std::size_t imax = 0;
    for (std::size_t i = 1; i < map1.size(); ++i)
        if (std::abs(map1[i]) > std::abs(map1[imax])) imax = i;
    CHECK(m.panels[imax].centroid.z > 1.5);
    CHECK(supnorm(map2) < supnorm(map1));
}
