#include "solvbem/oracles.hpp"

#include <cmath>

#include "solvbem/errors.hpp"

namespace solvbem {
namespace oracles {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double four_pi = 4.0 * pi;

struct GaussRule {
    std::vector<double> x, w;  // on (0, 1)
};

/// Gauss-Legendre nodes by Newton iteration on P_m.
GaussRule gauss01(int m) {
    GaussRule r;
    r.x.resize(m);
    r.w.resize(m);
    for (int k = 0; k < m; ++k) {
        double x = std::cos(pi * (k + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int n = 1; n < m; ++n) {
                double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
                p0 = p1;
                p1 = p2;
            }
            double dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int n = 1; n < m; ++n) {
            double p2 = ((2 * n + 1) * x * p1 - n * p0) / (n + 1);
            p0 = p1;
            p1 = p2;
        }
        double dp = m * (x * p1 - p0) / (x * x - 1.0);
        r.x[k] = 0.5 * (x + 1.0);
        r.w[k] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// P_0..P_nmax at point c.
void legendre_column(int nmax, double c, std::vector<double>& out) {
    out.resize(nmax + 1);
    out[0] = 1.0;
    if (nmax >= 1) out[1] = c;
    for (int n = 1; n < nmax; ++n)
        out[n + 1] = ((2 * n + 1) * c * out[n] - n * out[n - 1]) / (n + 1);
}

struct Solve3 {
    double x0, x1, x2;
};

Solve3 solve3(double a[3][4]) {
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        for (int j = 0; j < 4; ++j) std::swap(a[c][j], a[piv][j]);
        if (std::abs(a[c][c]) < 1e-300)
            throw InputError("nonlocal sphere oracle: singular per-harmonic system");
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            double f = a[r][c] / a[c][c];
            for (int j = 0; j < 4; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return {a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]};
}

/// Per-degree reaction traces of the 3x3 nonlocal system (or the local PCM
/// reaction coefficients when lambda_w == 0 is handled by zero Yukawa symbols).
struct HarmonicSolution {
    std::vector<double> phi_r, g_r;  // reaction trace coefficients per degree
};

HarmonicSolution solve_harmonics(const std::vector<double>& charges,
                                 const std::vector<double>& axis_positions, double a,
                                 const DielectricModel& diel,
                                 const HarmonicSymbolTable& sym) {
    const int nmax = sym.n_max();
    const double cpi = diel.eps_p / diel.eps_inf;
    const double cpw = diel.eps_p / diel.eps_w;
    const double ciw = diel.eps_inf / diel.eps_w;

    HarmonicSolution hs;
    hs.phi_r.resize(nmax + 1);
    hs.g_r.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n) {
        double p = 0.0, g = 0.0;
        for (std::size_t i = 0; i < charges.size(); ++i) {
            double rho = std::pow(axis_positions[i] / a, n);
            p += charges[i] / (four_pi * a) * rho;
            g -= charges[i] * (n + 1) / (four_pi * a * a) * rho;
        }
        double vL = sym.v_laplace[n], kL = sym.k_laplace[n];
        double vY = sym.v_yukawa[n], kY = sym.k_yukawa[n];
        double vDR = vY - vL, kDR = kY - kL;
        double m[3][4] = {
            {0.5 - kY, cpi * vY - cpw * vDR, ciw * kDR,
             -(0.5 - kY + cpw * kDR) * p - (cpi * vY - cpw * vDR) * g},
            {0.5 + kL, -vL, 0.0, 0.0},
            {0.0, cpi * vL, 0.5 - kL, 0.0}};
        Solve3 s = solve3(m);
        hs.phi_r[n] = s.x0;
        hs.g_r[n] = s.x1;
    }
    return hs;
}

}  // namespace

double born_energy(double q, double a, double eps_p, double eps_w) {
    if (!(a > 0.0)) throw InputError("born_energy: radius must be positive");
    return units::coulomb_constant * q * q / (2.0 * a) * (1.0 / eps_w - 1.0 / eps_p);
}

double kirkwood_energy(double q, double a, double d, double eps_p, double eps_w,
                       double tol) {
    if (!(a > 0.0)) throw InputError("kirkwood_energy: radius must be positive");
    if (!(d >= 0.0 && d < a)) throw InputError("kirkwood_energy: require 0 <= d < a");
    const double x = (d / a) * (d / a);
    double sum = 0.0, pw = 1.0;
    for (long n = 0; n < 2000000; ++n) {
        double term = (eps_p - eps_w) * (n + 1) / (eps_p * n + eps_w * (n + 1)) * pw;
        sum += term;
        if (n > 2 && std::abs(term) < tol * std::abs(sum)) break;
        pw *= x;
    }
    return units::coulomb_constant * q * q / (2.0 * eps_p * a) * sum;
}

HarmonicSymbolTable harmonic_symbols(double radius, double lengthscale, int n_max) {
    if (!(radius > 0.0)) throw InputError("harmonic_symbols: radius must be positive");
    if (n_max < 0) throw InputError("harmonic_symbols: n_max must be >= 0");
    const double a = radius;

    HarmonicSymbolTable t;
    t.radius = radius;
    t.lengthscale = lengthscale;
    t.v_laplace.assign(n_max + 1, 0.0);
    t.k_laplace.assign(n_max + 1, 0.0);
    t.kprime_laplace.assign(n_max + 1, 0.0);
    t.v_yukawa.assign(n_max + 1, 0.0);
    t.k_yukawa.assign(n_max + 1, 0.0);

    // chord substitution d = 2at removes the 1/d endpoint singularity:
    // symbol_n = 2πa² ∫ kern(d(c)) P_n(c) dc = 8πa² ∫₀¹ kern(2at) P_n(1−2t²) t dt
    GaussRule gr = gauss01(std::max(64, 2 * n_max + 16));
    std::vector<double> pn;
    for (std::size_t k = 0; k < gr.x.size(); ++k) {
        double tt = gr.x[k];
        double d = 2.0 * a * tt;
        double c = 1.0 - 2.0 * tt * tt;
        legendre_column(n_max, c, pn);
        double wt = 8.0 * pi * a * a * gr.w[k] * tt;

        double gl = 1.0 / (four_pi * d);
        double glp = -1.0 / (four_pi * d * d);
        // dG/dn on the sphere: G'(d) · d/(2a), for source and target normals alike
        double kl_kern = glp * d / (2.0 * a);
        double gy = 0.0, kyp = 0.0;
        if (lengthscale > 0.0) {
            double e = std::exp(-d / lengthscale);
            gy = e / (four_pi * d);
            kyp = -e * (1.0 + d / lengthscale) / (four_pi * d * d) * d / (2.0 * a);
        }
        for (int n = 0; n <= n_max; ++n) {
            t.v_laplace[n] += wt * gl * pn[n];
            t.k_laplace[n] += wt * kl_kern * pn[n];
            t.kprime_laplace[n] += wt * kl_kern * pn[n];
            t.v_yukawa[n] += wt * gy * pn[n];
            t.k_yukawa[n] += wt * kyp * pn[n];
        }
    }
    return t;
}

NonlocalSphereResult nonlocal_sphere_energy(const std::vector<double>& charges,
                                            const std::vector<double>& axis_positions,
                                            double a, const DielectricModel& diel,
                                            int n_max) {
    diel.validate();
    if (charges.empty() || charges.size() != axis_positions.size())
        throw InputError("nonlocal_sphere_energy: charges/positions mismatch");
    for (double z : axis_positions)
        if (!(std::abs(z) < a))
            throw InputError("nonlocal_sphere_energy: charge not strictly inside");

    HarmonicSymbolTable sym = harmonic_symbols(a, diel.capital_lambda(), n_max);
    HarmonicSolution hs = solve_harmonics(charges, axis_positions, a, diel, sym);

    NonlocalSphereResult res;
    double e = 0.0;
    int quiet = 0;
    double last = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        double dn = 0.0;
        for (std::size_t i = 0; i < charges.size(); ++i) {
            double rho = std::pow(axis_positions[i] / a, n);
            // interior representation symbols: single layer a/(2n+1) (r/a)^n,
            // source-normal double layer -((n+1)/(2n+1)) (r/a)^n
            dn += charges[i] * rho *
                  (hs.g_r[n] * a / (2 * n + 1) + hs.phi_r[n] * (n + 1.0) / (2 * n + 1));
        }
        e += dn;
        last = std::abs(dn);
        res.n_used = n;
        quiet = (std::abs(dn) < 1e-15 * std::abs(e)) ? quiet + 1 : 0;
        if (quiet >= 8) break;
    }
    res.energy = 0.5 * units::energy_conversion * e / diel.eps_p;
    res.truncation = std::abs(e) > 0.0 ? last / std::abs(e) : 0.0;
    return res;
}

std::vector<double> nonlocal_sphere_surface_map(double q, double axis_position, double a,
                                                const DielectricModel& diel, int n_max,
                                                const std::vector<double>& theta) {
    diel.validate();
    if (!(std::abs(axis_position) < a))
        throw InputError("nonlocal_sphere_surface_map: charge not strictly inside");

    std::vector<double> coeff(n_max + 1, 0.0);
    if (diel.lambda_w == 0.0) {
        // local PCM per harmonic: (1 + eh(-1/2 + k_n)) sigma_n = -eh g_n / eps_p
        HarmonicSymbolTable sym = harmonic_symbols(a, 0.0, n_max);
        double eh = (diel.eps_p - diel.eps_w) / diel.eps_p;
        for (int n = 0; n <= n_max; ++n) {
            double g = -q * (n + 1) / (four_pi * a * a) * std::pow(axis_position / a, n);
            double sig = -eh / diel.eps_p * g / (1.0 + eh * (-0.5 + sym.kprime_laplace[n]));
            coeff[n] = sig * sym.v_laplace[n];
        }
    } else {
        HarmonicSymbolTable sym = harmonic_symbols(a, diel.capital_lambda(), n_max);
        HarmonicSolution hs = solve_harmonics({q}, {axis_position}, a, diel, sym);
        for (int n = 0; n <= n_max; ++n)
            coeff[n] = (hs.g_r[n] * a / (2 * n + 1) + hs.phi_r[n] * (n + 1.0) / (2 * n + 1)) /
                       diel.eps_p;
    }

    std::vector<double> out(theta.size(), 0.0);
    std::vector<double> pn;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        legendre_column(n_max, std::cos(theta[k]), pn);
        double s = 0.0;
        for (int n = 0; n <= n_max; ++n) s += coeff[n] * pn[n];
        out[k] = s;
    }
    return out;
}

double asym_quadratic_model(double q, double l_plus, double l_minus, double phi_static) {
    if (q == 0.0) return 0.0;
    double l = q > 0.0 ? l_plus : l_minus;
    return 0.5 * l * q * q + phi_static * q;
}

}  // namespace oracles
}  // namespace solvbem
