#include "solvbem/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solvbem/errors.hpp"

namespace solvbem {

namespace {

double nrm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot_v(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(rel_tolerance > 0.0)) throw InputError("solver: rel_tolerance must be > 0");
    if (max_iterations <= 0) throw InputError("solver: max_iterations must be > 0");
    if (restart <= 0) throw InputError("solver: restart must be > 0");
    if (!(picard_damping > 0.0 && picard_damping <= 1.0))
        throw InputError("solver: picard_damping must be in (0, 1]");
    if (!(picard_tolerance > 0.0)) throw InputError("solver: picard_tolerance must be > 0");
    if (picard_max_outer <= 0) throw InputError("solver: picard_max_outer must be > 0");
    if (quadrature_order != 1 && quadrature_order != 3 && quadrature_order != 7)
        throw InputError("solver: quadrature_order must be 1, 3, or 7");
}

void BlockSystem::validate() const {
    if (blocks <= 0 || block_dim == 0) throw InputError("block system: empty");
    if (rhs.size() != dim()) throw InputError("block system: rhs length mismatch");
    for (const auto& t : terms) {
        if (t.row < 0 || t.row >= blocks || t.col < 0 || t.col >= blocks)
            throw InputError("block system: term indices out of range");
        if (t.op && t.op->dim() != block_dim)
            throw InputError("block system: operator dimension mismatch");
        if (!t.diag.empty() && t.diag.size() != block_dim)
            throw InputError("block system: diagonal length mismatch");
        if (!t.matrix.empty() && t.matrix.size() != block_dim * block_dim)
            throw InputError("block system: matrix size mismatch");
    }
}

void BlockSystem::apply(const std::vector<double>& x, std::vector<double>& y) const {
    if (x.size() != dim()) throw InputError("block system apply: dimension mismatch");
    y.assign(dim(), 0.0);
    std::vector<double> xb(block_dim), yb(block_dim);
    for (const auto& t : terms) {
        const double* xs = x.data() + t.col * block_dim;
        double* ys = y.data() + t.row * block_dim;
        if (t.op) {
            std::copy(xs, xs + block_dim, xb.begin());
            t.op->apply(xb, yb);
            for (std::size_t i = 0; i < block_dim; ++i) ys[i] += t.coeff * yb[i];
        } else if (!t.matrix.empty()) {
            for (std::size_t i = 0; i < block_dim; ++i) {
                const double* row = t.matrix.data() + i * block_dim;
                double acc = 0.0;
                for (std::size_t j = 0; j < block_dim; ++j) acc += row[j] * xs[j];
                ys[i] += t.coeff * acc;
            }
        } else if (!t.diag.empty()) {
            for (std::size_t i = 0; i < block_dim; ++i) ys[i] += t.coeff * t.diag[i] * xs[i];
        } else {
            for (std::size_t i = 0; i < block_dim; ++i) ys[i] += t.coeff * xs[i];
        }
    }
}

std::vector<double> BlockSystem::diagonal() const {
    std::vector<double> d(dim(), 0.0);
    for (const auto& t : terms) {
        if (t.row != t.col) continue;
        double* ds = d.data() + t.row * block_dim;
        if (t.op) {
            for (std::size_t i = 0; i < block_dim; ++i) ds[i] += t.coeff * t.op->entry(i, i);
        } else if (!t.matrix.empty()) {
            for (std::size_t i = 0; i < block_dim; ++i)
                ds[i] += t.coeff * t.matrix[i * block_dim + i];
        } else if (!t.diag.empty()) {
            for (std::size_t i = 0; i < block_dim; ++i) ds[i] += t.coeff * t.diag[i];
        } else {
            for (std::size_t i = 0; i < block_dim; ++i) ds[i] += t.coeff;
        }
    }
    return d;
}

GmresResult gmres(const BlockSystem& system, const SolverConfig& config) {
    config.validate();
    system.validate();
    const std::size_t n = system.dim();
    const int m = config.restart;

    GmresResult res;
    res.x.assign(n, 0.0);

    double bnorm = nrm2(system.rhs);
    if (bnorm == 0.0) return res;  // zero RHS: zero solution

    // right preconditioning by the inverse diagonal of the diagonal blocks
    std::vector<double> minv = system.diagonal();
    for (double& v : minv) v = (std::abs(v) > 1e-300) ? 1.0 / v : 1.0;

    std::vector<std::vector<double>> basis;
    std::vector<double> H((m + 1) * m, 0.0);
    std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);
    std::vector<double> w(n), r(n), tmp(n);

    int total_iters = 0;
    double prev_cycle_residual = std::numeric_limits<double>::infinity();
    bool had_breakdown = false;
    while (true) {
        system.apply(res.x, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = system.rhs[i] - r[i];
        double beta = nrm2(r);
        if (beta / bnorm <= config.rel_tolerance && total_iters > 0) break;

        basis.assign(1, r);
        for (double& v : basis[0]) v /= beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        std::fill(H.begin(), H.end(), 0.0);

        int k = 0;
        bool cycle_done = false;
        for (; k < m && total_iters < config.max_iterations; ++k) {
            ++total_iters;
            for (std::size_t i = 0; i < n; ++i) tmp[i] = minv[i] * basis[k][i];
            system.apply(tmp, w);
            // modified Gram-Schmidt
            for (int j = 0; j <= k; ++j) {
                double h = dot_v(w, basis[j]);
                H[j * m + k] = h;
                for (std::size_t i = 0; i < n; ++i) w[i] -= h * basis[j][i];
            }
            double hk1 = nrm2(w);
            H[(k + 1) * m + k] = hk1;
            bool breakdown = hk1 <= 1e-14 * beta;
            had_breakdown = had_breakdown || breakdown;
            if (!breakdown) {
                basis.push_back(w);
                for (double& v : basis.back()) v /= hk1;
            }
            // apply stored Givens rotations, then the new one
            for (int j = 0; j < k; ++j) {
                double t0 = cs[j] * H[j * m + k] + sn[j] * H[(j + 1) * m + k];
                double t1 = -sn[j] * H[j * m + k] + cs[j] * H[(j + 1) * m + k];
                H[j * m + k] = t0;
                H[(j + 1) * m + k] = t1;
            }
            double denom = std::hypot(H[k * m + k], H[(k + 1) * m + k]);
            cs[k] = denom > 0.0 ? H[k * m + k] / denom : 1.0;
            sn[k] = denom > 0.0 ? H[(k + 1) * m + k] / denom : 0.0;
            H[k * m + k] = denom;
            H[(k + 1) * m + k] = 0.0;
            double gk = g[k];
            g[k] = cs[k] * gk;
            g[k + 1] = -sn[k] * gk;

            double rel = std::abs(g[k + 1]) / bnorm;
            res.residual_history.push_back(rel);
            if (rel <= config.rel_tolerance || breakdown) {
                ++k;
                cycle_done = true;
                break;
            }
        }
        if (!cycle_done && k == 0) break;  // no progress possible

        // back-substitute y from the k x k triangular system
        std::vector<double> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i * m + j] * y[j];
            y[i] = s / H[i * m + i];
        }
        for (int j = 0; j < k; ++j)
            for (std::size_t i = 0; i < n; ++i) res.x[i] += minv[i] * y[j] * basis[j][i];

        system.apply(res.x, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = system.rhs[i] - r[i];
        res.residual = nrm2(r) / bnorm;
        if (res.residual <= config.rel_tolerance) {
            res.iterations = total_iters;
            return res;
        }
        if (total_iters >= config.max_iterations ||
            (had_breakdown && res.residual >= 0.9999 * prev_cycle_residual))
            throw ConvergenceError(
                "gmres: no convergence after " + std::to_string(total_iters) +
                    " iterations (relative residual " + std::to_string(res.residual) + ")",
                res.residual_history);
        prev_cycle_residual = res.residual;
    }
    res.iterations = total_iters;
    system.apply(res.x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = system.rhs[i] - r[i];
    res.residual = nrm2(r) / bnorm;
    return res;
}

PicardResult picard(
    const std::function<std::vector<double>(const std::vector<double>&)>& linearized_solve,
    const std::function<std::vector<double>(const std::vector<double>&)>& update,
    const std::vector<double>& x0, const SolverConfig& config,
    const std::function<double(const std::vector<double>&)>& residual) {
    config.validate();
    PicardResult res;
    std::vector<double> x = x0;
    std::vector<double> p = update(x);
    const double theta = config.picard_damping;

    for (int outer = 1; outer <= config.picard_max_outer; ++outer) {
        std::vector<double> y = linearized_solve(p);
        std::vector<double> py = update(y);

        double metric;
        if (residual) {
            metric = residual(y);
        } else {
            double dn = 0.0, sn = 0.0, pn = 0.0;
            for (std::size_t i = 0; i < py.size(); ++i) {
                dn += (py[i] - p[i]) * (py[i] - p[i]);
                sn += py[i] * py[i];
                pn += p[i] * p[i];
            }
            metric = std::sqrt(dn) / std::max(std::sqrt(std::max(sn, pn)), 1e-30);
        }
        res.history.push_back(metric);
        if (metric <= config.picard_tolerance) {
            res.x = std::move(y);
            res.outer_iterations = outer;
            res.fixed_point_residual = metric;
            return res;
        }
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = theta * y[i] + (1.0 - theta) * x[i];
        p = update(x);
    }
    throw ConvergenceError("picard: no convergence after " +
                               std::to_string(config.picard_max_outer) + " outer iterations",
                           res.history);
}

}  // namespace solvbem
