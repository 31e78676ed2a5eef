#include "solvbem/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "solvbem/errors.hpp"
#include "solvbem/parallel.hpp"

namespace solvbem {

namespace {
constexpr double near_factor = 2.0;

bool near_pair(const SurfaceMesh& mesh, std::size_t i, std::size_t j) {
    if (i == j) return true;
    const Panel &pi = mesh.panels[i], &pj = mesh.panels[j];
    return distance(pi.centroid, pj.centroid) <
           near_factor * std::max(pi.diameter, pj.diameter);
}
}  // namespace

void BoundaryField::validate() const {
    if (!mesh) throw InputError("boundary field: no mesh");
    if (values.size() != mesh->panel_count())
        throw InputError("boundary field: length does not match panel count");
    for (double v : values)
        if (!std::isfinite(v)) throw InputError("boundary field: non-finite value");
}

double BoundaryOperator::compute_entry(std::size_t i, std::size_t j) const {
    const Panel& target = mesh_->panels[i];
    const Panel& source = mesh_->panels[j];
    switch (kind_) {
        case OperatorKind::V:
            return panel_potential(kernel_, *mesh_, source, target.centroid, *rule_);
        case OperatorKind::K:
            return panel_normal_derivative(kernel_, *mesh_, source, target.centroid,
                                           target.normal, *rule_, DerivativeSide::RowNormal);
        case OperatorKind::Kprime:
            if (i == j) {
                // leading curved-surface PV self-term: the flat-panel value is
                // 0, but the smooth surface contributes -(H/2) Int dS/(4 pi d)
                // over the self patch. Without it the constant-mode action of
                // K' carries an O(h) defect with a large prefactor.
                return -0.5 * target.mean_curvature *
                       panel_potential(kernel_, *mesh_, source, target.centroid, *rule_);
            }
            return panel_normal_derivative(kernel_, *mesh_, source, target.centroid,
                                           target.normal, *rule_, DerivativeSide::TargetNormal);
    }
    return 0.0;
}

const std::pair<std::uint32_t, double>* BoundaryOperator::find_near(std::size_t i,
                                                                    std::size_t j) const {
    const auto& row = near_rows_[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const auto& a, std::size_t col) { return a.first < col; });
    if (it != row.end() && it->first == j) return &*it;
    return nullptr;
}

BoundaryOperator BoundaryOperator::assemble(OperatorKind kind, const KernelKind& kernel,
                                            const SurfaceMesh& mesh,
                                            const TriangleRule& rule,
                                            std::size_t dense_threshold) {
    BoundaryOperator op;
    op.mesh_ = &mesh;
    op.kind_ = kind;
    op.kernel_ = kernel;
    op.rule_ = &triangle_rule(rule.order);
    op.dim_ = mesh.panel_count();
    const std::size_t n = op.dim_;

    if (n <= dense_threshold) {
        if (n > dense_refusal_limit)
            throw InputError("operator assembly: dense storage refused above 20000 panels");
        op.dense_.assign(n * n, 0.0);
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j = 0; j < n; ++j)
                op.dense_[i * n + j] = op.compute_entry(i, j);
        });
        return op;
    }

    // matrix-free: cache self/near entries, recompute far entries per apply
    op.near_rows_.resize(n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j)
            if (near_pair(mesh, i, j))
                op.near_rows_[i].emplace_back(static_cast<std::uint32_t>(j),
                                              op.compute_entry(i, j));
    });
    return op;
}

BoundaryOperator BoundaryOperator::assemble_difference(OperatorKind kind, double lengthscale,
                                                       const SurfaceMesh& mesh,
                                                       const TriangleRule& rule,
                                                       std::size_t dense_threshold) {
    auto yuk = std::make_shared<BoundaryOperator>(
        assemble(kind, KernelKind::yukawa(lengthscale), mesh, rule, dense_threshold));
    auto lap = std::make_shared<BoundaryOperator>(
        assemble(kind, KernelKind::laplace(), mesh, rule, dense_threshold));
    return assemble_difference_from(yuk, lap, kind, lengthscale, mesh, rule);
}

BoundaryOperator BoundaryOperator::assemble_difference_from(
    std::shared_ptr<const BoundaryOperator> yuk, std::shared_ptr<const BoundaryOperator> lap,
    OperatorKind kind, double lengthscale, const SurfaceMesh& mesh,
    const TriangleRule& rule) {
    BoundaryOperator op;
    op.mesh_ = &mesh;
    op.kind_ = kind;
    op.kernel_ = KernelKind::yukawa(lengthscale);
    op.rule_ = &triangle_rule(rule.order);
    op.dim_ = mesh.panel_count();
    op.is_difference_ = true;
    op.parent_yukawa_ = yuk;
    op.parent_laplace_ = lap;

    const std::size_t n = op.dim_;
    const TriangleRule& r = *op.rule_;
    // self/near entries: direct quadrature of the bounded difference kernel
    op.near_rows_.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const Panel& target = mesh.panels[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (!near_pair(mesh, i, j)) continue;
            const Panel& source = mesh.panels[j];
            double direct;
            if (kind == OperatorKind::V)
                direct = panel_potential_difference(lengthscale, mesh, source,
                                                    target.centroid, r);
            else
                direct = panel_normal_derivative_difference(
                    lengthscale, mesh, source, target.centroid, target.normal, r,
                    kind == OperatorKind::K ? DerivativeSide::RowNormal
                                            : DerivativeSide::TargetNormal);
            double delta = direct - (yuk->entry(i, j) - lap->entry(i, j));
            op.near_rows_[i].emplace_back(static_cast<std::uint32_t>(j), delta);
        }
    });
    return op;
}

double BoundaryOperator::entry(std::size_t i, std::size_t j) const {
    if (is_difference_) {
        double base = parent_yukawa_->entry(i, j) - parent_laplace_->entry(i, j);
        const auto* hit = find_near(i, j);
        return hit ? base + hit->second : base;
    }
    if (!dense_.empty()) return dense_[i * dim_ + j];
    const auto* hit = find_near(i, j);
    return hit ? hit->second : compute_entry(i, j);
}

void BoundaryOperator::apply(const std::vector<double>& x, std::vector<double>& y) const {
    if (x.size() != dim_) throw InputError("operator apply: dimension mismatch");
    y.assign(dim_, 0.0);

    if (is_difference_) {
        std::vector<double> tmp(dim_);
        parent_yukawa_->apply(x, y);
        parent_laplace_->apply(x, tmp);
        for (std::size_t i = 0; i < dim_; ++i) {
            double acc = y[i] - tmp[i];
            for (const auto& [j, delta] : near_rows_[i]) acc += delta * x[j];
            y[i] = acc;
        }
        return;
    }

    if (!dense_.empty()) {
        parallel_for(dim_, [&](std::size_t i) {
            const double* row = dense_.data() + i * dim_;
            double acc = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * x[j];
            y[i] = acc;
        });
        return;
    }

    parallel_for(dim_, [&](std::size_t i) {
        const auto& row = near_rows_[i];
        std::size_t next = 0;
        double acc = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (next < row.size() && row[next].first == j)
                acc += row[next++].second * x[j];
            else
                acc += compute_entry(i, j) * x[j];
        }
        y[i] = acc;
    });
}

BoundaryField BoundaryOperator::apply(const BoundaryField& x) const {
    x.validate();
    BoundaryField y(*mesh_, x.tag);
    apply(x.values, y.values);
    return y;
}

std::vector<double> BoundaryOperator::diagonal() const {
    std::vector<double> d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) d[i] = entry(i, i);
    return d;
}

void BoundaryOperator::dump(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write operator dump: " + path);
    char header[16] = {};
    std::memcpy(header, "BEMOP1", 6);
    std::uint32_t dim32 = static_cast<std::uint32_t>(dim_);
    std::memcpy(header + 8, &dim32, 4);
    out.write(header, sizeof header);
    std::vector<double> row(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) row[j] = entry(i, j);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!out) throw InputError("operator dump write failed: " + path);
}

std::vector<double> BoundaryOperator::read_dump(const std::string& path,
                                                std::uint32_t& dim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read operator dump: " + path);
    char header[16];
    in.read(header, sizeof header);
    if (!in || std::memcmp(header, "BEMOP1", 6) != 0)
        throw InputError("bad operator dump header: " + path);
    std::memcpy(&dim, header + 8, 4);
    std::vector<double> data(static_cast<std::size_t>(dim) * dim);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) throw InputError("truncated operator dump: " + path);
    return data;
}

}  // namespace solvbem
