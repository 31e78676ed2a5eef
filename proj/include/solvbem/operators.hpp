#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "solvbem/kernels.hpp"
#include "solvbem/mesh.hpp"
#include "solvbem/quadrature.hpp"

namespace solvbem {

enum class FieldTag { Sigma, Phi, DphiDn, PsiCov };

struct BoundaryField {
    const SurfaceMesh* mesh = nullptr;
    std::vector<double> values;
    FieldTag tag = FieldTag::Sigma;

    BoundaryField() = default;
    BoundaryField(const SurfaceMesh& m, FieldTag t, double fill = 0.0)
        : mesh(&m), values(m.panel_count(), fill), tag(t) {}

    std::size_t size() const { return values.size(); }
    void validate() const;  // length matches mesh, all finite
};

enum class OperatorKind { V, K, Kprime };

/// Square collocation operator on a mesh. Storage is either a dense row-major
/// matrix or matrix-free (entries recomputed per apply). Difference operators
/// V^DR, K^DR hold their two parents plus direct-quadrature corrections for
/// self/near entries.
class BoundaryOperator {
public:
    static constexpr std::size_t dense_refusal_limit = 20000;

    /// Laplace or Yukawa single/double layer. `dense_threshold`: dense storage
    /// at or below this panel count, matrix-free above.
    static BoundaryOperator assemble(OperatorKind kind, const KernelKind& kernel,
                                     const SurfaceMesh& mesh, const TriangleRule& rule,
                                     std::size_t dense_threshold = 4000);

    /// Yukawa-minus-Laplace difference operator (V^DR or K^DR): far entries
    /// are differences of the parent integrals; self/near entries integrate
    /// the smooth difference kernel directly.
    static BoundaryOperator assemble_difference(OperatorKind kind, double lengthscale,
                                                const SurfaceMesh& mesh,
                                                const TriangleRule& rule,
                                                std::size_t dense_threshold = 4000);

    /// Same, reusing already-assembled parents.
    static BoundaryOperator assemble_difference_from(
        std::shared_ptr<const BoundaryOperator> yukawa,
        std::shared_ptr<const BoundaryOperator> laplace, OperatorKind kind,
        double lengthscale, const SurfaceMesh& mesh, const TriangleRule& rule);

    std::size_t dim() const { return dim_; }
    bool is_dense() const { return !dense_.empty(); }
    const SurfaceMesh& mesh() const { return *mesh_; }

    double entry(std::size_t i, std::size_t j) const;

    /// y = A x, parallel over rows with a fixed per-row summation order.
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
    BoundaryField apply(const BoundaryField& x) const;

    std::vector<double> diagonal() const;

    /// Row-major f64 dump with a 16-byte header (magic "BEMOP1", u32 dim).
    void dump(const std::string& path) const;
    static std::vector<double> read_dump(const std::string& path, std::uint32_t& dim);

private:
    BoundaryOperator() = default;
    double compute_entry(std::size_t i, std::size_t j) const;
    const std::pair<std::uint32_t, double>* find_near(std::size_t i, std::size_t j) const;

    const SurfaceMesh* mesh_ = nullptr;
    OperatorKind kind_ = OperatorKind::V;
    KernelKind kernel_;
    const TriangleRule* rule_ = nullptr;
    std::size_t dim_ = 0;
    std::vector<double> dense_;  // row-major when dense

    // per-row sorted (column, value) pairs: cached self/near entries for the
    // matrix-free path, or near-entry corrections for difference operators
    std::vector<std::vector<std::pair<std::uint32_t, double>>> near_rows_;

    bool is_difference_ = false;
    std::shared_ptr<const BoundaryOperator> parent_yukawa_;
    std::shared_ptr<const BoundaryOperator> parent_laplace_;
};

}  // namespace solvbem
