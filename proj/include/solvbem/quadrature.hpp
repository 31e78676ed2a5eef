#pragma once

#include <vector>

namespace solvbem {

/// Symmetric quadrature rule on the reference triangle. Weights sum to 1 and
/// every node is strictly interior.
struct TriangleRule {
    struct Node {
        double b0, b1, b2;  // barycentric coordinates
        double w;
    };
    int order;  // points per triangle: 1, 3, or 7
    std::vector<Node> nodes;
};

/// order ∈ {1, 3, 7}; anything else throws InputError.
const TriangleRule& triangle_rule(int order);

}  // namespace solvbem
