#include "solvbem/quadrature.hpp"

#include "solvbem/errors.hpp"

namespace solvbem {

namespace {

TriangleRule make_rule(int order) {
    TriangleRule r;
    r.order = order;
    switch (order) {
        case 1:
            r.nodes = {{1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0}};
            break;
        case 3:
            // degree-2 rule with strictly interior nodes
            r.nodes = {{2.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3},
                       {1.0 / 6, 2.0 / 3, 1.0 / 6, 1.0 / 3},
                       {1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3}};
            break;
        case 7: {
            // degree-5 Strang rule
            const double a1 = 0.0597158717897698, b1 = 0.4701420641051151;
            const double a2 = 0.7974269853530873, b2 = 0.1012865073234563;
            const double w0 = 0.225;
            const double w1 = 0.1323941527885062;
            const double w2 = 0.1259391805448271;
            r.nodes = {{1.0 / 3, 1.0 / 3, 1.0 / 3, w0},
                       {a1, b1, b1, w1}, {b1, a1, b1, w1}, {b1, b1, a1, w1},
                       {a2, b2, b2, w2}, {b2, a2, b2, w2}, {b2, b2, a2, w2}};
            break;
        }
        default:
            throw InputError("triangle_rule: order must be 1, 3, or 7");
    }
    return r;
}

}  // namespace

const TriangleRule& triangle_rule(int order) {
    static const TriangleRule r1 = make_rule(1);
    static const TriangleRule r3 = make_rule(3);
    static const TriangleRule r7 = make_rule(7);
    switch (order) {
        case 1: return r1;
        case 3: return r3;
        case 7: return r7;
        default: throw InputError("triangle_rule: order must be 1, 3, or 7");
    }
}

}  // namespace solvbem
