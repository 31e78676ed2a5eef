#include "solvbem/model.hpp"

#include <cmath>

#include "solvbem/errors.hpp"

namespace solvbem {

namespace {
constexpr double four_pi = 4.0 * 3.14159265358979323846;
}

void Solute::validate() const {
    if (charges.empty()) throw InputError("solute has no charges");
    if (atom_radii.size() != charges.size())
        throw InputError("solute: atom_radii length does not match charge count");
    for (const auto& c : charges) {
        if (!finite(c.position) || !std::isfinite(c.charge))
            throw InputError("solute: non-finite charge entry");
    }
    for (double r : atom_radii)
        if (!(r >= 0.0)) throw InputError("solute: negative atom radius");
    if (!(radius_scale > 0.0)) throw InputError("solute: radius_scale must be positive");
}

double DielectricModel::capital_lambda() const {
    return lambda_w * std::sqrt(eps_inf / eps_w);
}

void DielectricModel::validate() const {
    if (!(eps_p >= 1.0)) throw InputError("dielectrics: eps_p must be >= 1");
    if (!(eps_w >= eps_inf) || !(eps_inf >= 1.0))
        throw InputError("dielectrics: require eps_w >= eps_inf >= 1");
    if (!(lambda_w >= 0.0)) throw InputError("dielectrics: lambda_w must be >= 0");
}

double coulomb_potential(const Solute& solute, const Vec3& point, double eps) {
    double sum = 0.0;
    for (const auto& c : solute.charges) {
        double d = distance(point, c.position);
        if (d <= 0.0)
            throw SingularEvaluation("coulomb_potential: point coincides with a charge");
        sum += c.charge / d;
    }
    return sum / (four_pi * eps);
}

double coulomb_field_normal(const Solute& solute, const Vec3& point,
                            const Vec3& normal, double eps) {
    if (std::abs(norm(normal) - 1.0) > 1e-12)
        throw InputError("coulomb_field_normal: normal is not unit length");
    double sum = 0.0;
    for (const auto& c : solute.charges) {
        Vec3 rv = point - c.position;
        double d = norm(rv);
        if (d <= 0.0)
            throw SingularEvaluation("coulomb_field_normal: point coincides with a charge");
        // d/dn [1/(4 pi eps d)] = -(n . rv)/(4 pi eps d^3)
        sum -= c.charge * dot(normal, rv) / (d * d * d);
    }
    return sum / (four_pi * eps);
}

}  // namespace solvbem
