#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solvbem/model.hpp"
#include "solvbem/nlbc.hpp"
#include "solvbem/solve.hpp"

namespace solvbem {

struct SphereSpec {
    double radius = 0.0;
    int subdivisions = 0;
    Vec3 center;
};

struct RunConfig {
    std::optional<double> eps_p, eps_w;
    double eps_inf = 1.8;
    double lambda_w = 0.0;
    SolverConfig solver;
    std::optional<double> nlbc_alpha, nlbc_beta, nlbc_gamma, nlbc_mu;
    bool nlbc_en_jump_term = false;
    std::optional<std::string> mesh_file;
    std::optional<std::string> mesh_format;   // "off" | "flat-tri"
    std::optional<std::string> sphere;        // "a,subdiv,cx,cy,cz"
    std::optional<std::string> pqr_file;
    double radius_scale = 1.0;
    std::optional<std::string> out_path, surface_out_path, trace_path;

    DielectricModel dielectrics() const;      // throws if eps_p/eps_w missing
    NlbcParams nlbc_params() const;           // throws if any of α,β,γ,μ missing
};

/// PQR reader: ATOM/HETATM records, whitespace-separated; the last five
/// fields are x, y, z, charge, radius (handles the chain-ID dialect).
Solute load_pqr(const std::string& path);

/// key = value text with dotted section keys; '#' comments. Unknown or
/// duplicate keys and out-of-range values are errors.
RunConfig load_config(const std::string& path);

/// Canonical key = value text for a RunConfig; parsing it back reproduces the
/// config (parse -> serialize -> parse is a fixed point).
std::string dump_config(const RunConfig& cfg);

SphereSpec parse_sphere_spec(const std::string& spec);

using CsvCell = std::variant<long long, double, std::string>;

/// Header row from schema; floats at 17 significant digits; LF endings.
/// Non-finite numbers are refused.
void write_csv(const std::string& path, const std::vector<std::string>& schema,
               const std::vector<std::vector<CsvCell>>& rows);

}  // namespace solvbem
