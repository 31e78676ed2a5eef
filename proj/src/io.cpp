#include "solvbem/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "solvbem/errors.hpp"

namespace solvbem {

namespace {

double to_double(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw InputError(where + ": bad number '" + tok + "'");
    }
}

int to_int(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw InputError(where + ": bad integer '" + tok + "'");
    }
}

bool to_bool(const std::string& tok, const std::string& where) {
    if (tok == "true" || tok == "1") return true;
    if (tok == "false" || tok == "0") return false;
    throw InputError(where + ": bad boolean '" + tok + "' (use true/false)");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void require_file(const std::string& path, const std::string& key) {
    if (!std::filesystem::exists(path))
        throw InputError("config: " + key + " references missing file '" + path + "'");
}

}  // namespace

DielectricModel RunConfig::dielectrics() const {
    if (!eps_p || !eps_w)
        throw InputError("config: dielectric.eps_p and dielectric.eps_w are required");
    DielectricModel d{*eps_p, *eps_w, eps_inf, lambda_w};
    d.validate();
    return d;
}

NlbcParams RunConfig::nlbc_params() const {
    if (!nlbc_alpha || !nlbc_beta || !nlbc_gamma || !nlbc_mu)
        throw InputError(
            "config: nlbc.alpha, nlbc.beta, nlbc.gamma, nlbc.mu are all required "
            "(the model ships no fitted defaults)");
    NlbcParams p{*nlbc_alpha, *nlbc_beta, *nlbc_gamma, *nlbc_mu, nlbc_en_jump_term};
    p.validate();
    return p;
}

Solute load_pqr(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open PQR file: " + path);
    Solute solute;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok) toks.push_back(tok);
        if (toks.empty() || (toks[0] != "ATOM" && toks[0] != "HETATM")) continue;
        if (toks.size() < 10)
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": ATOM record needs at least 10 fields");
        // last five fields are x, y, z, charge, radius in both common dialects
        std::string where = path + ":" + std::to_string(lineno);
        std::size_t n = toks.size();
        PointCharge c;
        c.position = {to_double(toks[n - 5], where), to_double(toks[n - 4], where),
                      to_double(toks[n - 3], where)};
        c.charge = to_double(toks[n - 2], where);
        solute.charges.push_back(c);
        solute.atom_radii.push_back(to_double(toks[n - 1], where));
    }
    if (solute.charges.empty()) throw InputError(path + ": zero atoms");
    solute.validate();
    return solute;
}

SphereSpec parse_sphere_spec(const std::string& spec) {
    std::istringstream ss(spec);
    std::vector<std::string> parts;
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(trim(part));
    if (parts.size() != 5)
        throw InputError("sphere spec must be 'radius,subdivisions,cx,cy,cz': " + spec);
    SphereSpec s;
    s.radius = to_double(parts[0], "sphere spec");
    s.subdivisions = to_int(parts[1], "sphere spec");
    s.center = {to_double(parts[2], "sphere spec"), to_double(parts[3], "sphere spec"),
                to_double(parts[4], "sphere spec")};
    return s;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);

    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw InputError(path + ":" + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw InputError(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                             key + "'");
        kv.emplace(key, val);
    }

    RunConfig cfg;
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("dielectric.eps_p")) cfg.eps_p = to_double(*v, "dielectric.eps_p");
    if (auto v = take("dielectric.eps_w")) cfg.eps_w = to_double(*v, "dielectric.eps_w");
    if (auto v = take("dielectric.eps_inf")) cfg.eps_inf = to_double(*v, "dielectric.eps_inf");
    if (auto v = take("dielectric.lambda_w")) cfg.lambda_w = to_double(*v, "dielectric.lambda_w");

    if (auto v = take("solver.tol")) cfg.solver.rel_tolerance = to_double(*v, "solver.tol");
    if (auto v = take("solver.max_iter")) cfg.solver.max_iterations = to_int(*v, "solver.max_iter");
    if (auto v = take("solver.restart")) cfg.solver.restart = to_int(*v, "solver.restart");
    if (auto v = take("solver.picard_damping"))
        cfg.solver.picard_damping = to_double(*v, "solver.picard_damping");
    if (auto v = take("solver.picard_tol"))
        cfg.solver.picard_tolerance = to_double(*v, "solver.picard_tol");
    if (auto v = take("solver.picard_max_outer"))
        cfg.solver.picard_max_outer = to_int(*v, "solver.picard_max_outer");
    if (auto v = take("solver.dense_threshold"))
        cfg.solver.dense_threshold = to_int(*v, "solver.dense_threshold");
    if (auto v = take("quadrature.order"))
        cfg.solver.quadrature_order = to_int(*v, "quadrature.order");

    if (auto v = take("nlbc.alpha")) cfg.nlbc_alpha = to_double(*v, "nlbc.alpha");
    if (auto v = take("nlbc.beta")) cfg.nlbc_beta = to_double(*v, "nlbc.beta");
    if (auto v = take("nlbc.gamma")) cfg.nlbc_gamma = to_double(*v, "nlbc.gamma");
    if (auto v = take("nlbc.mu")) cfg.nlbc_mu = to_double(*v, "nlbc.mu");
    if (auto v = take("nlbc.en_jump_term"))
        cfg.nlbc_en_jump_term = to_bool(*v, "nlbc.en_jump_term");

    if (auto v = take("mesh.file")) cfg.mesh_file = *v;
    if (auto v = take("mesh.format")) cfg.mesh_format = *v;
    if (auto v = take("mesh.sphere")) cfg.sphere = *v;
    if (auto v = take("solute.pqr")) cfg.pqr_file = *v;
    if (auto v = take("solute.radius_scale"))
        cfg.radius_scale = to_double(*v, "solute.radius_scale");
    if (auto v = take("output.energy")) cfg.out_path = *v;
    if (auto v = take("output.surface")) cfg.surface_out_path = *v;
    if (auto v = take("output.trace")) cfg.trace_path = *v;

    if (!kv.empty())
        throw InputError(path + ": unknown key '" + kv.begin()->first + "'");

    // range checks at load, not first use
    cfg.solver.validate();
    if (cfg.eps_p || cfg.eps_w) cfg.dielectrics();
    if (cfg.mesh_format && *cfg.mesh_format != "off" && *cfg.mesh_format != "flat-tri")
        throw InputError("config: mesh.format must be 'off' or 'flat-tri'");
    if (!(cfg.radius_scale > 0.0))
        throw InputError("config: solute.radius_scale must be positive");
    if (cfg.mesh_file) require_file(*cfg.mesh_file, "mesh.file");
    if (cfg.pqr_file) require_file(*cfg.pqr_file, "solute.pqr");
    if (cfg.sphere) parse_sphere_spec(*cfg.sphere);
    return cfg;
}

std::string dump_config(const RunConfig& cfg) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
        out << buf;
    };
    if (cfg.eps_p) num("dielectric.eps_p", *cfg.eps_p);
    if (cfg.eps_w) num("dielectric.eps_w", *cfg.eps_w);
    num("dielectric.eps_inf", cfg.eps_inf);
    num("dielectric.lambda_w", cfg.lambda_w);
    num("solver.tol", cfg.solver.rel_tolerance);
    out << "solver.max_iter = " << cfg.solver.max_iterations << "\n";
    out << "solver.restart = " << cfg.solver.restart << "\n";
    num("solver.picard_damping", cfg.solver.picard_damping);
    num("solver.picard_tol", cfg.solver.picard_tolerance);
    out << "solver.picard_max_outer = " << cfg.solver.picard_max_outer << "\n";
    out << "solver.dense_threshold = " << cfg.solver.dense_threshold << "\n";
    out << "quadrature.order = " << cfg.solver.quadrature_order << "\n";
    if (cfg.nlbc_alpha) num("nlbc.alpha", *cfg.nlbc_alpha);
    if (cfg.nlbc_beta) num("nlbc.beta", *cfg.nlbc_beta);
    if (cfg.nlbc_gamma) num("nlbc.gamma", *cfg.nlbc_gamma);
    if (cfg.nlbc_mu) num("nlbc.mu", *cfg.nlbc_mu);
    if (cfg.nlbc_en_jump_term) out << "nlbc.en_jump_term = true\n";
    if (cfg.mesh_file) out << "mesh.file = " << *cfg.mesh_file << "\n";
    if (cfg.mesh_format) out << "mesh.format = " << *cfg.mesh_format << "\n";
    if (cfg.sphere) out << "mesh.sphere = " << *cfg.sphere << "\n";
    if (cfg.pqr_file) out << "solute.pqr = " << *cfg.pqr_file << "\n";
    num("solute.radius_scale", cfg.radius_scale);
    if (cfg.out_path) out << "output.energy = " << *cfg.out_path << "\n";
    if (cfg.surface_out_path) out << "output.surface = " << *cfg.surface_out_path << "\n";
    if (cfg.trace_path) out << "output.trace = " << *cfg.trace_path << "\n";
    return out.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& schema,
               const std::vector<std::vector<CsvCell>>& rows) {
    for (const auto& row : rows) {
        if (row.size() != schema.size())
            throw InputError("write_csv: row width does not match schema");
        for (const auto& cell : row)
            if (const double* d = std::get_if<double>(&cell); d && !std::isfinite(*d))
                throw InputError("write_csv: refusing to write non-finite value");
    }
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on all platforms
    if (!out) throw InputError("cannot write CSV: " + path);
    for (std::size_t i = 0; i < schema.size(); ++i)
        out << schema[i] << (i + 1 < schema.size() ? "," : "");
    out << '\n';
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const double* d = std::get_if<double>(&row[i])) {
                std::snprintf(buf, sizeof buf, "%.17g", *d);
                out << buf;
            } else if (const long long* l = std::get_if<long long>(&row[i])) {
                out << *l;
            } else {
                out << std::get<std::string>(row[i]);
            }
            out << (i + 1 < row.size() ? "," : "");
        }
        out << '\n';
    }
    if (!out) throw InputError("CSV write failed: " + path);
}

}  // namespace solvbem
