// End-to-end checks of the command-line surface via subprocesses.
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

const char* cli = SOLVBEM_CLI_PATH;

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run(const std::string& args) {
    std::string out_path =
        (std::filesystem::temp_directory_path() / "cli_stdout.txt").string();
    std::string cmd = std::string(cli) + " " + args + " > " + out_path + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::filesystem::remove(out_path);
    return {WEXITSTATUS(rc), ss.str()};
}

std::string write_temp(const char* name, const std::string& content) {
    std::string path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

double energy_from_summary(const std::string& csv) {
    // model,panels,energy_kcal_mol,... on the second line
    auto nl = csv.find('\n');
    std::string row = csv.substr(nl + 1);
    std::istringstream ss(row);
    std::string tok;
    std::getline(ss, tok, ',');
    std::getline(ss, tok, ',');
    std::getline(ss, tok, ',');
    return std::stod(tok);
}

}  // namespace

TEST_CASE("solve pcm on the Born sphere through the CLI") {
    std::string pqr = write_temp("cli_born.pqr", "ATOM 1 Q ION 1 0 0 0 1.0 2.0\n");
    CliResult r = run("solve pcm --sphere 2,3,0,0,0 --pqr " + pqr +
                      " --eps-p 1 --eps-w 80");
    CHECK(r.exit_code == 0);
    double e = energy_from_summary(r.out);
    CHECK(std::abs(e - (-81.9782)) < 0.02 * 81.9782);
    std::filesystem::remove(pqr);
}

TEST_CASE("nlbc without parameters is an input error (exit 1)") {
    std::string pqr = write_temp("cli_born2.pqr", "ATOM 1 Q ION 1 0 0 0 1.0 2.0\n");
    CliResult r = run("solve nlbc --sphere 2,2,0,0,0 --pqr " + pqr +
                      " --eps-p 1 --eps-w 80");
    CHECK(r.exit_code == 1);
    std::filesystem::remove(pqr);
}

TEST_CASE("solver non-convergence maps to exit 2") {
    std::string pqr = write_temp("cli_born3.pqr", "ATOM 1 Q ION 1 0 0 0 1.0 2.0\n");
    std::string cfg = write_temp("cli_hard.cfg",
                                 "dielectric.eps_p = 1\n"
                                 "dielectric.eps_w = 80\n"
                                 "solver.max_iter = 1\n"
                                 "solver.tol = 1e-14\n");
    CliResult r = run("solve pcm --sphere 2,2,0,0,0 --pqr " + pqr + " --config " + cfg);
    CHECK(r.exit_code == 2);
    std::filesystem::remove(pqr);
    std::filesystem::remove(cfg);
}

TEST_CASE("nonlocal with lambda 0 delegates to pcm") {
    std::string pqr = write_temp("cli_born4.pqr", "ATOM 1 Q ION 1 0 0 0 1.0 2.0\n");
    CliResult nl = run("solve nonlocal --sphere 2,2,0,0,0 --pqr " + pqr +
                       " --eps-p 1 --eps-w 80 --lambda-w 0");
    CliResult pc = run("solve pcm --sphere 2,2,0,0,0 --pqr " + pqr +
                       " --eps-p 1 --eps-w 80");
    CHECK(nl.exit_code == 0);
    CHECK(energy_from_summary(nl.out) == energy_from_summary(pc.out));
    std::filesystem::remove(pqr);
}

TEST_CASE("unknown model and missing solute are input errors") {
    CHECK(run("solve bogus --sphere 2,2,0,0,0").exit_code != 0);
    CHECK(run("solve pcm --sphere 2,2,0,0,0 --eps-p 1 --eps-w 80").exit_code == 1);
}

TEST_CASE("eps_p sweep ordering") {
    std::string pqr = write_temp("cli_fig2.pqr", "ATOM 1 Q ION 1 0 0 12.0 1.0 1.0\n");
    CliResult r = run("sweep pcm --param eps_p --values 2,4 --sphere 24,2,0,0,0 --pqr " +
                      pqr + " --eps-p 2 --eps-w 80");
    REQUIRE(r.exit_code == 0);
    std::istringstream ss(r.out);
    std::vector<double> energies;
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        energies.push_back(std::stod(line.substr(comma + 1)));
    }
    REQUIRE(energies.size() == 2);
    CHECK(std::abs(energies[0]) > std::abs(energies[1]));  // eps_p 2 vs 4
    std::filesystem::remove(pqr);
}

TEST_CASE("lambda sweep monotone with oracle endpoints") {
    std::string pqr = write_temp("cli_c3.pqr", "ATOM 1 Q ION 1 0 0 1.0 1.0 1.0\n");
    std::string out =
        (std::filesystem::temp_directory_path() / "cli_sweep.csv").string();
    CliResult r = run("sweep nonlocal --param lambda_w --values 0.001,1,10,10000 "
                      "--sphere 2,2,0,0,0 --pqr " +
                      pqr + " --eps-p 1 --eps-w 80 --eps-inf 1.8 --out " + out);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> e;
    while (std::getline(in, line)) {
        auto comma = line.find(',');
        e.push_back(std::stod(line.substr(comma + 1)));
    }
    REQUIRE(e.size() == 4);
    for (std::size_t k = 1; k < e.size(); ++k) CHECK(std::abs(e[k]) < std::abs(e[k - 1]));

    // endpoints against the closed-form local limits (coarse mesh: 5%)
    CliResult kw_w = run("oracle kirkwood --q 1 --a 2 --d 1 --eps-p 1 --eps-w 80");
    CliResult kw_i = run("oracle kirkwood --q 1 --a 2 --d 1 --eps-p 1 --eps-w 1.8");
    double ew = std::stod(kw_w.out.substr(kw_w.out.find('\n') + 1));
    double ei = std::stod(kw_i.out.substr(kw_i.out.find('\n') + 1));
    CHECK(std::abs(e.front() - ew) < 0.05 * std::abs(ew));
    CHECK(std::abs(e.back() - ei) < 0.05 * std::abs(ei));
    std::filesystem::remove(pqr);
    std::filesystem::remove(out);
}

TEST_CASE("q sweep through zero under nlbc") {
    std::string pqr = write_temp("cli_q.pqr", "ATOM 1 Q ION 1 0 0 0 1.0 2.0\n");
    CliResult r = run("sweep nlbc --param q --values -1,0,1 --sphere 2,2,0,0,0 --pqr " +
                      pqr +
                      " --eps-p 2 --eps-w 80 --nlbc-alpha 0.5 --nlbc-beta 50 "
                      "--nlbc-gamma 0 --nlbc-mu 0");
    REQUIRE(r.exit_code == 0);
    std::istringstream ss(r.out);
    std::string line;
    std::getline(ss, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
        rows.push_back(row);
    }
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == 0.0);
    CHECK(rows[1][1] == 0.0);  // energy exactly zero at q = 0
    CHECK(std::abs(rows[0][1]) > std::abs(rows[2][1]));  // negative charge stronger
    std::filesystem::remove(pqr);
}

TEST_CASE("convergence driver emits an empty order for a single level") {
    std::string pqr = write_temp("cli_conv.pqr", "ATOM 1 Q ION 1 0 0 0 1.0 2.0\n");
    CliResult r = run("convergence pcm --subdivisions 2 --sphere 2,0,0,0,0 --pqr " + pqr +
                      " --eps-p 1 --eps-w 80");
    REQUIRE(r.exit_code == 0);
    std::istringstream ss(r.out);
    std::string header, row;
    std::getline(ss, header);
    std::getline(ss, row);
    CHECK(row.back() == ',');  // trailing empty order column
    std::filesystem::remove(pqr);
}

TEST_CASE("surface and trace outputs are written") {
    std::string pqr = write_temp("cli_surf.pqr", "ATOM 1 Q ION 1 0 0 0 1.0 2.0\n");
    auto tmp = std::filesystem::temp_directory_path();
    std::string surf = (tmp / "surf.csv").string();
    std::string trace = (tmp / "trace.csv").string();
    CliResult r = run("solve pcm --sphere 2,2,0,0,0 --pqr " + pqr +
                      " --eps-p 1 --eps-w 80 --surface-out " + surf + " --trace-out " +
                      trace);
    REQUIRE(r.exit_code == 0);
    std::ifstream sf(surf);
    std::string header;
    std::getline(sf, header);
    CHECK(header == "panel_id,cx,cy,cz,area,sigma");
    int rows = 0;
    for (std::string line; std::getline(sf, line);) ++rows;
    CHECK(rows == 320);
    std::ifstream tf(trace);
    std::getline(tf, header);
    CHECK(header == "outer_iter,inner_iter,relative_residual");
    std::filesystem::remove(pqr);
    std::filesystem::remove(surf);
    std::filesystem::remove(trace);
}
