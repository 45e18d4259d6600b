#include "ocl/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ocl;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "ocl");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("ocl_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("grid parsing") {
    CHECK(cli::parse_rho_grid("2") == std::vector<double>{2.0});
    CHECK(cli::parse_rho_grid("0,1.5,10") == std::vector<double>{0.0, 1.5, 10.0});
    const auto g = cli::parse_rho_grid("1:100:3");
    REQUIRE(g.size() == 3);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g[2] == 100.0);
    CHECK(std::isinf(cli::parse_real_list("0.5,inf")[1]));
    CHECK(cli::parse_size_list("5,10") == std::vector<std::size_t>{5, 10});
    CHECK_THROWS(cli::parse_rho_grid("0:10:5"));
    CHECK_THROWS(cli::parse_rho_grid("1:10"));
    CHECK_THROWS(cli::parse_size_list("2.5"));
    CHECK_THROWS(cli::parse_real_list("abc"));
}

TEST_CASE("bound ping example row") {
    const auto r = run({"bound", "ping", "--n", "10", "--rho", "2", "--t", "inf", "--sigma2", "1"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"model", "N", "rho", "t", "sigma2", "value"});
    CHECK(rows[1][3] == "inf");
    CHECK(std::stod(rows[1][5]) == doctest::Approx(0.045).epsilon(1e-15));
}

TEST_CASE("bound sis at t=0 without communication") {
    const auto r = run({"bound", "sis", "--n", "10", "--rho", "0", "--t", "0"});
    CHECK(r.code == 0);
    CHECK(std::stod(parse_csv(r.out)[1][5]) == doctest::Approx(0.09).epsilon(1e-15));
}

TEST_CASE("bound sis-approx rejects small systems") {
    const auto r = run({"bound", "sis-approx", "--n", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("N must be >= 4") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("bound CSV round-trips the grid") {
    const auto r = run({"bound", "sis", "--n", "4,9", "--rho", "0.3:700:7", "--t", "0.25,inf"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1 + 2 * 7 * 2);
    const auto rhos = cli::parse_rho_grid("0.3:700:7");
    std::size_t row = 1;
    for (std::string n : {"4", "9"})
        for (std::string t : {"0.25", "inf"})
            for (double rho : rhos) {
                CHECK(rows[row][1] == n);
                CHECK(rows[row][3] == t);
                CHECK(std::stod(rows[row][2]) == rho);
                ++row;
            }
}

TEST_CASE("simulate example is reproducible") {
    const std::vector<std::string> args = {"simulate", "gossip", "--model", "gossip", "--n", "10",
                                           "--rho", "10", "--events", "200", "--realizations",
                                           "500", "--seed", "7"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto rows = parse_csv(a.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][4] == "final");
    CHECK(rows[1][8] == "500");
    CHECK(rows[1][9] == "7");
    CHECK(run(args).out == a.out);

    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "4"});
    CHECK(run(threaded).out == a.out);
}

TEST_CASE("simulate optimal under ping tracks the bound") {
    const auto r = run({"simulate", "optimal", "--model", "ping", "--n", "10", "--rho", "2",
                        "--horizon", "6", "--realizations", "3000", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto row = parse_csv(r.out)[1];
    const double mean = std::stod(row[6]);
    const double se = std::stod(row[7]);
    CHECK(std::abs(mean - 0.045) < 3.0 * se);
}

TEST_CASE("simulate rejects bad configurations") {
    CHECK(run({"simulate", "optimal", "--realizations", "0"}).code == 2);
    CHECK(run({"simulate", "gossip", "--model", "ping"}).code == 2);
    CHECK(run({"simulate", "optimal", "--events", "5", "--horizon", "2"}).code == 2);
    CHECK(run({"simulate", "optimal", "--n", "1"}).code == 2);
    CHECK(run({"simulate", "optimal", "--dist", "cauchy"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("help exits cleanly") {
    const auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("--out writes a file") {
    const auto dir = scratch_dir("out");
    std::filesystem::create_directories(dir);
    const auto file = (dir / "ping.csv").string();
    const auto r = run({"bound", "ping", "--rho", "1,2", "--out", file});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(file);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(parse_csv(content.str()).size() == 3);
    CHECK(run({"bound", "ping", "--out", "/nonexistent-dir/x.csv"}).code == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config file with command-line precedence") {
    const auto dir = scratch_dir("config");
    std::filesystem::create_directories(dir);
    const auto cfg = (dir / "run.cfg").string();
    std::ofstream(cfg) << "# bound settings\nn = 10\nrho=2\nt=inf\nsigma2 = 4\n";
    auto r = run({"bound", "ping", "--config", cfg});
    REQUIRE(r.code == 0);
    auto row = parse_csv(r.out)[1];
    CHECK(row[1] == "10");
    CHECK(std::stod(row[5]) == doctest::Approx(0.18));

    r = run({"bound", "ping", "--config", cfg, "--sigma2", "1"});
    row = parse_csv(r.out)[1];
    CHECK(std::stod(row[5]) == doctest::Approx(0.045));

    CHECK(run({"bound", "ping", "--config", (dir / "missing.cfg").string()}).code == 2);
    std::ofstream(cfg) << "rho\n";
    CHECK(run({"bound", "ping", "--config", cfg}).code == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("selftest") {
    const auto a = run({"selftest", "--seed", "4"});
    CHECK(a.code == 0);
    CHECK(a.out.find("[FAIL]") == std::string::npos);
    CHECK(run({"selftest", "--seed", "4"}).out == a.out);

    const auto bad = run({"selftest", "--corrupt-generator"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("generator-column-sums") != std::string::npos);
}

TEST_CASE("reproduce fig3") {
    const auto dir = scratch_dir("fig3");
    const auto r = run({"reproduce", "fig3", "--out-dir", dir.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(dir / "fig3_ping.csv");
    std::stringstream content;
    content << in.rdbuf();
    const auto rows = parse_csv(content.str());
    std::size_t at_zero = 0;
    std::set<std::string> times;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        times.insert(rows[k][3]);
        if (rows[k][3] == "0") {
            CHECK(std::stod(rows[k][5]) == doctest::Approx(0.09).epsilon(1e-15));
            ++at_zero;
        }
    }
    CHECK(at_zero > 10);
    CHECK(times.size() >= 4);
    CHECK(times.count("inf") == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reproduce fig5 holds exact and approximate curves") {
    const auto dir = scratch_dir("fig5");
    REQUIRE(run({"reproduce", "fig5", "--out", dir.string()}).code == 0);
    std::ifstream in(dir / "fig5_sis.csv");
    std::stringstream content;
    content << in.rdbuf();
    std::set<std::string> models;
    for (const auto& row : parse_csv(content.str())) models.insert(row[0]);
    CHECK(models.count("sis") == 1);
    CHECK(models.count("sis-approx") == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reproduce errors") {
    CHECK(run({"reproduce", "fig3", "--out-dir", "/proc/ocl-not-writable"}).code == 2);
    CHECK(run({"reproduce", "fig4", "--out-dir", scratch_dir("fig4").string()}).code == 2);
    CHECK(run({"reproduce", "fig3"}).code == 2);
}

namespace {

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& file) {
    std::ifstream in(file);
    std::stringstream content;
    content << in.rdbuf();
    auto rows = parse_csv(content.str());
    rows.erase(rows.begin());
    return rows;
}

}  // namespace

TEST_CASE("reproduce fig6: SIS above ping for every size") {
    const auto dir = scratch_dir("fig6");
    REQUIRE(run({"reproduce", "fig6", "--out-dir", dir.string()}).code == 0);
    std::map<std::pair<std::string, std::string>, double> ping, sis;
    for (const auto& row : read_rows(dir / "fig6_bounds.csv"))
        (row[0] == "ping" ? ping : sis)[{row[1], row[2]}] = std::stod(row[5]);
    CHECK(ping.size() == 33);
    CHECK(sis.size() == 33);
    for (const auto& [key, value] : sis) CHECK(value >= ping.at(key));
    CHECK(read_rows(dir / "fig6_gossip.csv").size() == 33);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reproduce fig7: gossip nearly flat in N at small rho, bound decreasing") {
    const auto dir = scratch_dir("fig7");
    REQUIRE(run({"reproduce", "fig7", "--out-dir", dir.string()}).code == 0);
    std::map<double, std::vector<double>> bound, gossip;  // N = 5..20 in order
    for (const auto& row : read_rows(dir / "fig7_bounds.csv"))
        if (std::stoi(row[1]) >= 5) bound[std::stod(row[2])].push_back(std::stod(row[5]));
    for (const auto& row : read_rows(dir / "fig7_gossip.csv"))
        if (std::stoi(row[2]) >= 5) gossip[std::stod(row[3])].push_back(std::stod(row[6]));
    REQUIRE(bound.size() == 3);
    for (const auto& [rho, values] : bound) {
        CAPTURE(rho);
        REQUIRE(values.size() == 16);
        for (std::size_t k = 1; k < values.size(); ++k) CHECK(values[k] < values[k - 1]);
    }
    const auto& small = gossip.at(1.0);
    const auto [lo, hi] = std::minmax_element(small.begin(), small.end());
    double mean = 0.0;
    for (double m : small) mean += m / static_cast<double>(small.size());
    CHECK((*hi - *lo) / mean < 0.15);
    std::filesystem::remove_all(dir);
}
