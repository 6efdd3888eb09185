#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "lmbo/errors.hpp"

using namespace lmbo;
using namespace lmbo::cli;

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "lattice-mbo");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("lmbo_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) {
        v.push_back(l);
    }
    return v;
}

ExperimentConfig parse(std::vector<std::string> args) {
    args.insert(args.begin(), "lattice-mbo");
    return parse_args(args);
}

}  // namespace

TEST_CASE("config round trip for every command") {
    const std::vector<std::vector<std::string>> cases = {
        {"simulate", "--shape", "parabola", "--kappa", "2.5", "--theta", "30", "--h", "0.01", "--mu", "0.75",
         "--steps", "3", "--bbox", "-1", "-1", "1", "0.25", "--output-dir", "x y"},
        {"simulate", "--preset", "subcritical", "--stride", "5"},
        {"velocity", "--mu", "0.3", "--kappa", "7", "--sweep", "s.csv", "--sweep-count", "11"},
        {"pinning", "--tol", "1e-6", "--check"},
        {"angle-sweep", "--mu", "0.5", "1", "--kappa", "3", "--deg-max", "10"},
        {"verify", "--suite", "kernel", "--seed", "42"},
    };
    const fs::path dir = scratch("roundtrip");
    fs::create_directories(dir);
    for (const auto& args : cases) {
        const ExperimentConfig a = parse(args);
        const fs::path file = dir / (args[0] + ".ini");
        std::ofstream(file) << serialize(a);
        const ExperimentConfig b = parse({args[0], "--config", file.string()});
        CAPTURE(serialize(a));
        CHECK(b == a);
        CHECK(serialize(b) == serialize(a));
    }
    fs::remove_all(dir);
}

TEST_CASE("flags override the config file") {
    const fs::path dir = scratch("override");
    fs::create_directories(dir);
    std::ofstream(dir / "v.ini") << "[velocity]\nmu = 2\nkappa = 3\n";
    const ExperimentConfig c = parse({"velocity", "--config", (dir / "v.ini").string(), "--kappa", "5"});
    CHECK(c.velocity.mu == 2.0);
    CHECK(c.velocity.kappa == 5.0);
    fs::remove_all(dir);
}

TEST_CASE("validation errors exit with status 1") {
    CHECK(invoke({"simulate", "--shape", "disk", "--h", "0.1"}).code == 1);
    CHECK(invoke({"simulate", "--shape", "disk", "--h", "0.1", "--tau", "0.01", "--mu", "1"}).code == 1);
    CHECK(invoke({"simulate", "--shape", "disk", "--h", "0.1", "--mu", "1", "--C", "2"}).code == 1);
    CHECK(invoke({"simulate", "--shape", "disk", "--h", "-0.1", "--mu", "1"}).code == 1);
    CHECK(invoke({"simulate", "--shape", "disk", "--h", "0.1", "--mu", "1", "--steps", "0"}).code == 1);
    CHECK(invoke({"simulate", "--shape", "blob", "--h", "0.1", "--mu", "1"}).code == 1);
    CHECK(invoke({"simulate", "--preset", "nope"}).code == 1);
    CHECK(invoke({"velocity", "--mu", "0"}).code == 1);
    CHECK(invoke({"pinning", "--tol", "0.5"}).code == 1);
    CHECK(invoke({"verify", "--suite", "everything"}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({}).code == 1);
    const Result r = invoke({"simulate", "--shape", "disk", "--h", "0.1"});
    CHECK(r.err.find("exactly one of --tau, --mu, or --gamma") != std::string::npos);
}

TEST_CASE("plans derive the step from tau, mu or gamma") {
    SimulateConfig c;
    c.shape = "disk";
    c.h = 1.0 / 32.0;
    c.mu = 0.5;
    SimulationPlan p = plan_simulation(c);
    CHECK(p.params.tau == doctest::Approx(0.5 / 32.0));
    CHECK(p.params.regime() == Regime::Critical);
    c.mu = SimulateConfig::kUnset;
    c.gamma = 2.0;
    c.scale_C = 0.5;
    p = plan_simulation(c);
    CHECK(p.params.tau == doctest::Approx(std::sqrt(1.0 / 16.0)));
    CHECK(p.params.regime() == Regime::Subcritical);
    c.gamma = SimulateConfig::kUnset;
    c.scale_C = SimulateConfig::kUnset;
    c.tau = 1.0 / 1024.0;
    p = plan_simulation(c);
    CHECK(p.params.regime() == Regime::Supercritical);
    CHECK(p.bbox.x0 == doctest::Approx(-1.0 - 4.0 / 32.0));
}

TEST_CASE("velocity command") {
    Result r = invoke({"velocity", "--mu", "1", "--kappa", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\nn0=0\n") != std::string::npos);
    r = invoke({"velocity", "--mu", "1", "--kappa", "0"});
    CHECK(r.out.find("\nn0=0\n") != std::string::npos);
    r = invoke({"velocity", "--mu", "500", "--kappa", "1"});
    CHECK(r.out.find("\nn0=500\n") != std::string::npos);
    CHECK(r.out.find("velocity=1\n") != std::string::npos);

    const fs::path dir = scratch("velocity");
    fs::create_directories(dir);
    r = invoke({"velocity", "--mu", "1", "--sweep", (dir / "a.csv").string(), "--consistency",
                (dir / "c.csv").string()});
    CHECK(r.code == 0);
    const auto sweep = lines(slurp(dir / "a.csv"));
    CHECK(sweep.size() == 101);
    CHECK(sweep[0] == "mu_kappa,n0");
    CHECK(sweep[1] == "0.10000000000000001,0");
    CHECK(lines(slurp(dir / "c.csv")).size() == 9);
    fs::remove_all(dir);
}

TEST_CASE("pinning command") {
    Result r = invoke({"pinning"});
    CHECK(r.code == 0);
    CHECK(r.out == "mu_kappa_star=0.8218\n");
    r = invoke({"pinning", "--tol", "1e-7", "--check"});
    CHECK(r.out.rfind("mu_kappa_star=0.821836", 0) == 0);
    CHECK(r.out.find(" positive\n") != std::string::npos);
    CHECK(r.out.find(" negative\n") != std::string::npos);
    CHECK(r.out.find("NOT") == std::string::npos);
}

TEST_CASE("verify command") {
    const Result r = invoke({"verify", "--suite", "velocity"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS velocity/sqrt(pi) identity") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
    const Result k = invoke({"verify", "--suite", "kernel"});
    CHECK(k.code == 0);
    CHECK(k.out.find("PASS kernel/normalization alpha=1000") != std::string::npos);
}

TEST_CASE("supercritical preset does not move") {
    const fs::path dir = scratch("super");
    const Result r = invoke({"simulate", "--preset", "supercritical", "--output-dir", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("regime=supercritical") != std::string::npos);
    CHECK(r.out.find("unchanged=yes") != std::string::npos);
    CHECK(slurp(dir / "snapshots" / "step_000000.pbm") == slurp(dir / "snapshots" / "step_000010.pbm"));
    CHECK(fs::exists(dir / "plot_evolution.py"));
    fs::remove_all(dir);
}

TEST_CASE("dumbbell preset pinches off") {
    const fs::path dir = scratch("dumbbell");
    const Result r = invoke({"simulate", "--preset", "dumbbell", "--output-dir", dir.string()});
    CHECK(r.code == 0);
    // components column of diagnostics.csv: 1 at the start, 2 once the neck breaks
    const auto rows = lines(slurp(dir / "diagnostics.csv"));
    REQUIRE(rows.size() > 2);
    std::vector<int> comps;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream row(rows[i]);
        std::string cell;
        for (int c = 0; c < 6; ++c) {
            std::getline(row, cell, ',');
        }
        comps.push_back(std::stoi(cell));
    }
    CHECK(comps.front() == 1);
    bool split = false;
    for (std::size_t k = 1; k < comps.size(); ++k) {
        split = split || (comps[k - 1] == 1 && comps[k] == 2);
    }
    CHECK(split);
    fs::remove_all(dir);
}

TEST_CASE("shrinking disk has a decreasing radius and deterministic output") {
    const fs::path a = scratch("disk_a");
    const fs::path b = scratch("disk_b");
    const std::vector<std::string> base = {"simulate", "--shape", "disk", "--radius", "0.5", "--h",
                                           "0.015625", "--gamma", "1.5", "--steps", "30", "--output-dir"};
    auto args = base;
    args.push_back(a.string());
    REQUIRE(invoke(args).code == 0);
    args.back() = b.string();
    REQUIRE(invoke(args).code == 0);
    const std::string csv = slurp(a / "diagnostics.csv");
    CHECK(csv == slurp(b / "diagnostics.csv"));
    const auto rows = lines(csv);
    REQUIRE(rows.size() > 3);
    double prev = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c1 = rows[i].find(',');
        const auto c2 = rows[i].find(',', c1 + 1);
        const auto c3 = rows[i].find(',', c2 + 1);
        const std::string rad = rows[i].substr(c2 + 1, c3 - c2 - 1);
        if (rad == "nan") {
            break;
        }
        const double v = std::stod(rad);
        CHECK(v < prev);
        prev = v;
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("numerical failures exit with status 2") {
    const fs::path dir = scratch("tight");
    const Result r = invoke({"simulate", "--shape", "disk", "--radius", "0.5", "--h", "0.03125", "--mu", "1",
                             "--bbox", "-0.5", "-0.5", "0.5", "0.5", "--output-dir", dir.string()});
    CHECK(r.code == 2);
    fs::remove_all(dir);
}

TEST_CASE("angle sweep writes 5 x 46 rows") {
    const fs::path dir = scratch("sweep");
    const Result r = invoke({"angle-sweep", "--output-dir", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("rows=230", 0) == 0);
    const auto rows = lines(slurp(dir / "angle_sweep.csv"));
    CHECK(rows.size() == 231);
    CHECK(fs::exists(dir / "plot_angle_sweep.py"));
    // theta = 0 agrees with the velocity command
    const Result v = invoke({"velocity", "--mu", "0.5", "--kappa", "4"});
    const auto n0 = v.out.substr(v.out.find("n0=") + 3, v.out.find('\n', v.out.find("n0=")) - v.out.find("n0=") - 3);
    CHECK(rows[1].rfind("0,0,1,0.5,4," + n0 + ",", 0) == 0);
    fs::remove_all(dir);
}
