#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "szego/cli.hpp"

namespace fs = std::filesystem;
using szego::cli::Command;
using szego::cli::JobConfig;

namespace {

fs::path workdir() {
    static const fs::path p = [] {
        auto d = fs::temp_directory_path() / "szegolab-test";
        fs::create_directories(d);
        return d;
    }();
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& body) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(body);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TEST_CASE("curve command: format contract") {
    JobConfig cfg;
    cfg.command = Command::curve;
    cfg.t = 0.1;
    cfg.resolution = 512;
    cfg.out = (workdir() / "curve.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);

    const auto rows = parse_csv(slurp(cfg.out));
    REQUIRE(rows.size() == 513); // header + 512 samples
    CHECK(rows[0] == std::vector<std::string>{"theta", "re", "im", "level_residual"});
    for (size_t i = 1; i < rows.size(); i += 64)
        CHECK(std::stod(rows[i][3]) < 1e-12);

    // sidecar carries the schema tag and the command line parameters
    const auto meta = nlohmann::json::parse(slurp(cfg.out + ".meta.json"));
    CHECK(meta["schema"] == "szego-lab/1");
    CHECK(meta["command"] == "curve");
    CHECK(meta["parameters"]["t"] == 0.1);
}

TEST_CASE("deterministic byte-identical output") {
    JobConfig cfg;
    cfg.command = Command::moments;
    cfg.t = 0.4;
    cfg.kmin = -3;
    cfg.kmax = 3;
    cfg.out = (workdir() / "m1.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);
    const std::string first = slurp(cfg.out);
    const std::string meta1 = slurp(cfg.out + ".meta.json");

    cfg.out = (workdir() / "m2.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);
    CHECK(slurp(cfg.out) == first);
    CHECK(slurp(cfg.out + ".meta.json") == meta1);
}

TEST_CASE("moments command: cross-validated table") {
    JobConfig cfg;
    cfg.command = Command::moments;
    cfg.t = 0.4;
    cfg.kmin = -5;
    cfg.kmax = 5;
    cfg.out = (workdir() / "moments.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);
    const auto rows = parse_csv(slurp(cfg.out));
    REQUIRE(rows.size() == 12); // header + 11 moments
    for (size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][4]) < 1e-8);
}

TEST_CASE("penner command: identity in the sidecar") {
    JobConfig cfg;
    cfg.command = Command::penner;
    cfg.n = 10;
    cfg.g = 0.1;
    cfg.out = (workdir() / "penner.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);

    const auto rows = parse_csv(slurp(cfg.out));
    REQUIRE(rows.size() == 11);
    const auto meta = nlohmann::json::parse(slurp(cfg.out + ".meta.json"));
    const auto& ladder = meta["summary"]["ladder"];
    REQUIRE(ladder.size() == 1);
    CHECK(std::abs(double(ladder[0]["recip_sum_re"]) + 10.0) < 1e-10);
    CHECK(std::abs(double(ladder[0]["recip_sum_im"])) < 1e-10);
}

TEST_CASE("zeros command: ladder with distances") {
    JobConfig cfg;
    cfg.command = Command::zeros;
    cfg.t = 0.0;
    cfg.kind = "shift_c";
    cfg.param = 1.0;
    cfg.n_ladder = {10, 20};
    cfg.out = (workdir() / "zeros.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);

    const auto rows = parse_csv(slurp(cfg.out));
    REQUIRE(rows.size() == 31); // header + 10 + 20
    CHECK(rows[0] == std::vector<std::string>{"n", "alpha", "re", "im", "dist_to_curve"});
    const auto meta = nlohmann::json::parse(slurp(cfg.out + ".meta.json"));
    CHECK(double(meta["summary"]["ladder"][1]["max_dist"]) <
          double(meta["summary"]["ladder"][0]["max_dist"]));
}

TEST_CASE("trajectory command: closure metrics") {
    JobConfig cfg;
    cfg.command = Command::trajectory;
    cfg.t = 0.4;
    cfg.step = 1e-2;
    cfg.out = (workdir() / "traj.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);
    const auto meta = nlohmann::json::parse(slurp(cfg.out + ".meta.json"));
    CHECK(meta["summary"]["closed"] == true);
    CHECK(double(meta["summary"]["closure_gap"]) < 1e-6);
    CHECK(std::abs(double(meta["summary"]["winding"]) - 1.0) < 1e-6);
    CHECK(double(meta["summary"]["level_drift"]) < 1e-8);
}

TEST_CASE("flow command: streamline bundle") {
    JobConfig cfg;
    cfg.command = Command::flow;
    cfg.t = 0.1;
    cfg.n = 4;
    cfg.step = 2e-3;
    cfg.max_steps = 30000;
    cfg.out = (workdir() / "flow.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);
    const auto meta = nlohmann::json::parse(slurp(cfg.out + ".meta.json"));
    REQUIRE(meta["summary"]["streams"].size() == 4);
    for (const auto& s : meta["summary"]["streams"])
        CHECK(double(s["invariant_drift"]) < 1e-6 * double(s["arclength"]));
}

TEST_CASE("cuts command emits endpoints and arcs") {
    JobConfig cfg;
    cfg.command = Command::cuts;
    cfg.t = 0.1;
    cfg.cut_kmax = 2;
    cfg.resolution = 64;
    cfg.format = szego::cli::Format::json;
    cfg.out = (workdir() / "cuts.json").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);
    const auto j = nlohmann::json::parse(slurp(cfg.out));
    CHECK(j["schema"] == "szego-lab/1");
    const auto cs = szego::analyticity_cuts(0.1, 2);
    const auto meta = nlohmann::json::parse(slurp(cfg.out + ".meta.json"));
    CHECK(std::abs(double(meta["summary"]["x1"]) - cs.x1) == 0.0);
    CHECK(std::abs(double(meta["summary"]["x2"]) - cs.x2) == 0.0);
}

TEST_CASE("field command covers both regions") {
    JobConfig cfg;
    cfg.command = Command::field;
    cfg.t = 0.4;
    cfg.resolution = 24;
    cfg.out = (workdir() / "field.csv").string();
    REQUIRE(szego::cli::run(cfg) == szego::cli::exit_ok);
    const std::string body = slurp(cfg.out);
    CHECK(body.find("interior") != std::string::npos);
    CHECK(body.find("exterior") != std::string::npos);
}

TEST_CASE("distinct exit codes") {
    JobConfig cfg;
    cfg.command = Command::curve;
    cfg.resolution = 4; // below the floor
    cfg.out = (workdir() / "x.csv").string();
    CHECK(szego::cli::run(cfg) == szego::cli::exit_params);

    cfg.resolution = 64;
    cfg.out = (workdir() / "no-such-dir" / "x.csv").string();
    CHECK(szego::cli::run(cfg) == szego::cli::exit_io);

    cfg.out = (workdir() / "x.csv").string();
    cfg.t = -1.0;
    CHECK(szego::cli::run(cfg) == szego::cli::exit_params);
}

#ifdef SZEGOLAB_BIN
TEST_CASE("binary smoke test") {
    const std::string out = (workdir() / "bin-curve.csv").string();
    const std::string cmd = std::string(SZEGOLAB_BIN) +
                            " curve --t 0.1 --resolution 64 --out " + out;
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out));
    CHECK(fs::exists(out + ".meta.json"));

    // unknown subcommand exits nonzero
    const std::string bad = std::string(SZEGOLAB_BIN) + " frobnicate 2>/dev/null";
    CHECK(std::system(bad.c_str()) != 0);
}
#endif
