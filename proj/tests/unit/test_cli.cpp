#include "doctest.h"

#include "ggdd/cli.hpp"
#include "ggdd/field_io.hpp"
#include "ggdd/manufactured.hpp"

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ggdd;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ggdd");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ggdd_cli_" + name)).string();
}

}  // namespace

TEST_CASE("flags override the config file") {
    const std::string cfg = temp_path("a.cfg");
    {
        std::ofstream os(cfg);
        os << "# comment\ngrid=5\ncomplex=derham\ntopology=torus\n";
    }
    auto r = cli({"cohomology", "--config", cfg});
    REQUIRE(r.code == kExitPass);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["grid"] == "5x5x5 periodic");
    r = cli({"cohomology", "--config", cfg, "--grid", "4", "--topology", "box"});
    REQUIRE(r.code == kExitPass);
    j = nlohmann::json::parse(r.out);
    CHECK(j["grid"] == "4x4x4 zero");
    CHECK(j["dims"] == std::vector<int>{0, 0, 0, 1});
    std::remove(cfg.c_str());
}

TEST_CASE("config errors") {
    CHECK(cli({"infsup", "--config", temp_path("missing.cfg")}).code == kExitConfig);
    CHECK(cli({"infsup", "--grid", "x"}).code == kExitConfig);
    CHECK(cli({"solve", "--method", "decomposed2d", "--case", "sin2-3d"}).code == kExitConfig);
    CHECK(cli({"solve", "--method", "primal", "--case", "nope"}).code == kExitConfig);
    CHECK(cli({"constants", "--mode", "periodic"}).code == kExitConfig);
    CHECK(cli({"cohomology", "--topology", "sphere"}).code == kExitConfig);
    CHECK(cli({"cohomology", "--grid", "40"}).code == kExitConfig);
    CHECK(cli({}).code == kExitConfig);
}

TEST_CASE("solve writes a solution and a deterministic report") {
    const std::string fld = temp_path("u.fld");
    const auto a = cli({"solve", "--method", "ddz", "--case", "sin2-3d", "--grid", "8", "--out", fld});
    REQUIRE(a.code == kExitPass);
    const Field u = read_field(fld);
    const auto c = get_case("sin2-3d");
    CHECK(u.space()->compatible(*sample_u(c, c.grid(8)).space()));
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["error_l2"].get<double>() == doctest::Approx(0.019515).epsilon(1e-4));
    const auto b = cli({"solve", "--method", "ddz", "--case", "sin2-3d", "--grid", "8", "--out", fld});
    auto strip = [](nlohmann::json x) {
        x.erase("seconds");
        x.erase("solver_reports");
        return x;
    };
    CHECK(strip(j) == strip(nlohmann::json::parse(b.out)));
    std::remove(fld.c_str());
}

TEST_CASE("identity report") {
    const auto r = cli({"verify-identities", "--grid", "8", "--seed", "3"});
    CHECK(r.code == kExitPass);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["identities"].size() >= 17);
    CHECK(j["all_pass"] == true);
    CHECK(cli({"verify-identities", "--mode", "zero"}).code == kExitConfig);
}
