#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ggdd {

enum ExitCode { kExitPass = 0, kExitAssertion = 2, kExitConfig = 3, kExitSolver = 4 };

struct RunConfig {
    std::string command;
    std::vector<int> grids;
    std::string mode;  // periodic | zero; empty picks the command default
    std::uint64_t seed = 1;
    double tol = 1e-10;
    std::string case_name;
    std::string method;
    std::string which;
    std::string complex_name = "derham";
    std::string topology = "box";
    std::string out;
    std::string report;
    bool wrong_sign = false;  // test hook: negate the right-hand side of A.iii
};

// Parses argv (flags override the --config file) and runs the command; returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_command(const RunConfig& cfg, std::ostream& out);

}  // namespace ggdd
