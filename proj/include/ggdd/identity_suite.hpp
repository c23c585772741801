#pragma once

#include "ggdd/grid.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ggdd {

enum class IdentityMode { Periodic, Either };

struct IdentityCase {
    std::string id;
    std::string formula;
    IdentityMode mode;
    std::string input_rank;
};

struct IdentityOptions {
    // Negative control: flips the sign of every right-hand side.
    bool negate_rhs = false;
    // Cutoff rules only: use phi = 1 instead of the raised-cosine bump.
    bool constant_phi = false;
};

const std::vector<IdentityCase>& identity_registry();

// Max relative residual over trials seeds and the 000/111 parity types.
double run_identity(const std::string& id, const Grid& g, std::uint64_t seed, int trials,
                    const IdentityOptions& opt = {});
double run_cutoff_rule(const std::string& id, const Grid& g, std::uint64_t seed, const IdentityOptions& opt = {});
double run_second_derivative_reconstruction(const Grid& g, std::uint64_t seed, const IdentityOptions& opt = {});

}  // namespace ggdd
