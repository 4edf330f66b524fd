#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vbal/game.hpp"

namespace vbal {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Deterministic invariant checks; each is a pure function of its seed.

CheckResult check_phi_zero(std::size_t max_n = 1024);
CheckResult check_parity(std::size_t trajectories, std::uint64_t seed);
CheckResult check_greedy_dominance(std::size_t trajectories, std::uint64_t seed);
CheckResult check_class_count_bound(std::size_t states, std::uint64_t seed);
CheckResult check_taylor_sweep(const std::vector<std::size_t>& dims);
CheckResult check_pz_lower_bound(std::size_t vectors, std::size_t max_m, std::uint64_t seed);
CheckResult check_spread_maximality(std::size_t vectors, std::size_t max_m, std::uint64_t seed);
CheckResult check_online_dominance(std::size_t max_n, std::size_t max_T, std::size_t seeds);

struct VerifyOptions {
    std::uint64_t seed = 2024;
    bool flip_class_boundary = false;  // fault hook for self-testing the checker
};

/// The full suite at the sizes the `verify` subcommand uses.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

/// Random state with power potential <= H (rejection sampling over several families).
GameState random_bounded_state(RngStream& rng, std::size_t n, const StrategyParams& params);

}  // namespace vbal
