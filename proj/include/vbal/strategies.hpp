#pragma once

#include <optional>
#include <string_view>

#include "vbal/game.hpp"
#include "vbal/rng.hpp"

namespace vbal {

enum class StrategyKind { random, power_greedy, cosh_greedy, majority, combined };

/// "random", "power", "cosh", "majority", "combined".
std::string_view to_string(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view name);

/// Which rule produced a sign: 1 = potential greedy, 2 = majority.
enum class Rule { rule1, rule2, random };
std::string_view to_string(Rule rule);

struct StepDiagnostics {
    int x = 1;
    double delta_phi = 0.0;  // potential after the chosen move minus before
    double L = 0.0;
    double Q = 0.0;
    bool tie = false;
    bool breach = false;
    bool recolored = false;
    Rule rule_used = Rule::random;
};

// Strategies never see the horizon T: they get the state, the arriving
// vector, their parameters and the trial's random stream, nothing else.
// The stream is touched only on ties (and every round by the random rule).

int choose_sign_random(RngStream& rng);

/// Sign minimizing the masked power potential after the move. Bitwise-equal
/// candidates are a tie and go to the stream; if both moves breach, the
/// smaller (breach count, max |d|) wins.
StepDiagnostics choose_sign_power_greedy(const GameState& state, const SignVector& v,
                                         const StrategyParams& params, RngStream& rng);

/// Same rule on sum_i cosh(lambda d_i), lambda = 1/(c_cosh sqrt(n)).
StepDiagnostics choose_sign_cosh_greedy(const GameState& state, const SignVector& v,
                                        const StrategyParams& params, RngStream& rng);

/// Each nonzero coordinate votes -sign(d_j) v_j; strict majority wins, else random.
StepDiagnostics choose_sign_majority(const GameState& state, const SignVector& v, RngStream& rng);

/// Odd rounds (t+1 odd): power greedy on green coordinates. Even rounds: majority on all.
StepDiagnostics choose_sign_combined(const GameState& state, const SignVector& v,
                                     const StrategyParams& params, RngStream& rng);

/// Red coordinates at 0 turn green; then, if the masked power potential
/// exceeds H, every coordinate turns red and a new phase starts.
/// Returns true when a new phase started.
bool recolor(GameState& state, const StrategyParams& params);

class Strategy {
public:
    Strategy(StrategyKind kind, StrategyParams params) : kind_(kind), params_(params) {}

    StrategyKind kind() const { return kind_; }
    const StrategyParams& params() const { return params_; }

    StepDiagnostics choose(const GameState& state, const SignVector& v, RngStream& rng) const;

    /// Post-step bookkeeping (recoloring for the combined strategy).
    /// Returns the recolored flag.
    bool after_step(GameState& state) const;

private:
    StrategyKind kind_;
    StrategyParams params_;
};

}  // namespace vbal
