#include "vbal/strategies.hpp"

#include <cmath>
#include <limits>

#include "vbal/potential.hpp"

namespace vbal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::random: return "random";
        case StrategyKind::power_greedy: return "power";
        case StrategyKind::cosh_greedy: return "cosh";
        case StrategyKind::majority: return "majority";
        case StrategyKind::combined: return "combined";
    }
    return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
    for (auto k : {StrategyKind::random, StrategyKind::power_greedy, StrategyKind::cosh_greedy,
                   StrategyKind::majority, StrategyKind::combined}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view to_string(Rule rule) {
    switch (rule) {
        case Rule::rule1: return "1";
        case Rule::rule2: return "2";
        case Rule::random: return "random";
    }
    return "?";
}

int choose_sign_random(RngStream& rng) { return rng.next_sign(); }

StepDiagnostics choose_sign_power_greedy(const GameState& state, const SignVector& v,
                                         const StrategyParams& params, RngStream& rng) {
    StepDiagnostics diag;
    diag.rule_used = Rule::rule1;

    const PowerValue before = power_potential_value(state, params.c, params.p);
    const PowerValue plus = power_potential_after(state, v, +1, params.c, params.p);
    const PowerValue minus = power_potential_after(state, v, -1, params.c, params.p);

    const int cmp = compare(plus, minus);
    if (cmp == 0) {
        diag.tie = true;
        diag.x = rng.next_sign();
    } else {
        diag.x = cmp < 0 ? +1 : -1;
    }
    const PowerValue& chosen = diag.x > 0 ? plus : minus;
    diag.breach = !chosen.finite();
    diag.delta_phi = chosen.phi - before.phi;

    if (before.finite()) {
        const LQ lq = lq_terms(state, v, params.c, params.p);
        diag.L = lq.L;
        diag.Q = lq.Q;
    } else {
        diag.L = kNaN;
        diag.Q = kNaN;
    }
    return diag;
}

StepDiagnostics choose_sign_cosh_greedy(const GameState& state, const SignVector& v,
                                        const StrategyParams& params, RngStream& rng) {
    StepDiagnostics diag;
    diag.rule_used = Rule::rule1;
    const double lambda = params.lambda(state.n);

    const double before = cosh_potential(state, lambda);
    const double plus = cosh_potential_after(state, v, +1, lambda);
    const double minus = cosh_potential_after(state, v, -1, lambda);
    if (plus == minus) {
        diag.tie = true;
        diag.x = rng.next_sign();
    } else {
        diag.x = plus < minus ? +1 : -1;
    }
    diag.delta_phi = (diag.x > 0 ? plus : minus) - before;

    double lin = 0.0;
    const auto e = v.entries();
    for (std::size_t j = 0; j < state.n; ++j) lin += std::sinh(lambda * static_cast<double>(state.d[j])) * e[j];
    diag.L = lambda * lin;
    diag.Q = lambda * lambda * before;
    return diag;
}

StepDiagnostics choose_sign_majority(const GameState& state, const SignVector& v, RngStream& rng) {
    StepDiagnostics diag;
    diag.rule_used = Rule::rule2;
    diag.delta_phi = kNaN;
    diag.L = kNaN;
    diag.Q = kNaN;

    const auto e = v.entries();
    std::int64_t votes = 0;
    for (std::size_t j = 0; j < state.n; ++j) {
        const auto dj = state.d[j];
        if (dj > 0) {
            votes -= e[j];
        } else if (dj < 0) {
            votes += e[j];
        }
    }
    if (votes == 0) {
        diag.tie = true;
        diag.x = rng.next_sign();
    } else {
        diag.x = votes > 0 ? +1 : -1;
    }
    return diag;
}

StepDiagnostics choose_sign_combined(const GameState& state, const SignVector& v,
                                     const StrategyParams& params, RngStream& rng) {
    const std::int64_t round = state.t + 1;
    if (round % 2 == 1) return choose_sign_power_greedy(state, v, params, rng);
    return choose_sign_majority(state, v, rng);
}

bool recolor(GameState& state, const StrategyParams& params) {
    for (std::size_t j = 0; j < state.n; ++j) {
        if (state.colors[j] == Color::red && state.d[j] == 0) state.colors[j] = Color::green;
    }
    const PowerValue masked = power_potential_value(state, params.c, params.p);
    if (!masked.finite() || masked.phi > params.H) {
        state.colors.assign(state.n, Color::red);
        ++state.phases;
        return true;
    }
    return false;
}

StepDiagnostics Strategy::choose(const GameState& state, const SignVector& v, RngStream& rng) const {
    switch (kind_) {
        case StrategyKind::random: {
            StepDiagnostics diag;
            diag.x = choose_sign_random(rng);
            diag.rule_used = Rule::random;
            diag.delta_phi = kNaN;
            diag.L = kNaN;
            diag.Q = kNaN;
            return diag;
        }
        case StrategyKind::power_greedy: return choose_sign_power_greedy(state, v, params_, rng);
        case StrategyKind::cosh_greedy: return choose_sign_cosh_greedy(state, v, params_, rng);
        case StrategyKind::majority: return choose_sign_majority(state, v, rng);
        case StrategyKind::combined: return choose_sign_combined(state, v, params_, rng);
    }
    return {};
}

bool Strategy::after_step(GameState& state) const {
    if (kind_ != StrategyKind::combined) return false;
    return recolor(state, params_);
}

}  // namespace vbal
