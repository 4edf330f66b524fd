#include "vbal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vbal/harness.hpp"
#include "vbal/io.hpp"
#include "vbal/oracles.hpp"
#include "vbal/potential.hpp"
#include "vbal/strategies.hpp"

namespace vbal {

namespace {

constexpr StrategyKind kAllKinds[] = {StrategyKind::random, StrategyKind::power_greedy, StrategyKind::cosh_greedy,
                                      StrategyKind::majority, StrategyKind::combined};

std::size_t uniform_index(RngStream& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.next_word() % (hi - lo + 1));
}

}  // namespace

CheckResult check_phi_zero(std::size_t max_n) {
    CheckResult r{"phi(0) = 1", true, ""};
    const StrategyParams params;
    double worst = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto s = new_game(n, params);
        worst = std::max(worst, std::abs(power_potential(s, params.c, params.p) - 1.0));
    }
    r.passed = worst <= 1e-12;
    r.detail = "max |phi(0)-1| = " + format_number(worst) + " over n=1.." + std::to_string(max_n);
    return r;
}

CheckResult check_parity(std::size_t trajectories, std::uint64_t seed) {
    CheckResult r{"parity", true, ""};
    std::size_t steps = 0;
    RngStream pick(seed, 0);
    for (std::size_t i = 0; i < trajectories && r.passed; ++i) {
        const auto kind = kAllKinds[i % std::size(kAllKinds)];
        const std::size_t n = uniform_index(pick, 1, 48);
        const auto T = static_cast<std::int64_t>(uniform_index(pick, 1, 400));
        StrategyParams params;
        const Strategy strat(kind, params);
        GameState s = new_game(n, params);
        RngStream rng(seed, i + 1);
        SignVector v(n);
        for (std::int64_t t = 0; t < T; ++t) {
            sample_vector_into(rng, v);
            const auto diag = strat.choose(s, v, rng);
            apply_step(s, v, diag.x);
            strat.after_step(s);
            ++steps;
            for (auto dj : s.d) {
                if (((dj - s.t) % 2) != 0 || std::abs(dj) > s.t) {
                    r.passed = false;
                    r.detail = "trajectory " + std::to_string(i) + " violates parity at t=" + std::to_string(s.t);
                    return r;
                }
            }
        }
    }
    r.detail = std::to_string(trajectories) + " trajectories, " + std::to_string(steps) + " steps";
    return r;
}

CheckResult check_greedy_dominance(std::size_t trajectories, std::uint64_t seed) {
    CheckResult r{"greedy dominance", true, ""};
    RngStream pick(seed, 0);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < trajectories; ++i) {
        for (auto kind : {StrategyKind::power_greedy, StrategyKind::cosh_greedy}) {
            const std::size_t n = uniform_index(pick, 1, 64);
            const auto T = static_cast<std::int64_t>(uniform_index(pick, 1, 2 * n + 50));
            StrategyParams params;
            const Strategy strat(kind, params);
            GameState s = new_game(n, params);
            RngStream rng(seed, 1000 + i);
            SignVector v(n);
            for (std::int64_t t = 0; t < T; ++t) {
                sample_vector_into(rng, v);
                const auto diag = strat.choose(s, v, rng);
                if (!diag.tie) {
                    double chosen, other;
                    if (kind == StrategyKind::power_greedy) {
                        chosen = power_potential_after(s, v, diag.x, params.c, params.p).phi;
                        other = power_potential_after(s, v, -diag.x, params.c, params.p).phi;
                    } else {
                        const double lambda = params.lambda(n);
                        chosen = cosh_potential_after(s, v, diag.x, lambda);
                        other = cosh_potential_after(s, v, -diag.x, lambda);
                    }
                    ++checked;
                    if (!(chosen <= other)) {
                        r.passed = false;
                        r.detail = std::string(to_string(kind)) + " chose the larger potential at t=" +
                                   std::to_string(s.t + 1);
                        return r;
                    }
                }
                apply_step(s, v, diag.x);
            }
        }
    }
    r.detail = std::to_string(checked) + " non-tie steps";
    return r;
}

GameState random_bounded_state(RngStream& rng, std::size_t n, const StrategyParams& params) {
    const double cn = params.c * static_cast<double>(n);
    const double root = std::sqrt(cn);
    std::vector<std::int64_t> d(n);
    for (;;) {
        const auto family = rng.next_word() % 3;
        if (family == 0) {
            // All coordinates on one level with r^p uniform in [1, H].
            const double rp = 1.0 + rng.next_unit() * (params.H - 1.0);
            const double g = cn * std::pow(rp, -1.0 / params.p);
            const auto level = static_cast<std::int64_t>(std::floor(std::sqrt(cn - g)));
            for (auto& x : d) x = rng.next_sign() * level;
        } else if (family == 1) {
            const double scale = rng.next_unit();
            for (auto& x : d) {
                x = static_cast<std::int64_t>(std::floor((2.0 * rng.next_unit() - 1.0) * scale * root));
            }
        } else {
            std::fill(d.begin(), d.end(), 0);
            const std::size_t m = 1 + static_cast<std::size_t>(rng.next_word() % n);
            const double level = std::sqrt(rng.next_unit()) * root;
            for (std::size_t k = 0; k < m; ++k) {
                d[rng.next_word() % n] = rng.next_sign() * static_cast<std::int64_t>(std::floor(level));
            }
        }
        bool inside = true;
        for (auto x : d) inside = inside && gap(x, params.c, n) > 0.0;
        if (!inside) continue;
        GameState s = inject_state(d, {}, params);
        if (power_potential(s, params.c, params.p) <= params.H) return s;
    }
}

CheckResult check_class_count_bound(std::size_t states, std::uint64_t seed) {
    CheckResult r{"class-count bound", true, ""};
    const StrategyParams params;
    const double beta = params.beta();
    RngStream rng(seed, 7);
    for (std::size_t i = 0; i < states; ++i) {
        const std::size_t n = uniform_index(rng, 1, 256);
        const GameState s = random_bounded_state(rng, n, params);
        const auto hist = class_histogram(s, params);
        if (hist.total() != n) {
            r.passed = false;
            r.detail = "histogram total " + std::to_string(hist.total()) + " != n";
            return r;
        }
        for (std::size_t k = 0; k < hist.counts.size(); ++k) {
            const double bound = std::min(static_cast<double>(n), static_cast<double>(n) * params.H *
                                                                      std::pow(beta, -params.p * static_cast<double>(k)));
            if (static_cast<double>(hist.counts[k]) > bound) {
                r.passed = false;
                std::ostringstream os;
                os << "state " << i << " (n=" << n << "): n_" << k << " = " << hist.counts[k] << " > " << bound;
                r.detail = os.str();
                return r;
            }
        }
    }
    r.detail = std::to_string(states) + " states with phi <= H";
    return r;
}

CheckResult check_taylor_sweep(const std::vector<std::size_t>& dims) {
    CheckResult r{"taylor bound", true, ""};
    const StrategyParams params;
    std::size_t checked = 0;
    for (auto n : dims) {
        const double cn = params.c * static_cast<double>(n);
        const auto dmax = static_cast<std::int64_t>(std::floor(std::sqrt(cn - taylor_threshold(params.c, n))));
        for (std::int64_t d = -dmax; d <= dmax; ++d) {
            if (gap(d, params.c, n) < taylor_threshold(params.c, n)) continue;
            for (double eta : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
                ++checked;
                if (!taylor_bound_check(d, eta, params.c, n, params.p)) {
                    r.passed = false;
                    r.detail = "fails at n=" + std::to_string(n) + " d=" + std::to_string(d) +
                               " eta=" + std::to_string(eta);
                    return r;
                }
            }
        }
    }
    r.detail = std::to_string(checked) + " (d, eta) pairs";
    return r;
}

CheckResult check_pz_lower_bound(std::size_t vectors, std::size_t max_m, std::uint64_t seed) {
    CheckResult r{"pz lower bound", true, ""};
    const std::vector<double> tight{1.0, 1.0, 1.0};
    const auto tight_rep = pz_enumerate(tight);
    if (tight_rep.hits * 4 != tight_rep.total) {
        r.passed = false;
        r.detail = "a=(1,1,1) fraction " + std::to_string(tight_rep.fraction) + " != 1/4";
        return r;
    }
    RngStream rng(seed, 11);
    double worst = 1.0;
    for (std::size_t i = 0; i < vectors; ++i) {
        const std::size_t m = uniform_index(rng, 1, max_m);
        std::vector<double> a(m);
        for (auto& x : a) x = (2.0 * rng.next_unit() - 1.0) * std::exp(3.0 * rng.next_unit());
        const auto rep = pz_enumerate(a);
        worst = std::min(worst, rep.fraction);
        if (rep.hits * 4 < rep.total) {
            r.passed = false;
            r.detail = "vector " + std::to_string(i) + " fraction " + std::to_string(rep.fraction);
            return r;
        }
    }
    r.detail = "tight case exact; min fraction " + std::to_string(worst) + " over " + std::to_string(vectors);
    return r;
}

CheckResult check_spread_maximality(std::size_t vectors, std::size_t max_m, std::uint64_t seed) {
    CheckResult r{"spread maximality", true, ""};
    RngStream rng(seed, 13);
    for (std::size_t i = 0; i < vectors; ++i) {
        const std::size_t m = uniform_index(rng, 1, max_m);
        std::vector<double> a(m);
        double total = 0.0;
        for (auto& x : a) {
            x = rng.next_sign() * (1.0 + 2.0 * rng.next_unit());
            total += std::abs(x);
        }
        const double S = rng.next_unit() * total / 2.0;
        const double center = (rng.next_unit() - 0.5) * total;
        const auto rep = spread_enumerate(a, center, S);
        const double ones = all_ones_central_fraction(m, S);
        if (rep.fraction > ones) {
            r.passed = false;
            r.detail = "vector " + std::to_string(i) + ": " + std::to_string(rep.fraction) + " > " +
                       std::to_string(ones);
            return r;
        }
    }
    r.detail = std::to_string(vectors) + " weight vectors";
    return r;
}

CheckResult check_online_dominance(std::size_t max_n, std::size_t max_T, std::size_t seeds) {
    CheckResult r{"online >= offline", true, ""};
    const StrategyParams params;
    std::size_t instances = 0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        for (std::size_t T = 1; T <= max_T; ++T) {
            for (std::size_t seed = 0; seed < seeds; ++seed) {
                RngStream source(seed, n * 1000 + T);
                std::vector<SignVector> vs;
                for (std::size_t t = 0; t < T; ++t) vs.push_back(sample_vector(source, n));
                const auto best = offline_optimum(vs);
                ++instances;
                for (auto kind : kAllKinds) {
                    const Strategy strat(kind, params);
                    GameState s = new_game(n, params);
                    RngStream rng(seed, 1);
                    for (const auto& v : vs) {
                        apply_step(s, v, strat.choose(s, v, rng).x);
                        strat.after_step(s);
                    }
                    if (current_value(s) < best) {
                        r.passed = false;
                        r.detail = std::string(to_string(kind)) + " beat the offline optimum at n=" +
                                   std::to_string(n) + " T=" + std::to_string(T);
                        return r;
                    }
                }
            }
        }
    }
    r.detail = std::to_string(instances) + " instances x 5 strategies";
    return r;
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    fault::set_class_boundary_flip(options.flip_class_boundary);
    std::vector<CheckResult> out;
    out.push_back(check_phi_zero(1024));
    out.push_back(check_parity(100, options.seed));
    out.push_back(check_greedy_dominance(100, options.seed));
    out.push_back(check_class_count_bound(10000, options.seed));
    out.push_back(check_taylor_sweep({16, 64}));
    out.push_back(check_pz_lower_bound(1000, 16, options.seed));
    out.push_back(check_spread_maximality(1000, 12, options.seed));
    out.push_back(check_online_dominance(6, 12, 100));
    fault::set_class_boundary_flip(false);
    return out;
}

}  // namespace vbal
