#include "vbal/potential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace vbal {

namespace {

std::atomic<bool> g_class_flip{false};

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

namespace fault {
void set_class_boundary_flip(bool on) { g_class_flip.store(on); }
bool class_boundary_flipped() { return g_class_flip.load(); }
}  // namespace fault

int compare(const PowerValue& a, const PowerValue& b) {
    if (a.finite() && b.finite()) return (a.phi < b.phi) ? -1 : (b.phi < a.phi ? 1 : 0);
    if (a.finite() != b.finite()) return a.finite() ? -1 : 1;
    if (a.breaches != b.breaches) return a.breaches < b.breaches ? -1 : 1;
    if (a.max_abs != b.max_abs) return a.max_abs < b.max_abs ? -1 : 1;
    return 0;
}

PowerValue power_potential_value(const GameState& state, double c, int p) {
    const double cn = c * static_cast<double>(state.n);
    PowerValue out;
    double sum = 0.0;
    for (std::size_t j = 0; j < state.n; ++j) {
        out.max_abs = std::max(out.max_abs, std::abs(state.d[j]));
        if (state.colors[j] == Color::red) {
            sum += 1.0;
            continue;
        }
        const double g = gap(state.d[j], c, state.n);
        if (g <= 0.0) {
            ++out.breaches;
        } else {
            sum += ipow(cn / g, p);
        }
    }
    out.phi = out.breaches > 0 ? kInf : sum / static_cast<double>(state.n);
    return out;
}

PowerValue power_potential_after(const GameState& state, const SignVector& v, int x, double c, int p) {
    const double cn = c * static_cast<double>(state.n);
    const auto e = v.entries();
    PowerValue out;
    double sum = 0.0;
    for (std::size_t j = 0; j < state.n; ++j) {
        const std::int64_t moved = state.d[j] + x * e[j];
        out.max_abs = std::max(out.max_abs, std::abs(moved));
        if (state.colors[j] == Color::red) {
            sum += 1.0;
            continue;
        }
        const double g = gap(moved, c, state.n);
        if (g <= 0.0) {
            ++out.breaches;
        } else {
            sum += ipow(cn / g, p);
        }
    }
    out.phi = out.breaches > 0 ? kInf : sum / static_cast<double>(state.n);
    return out;
}

double power_potential(const GameState& state, double c, int p) { return power_potential_value(state, c, p).phi; }

double cosh_potential(const GameState& state, double lambda) {
    double sum = 0.0;
    for (auto dj : state.d) sum += std::cosh(lambda * static_cast<double>(dj));
    return sum;
}

double cosh_potential_after(const GameState& state, const SignVector& v, int x, double lambda) {
    const auto e = v.entries();
    double sum = 0.0;
    for (std::size_t j = 0; j < state.n; ++j) {
        sum += std::cosh(lambda * static_cast<double>(state.d[j] + x * e[j]));
    }
    return sum;
}

LQ lq_terms(const GameState& state, const SignVector& v, double c, int p) {
    const double n = static_cast<double>(state.n);
    const double cn = c * n;
    const double lin = 2.0 * p;
    const double quad = 4.0 * p * (p + 1);
    const auto e = v.entries();
    LQ out;
    for (std::size_t j = 0; j < state.n; ++j) {
        if (state.colors[j] == Color::red) {
            out.Q += quad / (n * cn);
            continue;
        }
        const double g = gap(state.d[j], c, state.n);
        if (g <= 0.0) throw BreachError("coordinate " + std::to_string(j) + " breached: gap " + std::to_string(g));
        const double rp = ipow(cn / g, p);
        out.L += lin * static_cast<double>(state.d[j]) * rp / (n * g) * e[j];
        out.Q += quad * cn * rp / (n * g * g);
    }
    return out;
}

LQDiagnostics lq_decomposition(const GameState& state, const SignVector& v, double c, int p) {
    if (v.size() != state.n) throw std::invalid_argument("vector length does not match n");
    const double n = static_cast<double>(state.n);
    const double cn = c * n;
    const double beta = 1.0 + 1.0 / p;
    const double lin = 2.0 * p;
    const double quad = 4.0 * p * (p + 1);
    const auto e = v.entries();

    LQDiagnostics out;
    out.weights.assign(state.n, 0.0);
    for (std::size_t j = 0; j < state.n; ++j) {
        if (state.colors[j] == Color::red) {
            const double qj = quad / (n * cn);
            out.Q += qj;
            out.per_class_Q[0] += qj;
            continue;
        }
        const double g = gap(state.d[j], c, state.n);
        if (g <= 0.0) throw BreachError("coordinate " + std::to_string(j) + " breached: gap " + std::to_string(g));
        const double rp = ipow(cn / g, p);
        const double a = lin * static_cast<double>(state.d[j]) * rp / (n * g);
        const double qj = quad * cn * rp / (n * g * g);
        out.weights[j] = a;
        out.L += a * e[j];
        out.Q += qj;
        out.per_class_Q[class_index(g, c, state.n, beta)] += qj;
    }
    return out;
}

int class_index(double g, double c, std::size_t n, double beta) {
    const double cn = c * static_cast<double>(n);
    if (!(g > 0.0) || g > cn) {
        throw std::domain_error("class_index: gap " + std::to_string(g) + " outside (0, cn]");
    }
    // log_beta(cn/g); a value within a few ulps of an integer k means g sits
    // on the closed right end of class k.
    const double x = std::log(cn / g) / std::log(beta);
    const double nearest = std::round(x);
    int k;
    if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, nearest)) {
        k = static_cast<int>(nearest);
    } else {
        k = static_cast<int>(std::floor(x));
    }
    k = std::max(k, 0);
    if (fault::class_boundary_flipped()) ++k;
    return k;
}

std::size_t ClassHistogram::total() const {
    std::size_t s = 0;
    for (auto c : counts) s += c;
    return s;
}

ClassHistogram class_histogram(const GameState& state, const StrategyParams& params) {
    ClassHistogram h;
    const double beta = params.beta();
    for (std::size_t j = 0; j < state.n; ++j) {
        const double g = state.colors[j] == Color::red ? params.c * static_cast<double>(state.n)
                                                       : gap(state.d[j], params.c, state.n);
        if (g <= 0.0) throw BreachError("coordinate " + std::to_string(j) + " breached");
        const auto k = static_cast<std::size_t>(class_index(g, params.c, state.n, beta));
        if (h.counts.size() <= k) h.counts.resize(k + 1, 0);
        ++h.counts[k];
    }
    return h;
}

}  // namespace vbal
