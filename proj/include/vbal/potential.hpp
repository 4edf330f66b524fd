#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "vbal/game.hpp"

namespace vbal {

/// Raised when an operation needs every counted gap to be positive.
class BreachError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// c*n - d^2. Nonpositive values mean the coordinate breached sqrt(c*n).
inline double gap(std::int64_t d, double c, std::size_t n) {
    const double dd = static_cast<double>(d);
    return c * static_cast<double>(n) - dd * dd;
}

/// x^p for a small positive integer p.
inline double ipow(double x, int p) {
    double r = 1.0;
    while (p > 0) {
        if (p & 1) r *= x;
        x *= x;
        p >>= 1;
    }
    return r;
}

/// Power potential with breach bookkeeping.
///
/// phi is +inf whenever breaches > 0. Infinite values are ordered by
/// (breaches, max_abs); finite values by phi.
struct PowerValue {
    double phi = 0.0;
    std::size_t breaches = 0;
    std::int64_t max_abs = 0;

    bool finite() const { return breaches == 0; }
};

/// Three-way comparison following the ordering above. Returns <0, 0, >0.
int compare(const PowerValue& a, const PowerValue& b);

// Red coordinates are masked: they count as d = 0 (and do not move), so
// each contributes exactly 1/n to the power potential.

PowerValue power_potential_value(const GameState& state, double c, int p);
/// Potential of the state reached by playing x on v, without materializing it.
PowerValue power_potential_after(const GameState& state, const SignVector& v, int x, double c, int p);

/// c^p n^{p-1} sum_j g_j^{-p} over the color mask; +inf on breach.
double power_potential(const GameState& state, double c, int p);

double cosh_potential(const GameState& state, double lambda);
double cosh_potential_after(const GameState& state, const SignVector& v, int x, double lambda);

struct LQDiagnostics {
    double L = 0.0;                     // sum_j a_j v_j (before multiplying by x)
    double Q = 0.0;                     // >= 0
    std::vector<double> weights;        // a_j, sign of d_j
    std::map<int, double> per_class_Q;  // sums to Q
};

/// Linear/quadratic split of the one-step power-potential change.
/// Masked coordinates have a_j = 0 and add their g = cn term to Q.
/// Throws BreachError if a counted gap is nonpositive.
LQDiagnostics lq_decomposition(const GameState& state, const SignVector& v, double c, int p);

/// L and Q only; the hot-loop variant of lq_decomposition.
struct LQ {
    double L = 0.0;
    double Q = 0.0;
};
LQ lq_terms(const GameState& state, const SignVector& v, double c, int p);

/// Unique k >= 0 with c*n*beta^{-k-1} < g <= c*n*beta^{-k}.
/// Throws std::domain_error outside (0, c*n].
int class_index(double g, double c, std::size_t n, double beta);

struct ClassHistogram {
    std::vector<std::size_t> counts;  // counts[k] = n_k

    std::size_t operator[](std::size_t k) const { return k < counts.size() ? counts[k] : 0; }
    std::size_t total() const;
};

/// Coordinates per class under the color mask. Throws BreachError.
ClassHistogram class_histogram(const GameState& state, const StrategyParams& params);

namespace fault {
/// Test hook for the verification suite: while set, class_index reports
/// k+1 instead of k.
void set_class_boundary_flip(bool on);
bool class_boundary_flipped();
}  // namespace fault

}  // namespace vbal
