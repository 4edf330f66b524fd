#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "vbal/game.hpp"

namespace vbal {

// Exhaustive references for tiny instances. Each enumeration has an OpenMP
// kernel and a plain serial reference; both return identical reports for
// any thread count.

struct EnumerationReport {
    std::uint64_t total = 0;  // 2^m
    std::uint64_t hits = 0;
    double fraction = 0.0;
    double threshold = 0.0;
};

inline constexpr std::size_t kMaxOfflineRounds = 24;
inline constexpr std::size_t kMaxOfflineDim = 64;
inline constexpr std::size_t kMaxEnumerationTerms = 24;

/// min over x in {-1,+1}^T of ||sum_t x_t v_t||_inf. Fixes x_1 = +1.
/// Throws std::length_error beyond the caps (use sampling instead).
std::int64_t offline_optimum(std::span<const SignVector> vectors);
std::int64_t offline_optimum_serial(std::span<const SignVector> vectors);

/// Fraction of sign patterns y with |sum y_i a_i| >= sqrt(sum a_i^2 / 2).
EnumerationReport pz_enumerate(std::span<const double> weights);
EnumerationReport pz_enumerate_serial(std::span<const double> weights);

/// Fraction of the 2^m signed sums inside [center - S, center + S].
/// Requires |a_i| >= 1.
EnumerationReport spread_enumerate(std::span<const double> weights, double center, double halfwidth);
EnumerationReport spread_enumerate_serial(std::span<const double> weights, double center, double halfwidth);

/// Same fraction for all a_i = 1 with the window placed where it holds the
/// most sums: the floor(S)+1 middle binomial coefficients over 2^m.
double all_ones_central_fraction(std::size_t m, double halfwidth);

/// Smallest admissible gap for the second-order bound: 8*sqrt(cn) + 4.
double taylor_threshold(double c, std::size_t n);

/// Whether f(x+eta) - f(x) <= 2p x/g^{p+1} eta + 4p(p+1) cn/g^{p+2}
/// for f(x) = (cn - x^2)^{-p}, evaluated in units of (cn)^{-p}.
/// Throws std::domain_error if cn - d^2 is below taylor_threshold.
bool taylor_bound_check(std::int64_t d, double eta, double c, std::size_t n, int p);

/// RHS minus LHS of the same inequality (same scaling).
double taylor_slack(std::int64_t d, double eta, double c, std::size_t n, int p);

}  // namespace vbal
