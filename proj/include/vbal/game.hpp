#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "vbal/rng.hpp"

namespace vbal {

enum class Color : std::uint8_t { green, red };

/// Every tunable of the balancing strategies.
///
/// beta, gamma and lambda are derived, never stored, so they always agree
/// with p, c_cosh and the active dimension.
struct StrategyParams {
    double c = 1e5;           // gap scale: coordinates stay below sqrt(c*n)
    int p = 4;                // power-potential exponent
    double H = 4.0 * std::exp(3.0);
    double c_cosh = 12.0;     // cosh strategy uses lambda = 1/(c_cosh*sqrt(n))
    std::uint64_t seed = 0;

    double beta() const { return 1.0 + 1.0 / p; }
    double gamma() const { return 1.0 - 2.0 / p; }
    double lambda(std::size_t n) const { return 1.0 / (c_cosh * std::sqrt(static_cast<double>(n))); }

    /// Throws std::invalid_argument if any constant is out of range.
    void validate() const;
};

/// An arriving vector in {-1,+1}^n.
class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::size_t n) : entries_(n, 1) {}
    SignVector(std::initializer_list<int> entries);
    explicit SignVector(std::span<const int> entries);

    std::size_t size() const { return entries_.size(); }
    int operator[](std::size_t j) const { return entries_[j]; }
    std::span<const std::int8_t> entries() const { return entries_; }

    SignVector negated() const;

    /// Overwrites all entries from packed bits: bit j set -> +1, clear -> -1.
    void assign_bits(std::span<const std::uint64_t> words);

    friend bool operator==(const SignVector&, const SignVector&) = default;

private:
    std::vector<std::int8_t> entries_;
};

/// Full state of one online game.
///
/// Injected (synthetic) states are exempt from the parity and |d_j| <= t
/// invariants.
struct GameState {
    std::size_t n = 0;
    std::int64_t t = 0;
    std::vector<std::int64_t> d;
    std::vector<Color> colors;
    StrategyParams params;
    std::int64_t phases = 0;
    bool synthetic = false;

    bool any_red() const;
};

GameState new_game(std::size_t n, const StrategyParams& params);

/// Draws ceil(n/64) words and unpacks the low n bits.
SignVector sample_vector(RngStream& rng, std::size_t n);
void sample_vector_into(RngStream& rng, SignVector& out);

/// d_j += x * v_j for every j and t += 1. Colors are not touched.
void apply_step(GameState& state, const SignVector& v, int x);

/// max_j |d_j|
std::int64_t current_value(const GameState& state);

std::vector<std::int64_t> folded_positions(const GameState& state);
std::vector<std::int64_t> folded_positions(std::span<const std::int64_t> positions);

}  // namespace vbal
