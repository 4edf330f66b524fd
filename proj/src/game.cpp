#include "vbal/game.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace vbal {

void StrategyParams::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be > 0");
    if (p < 2) throw std::invalid_argument("p must be an integer >= 2");
    if (!(H > 0.0) || !std::isfinite(H)) throw std::invalid_argument("H must be > 0");
    if (!(c_cosh > 0.0) || !std::isfinite(c_cosh)) throw std::invalid_argument("c_cosh must be > 0");
}

SignVector::SignVector(std::initializer_list<int> entries)
    : SignVector(std::span<const int>(entries.begin(), entries.size())) {}

SignVector::SignVector(std::span<const int> entries) {
    entries_.reserve(entries.size());
    for (int e : entries) {
        if (e != 1 && e != -1) throw std::invalid_argument("sign vector entries must be -1 or +1");
        entries_.push_back(static_cast<std::int8_t>(e));
    }
}

SignVector SignVector::negated() const {
    SignVector out = *this;
    for (auto& e : out.entries_) e = static_cast<std::int8_t>(-e);
    return out;
}

void SignVector::assign_bits(std::span<const std::uint64_t> words) {
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        const bool bit = (words[j / 64] >> (j % 64)) & 1u;
        entries_[j] = bit ? 1 : -1;
    }
}

bool GameState::any_red() const {
    return std::any_of(colors.begin(), colors.end(), [](Color col) { return col == Color::red; });
}

GameState new_game(std::size_t n, const StrategyParams& params) {
    if (n == 0) throw std::invalid_argument("n must be ≥ 1");
    params.validate();
    GameState s;
    s.n = n;
    s.d.assign(n, 0);
    s.colors.assign(n, Color::green);
    s.params = params;
    return s;
}

void sample_vector_into(RngStream& rng, SignVector& out) {
    const std::size_t n = out.size();
    std::uint64_t buf[16];
    const std::size_t words = (n + 63) / 64;
    if (words <= 16) {
        for (std::size_t w = 0; w < words; ++w) buf[w] = rng.next_word();
        out.assign_bits(std::span<const std::uint64_t>(buf, words));
    } else {
        std::vector<std::uint64_t> big(words);
        for (auto& w : big) w = rng.next_word();
        out.assign_bits(big);
    }
}

SignVector sample_vector(RngStream& rng, std::size_t n) {
    if (n == 0) throw std::invalid_argument("n must be ≥ 1");
    SignVector v(n);
    sample_vector_into(rng, v);
    return v;
}

void apply_step(GameState& state, const SignVector& v, int x) {
    if (v.size() != state.n) {
        throw std::invalid_argument("vector length " + std::to_string(v.size()) + " does not match n=" +
                                    std::to_string(state.n));
    }
    if (x != 1 && x != -1) throw std::invalid_argument("sign must be -1 or +1");
    const auto e = v.entries();
    for (std::size_t j = 0; j < state.n; ++j) state.d[j] += x * e[j];
    ++state.t;
}

std::int64_t current_value(const GameState& state) {
    std::int64_t v = 0;
    for (auto dj : state.d) v = std::max(v, std::abs(dj));
    return v;
}

std::vector<std::int64_t> folded_positions(std::span<const std::int64_t> positions) {
    std::vector<std::int64_t> out(positions.size());
    std::transform(positions.begin(), positions.end(), out.begin(), [](std::int64_t x) { return std::abs(x); });
    return out;
}

std::vector<std::int64_t> folded_positions(const GameState& state) { return folded_positions(state.d); }

}  // namespace vbal
