#pragma once

#include <cstdint>
#include <random>

namespace vbal {

/// Deterministic per-trial random stream.
///
/// Each (seed, trial) pair owns an independent mt19937_64 engine seeded
/// through std::seed_seq, so trials can run in any order or on any thread
/// and still reproduce the same draws. Consumers take raw 64-bit words;
/// within a round the arriving vector is drawn first, then at most one
/// word for a tie-break or random sign.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t next_word() {
        ++words_;
        return engine_();
    }

    /// +1 or -1 from the top bit of one word.
    int next_sign() { return (next_word() >> 63) != 0 ? +1 : -1; }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_word() >> 11) * 0x1.0p-53; }

    std::uint64_t words_consumed() const { return words_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t words_ = 0;
};

}  // namespace vbal
