#include "vbal/rng.hpp"

namespace vbal {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t trial) {
    // seed_seq takes 32-bit words.
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
        0x76626c31u};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t trial) : engine_(make_engine(seed, trial)) {}

}  // namespace vbal
