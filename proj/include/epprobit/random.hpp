#pragma once

#include <cstdint>
#include <random>

namespace epprobit {

/// Named sub-streams derived from a single user seed.
enum class Stream : std::uint64_t {
    Covariates = 1,
    Coefficients = 2,
    Responses = 3,
    Oracle = 4,
};

/// Seedable generator with a platform-independent output sequence.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// Distributions are implemented here rather than taken from <random>,
/// whose distribution algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

    std::uint64_t next_u64() { return engine_(); }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal via the Box-Muller transform.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace epprobit
