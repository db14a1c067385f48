#pragma once

#include "retailsim/types.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace retailsim {

// A reproducible random stream identified by (master seed, purpose, replication).
// Uniform doubles are produced from raw engine output with a fixed bit recipe,
// so sequences are identical across platforms for a given lineage.
class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::string purpose, std::uint64_t replication);

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool below(double p) { return uniform() < p; }

    // [0, n) without modulo bias.
    std::uint64_t uniform_int(std::uint64_t n);

    std::uint64_t master_seed() const { return master_; }
    const std::string& purpose() const { return purpose_; }
    std::uint64_t replication() const { return rep_; }

private:
    std::uint64_t master_;
    std::uint64_t rep_;
    std::string purpose_;
    std::mt19937_64 gen_;
};

// Shifts a base probability by likelihood level. The shift is half the
// distance to the nearer end of [0, 1], so results always stay in range and
// are monotone in the level.
double correct_threshold(double base, LikelihoodLevel level);

// Draws once from the stream against the corrected threshold.
bool corrected_bernoulli(double base, LikelihoodLevel level, RandomStream& stream);

// Shifts the mode of a triangular distribution by likelihood level: High
// moves it halfway towards the maximum, Low halfway towards the minimum,
// Moderate leaves it alone. Bounds never change.
TriangularParams correct_delay(const TriangularParams& t, LikelihoodLevel level);

// Inverse-CDF sample using a single uniform draw. min == max yields min.
double sample_triangular(const TriangularParams& t, RandomStream& stream);

// Poisson sample; exact for any non-negative mean.
long sample_poisson(double mean, RandomStream& stream);

} // namespace retailsim
