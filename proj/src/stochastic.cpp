#include "retailsim/stochastic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace retailsim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& purpose, std::uint64_t rep) {
    std::uint64_t x = splitmix64(master ^ fnv1a(purpose));
    return splitmix64(x ^ (rep * 0x9E3779B97F4A7C15ULL));
}

} // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::string purpose, std::uint64_t replication)
    : master_(master_seed), rep_(replication), purpose_(std::move(purpose)),
      gen_(derive_seed(master_seed, purpose_, replication)) {}

std::uint64_t RandomStream::uniform_int(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("uniform_int: n must be positive");
    const std::uint64_t reject_above =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = gen_();
    } while (v >= reject_above);
    return v % n;
}

double correct_threshold(double base, LikelihoodLevel level) {
    if (!(base >= 0.0 && base <= 1.0))
        throw std::invalid_argument("correct_threshold: base probability must be in [0, 1]");
    const double limit = base < 0.5 ? base / 2.0 : (1.0 - base) / 2.0;
    switch (level) {
    case LikelihoodLevel::Low:
        return base - limit;
    case LikelihoodLevel::Moderate:
        return base;
    case LikelihoodLevel::High:
        return base + limit;
    }
    throw std::invalid_argument("correct_threshold: bad likelihood level");
}

bool corrected_bernoulli(double base, LikelihoodLevel level, RandomStream& stream) {
    return stream.below(correct_threshold(base, level));
}

TriangularParams correct_delay(const TriangularParams& t, LikelihoodLevel level) {
    TriangularParams out = t;
    switch (level) {
    case LikelihoodLevel::Low:
        out.mode = t.mode - (t.mode - t.min) / 2.0;
        break;
    case LikelihoodLevel::Moderate:
        break;
    case LikelihoodLevel::High:
        out.mode = t.mode + (t.max - t.mode) / 2.0;
        break;
    }
    return out;
}

double sample_triangular(const TriangularParams& t, RandomStream& stream) {
    if (!(t.min <= t.mode && t.mode <= t.max))
        throw std::invalid_argument("sample_triangular: need min <= mode <= max");
    const double span = t.max - t.min;
    if (span == 0.0)
        return t.min;
    const double u = stream.uniform();
    const double cut = (t.mode - t.min) / span;
    if (u < cut)
        return t.min + std::sqrt(u * span * (t.mode - t.min));
    return t.max - std::sqrt((1.0 - u) * span * (t.max - t.mode));
}

long sample_poisson(double mean, RandomStream& stream) {
    if (!(mean >= 0.0))
        throw std::invalid_argument("sample_poisson: mean must be non-negative");
    long total = 0;
    // Split large means so exp(-mean) stays well away from underflow.
    while (mean > 500.0) {
        mean -= 500.0;
        const double limit = std::exp(-500.0);
        double p = stream.uniform();
        while (p > limit) {
            ++total;
            p *= stream.uniform();
        }
    }
    const double limit = std::exp(-mean);
    double p = stream.uniform();
    while (p > limit) {
        ++total;
        p *= stream.uniform();
    }
    return total;
}

} // namespace retailsim
