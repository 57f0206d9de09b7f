#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace drrs {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Every random number in this library is a pure function of a 64-bit key
// and a 128-bit counter, so any observation can be regenerated in isolation
// and replications can run on any number of threads with no shared state.
//
// Counter layout used throughout:
//   word0  draw index within one unit of work
//   word1  unit index (observation index for scenario streams)
//   word2  replication index
//   word3  lane(4) | alternative(12) | distribution(12) | reserved(4)
struct PhiloxBlock {
    std::array<std::uint32_t, 4> word;
};

struct PhiloxKey {
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
};

namespace detail {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

inline PhiloxBlock philox4x32(PhiloxBlock ctr, PhiloxKey key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    std::uint32_t k0 = key.lo;
    std::uint32_t k1 = key.hi;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo(kMul0, ctr.word[0], hi0, lo0);
        detail::mulhilo(kMul1, ctr.word[2], hi1, lo1);
        ctr.word[0] = hi1 ^ ctr.word[1] ^ k0;
        ctr.word[1] = lo1;
        ctr.word[2] = hi0 ^ ctr.word[3] ^ k1;
        ctr.word[3] = lo0;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

// Stream lanes. Scenario observations, procedure decisions (rule coin flips,
// posterior draws) and testbed-internal randomness never collide.
enum class StreamLane : std::uint32_t {
    Observation = 0,
    Decision = 1,
    Testbed = 2,
};

inline PhiloxBlock make_counter(StreamLane lane, std::uint32_t alternative,
                                std::uint32_t distribution, std::uint32_t replication,
                                std::uint64_t unit, std::uint32_t draw) {
    PhiloxBlock ctr;
    ctr.word[0] = draw;
    ctr.word[1] = static_cast<std::uint32_t>(unit);
    ctr.word[2] = replication;
    ctr.word[3] = (static_cast<std::uint32_t>(lane) << 28) | ((alternative & 0xFFFu) << 16) |
                  ((distribution & 0xFFFu) << 4);
    return ctr;
}

inline PhiloxKey make_key(std::uint64_t master_seed) {
    return PhiloxKey{static_cast<std::uint32_t>(master_seed),
                     static_cast<std::uint32_t>(master_seed >> 32)};
}

// Uniform in (0, 1]: 53-bit mantissa from two 32-bit words, shifted into the
// half-open upper range so log() is always finite.
inline double uniform_open(std::uint32_t w_hi, std::uint32_t w_lo) {
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(w_hi) << 32) | static_cast<std::uint64_t>(w_lo);
    return (static_cast<double>(bits >> 11) + 1.0) * (1.0 / 9007199254740992.0);
}

// One standard normal per counter block via Box-Muller (cosine branch only,
// so a draw is random-access addressable by its counter).
inline double standard_normal(const PhiloxBlock& block) {
    const double u1 = uniform_open(block.word[0], block.word[1]);
    const double u2 = uniform_open(block.word[2], block.word[3]);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Sequential view over one (key, lane, alt, dist, rep, unit) cell: increments
// the draw word. Used for decision streams and testbed-internal sampling.
class CounterSequence {
  public:
    CounterSequence() = default;
    CounterSequence(PhiloxKey key, StreamLane lane, std::uint32_t alternative,
                    std::uint32_t distribution, std::uint32_t replication, std::uint64_t unit)
        : key_(key), base_(make_counter(lane, alternative, distribution, replication, unit, 0)) {}

    double next_uniform() {
        const PhiloxBlock out = next_block();
        return uniform_open(out.word[0], out.word[1]);
    }

    double next_normal() { return standard_normal(next_block()); }

    // Exponential with the given mean, by inversion.
    double next_exponential(double mean) { return -mean * std::log(next_uniform()); }

    // Poisson by Knuth's product method; intended for small means (lead times).
    std::uint64_t next_poisson(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t count = 0;
        while (true) {
            prod *= next_uniform();
            if (prod <= limit) return count;
            ++count;
        }
    }

    // Marsaglia-Tsang gamma with unit scale; shape > 0.
    double next_gamma(double shape) {
        if (shape < 1.0) {
            const double u = next_uniform();
            return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            double x = next_normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = next_uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    double next_chi_square(double dof) { return 2.0 * next_gamma(0.5 * dof); }

    std::uint64_t draws_consumed() const { return draw_; }

  private:
    PhiloxBlock next_block() {
        PhiloxBlock ctr = base_;
        ctr.word[0] = static_cast<std::uint32_t>(draw_++);
        return philox4x32(ctr, key_);
    }

    PhiloxKey key_{};
    PhiloxBlock base_{};
    std::uint64_t draw_ = 0;
};

}  // namespace drrs
