#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dcode {

// splitmix64 finalizer (Steele, Lea, Flood; public domain reference constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Counter-based pseudo-random generator with cheap substream derivation.
 *
 * The draw sequence is a pure function of (seed, stream_id), so any number of
 * substreams can be handed to parallel workers without coordination and the
 * results stay identical across runs, platforms and thread schedules. All
 * distributions are hand-rolled on top of next_u64(); std::* distributions are
 * implementation-defined and would break cross-platform reproducibility.
 *
 * Reference vectors live in fixtures/rng_vectors.csv.
 */
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id),
          state_(mix64(seed + kGamma) ^ mix64(stream_id ^ kStreamSalt)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + next_double() * (hi - lo); }

    // Uniform integer in [0, bound). Lemire multiply-shift; bound must be > 0.
    std::uint64_t next_index(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Standard normal via Box-Muller. Consumes exactly two draws.
    double next_gaussian() {
        const double u1 = 1.0 - next_double(); // (0, 1], keeps log finite
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[next_index(i)]);
        }
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
};

// Substream keyed by stream_id; a pure function of the parent's identity.
inline SeededRng derive_rng(const SeededRng& master, std::uint64_t stream_id) {
    return SeededRng(master.seed(),
                     mix64(master.stream_id() + 0x9E3779B97F4A7C15ULL * (stream_id + 1)));
}

} // namespace dcode
