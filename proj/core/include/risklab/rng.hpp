#pragma once

#include <cstdint>
#include <span>

#include "risklab/errors.hpp"

namespace risklab::rng {

/// splitmix64 step (Steele, Lea, Flood 2014). Fully defined by integer
/// arithmetic, so sequences are identical across platforms and compilers.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: one root seed per run, one independent stream per
/// episode (or replication) index. Forking is a pure function of
/// (root, index), so sweeps may draw their streams in any order.
class Stream {
  public:
    Stream() : state_(0) {}
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    static Stream fork(std::uint64_t root_seed, std::uint64_t index) {
        std::uint64_t s = root_seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
        // burn one step so nearby (root, index) pairs decorrelate
        splitmix64_next(s);
        return Stream(s);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Index sampled from an (approximately normalized) probability vector.
    std::size_t categorical(std::span<const double> probs) {
        if (probs.empty()) throw DomainError("categorical: empty probability vector");
        double u = uniform();
        double acc = 0.0;
        std::size_t last_positive = 0;
        bool seen_positive = false;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) {
                last_positive = i;
                seen_positive = true;
            }
            acc += probs[i];
            if (u < acc) return i;
        }
        if (!seen_positive) throw DomainError("categorical: all-zero probability vector");
        return last_positive;  // guards u landing in rounding slack at the top
    }

  private:
    std::uint64_t state_;
};

}  // namespace risklab::rng
