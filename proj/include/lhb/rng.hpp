#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lhb {

// splitmix64; chosen over std::mt19937 + <random> distributions because the
// distribution outputs must be byte-identical across platforms and standard
// library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Inclusive [lo, hi], unbiased via 128-bit multiply-shift.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        auto prod = static_cast<unsigned __int128>(next()) * range;
        return lo + static_cast<std::int64_t>(prod >> 64);
    }

    double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(items.size()) - 1))];
    }

  private:
    std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Independent generator stream for (seed, tag); used so parallel case
// generation and per-comparison statistics never share state.
inline Rng derive_stream(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = fnv1a64(tag);
    return Rng(seed ^ (h | 1ULL));
}

}  // namespace lhb
