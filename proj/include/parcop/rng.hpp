#pragma once

// Deterministic random stream plus the seed-mixing function used to derive
// independent per-task seeds. All variate transforms are written out
// explicitly so that streams are bit-reproducible across standard libraries.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace parcop {

/// splitmix64 finalizer (Steele, Lea & Flood 2014).
inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Chained splitmix64 over (base, parts...): each component perturbs the
/// running hash, so nearby tuples map to unrelated seeds.
inline constexpr std::uint64_t mix_seed(std::uint64_t base,
                                        std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t p : parts) h = splitmix64(h ^ p);
    return h;
}

/// A self-contained random stream. Owned by exactly one task at a time.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform draw strictly inside (0, 1): 53 high bits plus a half-ulp
    /// offset, so 0 and 1 are unreachable.
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via Box-Muller; the sine twin is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double t = 2.0 * 3.14159265358979323846 * uniform01();
        cached_ = r * std::sin(t);
        have_cached_ = true;
        return r * std::cos(t);
    }

    double exponential() { return -std::log(uniform01()); }

private:
    std::mt19937_64 eng_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace parcop
