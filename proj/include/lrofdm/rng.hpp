#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace lrofdm {

// splitmix64 finalizer, used to key derived substreams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random source. mt19937_64 has a standard-pinned output
// sequence, and the distributions below are hand rolled because the
// std:: distribution objects may differ between standard libraries.
// Identical seed gives an identical stream on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Independent substream keyed on the parent seed, not on how much
    // of the parent stream has been consumed.
    Rng derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        return Rng(mix64(seed_ ^ mix64(a ^ mix64(b ^ mix64(c)))));
    }

    std::uint64_t word() { return eng_(); }

    std::uint8_t byte() { return static_cast<std::uint8_t>(eng_() >> 56); }

    int bit() { return static_cast<int>(eng_() >> 63); }

    // uniform on [0, 1), 53-bit mantissa
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // standard normal, Marsaglia polar method
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace lrofdm
