#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>

namespace acta {

// splitmix64 stream. One u64 of state, so snapshots serialize trivially and
// runs replay bit-identically on any platform (std:: distributions are
// implementation-defined and would break that).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), unbiased via rejection
    std::uint64_t below(std::uint64_t n) {
        assert(n > 0);
        const std::uint64_t wrap = (std::uint64_t(0) - n) % n;  // 2^64 mod n
        std::uint64_t x = next_u64();
        if (wrap != 0) {
            const std::uint64_t limit = std::uint64_t(0) - wrap;
            while (x >= limit) x = next_u64();
        }
        return x % n;
    }

    // uniform integer in [lo, hi] inclusive
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        assert(lo <= hi);
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // standard normal via Box-Muller; always consumes exactly two uniforms
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

private:
    std::uint64_t state_;
};

}  // namespace acta
