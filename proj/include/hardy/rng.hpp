#pragma once

#include <cstdint>
#include <cmath>
#include <complex>

namespace hardy {

/// splitmix64; every random draw in the lab flows through this so reports are
/// bitwise-reproducible for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::complex<double> complex_box(double half_side = 1.0) {
        return {uniform(-half_side, half_side), uniform(-half_side, half_side)};
    }

    std::complex<double> complex_in_disk(double radius = 1.0) {
        for (;;) {
            double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
            if (x * x + y * y < 1.0) return {radius * x, radius * y};
        }
    }

private:
    std::uint64_t s_;
};

} // namespace hardy
