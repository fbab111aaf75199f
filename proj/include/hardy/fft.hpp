#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace hardy {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Radix-2 Cooley-Tukey transform with a cached root table per size.
/// forward: A[m] = sum_j a[j] e^{-2 pi i j m / n}; inverse is the unnormalized
/// conjugate transform (caller divides by n where needed).
class Fft {
public:
    static const Fft& plan(std::size_t n) {
        static std::map<std::size_t, std::unique_ptr<Fft>> cache;
        auto it = cache.find(n);
        if (it == cache.end())
            it = cache.emplace(n, std::unique_ptr<Fft>(new Fft(n))).first;
        return *it->second;
    }

    void forward(std::vector<cplx>& a) const { run(a, /*inverse=*/false); }
    void inverse(std::vector<cplx>& a) const { run(a, /*inverse=*/true); }

    std::size_t size() const { return n_; }

private:
    explicit Fft(std::size_t n) : n_(n), roots_(n / 2) {
        if (!is_power_of_two(n))
            throw std::invalid_argument("Fft: size must be a power of two");
        for (std::size_t j = 0; j < n / 2; ++j) {
            double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            roots_[j] = cplx(std::cos(ang), std::sin(ang));
        }
    }

    void run(std::vector<cplx>& a, bool inverse) const {
        if (a.size() != n_) throw std::invalid_argument("Fft: wrong buffer size");
        // Bit-reversal permutation.
        for (std::size_t i = 1, j = 0; i < n_; ++i) {
            std::size_t bit = n_ >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t stride = n_ / len;
            for (std::size_t i = 0; i < n_; i += len) {
                for (std::size_t k = 0; k < len / 2; ++k) {
                    cplx w = roots_[k * stride];
                    if (inverse) w = std::conj(w);
                    cplx u = a[i + k];
                    cplx v = a[i + k + len / 2] * w;
                    a[i + k] = u + v;
                    a[i + k + len / 2] = u - v;
                }
            }
        }
    }

    std::size_t n_;
    std::vector<cplx> roots_;
};

} // namespace hardy
