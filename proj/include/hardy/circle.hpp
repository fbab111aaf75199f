#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hardy/fft.hpp"

namespace hardy {

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double t) {
    t = std::fmod(t + kPi, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t - kPi;
}

/// Uniform grid on the unit circle carrying normalized arc length (1/N per node).
/// Nodes sit halfway between the lattice angles 2*pi*j/N, so sampled
/// singularities at lattice angles (theta = 0, pi, ...) never land on a node.
struct CircleGrid {
    int n = 0;
    std::vector<double> theta; // ascending in (-pi, pi)

    static std::shared_ptr<const CircleGrid> make(int n_points = 4096) {
        if (n_points < 16 || !is_power_of_two(static_cast<std::size_t>(n_points)))
            throw std::invalid_argument("CircleGrid: n_points must be a power of two >= 16");
        auto g = std::make_shared<CircleGrid>();
        g->n = n_points;
        g->theta.resize(n_points);
        for (int j = 0; j < n_points; ++j)
            g->theta[j] = -kPi + (2.0 * j + 1.0) * kPi / n_points;
        return g;
    }

    double node_weight() const { return 1.0 / n; }
    double spacing() const { return kTwoPi / n; }
    int band_limit() const { return n / 2; } // coefficients live in [-n/2, n/2)
};

/// Forward transform: chat(k) = (1/N) sum_j f_j e^{-i k theta_j}.
/// Exact (aliasing-free) for trigonometric polynomials of degree < N/2.
/// Layout: index k + N/2 holds frequency k, for k in [-N/2, N/2).
inline std::vector<cplx> circle_transform(const CircleGrid& g, const std::vector<cplx>& samples) {
    if (static_cast<int>(samples.size()) != g.n)
        throw std::invalid_argument("circle_transform: sample size mismatch");
    std::vector<cplx> a = samples;
    Fft::plan(a.size()).forward(a);
    const double theta0 = g.theta[0];
    std::vector<cplx> coef(g.n);
    const double inv_n = 1.0 / g.n;
    for (int k = -g.n / 2; k < g.n / 2; ++k) {
        int m = k >= 0 ? k : k + g.n;
        cplx tw(std::cos(-k * theta0), std::sin(-k * theta0));
        coef[k + g.n / 2] = inv_n * tw * a[m];
    }
    return coef;
}

/// Inverse of circle_transform: f_j = sum_k chat(k) e^{i k theta_j}.
inline std::vector<cplx> circle_synthesize(const CircleGrid& g, const std::vector<cplx>& coef) {
    if (static_cast<int>(coef.size()) != g.n)
        throw std::invalid_argument("circle_synthesize: coefficient size mismatch");
    const double theta0 = g.theta[0];
    std::vector<cplx> d(g.n, cplx(0.0, 0.0));
    for (int k = -g.n / 2; k < g.n / 2; ++k) {
        int m = k >= 0 ? k : k + g.n;
        cplx tw(std::cos(k * theta0), std::sin(k * theta0));
        d[m] = coef[k + g.n / 2] * tw;
    }
    Fft::plan(d.size()).inverse(d);
    return d;
}

/// A circle function known by its node samples; two-sided Fourier coefficients
/// are computed lazily and cached.
class CircleFn {
public:
    CircleFn() = default;

    static CircleFn from_samples(std::shared_ptr<const CircleGrid> g, std::vector<cplx> samples) {
        if (static_cast<int>(samples.size()) != g->n)
            throw std::invalid_argument("CircleFn: sample size mismatch");
        CircleFn f;
        f.grid_ = std::move(g);
        f.samples_ = std::move(samples);
        return f;
    }

    template <class F>
    static CircleFn from_function(std::shared_ptr<const CircleGrid> g, F&& fn) {
        std::vector<cplx> s(g->n);
        for (int j = 0; j < g->n; ++j) s[j] = cplx(fn(g->theta[j]));
        return from_samples(std::move(g), std::move(s));
    }

    /// Build from a sparse spectrum {(k, c_k)}; frequencies must lie in [-N/2, N/2).
    static CircleFn from_spectrum(std::shared_ptr<const CircleGrid> g,
                                  const std::vector<std::pair<int, cplx>>& spec) {
        std::vector<cplx> coef(g->n, cplx(0.0, 0.0));
        for (const auto& [k, c] : spec) {
            if (k < -g->n / 2 || k >= g->n / 2)
                throw std::invalid_argument("CircleFn::from_spectrum: frequency out of band");
            coef[k + g->n / 2] += c;
        }
        CircleFn f;
        f.grid_ = std::move(g);
        f.samples_ = circle_synthesize(*f.grid_, coef);
        f.coef_ = std::move(coef);
        return f;
    }

    const CircleGrid& grid() const { return *grid_; }
    std::shared_ptr<const CircleGrid> grid_ptr() const { return grid_; }
    const std::vector<cplx>& samples() const { return samples_; }

    const std::vector<cplx>& fourier() const {
        if (!coef_) coef_ = circle_transform(*grid_, samples_);
        return *coef_;
    }

    cplx fhat(int k) const {
        const auto& c = fourier();
        if (k < -grid_->n / 2 || k >= grid_->n / 2) return cplx(0.0, 0.0);
        return c[k + grid_->n / 2];
    }

    cplx mean() const {
        cplx s(0.0, 0.0);
        for (const cplx& v : samples_) s += v;
        return s / static_cast<double>(grid_->n);
    }

    /// Rotate by m grid nodes: new f(theta_j) = old f(theta_{j+m}).
    CircleFn rotated(int m) const {
        const int n = grid_->n;
        std::vector<cplx> s(n);
        for (int j = 0; j < n; ++j) s[j] = samples_[((j + m) % n + n) % n];
        return from_samples(grid_, std::move(s));
    }

    /// Highest |k| with |fhat(k)| above `tol` (0 for constants).
    int active_band(double tol = 1e-13) const {
        const int half = grid_->n / 2;
        for (int k = half; k >= 1; --k) {
            cplx cp = (k < half) ? fhat(k) : cplx(0.0, 0.0);
            if (std::abs(cp) > tol || std::abs(fhat(-k)) > tol) return k;
        }
        return 0;
    }

private:
    std::shared_ptr<const CircleGrid> grid_;
    std::vector<cplx> samples_;
    mutable std::optional<std::vector<cplx>> coef_;
};

inline CircleFn operator+(const CircleFn& a, const CircleFn& b) {
    std::vector<cplx> s(a.samples());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] += b.samples()[j];
    return CircleFn::from_samples(a.grid_ptr(), std::move(s));
}

inline CircleFn operator*(cplx c, const CircleFn& f) {
    std::vector<cplx> s(f.samples());
    for (auto& v : s) v *= c;
    return CircleFn::from_samples(f.grid_ptr(), std::move(s));
}

/// Complex conjugate; mirrors the spectrum (k -> -k), turning anti-analytic
/// symbols into analytic ones.
inline CircleFn conjugated(const CircleFn& f) {
    std::vector<cplx> s(f.samples());
    for (auto& v : s) v = std::conj(v);
    return CircleFn::from_samples(f.grid_ptr(), std::move(s));
}

enum class ProjSign { plus, minus };

/// Riesz projections: plus keeps k >= 0, minus keeps k <= -1.
/// Exact (coefficient filters); P+ + P- = id and P+ P- = 0 hold identically.
inline CircleFn riesz_project(const CircleFn& f, ProjSign sign) {
    const CircleGrid& g = f.grid();
    std::vector<cplx> coef = f.fourier();
    for (int k = -g.n / 2; k < g.n / 2; ++k) {
        bool keep = (sign == ProjSign::plus) ? (k >= 0) : (k < 0);
        if (!keep) coef[k + g.n / 2] = cplx(0.0, 0.0);
    }
    std::vector<std::pair<int, cplx>> spec;
    spec.reserve(coef.size());
    for (int k = -g.n / 2; k < g.n / 2; ++k)
        if (coef[k + g.n / 2] != cplx(0.0, 0.0)) spec.emplace_back(k, coef[k + g.n / 2]);
    return CircleFn::from_spectrum(f.grid_ptr(), spec);
}

/// Point of the open unit disk; the radius is capped at 1 - 2^-24 so closed-form
/// kernels stay representable.
struct DiskPoint {
    cplx z{0.0, 0.0};

    static constexpr double radius_cap() { return 1.0 - 1.0 / 16777216.0; }

    DiskPoint() = default;
    explicit DiskPoint(cplx w) {
        double r = std::abs(w);
        z = (r > radius_cap()) ? w * (radius_cap() / r) : w;
    }

    double radius() const { return std::abs(z); }
};

/// P_z(zeta) = (1 - |z|^2) / |1 - z conj(zeta)|^2, zeta = e^{i t}.
inline double poisson_kernel(cplx z, double t) {
    cplx den = 1.0 - z * cplx(std::cos(t), -std::sin(t));
    return (1.0 - std::norm(z)) / std::norm(den);
}

/// Szego kernel K_z(zeta) = 1 / (1 - conj(z) zeta).
inline cplx szego_kernel(cplx z, double t) {
    return 1.0 / (1.0 - std::conj(z) * cplx(std::cos(t), std::sin(t)));
}

enum class KernelKind { poisson, szego, normalized };

struct Kernel {
    DiskPoint z;
    KernelKind kind = KernelKind::poisson;

    cplx eval(double t) const {
        switch (kind) {
            case KernelKind::poisson: return cplx(poisson_kernel(z.z, t), 0.0);
            case KernelKind::szego: return szego_kernel(z.z, t);
            case KernelKind::normalized:
                return std::sqrt(1.0 - std::norm(z.z)) * szego_kernel(z.z, t);
        }
        return cplx(0.0, 0.0);
    }

    CircleFn sampled(std::shared_ptr<const CircleGrid> g) const {
        return CircleFn::from_function(std::move(g), [this](double t) { return eval(t); });
    }
};

/// Node masses of the discrete Poisson measure at z: p_j = (1/N) P_z(theta_j).
/// `total` is their sum (= 1 up to grid aliasing 2 r^N); Poisson averages divide
/// by it so that discrete identities (variance form of the Garsia integrand,
/// PA2 >= 1) hold exactly.
struct PoissonWeights {
    std::vector<double> p;
    double total = 0.0;
};

inline PoissonWeights poisson_weights(const CircleGrid& g, cplx z) {
    PoissonWeights pw;
    pw.p.resize(g.n);
    const double inv_n = 1.0 / g.n;
    const double one_minus = 1.0 - std::norm(z);
    double tot = 0.0;
    for (int j = 0; j < g.n; ++j) {
        cplx den = 1.0 - z * cplx(std::cos(g.theta[j]), -std::sin(g.theta[j]));
        double v = inv_n * one_minus / std::norm(den);
        pw.p[j] = v;
        tot += v;
    }
    pw.total = tot;
    return pw;
}

/// Poisson average of f at z (normalized quadrature of f * P_z against dm).
inline cplx harmonic_extend(const CircleFn& f, const PoissonWeights& pw) {
    cplx s(0.0, 0.0);
    const auto& v = f.samples();
    for (std::size_t j = 0; j < v.size(); ++j) s += pw.p[j] * v[j];
    return s / pw.total;
}

inline cplx harmonic_extend(const CircleFn& f, DiskPoint z) {
    return harmonic_extend(f, poisson_weights(f.grid(), z.z));
}

inline double harmonic_extend_real(const CircleFn& f, const PoissonWeights& pw) {
    double s = 0.0;
    const auto& v = f.samples();
    for (std::size_t j = 0; j < v.size(); ++j) s += pw.p[j] * v[j].real();
    return s / pw.total;
}

/// Harmonic extension through the computed spectrum:
///   sum_{k>=0} fhat(k) z^k + sum_{k>=1} fhat(-k) conj(z)^k.
/// Matches the quadrature route to machine precision away from the boundary;
/// serves as the independent evaluation path in tests.
inline cplx spectral_extend(const CircleFn& f, cplx z) {
    const int half = f.grid().n / 2;
    cplx pos(0.0, 0.0);
    for (int k = half - 1; k >= 0; --k) pos = pos * z + f.fhat(k);
    cplx zb = std::conj(z);
    cplx neg(0.0, 0.0);
    for (int k = half; k >= 1; --k) neg = neg * zb + f.fhat(-k);
    return pos + zb * neg;
}

/// Radial-angular scan of the disk: z = 0 plus radii 1 - 2^-i, i = 1..kmax.
/// Garsia-type sups are maxima over this scan; `level` supports convergence
/// reporting in kmax.
struct DiskScan {
    int kmax = 8;
    int n_angles = 128;

    struct Point {
        DiskPoint z;
        int level = 0; // 0 for the center, i for radius 1 - 2^-i
    };
    std::vector<Point> points;

    static DiskScan make(int kmax = 8, int n_angles = 128) {
        if (kmax < 1 || kmax > 23 || n_angles < 4)
            throw std::invalid_argument("DiskScan: bad parameters");
        DiskScan s;
        s.kmax = kmax;
        s.n_angles = n_angles;
        s.points.push_back({DiskPoint(cplx(0.0, 0.0)), 0});
        for (int i = 1; i <= kmax; ++i) {
            double r = 1.0 - std::ldexp(1.0, -i);
            for (int a = 0; a < n_angles; ++a) {
                double t = kTwoPi * a / n_angles;
                s.points.push_back({DiskPoint(std::polar(r, t)), i});
            }
        }
        return s;
    }
};

} // namespace hardy
