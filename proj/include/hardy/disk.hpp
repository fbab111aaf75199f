#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/circle.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// Gauss-Legendre nodes/weights on (-1, 1) by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

/// Polar quadrature for normalized area integrals, dA = dx dy / (2 pi), so
/// that the disk has measure 1/2. Radially Gauss-Legendre after r = u^2,
/// which tames the ln(1/r) endpoint factor of the Green kernel to machine
/// level; nodes avoid both r = 0 and r = 1.
struct DiskQuadrature {
    int n_radial = 256;
    int n_angular = 512;
    std::vector<double> r;        // radial nodes
    std::vector<double> wr;       // radial weights for integrals of h(r) r dr
    std::vector<double> log_kern; // ln(1/r) at the nodes
    std::vector<double> psi;      // angular nodes, 2 pi a / n_angular

    static DiskQuadrature make(int n_radial = 256, int n_angular = 512) {
        if (n_radial < 4 || n_angular < 4 || !is_power_of_two(static_cast<std::size_t>(n_angular)))
            throw std::invalid_argument("DiskQuadrature: bad sizes (angular count must be a power of two)");
        DiskQuadrature q;
        q.n_radial = n_radial;
        q.n_angular = n_angular;
        std::vector<double> gx, gw;
        gauss_legendre(n_radial, gx, gw);
        q.r.resize(n_radial);
        q.wr.resize(n_radial);
        q.log_kern.resize(n_radial);
        for (int i = 0; i < n_radial; ++i) {
            double u = 0.5 * (gx[i] + 1.0);
            double du = 0.5 * gw[i];
            q.r[i] = u * u;
            q.wr[i] = du * 2.0 * u * q.r[i]; // h(r) r dr = h(u^2) u^2 2u du
            q.log_kern[i] = -2.0 * std::log(u);
        }
        q.psi.resize(n_angular);
        for (int a = 0; a < n_angular; ++a) q.psi[a] = kTwoPi * a / n_angular;
        return q;
    }

    std::size_t size() const { return static_cast<std::size_t>(n_radial) * n_angular; }
    cplx node(int i, int a) const { return std::polar(r[i], psi[a]); }
    /// dA weight of node (i, a).
    double weight(int i, int a) const {
        (void)a;
        return wr[i] / n_angular;
    }

    /// integral of F over the disk against dA.
    template <class F>
    double integrate(F&& f) const {
        double s = 0.0;
        for (int i = 0; i < n_radial; ++i) {
            double ring = 0.0;
            for (int a = 0; a < n_angular; ++a) ring += f(node(i, a));
            s += wr[i] * ring / n_angular;
        }
        return s;
    }
};

/// values[i * n_angular + a] = sum_{k >= 0} c_k r_i^k e^{i k psi_a}.
/// Per ring the angular profile is synthesized by an exact mod-A coefficient
/// fold plus one inverse FFT, so any polynomial degree is handled exactly.
inline std::vector<cplx> eval_analytic_on_polar(const std::vector<cplx>& coeffs,
                                                const DiskQuadrature& q) {
    const int A = q.n_angular;
    std::vector<cplx> out(q.size());
    std::vector<cplx> bins(A);
    for (int i = 0; i < q.n_radial; ++i) {
        std::fill(bins.begin(), bins.end(), cplx(0.0, 0.0));
        double rk = 1.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            bins[k % A] += coeffs[k] * rk;
            rk *= q.r[i];
        }
        Fft::plan(A).inverse(bins); // sum_m bins[m] e^{+2 pi i a m / A}
        for (int a = 0; a < A; ++a) out[static_cast<std::size_t>(i) * A + a] = bins[a];
        // bins were consumed; refill next iteration
    }
    return out;
}

/// Harmonic extension of a circle function on the whole polar grid,
/// sum_k fhat(k) r^{|k|} e^{i k psi}, trigonometric-interpolant semantics.
inline std::vector<cplx> extend_on_polar(const CircleFn& f, const DiskQuadrature& q) {
    const int A = q.n_angular;
    const int half = f.grid().n / 2;
    std::vector<cplx> out(q.size());
    std::vector<cplx> bins(A);
    for (int i = 0; i < q.n_radial; ++i) {
        std::fill(bins.begin(), bins.end(), cplx(0.0, 0.0));
        bins[0] += f.fhat(0);
        double rk = q.r[i];
        for (int k = 1; k <= half; ++k) {
            if (k < half) bins[k % A] += f.fhat(k) * rk;
            bins[((-k) % A + A) % A] += f.fhat(-k) * rk;
            rk *= q.r[i];
            if (rk < 1e-300) break;
        }
        Fft::plan(A).inverse(bins);
        for (int a = 0; a < A; ++a) out[static_cast<std::size_t>(i) * A + a] = bins[a];
    }
    return out;
}

/// Wirtinger derivatives of the harmonic extension of a band-limited phi:
///   d    = sum_{k>=1} k fhat(k) z^{k-1}
///   dbar = sum_{k>=1} k fhat(-k) conj(z)^{k-1}
struct Gradient {
    cplx d{0.0, 0.0};
    cplx dbar{0.0, 0.0};
    /// |grad|^2 = 2(|d|^2 + |dbar|^2); for real fields this is the Euclidean
    /// gradient norm squared, and Delta = 4 d dbar.
    double norm_sq() const { return 2.0 * (std::norm(d) + std::norm(dbar)); }
};

inline Gradient gradient_of_extension(const CircleFn& phi, DiskPoint zp) {
    const cplx z = zp.z;
    const cplx zb = std::conj(z);
    const int half = phi.grid().n / 2;
    cplx d(0.0, 0.0), dbar(0.0, 0.0);
    for (int k = half - 1; k >= 1; --k) d = d * z + static_cast<double>(k) * phi.fhat(k);
    for (int k = half; k >= 1; --k) dbar = dbar * zb + static_cast<double>(k) * phi.fhat(-k);
    return Gradient{d, dbar};
}

/// Gradient fields on the polar grid (d and dbar separately).
inline std::pair<std::vector<cplx>, std::vector<cplx>> gradient_on_polar(const CircleFn& phi,
                                                                         const DiskQuadrature& q) {
    const int half = phi.grid().n / 2;
    std::vector<cplx> cd, cdb;
    cd.reserve(half);
    cdb.reserve(half);
    for (int k = 1; k < half; ++k) cd.push_back(static_cast<double>(k) * phi.fhat(k));
    for (int k = 1; k <= half; ++k) cdb.push_back(static_cast<double>(k) * std::conj(phi.fhat(-k)));
    auto d = eval_analytic_on_polar(cd, q);
    auto dbc = eval_analytic_on_polar(cdb, q);
    for (auto& v : dbc) v = std::conj(v);
    return {std::move(d), std::move(dbc)};
}

/// Closed-form C^2 test function with explicit Laplacian; the boundary trace
/// is the restriction of `value` to |z| = 1.
struct SmoothDiskFunction {
    std::string name;
    std::function<double(cplx)> value;
    std::function<double(cplx)> laplacian;
};

inline std::vector<SmoothDiskFunction> greens_corpus() {
    std::vector<SmoothDiskFunction> fs;
    fs.push_back({"const", [](cplx) { return 2.5; }, [](cplx) { return 0.0; }});
    fs.push_back({"abs2", [](cplx z) { return std::norm(z); }, [](cplx) { return 4.0; }});
    fs.push_back({"abs4", [](cplx z) { return std::norm(z) * std::norm(z); },
                  [](cplx z) { return 16.0 * std::norm(z); }});
    fs.push_back({"re_z_sq", [](cplx z) { return (z * z).real(); }, [](cplx) { return 0.0; }});
    fs.push_back(
        {"exp_abs2", [](cplx z) { return std::exp(std::norm(z)); },
         [](cplx z) { return std::exp(std::norm(z)) * (4.0 + 4.0 * std::norm(z)); }});
    return fs;
}

/// |LHS - RHS| for Green's identity,
///   int_T f dm - f(0) = int_D (Delta f) ln(1/|z|) dA.
inline double greens_identity_residual(const SmoothDiskFunction& f, const CircleGrid& g,
                                       const DiskQuadrature& q) {
    double lhs = 0.0;
    for (int j = 0; j < g.n; ++j)
        lhs += f.value(cplx(std::cos(g.theta[j]), std::sin(g.theta[j])));
    lhs = lhs / g.n - f.value(cplx(0.0, 0.0));

    double rhs = 0.0;
    for (int i = 0; i < q.n_radial; ++i) {
        double ring = 0.0;
        for (int a = 0; a < q.n_angular; ++a) ring += f.laplacian(q.node(i, a));
        rhs += q.wr[i] * q.log_kern[i] * ring / q.n_angular;
    }
    return std::abs(lhs - rhs);
}

struct LittlewoodPaleyReport {
    double boundary = 0.0; // int_T |f|^2 w dm
    double disk = 0.0;     // int_D |grad f|^2 w(z) ln(1/|z|) dA
    double ratio = 1.0;    // disk / boundary (1 when both vanish)
};

/// Littlewood-Paley energies for a mean-removed f. w(z) is the harmonic extension
/// of the weight. For w = 1 and f = zeta^n the ratio is exactly 1/2 under the
/// |grad|^2 = 2(|d|^2+|dbar|^2) and dA = dx dy/(2 pi) conventions.
inline LittlewoodPaleyReport littlewood_paley_weighted(const CircleFn& f_in, const WeightFn& w,
                                                       const DiskQuadrature& q) {
    const CircleGrid& g = f_in.grid();
    // remove the mean
    cplx mean = f_in.mean();
    std::vector<cplx> s = f_in.samples();
    for (auto& v : s) v -= mean;
    CircleFn f = CircleFn::from_samples(f_in.grid_ptr(), std::move(s));
    if (std::abs(f.fhat(0)) > 1e-10)
        throw std::runtime_error("littlewood_paley_weighted: mean removal failed");

    LittlewoodPaleyReport rep;
    for (int j = 0; j < g.n; ++j)
        rep.boundary += std::norm(f.samples()[j]) * w.values()[j];
    rep.boundary /= g.n;

    auto [d, dbar] = gradient_on_polar(f, q);
    auto wz = extend_on_polar(w.fn(), q);
    double disk = 0.0;
    for (int i = 0; i < q.n_radial; ++i) {
        double ring = 0.0;
        for (int a = 0; a < q.n_angular; ++a) {
            std::size_t idx = static_cast<std::size_t>(i) * q.n_angular + a;
            double grad2 = 2.0 * (std::norm(d[idx]) + std::norm(dbar[idx]));
            ring += grad2 * wz[idx].real();
        }
        disk += q.wr[i] * q.log_kern[i] * ring / q.n_angular;
    }
    rep.disk = disk;
    rep.ratio = (rep.boundary == 0.0 && rep.disk == 0.0) ? 1.0 : rep.disk / rep.boundary;
    return rep;
}

} // namespace hardy
