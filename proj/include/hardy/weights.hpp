#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/circle.hpp"

namespace hardy {

/// Subarc of the circle. `measure` is normalized arc length, m(T) = 1.
struct Arc {
    double center = 0.0;  // radians
    double measure = 1.0; // in (0, 1]

    double length_rad() const { return kTwoPi * measure; }
};

inline Arc doubled(const Arc& a) { return Arc{a.center, 2.0 * a.measure}; }

inline bool arc_contains(const Arc& outer, const Arc& inner, double tol = 1e-12) {
    if (outer.measure >= 1.0 - tol) return true;
    double d = std::abs(wrap_angle(inner.center - outer.center));
    return d + 0.5 * inner.length_rad() <= 0.5 * outer.length_rad() + tol;
}

/// Visit grid nodes covered by an arc. Each node j owns the cell
/// [-pi + j h, -pi + (j+1) h); the callback receives (j, overlap measure).
/// Interior nodes get 1/N; the two boundary nodes get the fractional overlap,
/// so arc sums are additive and consistent with full-circle sums.
template <class F>
inline void for_each_arc_node(const CircleGrid& g, const Arc& arc, F&& visit) {
    const double h = g.spacing();
    const double len = std::min(arc.length_rad(), kTwoPi);
    double a0 = wrap_angle(arc.center - 0.5 * len);
    if (a0 >= kPi) a0 -= kTwoPi;
    const double b0 = a0 + len;

    auto segment = [&](double x0, double x1) {
        if (x1 <= x0) return;
        double t0 = (x0 + kPi) / h;
        double t1 = (x1 + kPi) / h;
        int j0 = std::clamp(static_cast<int>(std::floor(t0)), 0, g.n - 1);
        int j1 = std::clamp(static_cast<int>(std::floor(t1 - 1e-15)), 0, g.n - 1);
        if (j0 == j1) {
            visit(j0, (t1 - t0) / g.n);
            return;
        }
        visit(j0, (j0 + 1 - t0) / g.n);
        for (int j = j0 + 1; j < j1; ++j) visit(j, 1.0 / g.n);
        visit(j1, (t1 - j1) / g.n);
    };

    if (b0 <= kPi) {
        segment(a0, b0);
    } else {
        segment(a0, kPi);
        segment(-kPi, b0 - kTwoPi);
    }
}

/// O(1) arc integrals against dm via circular prefix sums of node values.
template <class T>
class ArcIntegrator {
public:
    ArcIntegrator() = default;
    ArcIntegrator(std::shared_ptr<const CircleGrid> g, std::vector<T> values)
        : grid_(std::move(g)), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != grid_->n)
            throw std::invalid_argument("ArcIntegrator: value size mismatch");
        prefix_.resize(grid_->n + 1);
        prefix_[0] = T{};
        for (int j = 0; j < grid_->n; ++j) prefix_[j + 1] = prefix_[j] + values_[j];
    }

    T total() const { return prefix_.back() / static_cast<double>(grid_->n); }

    /// integral of the sampled function over the arc, against dm.
    T integral(const Arc& arc) const {
        const double len = std::min(arc.length_rad(), kTwoPi);
        double a0 = wrap_angle(arc.center - 0.5 * len);
        if (a0 >= kPi) a0 -= kTwoPi;
        double b0 = a0 + len;
        if (b0 <= kPi) return cumulative(b0) - cumulative(a0);
        return (cumulative(kPi) - cumulative(a0)) + cumulative(b0 - kTwoPi);
    }

private:
    T cumulative(double x) const { // from -pi to x, x in [-pi, pi]
        const double h = grid_->spacing();
        double t = (x + kPi) / h;
        int j = std::clamp(static_cast<int>(std::floor(t)), 0, grid_->n - 1);
        T s = prefix_[j] + (t - j) * values_[j];
        return s / static_cast<double>(grid_->n);
    }

    std::shared_ptr<const CircleGrid> grid_;
    std::vector<T> values_;
    std::vector<T> prefix_;
};

/// Dyadic-length arcs (measure 2^-j, j = 0..j_max) at uniformly spaced centers.
/// The sup in the A_p characteristic is taken over this family.
struct ArcFamily {
    int j_max = 10;
    int n_centers = 64;
    std::vector<Arc> arcs;

    static ArcFamily make(const CircleGrid& g, int j_max = 10, int n_centers = 64) {
        if (j_max < 0 || n_centers < 1)
            throw std::invalid_argument("ArcFamily: bad parameters");
        // every arc must cover at least 4 grid cells
        if (std::ldexp(1.0, -j_max) * g.n < 4.0 - 1e-12)
            throw std::invalid_argument("ArcFamily: smallest arc shorter than 4 grid spacings");
        ArcFamily fam;
        fam.j_max = j_max;
        fam.n_centers = n_centers;
        fam.arcs.push_back(Arc{0.0, 1.0});
        for (int j = 1; j <= j_max; ++j) {
            double ell = std::ldexp(1.0, -j);
            for (int c = 0; c < n_centers; ++c)
                fam.arcs.push_back(Arc{kTwoPi * c / n_centers, ell});
        }
        return fam;
    }
};

enum class WeightFamily { constant, power, product_of_powers, piecewise_constant, log_smooth, custom };

/// Positive circle function with cached Muckenhoupt diagnostics.
class WeightFn {
public:
    WeightFn() = default;

    static WeightFn from_samples(std::shared_ptr<const CircleGrid> g, std::vector<double> w,
                                 std::string name, WeightFamily fam = WeightFamily::custom) {
        WeightFn out;
        out.grid_ = g;
        out.name_ = std::move(name);
        out.family_ = fam;
        out.w_ = std::move(w);
        if (static_cast<int>(out.w_.size()) != g->n)
            throw std::invalid_argument("WeightFn: sample size mismatch");
        out.winv_.resize(out.w_.size());
        for (std::size_t j = 0; j < out.w_.size(); ++j) {
            if (!(out.w_[j] > 0.0) || !std::isfinite(out.w_[j]))
                throw std::domain_error("WeightFn: samples must be strictly positive and finite");
            out.winv_[j] = 1.0 / out.w_[j];
        }
        out.int_w_ = ArcIntegrator<double>(g, out.w_);
        out.int_winv_ = ArcIntegrator<double>(g, out.winv_);
        std::vector<cplx> cs(out.w_.begin(), out.w_.end());
        out.fn_ = CircleFn::from_samples(g, std::move(cs));
        return out;
    }

    static WeightFn constant(std::shared_ptr<const CircleGrid> g, double c) {
        std::vector<double> w(g->n, c);
        return from_samples(std::move(g), std::move(w), "const(" + std::to_string(c) + ")",
                            WeightFamily::constant);
    }

    /// |theta - theta0|^alpha with the angular distance measured around the circle.
    static WeightFn power(std::shared_ptr<const CircleGrid> g, double alpha, double theta0 = 0.0) {
        if (alpha <= -1.0 || alpha >= 1.0)
            throw std::domain_error("WeightFn::power: alpha must be in (-1, 1) for A2");
        std::vector<double> w(g->n);
        for (int j = 0; j < g->n; ++j)
            w[j] = std::pow(std::abs(wrap_angle(g->theta[j] - theta0)), alpha);
        return from_samples(std::move(g), std::move(w), "power(" + std::to_string(alpha) + ")",
                            WeightFamily::power);
    }

    static WeightFn product_of_powers(std::shared_ptr<const CircleGrid> g,
                                      const std::vector<std::pair<double, double>>& factors) {
        if (factors.empty() || factors.size() > 3)
            throw std::domain_error("WeightFn::product_of_powers: need 1..3 factors");
        std::vector<double> w(g->n, 1.0);
        for (const auto& [alpha, theta0] : factors) {
            if (alpha <= -1.0 || alpha >= 1.0)
                throw std::domain_error("WeightFn::product_of_powers: alpha out of (-1, 1)");
            for (int j = 0; j < g->n; ++j)
                w[j] *= std::pow(std::abs(wrap_angle(g->theta[j] - theta0)), alpha);
        }
        return from_samples(std::move(g), std::move(w), "product_of_powers",
                            WeightFamily::product_of_powers);
    }

    /// Steps given as (end angle, value) with end angles increasing in (-pi, pi];
    /// the last step wraps to the first.
    static WeightFn piecewise(std::shared_ptr<const CircleGrid> g,
                              const std::vector<std::pair<double, double>>& steps) {
        for (const auto& [end, v] : steps) {
            (void)end;
            if (v < 0.1 || v > 10.0)
                throw std::domain_error("WeightFn::piecewise: values must lie in [1/10, 10]");
        }
        std::vector<double> w(g->n);
        for (int j = 0; j < g->n; ++j) {
            double t = g->theta[j];
            double v = steps.back().second;
            for (const auto& [end, val] : steps) {
                if (t <= end) { v = val; break; }
            }
            w[j] = v;
        }
        return from_samples(std::move(g), std::move(w), "piecewise", WeightFamily::piecewise_constant);
    }

    static WeightFn log_smooth(std::shared_ptr<const CircleGrid> g, double s) {
        if (std::abs(s) > 2.0)
            throw std::domain_error("WeightFn::log_smooth: |s| must be <= 2");
        std::vector<double> w(g->n);
        for (int j = 0; j < g->n; ++j) w[j] = std::exp(s * std::cos(g->theta[j]));
        return from_samples(std::move(g), std::move(w), "exp(" + std::to_string(s) + "*cos)",
                            WeightFamily::log_smooth);
    }

    const CircleGrid& grid() const { return *grid_; }
    std::shared_ptr<const CircleGrid> grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return w_; }
    const std::vector<double>& inverse_values() const { return winv_; }
    const CircleFn& fn() const { return fn_; }
    const std::string& name() const { return name_; }
    WeightFamily family() const { return family_; }

    double integral(const Arc& a) const { return int_w_.integral(a); }
    double inverse_integral(const Arc& a) const { return int_winv_.integral(a); }
    double total() const { return int_w_.total(); }

    WeightFn inverse() const {
        WeightFn out = from_samples(grid_, winv_, name_ + "^-1", family_);
        out.a2_ = a2_; // Def 2.1 at p=2 is symmetric under w -> 1/w
        return out;
    }

    WeightFn scaled(double c) const {
        if (!(c > 0.0)) throw std::domain_error("WeightFn::scaled: factor must be positive");
        std::vector<double> w(w_);
        for (auto& v : w) v *= c;
        return from_samples(grid_, std::move(w), name_ + "*" + std::to_string(c), family_);
    }

    bool has_a2() const { return a2_.has_value(); }
    double a2() const { return require(a2_, "[w]_A2"); }
    double pa2() const { return require(pa2_, "PA2"); }
    double eta() const { return require(eta_, "eta"); }

    void set_a2(double v) { a2_ = v; }
    void set_pa2(double v) { pa2_ = v; }
    void set_eta(double v) { eta_ = v; }

private:
    static double require(const std::optional<double>& v, const char* what) {
        if (!v) throw std::logic_error(std::string("WeightFn: ") + what + " not attached");
        return *v;
    }

    std::shared_ptr<const CircleGrid> grid_;
    std::string name_;
    WeightFamily family_ = WeightFamily::custom;
    std::vector<double> w_, winv_;
    ArcIntegrator<double> int_w_, int_winv_;
    CircleFn fn_;
    std::optional<double> a2_, pa2_, eta_;
};

/// [w]_{A2} over the arc family: sup of avg_I(w) * avg_I(1/w).
inline double a2_characteristic(const WeightFn& w, const ArcFamily& fam, Arc* witness = nullptr) {
    double best = 0.0;
    for (const Arc& I : fam.arcs) {
        double v = (w.integral(I) / I.measure) * (w.inverse_integral(I) / I.measure);
        if (v > best) {
            best = v;
            if (witness) *witness = I;
        }
    }
    return best;
}

/// [w]_{A_p} over the arc family: sup of avg_I(w) * avg_I(w^{-1/(p-1)})^{p-1}.
inline double ap_characteristic(const WeightFn& w, const ArcFamily& fam, double p) {
    if (!(p > 1.0)) throw std::domain_error("ap_characteristic: p must exceed 1");
    const double e = 1.0 / (p - 1.0);
    std::vector<double> g(w.values().size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = std::pow(w.inverse_values()[j], e);
    ArcIntegrator<double> integ(w.grid_ptr(), std::move(g));
    double best = 0.0;
    for (const Arc& I : fam.arcs) {
        double v = (w.integral(I) / I.measure) * std::pow(integ.integral(I) / I.measure, p - 1.0);
        best = std::max(best, v);
    }
    return best;
}

/// PA2(w): sup over the disk scan of w(z) * (1/w)(z), harmonic extensions.
inline double pa2(const WeightFn& w, const DiskScan& scan, DiskPoint* witness = nullptr) {
    CircleFn winv = CircleFn::from_samples(
        w.grid_ptr(), std::vector<cplx>(w.inverse_values().begin(), w.inverse_values().end()));
    double best = 0.0;
    for (const auto& pt : scan.points) {
        PoissonWeights pw = poisson_weights(w.grid(), pt.z.z);
        double v = harmonic_extend_real(w.fn(), pw) * harmonic_extend_real(winv, pw);
        if (v > best) {
            best = v;
            if (witness) *witness = pt.z;
        }
    }
    return best;
}

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Inverse A_p inequality: (|E|/|I|)^p <= [w]_{A_p} * (int_E w / int_I w).
inline InequalityReport check_ap_inverse_inequality(const WeightFn& w, const Arc& I, const Arc& E,
                                                    double p, double ap_char) {
    if (!arc_contains(I, E)) throw std::domain_error("check_ap_inverse_inequality: E not inside I");
    InequalityReport rep;
    rep.lhs = std::pow(E.measure / I.measure, p);
    rep.rhs = ap_char * (w.integral(E) / w.integral(I));
    rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-15;
    return rep;
}

/// Doubling bound: 1/w(I) <= 4 [w]_{A2} / w(J) for the concentric double J.
inline InequalityReport check_doubling(const WeightFn& w, const Arc& I, double a2_char) {
    if (2.0 * I.measure > 1.0 + 1e-12)
        throw std::domain_error("check_doubling: doubled arc exceeds the circle");
    InequalityReport rep;
    rep.lhs = 1.0 / w.integral(I);
    rep.rhs = 4.0 * a2_char / w.integral(doubled(I));
    rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-9);
    return rep;
}

/// Smallest probed eta in (1, 2] with [w]_{A_eta} <= 10 [w]_{A2} on the family.
/// The cutoff is a documented proxy for finiteness; qualification is monotone
/// in eta, so bisection is valid. Resolution 1/256; eta = 2 always qualifies.
inline double find_eta(const WeightFn& w, const ArcFamily& fam, double a2_char) {
    const double cutoff = 10.0 * a2_char;
    const double res = 1.0 / 256.0;
    auto qualifies = [&](double eta) { return ap_characteristic(w, fam, eta) <= cutoff; };
    double lo = 1.0 + res;
    if (qualifies(lo)) return lo;
    double hi = 2.0;
    while (hi - lo > res + 1e-15) {
        double mid = 0.5 * (lo + hi);
        if (qualifies(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

struct TelescopingReport {
    double max_lhs = 0.0;       // largest |c_I - c_{2^k I}| seen
    double max_ratio = 0.0;     // largest lhs / (4 k [w] ||phi||) seen
    double norm = 0.0;          // sup_I (1/w(I)) int_I |phi - c_I^w| w dm
    bool pass = false;
};

/// Telescoping bound for weighted arc averages c_I^w = (int_I phi w)/(int_I w):
/// |c_I^w - c_{2^k I}^w| <= 4 k [w]_{A2} * sup_J (1/w(J)) int_J |phi - c_J^w| w dm.
inline TelescopingReport telescoping_averages_check(const CircleFn& phi, const WeightFn& w,
                                                  const ArcFamily& fam, double a2_char) {
    const CircleGrid& g = phi.grid();
    std::vector<cplx> phiw(g.n);
    for (int j = 0; j < g.n; ++j) phiw[j] = phi.samples()[j] * w.values()[j];
    ArcIntegrator<cplx> int_phiw(phi.grid_ptr(), std::move(phiw));

    auto cw = [&](const Arc& I) { return int_phiw.integral(I) / w.integral(I); };

    double norm = 0.0;
    for (const Arc& I : fam.arcs) {
        cplx c = cw(I);
        double acc = 0.0;
        for_each_arc_node(g, I, [&](int j, double wt) {
            acc += wt * std::abs(phi.samples()[j] - c) * w.values()[j];
        });
        norm = std::max(norm, acc / w.integral(I));
    }

    TelescopingReport rep;
    rep.norm = norm;
    rep.pass = true;
    for (const Arc& I : fam.arcs) {
        if (I.measure >= 1.0) continue;
        int max_k = 0;
        while (I.measure * std::ldexp(1.0, max_k + 1) <= 1.0 + 1e-12) ++max_k;
        cplx cI = cw(I);
        for (int k = 1; k <= max_k; ++k) {
            Arc J{I.center, I.measure * std::ldexp(1.0, k)};
            double lhs = std::abs(cI - cw(J));
            double rhs = 4.0 * k * a2_char * norm;
            rep.max_lhs = std::max(rep.max_lhs, lhs);
            if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
            if (lhs > rhs * (1.0 + 1e-9) + 1e-12) rep.pass = false;
        }
    }
    return rep;
}

} // namespace hardy
