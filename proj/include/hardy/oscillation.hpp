#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hardy/circle.hpp"
#include "hardy/weights.hpp"

namespace hardy {

enum class OscKind {
    bmo,
    weighted_bmo,
    garsia,
    weighted_garsia,
    two_weight_garsia_a, // lambda in the integrand, mu in the normalizer
    two_weight_garsia_b, // mu^-1 in the integrand, lambda^-1 in the normalizer
    jn_p,
    jn_inf_c,
};

/// Which constant is subtracted in weighted BMO quantities.
/// `as_written` uses c_I = (int_I phi dm)/(int_I w dm) exactly as printed;
/// `oscillation_mean` uses the plain average phi_I.
enum class CenterVariant { as_written, oscillation_mean };

struct OscillationReport {
    OscKind kind = OscKind::bmo;
    double value = 0.0;
    std::variant<std::monostate, Arc, DiskPoint> witness;
    // For disk-scan norms: cumulative max over levels 0..kmax (convergence column).
    std::vector<double> max_by_level;
};

namespace detail {

inline cplx arc_mean(const CircleFn& f, const Arc& I, const CircleGrid& g) {
    cplx acc(0.0, 0.0);
    for_each_arc_node(g, I, [&](int j, double wt) { acc += wt * f.samples()[j]; });
    return acc / I.measure;
}

} // namespace detail

/// sup_I (1/|I|) int_I |phi - phi_I| dm over the arc family.
inline OscillationReport bmo_norm(const CircleFn& phi, const ArcFamily& fam) {
    const CircleGrid& g = phi.grid();
    OscillationReport rep;
    rep.kind = OscKind::bmo;
    for (const Arc& I : fam.arcs) {
        cplx c = detail::arc_mean(phi, I, g);
        double acc = 0.0;
        for_each_arc_node(g, I, [&](int j, double wt) { acc += wt * std::abs(phi.samples()[j] - c); });
        double v = acc / I.measure;
        if (v > rep.value) {
            rep.value = v;
            rep.witness = I;
        }
    }
    return rep;
}

/// sup_I (1/ int_I w dm) int_I |phi - c_I| dm, with c_I per the chosen variant.
inline OscillationReport weighted_bmo_norm(const CircleFn& phi, const WeightFn& w,
                                           const ArcFamily& fam,
                                           CenterVariant variant = CenterVariant::as_written) {
    const CircleGrid& g = phi.grid();
    OscillationReport rep;
    rep.kind = OscKind::weighted_bmo;
    for (const Arc& I : fam.arcs) {
        double wI = w.integral(I);
        cplx c;
        if (variant == CenterVariant::as_written) {
            cplx num(0.0, 0.0);
            for_each_arc_node(g, I, [&](int j, double wt) { num += wt * phi.samples()[j]; });
            c = num / wI;
        } else {
            c = detail::arc_mean(phi, I, g);
        }
        double acc = 0.0;
        for_each_arc_node(g, I, [&](int j, double wt) { acc += wt * std::abs(phi.samples()[j] - c); });
        double v = acc / wI;
        if (v > rep.value) {
            rep.value = v;
            rep.witness = I;
        }
    }
    return rep;
}

namespace detail {

/// |phi|^2(z) - |phi(z)|^2 under the discrete Poisson measure, evaluated in
/// the algebraically identical variance form sum p |phi - phi(z)|^2, which
/// keeps constants at zero instead of sqrt(roundoff).
inline double garsia_inner(const CircleFn& phi, const PoissonWeights& pw) {
    const auto& v = phi.samples();
    cplx m1(0.0, 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) m1 += pw.p[j] * v[j];
    m1 /= pw.total;
    double m2 = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) m2 += pw.p[j] * std::norm(v[j] - m1);
    return m2 / pw.total;
}

inline double clamp_inner(double inner) {
    if (inner < -1e-8)
        throw std::runtime_error("garsia: Poisson variance negative beyond tolerance");
    return std::max(inner, 0.0);
}

template <class InnerFn>
inline OscillationReport scan_sup(OscKind kind, const DiskScan& scan, InnerFn&& inner_at) {
    OscillationReport rep;
    rep.kind = kind;
    std::vector<double> level_max(scan.kmax + 1, 0.0);
    for (const auto& pt : scan.points) {
        double v = std::sqrt(clamp_inner(inner_at(pt.z)));
        level_max[pt.level] = std::max(level_max[pt.level], v);
        if (v > rep.value) {
            rep.value = v;
            rep.witness = pt.z;
        }
    }
    rep.max_by_level.resize(scan.kmax + 1);
    double run = 0.0;
    for (int i = 0; i <= scan.kmax; ++i) {
        run = std::max(run, level_max[i]);
        rep.max_by_level[i] = run;
    }
    return rep;
}

} // namespace detail

/// Garsia norm: sup_z (|phi|^2(z) - |phi(z)|^2)^{1/2} over the scan.
inline OscillationReport garsia_norm(const CircleFn& phi, const DiskScan& scan) {
    return detail::scan_sup(OscKind::garsia, scan, [&](DiskPoint z) {
        return detail::garsia_inner(phi, poisson_weights(phi.grid(), z.z));
    });
}

/// One-weight Garsia norm: sup_z ((1/w(z)) int |phi - phi(z)|^2 P_z w dm)^{1/2}.
inline OscillationReport weighted_garsia_norm(const CircleFn& phi, const WeightFn& w,
                                              const DiskScan& scan) {
    return detail::scan_sup(OscKind::weighted_garsia, scan, [&](DiskPoint z) {
        PoissonWeights pw = poisson_weights(phi.grid(), z.z);
        cplx m = harmonic_extend(phi, pw);
        double num = 0.0, den = 0.0;
        const auto& v = phi.samples();
        for (std::size_t j = 0; j < v.size(); ++j) {
            double mass = pw.p[j] * w.values()[j];
            num += mass * std::norm(v[j] - m);
            den += mass;
        }
        return num / den;
    });
}

/// Two-weight Garsia pair: (1/mu(z)) int |phi-phi(z)|^2 P_z lambda dm and the
/// (mu^-1, lambda^-1) counterpart, computed on the same scan.
inline std::pair<OscillationReport, OscillationReport> two_weight_garsia(const CircleFn& phi,
                                                                         const WeightFn& lambda,
                                                                         const WeightFn& mu,
                                                                         const DiskScan& scan) {
    auto first = detail::scan_sup(OscKind::two_weight_garsia_a, scan, [&](DiskPoint z) {
        PoissonWeights pw = poisson_weights(phi.grid(), z.z);
        cplx m = harmonic_extend(phi, pw);
        double num = 0.0, den = 0.0;
        const auto& v = phi.samples();
        for (std::size_t j = 0; j < v.size(); ++j) {
            num += pw.p[j] * lambda.values()[j] * std::norm(v[j] - m);
            den += pw.p[j] * mu.values()[j];
        }
        return num / den;
    });
    auto second = detail::scan_sup(OscKind::two_weight_garsia_b, scan, [&](DiskPoint z) {
        PoissonWeights pw = poisson_weights(phi.grid(), z.z);
        cplx m = harmonic_extend(phi, pw);
        double num = 0.0, den = 0.0;
        const auto& v = phi.samples();
        for (std::size_t j = 0; j < v.size(); ++j) {
            num += pw.p[j] * mu.inverse_values()[j] * std::norm(v[j] - m);
            den += pw.p[j] * lambda.inverse_values()[j];
        }
        return num / den;
    });
    return {first, second};
}

/// p-mean oscillation sup_I ((1/w(I)) int_I |phi - c_I|^p dm)^{1/p},
/// c_I as printed (plain dm numerator over the w mass).
inline double jn_p_norm(const CircleFn& phi, const WeightFn& w, double p, const ArcFamily& fam,
                        Arc* witness = nullptr) {
    if (!(p > 0.0)) throw std::domain_error("jn_p_norm: p must be positive");
    const CircleGrid& g = phi.grid();
    double best = 0.0;
    for (const Arc& I : fam.arcs) {
        double wI = w.integral(I);
        cplx num(0.0, 0.0);
        for_each_arc_node(g, I, [&](int j, double wt) { num += wt * phi.samples()[j]; });
        cplx c = num / wI;
        double acc = 0.0;
        for_each_arc_node(g, I,
                          [&](int j, double wt) { acc += wt * std::pow(std::abs(phi.samples()[j] - c), p); });
        double v = std::pow(acc / wI, 1.0 / p);
        if (v > best) {
            best = v;
            if (witness) *witness = I;
        }
    }
    return best;
}

namespace detail {

inline double weighted_median(std::vector<std::pair<double, double>>& vals /* (x, mass) */) {
    std::sort(vals.begin(), vals.end());
    double total = 0.0;
    for (const auto& [x, m] : vals) total += m;
    double half = 0.5 * total, run = 0.0;
    for (const auto& [x, m] : vals) {
        run += m;
        if (run >= half) return x;
    }
    return vals.back().first;
}

/// Small Nelder-Mead on R^2, tolerance on the simplex diameter.
template <class F>
inline std::pair<double, double> nelder_mead_2d(F&& f, double x0, double y0, double step,
                                                double tol = 1e-8, int max_iter = 400) {
    struct V {
        double x, y, f;
    };
    auto mk = [&](double x, double y) { return V{x, y, f(x, y)}; };
    std::array<V, 3> s = {mk(x0, y0), mk(x0 + step, y0), mk(x0, y0 + step)};
    for (int it = 0; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(), [](const V& a, const V& b) { return a.f < b.f; });
        double diam = std::max({std::abs(s[0].x - s[2].x), std::abs(s[0].y - s[2].y),
                                std::abs(s[1].x - s[2].x), std::abs(s[1].y - s[2].y)});
        if (diam < tol) break;
        double cx = 0.5 * (s[0].x + s[1].x), cy = 0.5 * (s[0].y + s[1].y);
        V refl = mk(cx + (cx - s[2].x), cy + (cy - s[2].y));
        if (refl.f < s[0].f) {
            V exp_ = mk(cx + 2.0 * (cx - s[2].x), cy + 2.0 * (cy - s[2].y));
            s[2] = (exp_.f < refl.f) ? exp_ : refl;
        } else if (refl.f < s[1].f) {
            s[2] = refl;
        } else {
            V con = mk(cx + 0.5 * (s[2].x - cx), cy + 0.5 * (s[2].y - cy));
            if (con.f < s[2].f) {
                s[2] = con;
            } else {
                for (int i = 1; i < 3; ++i)
                    s[i] = mk(s[0].x + 0.5 * (s[i].x - s[0].x), s[0].y + 0.5 * (s[i].y - s[0].y));
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const V& a, const V& b) { return a.f < b.f; });
    return {s[0].x, s[0].y};
}

} // namespace detail

/// inf-center p-mean: sup_I inf_c ((1/w(I)) int_I |phi - c|^p w dm)^{1/p}
/// (note w inside the integrand). p = 2 uses the closed-form minimizer
/// c* = (int_I phi w)/(int_I w); p = 1 uses coordinate weighted medians
/// followed by a Nelder-Mead refinement.
inline double jn_inf_c_norm(const CircleFn& phi, const WeightFn& w, double p, const ArcFamily& fam,
                            Arc* witness = nullptr, cplx* minimizer = nullptr) {
    if (p != 1.0 && p != 2.0)
        throw std::domain_error("jn_inf_c_norm: p in {1, 2} supported");
    const CircleGrid& g = phi.grid();
    double best = 0.0;
    for (const Arc& I : fam.arcs) {
        double wI = w.integral(I);
        cplx c;
        double val = 0.0;
        if (p == 2.0) {
            cplx num(0.0, 0.0);
            for_each_arc_node(g, I,
                              [&](int j, double wt) { num += wt * phi.samples()[j] * w.values()[j]; });
            c = num / wI;
            double acc = 0.0;
            for_each_arc_node(g, I, [&](int j, double wt) {
                acc += wt * std::norm(phi.samples()[j] - c) * w.values()[j];
            });
            val = std::sqrt(acc / wI);
        } else {
            std::vector<std::pair<double, double>> re, im;
            for_each_arc_node(g, I, [&](int j, double wt) {
                double m = wt * w.values()[j];
                re.emplace_back(phi.samples()[j].real(), m);
                im.emplace_back(phi.samples()[j].imag(), m);
            });
            double x0 = detail::weighted_median(re);
            double y0 = detail::weighted_median(im);
            auto obj = [&](double a, double b) {
                double acc = 0.0;
                for_each_arc_node(g, I, [&](int j, double wt) {
                    acc += wt * std::abs(phi.samples()[j] - cplx(a, b)) * w.values()[j];
                });
                return acc;
            };
            double scale = std::max(1e-3, 0.05 * (std::abs(x0) + std::abs(y0) + 1.0));
            auto [a, b] = detail::nelder_mead_2d(obj, x0, y0, scale);
            c = cplx(a, b);
            val = obj(a, b) / wI;
        }
        if (val > best) {
            best = val;
            if (witness) *witness = I;
            if (minimizer) *minimizer = c;
        }
    }
    return best;
}

/// inf_c for a single arc (used by tests and the telescoping machinery).
inline double jn_inf_c_on_arc(const CircleFn& phi, const WeightFn& w, double p, const Arc& I,
                              cplx* minimizer = nullptr) {
    ArcFamily one;
    one.j_max = 0;
    one.n_centers = 1;
    one.arcs = {I};
    return jn_inf_c_norm(phi, w, p, one, nullptr, minimizer);
}

} // namespace hardy
