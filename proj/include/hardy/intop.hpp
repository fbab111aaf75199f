#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardy/circle.hpp"
#include "hardy/disk.hpp"
#include "hardy/hankel.hpp"
#include "hardy/oscillation.hpp"
#include "hardy/weights.hpp"

namespace hardy {

struct AnalyticPoly {
    std::vector<cplx> a; // a_0 .. a_n

    int degree() const { return static_cast<int>(a.size()) - 1; }

    cplx eval(cplx z) const {
        cplx s(0.0, 0.0);
        for (std::size_t i = a.size(); i-- > 0;) s = s * z + a[i];
        return s;
    }

    AnalyticPoly derivative() const {
        if (a.size() <= 1) return AnalyticPoly{{cplx(0.0, 0.0)}};
        std::vector<cplx> d(a.size() - 1);
        for (std::size_t k = 1; k < a.size(); ++k) d[k - 1] = static_cast<double>(k) * a[k];
        return AnalyticPoly{std::move(d)};
    }

    CircleFn to_circle_fn(std::shared_ptr<const CircleGrid> g) const {
        if (degree() >= g->band_limit())
            throw std::domain_error("AnalyticPoly: degree exceeds the grid band limit");
        std::vector<std::pair<int, cplx>> spec;
        for (std::size_t k = 0; k < a.size(); ++k) spec.emplace_back(static_cast<int>(k), a[k]);
        return CircleFn::from_spectrum(std::move(g), spec);
    }
};

/// T_g f = (1/z) int_0^z f g'; coefficientwise out_j = conv(a, d)_j / (j+1)
/// with d_m = (m+1) b_{m+1} the coefficients of g'.
inline AnalyticPoly tg_apply(const AnalyticPoly& g, const AnalyticPoly& f, int band_limit = 2048) {
    if (g.degree() < 1) return AnalyticPoly{std::vector<cplx>{cplx(0.0, 0.0)}};
    int out_deg = f.degree() + g.degree() - 1;
    if (out_deg > band_limit) throw std::domain_error("tg_apply: band-limit overflow");
    AnalyticPoly d = g.derivative();
    std::vector<cplx> c(out_deg + 1, cplx(0.0, 0.0));
    for (int j = 0; j <= f.degree(); ++j)
        for (int m = 0; m <= d.degree(); ++m) c[j + m] += f.a[j] * d.a[m];
    for (int j = 0; j <= out_deg; ++j) c[j] /= static_cast<double>(j + 1);
    return AnalyticPoly{std::move(c)};
}

/// P_g = M_z T_g: shift the T_g output up by one power.
inline AnalyticPoly pg_apply(const AnalyticPoly& g, const AnalyticPoly& f, int band_limit = 2048) {
    AnalyticPoly t = tg_apply(g, f, band_limit - 1);
    std::vector<cplx> c(t.a.size() + 1, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < t.a.size(); ++k) c[k + 1] = t.a[k];
    return AnalyticPoly{std::move(c)};
}

/// Matrix of T_g on monomials z^0..z^n; rows are output powers 0..n+deg(g)-1.
inline MatC tg_matrix(const AnalyticPoly& g, int n) {
    AnalyticPoly d = g.derivative();
    int out_rows = std::max(n + g.degree(), 1);
    MatC T = MatC::Zero(out_rows, n + 1);
    for (int k = 0; k <= n; ++k)
        for (int m = 0; m <= d.degree(); ++m) {
            int j = k + m;
            if (j < out_rows) T(j, k) = d.a[m] / static_cast<double>(j + 1);
        }
    return T;
}

/// Section norm of T_g between H^2(mu) and L^2(lambda) (analytic Grams on
/// both sides), via the same generalized-singular-value route as the Hankel
/// sections.
inline double tg_weighted_norm(const AnalyticPoly& g, int n, const WeightFn& mu,
                               const WeightFn& lambda) {
    MatC T = tg_matrix(g, n);
    MatC Gmu = weighted_gram(mu, n + 1, GramSide::analytic_input);
    MatC Glam = weighted_gram(lambda, static_cast<int>(T.rows()), GramSide::analytic_input);
    Eigen::LLT<MatC> lmu(Gmu), llam(Glam);
    if (lmu.info() != Eigen::Success || llam.info() != Eigen::Success)
        throw std::runtime_error("tg_weighted_norm: degenerate weight (Cholesky failed)");
    MatC L = lmu.matrixL();
    MatC Y = L.triangularView<Eigen::Lower>().solve(T.adjoint());
    MatC Z = MatC(llam.matrixL()).adjoint() * Y.adjoint();
    Eigen::BDCSVD<MatC> svd(Z);
    return svd.singularValues()(0);
}

/// Section norm of P_g = M_z T_g (output basis z^1..; the Toeplitz Gram
/// pattern is shift-invariant, so unit weights give exactly the T_g norm).
inline double pg_weighted_norm(const AnalyticPoly& g, int n, const WeightFn& mu,
                               const WeightFn& lambda) {
    return tg_weighted_norm(g, n, mu, lambda);
}

struct TgLadderRow {
    int n = 0;
    double norm_fwd = 0.0; // H^2(mu) -> L^2(lambda)
    double norm_rev = 0.0; // H^2(lambda^-1) -> L^2(mu^-1)
};

struct TgExperiment {
    std::vector<TgLadderRow> rows;
    double garsia_a = 0.0; // ||g||_{G, lambda mu}
    double garsia_b = 0.0; // ||g||_{G, mu^-1 lambda^-1}
    double c_ratio_fwd = 0.0;
    double c_ratio_rev = 0.0;
};

inline TgExperiment tg_norm_experiment(const AnalyticPoly& g, const WeightFn& mu,
                                       const WeightFn& lambda, const std::vector<int>& ladder,
                                       const DiskScan& scan) {
    TgExperiment ex;
    CircleFn gfn = g.to_circle_fn(mu.grid_ptr());
    auto [ga, gb] = two_weight_garsia(gfn, lambda, mu, scan);
    ex.garsia_a = ga.value;
    ex.garsia_b = gb.value;
    WeightFn mu_inv = mu.inverse(), lam_inv = lambda.inverse();
    for (int n : ladder) {
        TgLadderRow row;
        row.n = n;
        row.norm_fwd = tg_weighted_norm(g, n, mu, lambda);
        row.norm_rev = tg_weighted_norm(g, n, lam_inv, mu_inv);
        ex.rows.push_back(row);
    }
    if (!ex.rows.empty()) {
        if (ex.garsia_a > 0.0) ex.c_ratio_fwd = ex.rows.back().norm_fwd / ex.garsia_a;
        if (ex.garsia_b > 0.0) ex.c_ratio_rev = ex.rows.back().norm_rev / ex.garsia_b;
    }
    return ex;
}

struct PairingReport {
    cplx lhs{0.0, 0.0}; // (P_g f, h)_{L^2(T)}
    cplx rhs{0.0, 0.0}; // 4 int (P_g f)' conj(h') ln(1/|z|) dA
    double abs_err = 0.0;
};

/// Littlewood-Paley pairing cross-check. Under dA = dx dy/(2 pi) the polarized
/// identity for analytic F, H with F(0) = 0 reads
///   (F, H)_{L^2(T)} = 4 int_D F'(z) conj(H'(z)) ln(1/|z|) dA(z),
/// which validates the disk quadrature end to end.
inline PairingReport lp_pairing_check(const AnalyticPoly& g, const AnalyticPoly& f,
                                      const AnalyticPoly& h, const CircleGrid& grid,
                                      const DiskQuadrature& quad) {
    AnalyticPoly F = pg_apply(g, f);
    PairingReport rep;
    for (int j = 0; j < grid.n; ++j) {
        cplx zeta(std::cos(grid.theta[j]), std::sin(grid.theta[j]));
        rep.lhs += F.eval(zeta) * std::conj(h.eval(zeta));
    }
    rep.lhs /= static_cast<double>(grid.n);

    AnalyticPoly Fd = F.derivative();
    AnalyticPoly hd = h.derivative();
    cplx acc(0.0, 0.0);
    for (int i = 0; i < quad.n_radial; ++i) {
        cplx ring(0.0, 0.0);
        for (int a = 0; a < quad.n_angular; ++a) {
            cplx z = quad.node(i, a);
            ring += Fd.eval(z) * std::conj(hd.eval(z));
        }
        acc += quad.wr[i] * quad.log_kern[i] * ring / static_cast<double>(quad.n_angular);
    }
    rep.rhs = 4.0 * acc;
    rep.abs_err = std::abs(rep.lhs - rep.rhs);
    return rep;
}

} // namespace hardy
