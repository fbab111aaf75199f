#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hardy/carleson.hpp"
#include "hardy/circle.hpp"
#include "hardy/disk.hpp"
#include "hardy/oscillation.hpp"
#include "hardy/rng.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// Shared geometry for a run: grid, arc family, disk scan, sector family,
/// polar quadrature.
struct LabContext {
    std::shared_ptr<const CircleGrid> grid;
    ArcFamily arcs;
    DiskScan scan;
    SectorFamily sectors;
    DiskQuadrature quad;

    static LabContext make(int n = 4096, int arc_jmax = 10, int arc_centers = 64, int kmax = 8,
                           int scan_angles = 128, int sector_jmax = 6, int sector_centers = 64,
                           int quad_radial = 256, int quad_angular = 512) {
        LabContext ctx;
        ctx.grid = CircleGrid::make(n);
        ctx.arcs = ArcFamily::make(*ctx.grid, arc_jmax, arc_centers);
        ctx.scan = DiskScan::make(kmax, scan_angles);
        ctx.sectors = SectorFamily::make(sector_jmax, sector_centers);
        ctx.quad = DiskQuadrature::make(quad_radial, quad_angular);
        return ctx;
    }
};

/// The shipped test matrix: 7 weights, the power-weight alpha ladder, 5
/// symbols, and the weight pairs used by the two-weight experiments.
struct Catalog {
    std::vector<WeightFn> weights; // [0] is the unit weight
    std::vector<double> alphas;    // 0, ±.25, ±.5, ±.75, ±.9, ±.99
    std::vector<WeightFn> alpha_ladder;
    std::vector<CircleFn> symbols;
    std::vector<std::string> symbol_names;
    std::vector<std::pair<int, int>> rkt_pairs;      // (mu index, lambda index)
    std::vector<std::pair<int, int>> carleson_pairs; // (lambda index, mu index)
};

inline void attach_diagnostics(WeightFn& w, const ArcFamily& arcs, const DiskScan& scan) {
    double a2 = a2_characteristic(w, arcs);
    w.set_a2(a2);
    w.set_pa2(pa2(w, scan));
    w.set_eta(find_eta(w, arcs, a2));
}

/// Anti-analytic log-type symbol: P_-(log|2 sin((t - t0)/2)|) truncated at
/// `band`; coefficients -e^{-i k t0} / (2k) on frequencies -k.
inline CircleFn log_type_symbol(std::shared_ptr<const CircleGrid> g, double t0, int band = 128) {
    std::vector<std::pair<int, cplx>> spec;
    for (int k = 1; k <= band; ++k) {
        cplx rot(std::cos(-k * t0), std::sin(-k * t0));
        spec.emplace_back(-k, -0.5 / k * rot);
    }
    return CircleFn::from_spectrum(std::move(g), spec);
}

inline Catalog build_catalog(const LabContext& ctx, std::uint64_t seed) {
    Catalog cat;
    auto g = ctx.grid;

    cat.weights.push_back(WeightFn::constant(g, 1.0));
    cat.weights.push_back(WeightFn::power(g, 0.5));
    cat.weights.push_back(WeightFn::power(g, -0.5));
    cat.weights.push_back(WeightFn::power(g, 0.9));
    cat.weights.push_back(WeightFn::product_of_powers(g, {{0.3, 0.0}, {-0.25, 2.0}, {0.4, -2.2}}));
    cat.weights.push_back(WeightFn::piecewise(g, {{-kPi / 2, 0.2}, {kPi / 3, 5.0}, {kPi, 0.2}}));
    cat.weights.push_back(WeightFn::log_smooth(g, 1.5));
    for (auto& w : cat.weights) attach_diagnostics(w, ctx.arcs, ctx.scan);

    cat.alphas = {0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 0.9, -0.9, 0.99, -0.99};
    for (double a : cat.alphas) {
        WeightFn w = (a == 0.0) ? WeightFn::constant(g, 1.0) : WeightFn::power(g, a);
        attach_diagnostics(w, ctx.arcs, ctx.scan);
        cat.alpha_ladder.push_back(std::move(w));
    }

    // symbols: conj monomials, rescaled log-type, random anti-analytic,
    // BMO-normalized near-unbounded log-type
    cat.symbols.push_back(CircleFn::from_spectrum(g, {{-1, cplx(1.0, 0.0)}}));
    cat.symbol_names.push_back("conj_zeta");
    cat.symbols.push_back(CircleFn::from_spectrum(g, {{-2, cplx(1.0, 0.0)}}));
    cat.symbol_names.push_back("conj_zeta_sq");

    {
        CircleFn raw = log_type_symbol(g, 1.0);
        double gn = garsia_norm(raw, ctx.scan).value;
        cat.symbols.push_back(cplx(1.0 / gn, 0.0) * raw);
        cat.symbol_names.push_back("logtype");
    }
    {
        Rng rng(seed ^ 0x53594d424f4c53ull);
        std::vector<std::pair<int, cplx>> spec;
        for (int k = 1; k <= 16; ++k) spec.emplace_back(-k, rng.complex_box(1.0) / std::sqrt(16.0));
        cat.symbols.push_back(CircleFn::from_spectrum(g, spec));
        cat.symbol_names.push_back("random16");
    }
    {
        CircleFn raw = log_type_symbol(g, -2.0);
        double bn = bmo_norm(raw, ctx.arcs).value;
        cat.symbols.push_back(cplx(1.0 / bn, 0.0) * raw);
        cat.symbol_names.push_back("bmolog");
    }

    cat.rkt_pairs = {{0, 0}, {1, 1}, {1, 2}, {2, 1}, {6, 4}, {5, 6}};
    cat.carleson_pairs = {{0, 0}, {2, 1}, {6, 1}};
    return cat;
}

} // namespace hardy
