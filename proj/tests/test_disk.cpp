#include "doctest.h"

#include <cmath>

#include "hardy/disk.hpp"
#include "hardy/oscillation.hpp"
#include "hardy/rng.hpp"
#include "test_util.hpp"

using namespace hardy;

TEST_SUITE_BEGIN("disk");

TEST_CASE("quadrature: normalization invariants") {
    const auto& q = testutil::ctx().quad;
    double area = q.integrate([](cplx) { return 1.0; });
    CHECK(std::abs(area - 0.5) < 1e-10);

    double logint = 0.0;
    for (int i = 0; i < q.n_radial; ++i) logint += q.wr[i] * 4.0 * q.log_kern[i];
    CHECK(std::abs(logint - 1.0) < 1e-8);

    for (int i = 0; i < q.n_radial; ++i) {
        CHECK(q.r[i] > 0.0);
        CHECK(q.r[i] < 1.0);
    }
}

TEST_CASE("green's identity: closed-form corpus") {
    const auto& ctx = testutil::ctx();
    for (const auto& f : greens_corpus()) {
        double res = greens_identity_residual(f, *ctx.grid, ctx.quad);
        CHECK_MESSAGE(res < 1e-6, "residual for ", f.name, " = ", res);
    }
    // f = |z|^2: boundary term is exactly 1
    auto abs2 = greens_corpus()[1];
    double lhs = 0.0;
    for (int j = 0; j < ctx.grid->n; ++j) lhs += 1.0;
    lhs = lhs / ctx.grid->n - abs2.value(cplx(0.0, 0.0));
    CHECK(std::abs(lhs - 1.0) < 1e-12);
}

TEST_CASE("gradient: constants and anti-analytic monomial") {
    const auto& ctx = testutil::ctx();
    CircleFn c = CircleFn::from_spectrum(ctx.grid, {{0, cplx(4.0, 2.0)}});
    auto gc = gradient_of_extension(c, DiskPoint(cplx(0.3, 0.2)));
    CHECK(std::abs(gc.d) < 1e-14);
    CHECK(std::abs(gc.dbar) < 1e-14);

    CircleFn cz = CircleFn::from_spectrum(ctx.grid, {{-1, cplx(1.0, 0.0)}});
    auto g1 = gradient_of_extension(cz, DiskPoint(cplx(0.5, -0.1)));
    CHECK(std::abs(g1.dbar - 1.0) < 1e-14);
    CHECK(std::abs(g1.d) < 1e-14);
}

TEST_CASE("gradient: finite-difference oracle at random interior points") {
    const auto& ctx = testutil::ctx();
    Rng rng(101);
    std::vector<std::pair<int, cplx>> spec;
    for (int k = -16; k <= 16; ++k) spec.emplace_back(k, rng.complex_box(1.0));
    CircleFn phi = CircleFn::from_spectrum(ctx.grid, spec);

    const double h = 1e-5;
    auto ext = [&](cplx z) { return harmonic_extend(phi, DiskPoint(z)); };
    int tested = 0;
    for (int i = 0; i < 50; ++i) {
        cplx z = rng.complex_in_disk(0.85);
        cplx dx = (ext(z + h) - ext(z - h)) / (2.0 * h);
        cplx dy = (ext(z + cplx(0, h)) - ext(z - cplx(0, h))) / (2.0 * h);
        cplx d_fd = 0.5 * (dx - cplx(0, 1) * dy);
        cplx db_fd = 0.5 * (dx + cplx(0, 1) * dy);
        auto g = gradient_of_extension(phi, DiskPoint(z));
        double scale = std::abs(g.d) + std::abs(g.dbar) + 1e-9;
        CHECK((std::abs(d_fd - g.d) + std::abs(db_fd - g.dbar)) / scale < 1e-6);
        ++tested;
    }
    CHECK(tested == 50);
}

TEST_CASE("gradient field on the polar grid matches pointwise evaluation") {
    const auto& ctx = testutil::ctx();
    Rng rng(7);
    std::vector<std::pair<int, cplx>> spec;
    for (int k = -12; k <= 12; ++k) spec.emplace_back(k, rng.complex_box(1.0));
    CircleFn phi = CircleFn::from_spectrum(ctx.grid, spec);
    auto [d, dbar] = gradient_on_polar(phi, ctx.quad);
    for (int i : {0, 100, 255}) {
        for (int a : {0, 17, 300}) {
            auto g = gradient_of_extension(phi, DiskPoint(ctx.quad.node(i, a)));
            std::size_t idx = static_cast<std::size_t>(i) * ctx.quad.n_angular + a;
            CHECK(std::abs(d[idx] - g.d) < 1e-9);
            CHECK(std::abs(dbar[idx] - g.dbar) < 1e-9);
        }
    }
}

TEST_CASE("littlewood-paley: monomial exactness for the unit weight") {
    const auto& ctx = testutil::ctx();
    WeightFn one = WeightFn::constant(ctx.grid, 1.0);
    double first = 0.0;
    for (int n = 1; n <= 8; ++n) {
        std::vector<std::pair<int, cplx>> spec = {{n, cplx(1.0, 0.0)}};
        CircleFn f = CircleFn::from_spectrum(ctx.grid, spec);
        auto rep = littlewood_paley_weighted(f, one, ctx.quad);
        CHECK(std::abs(rep.boundary - 1.0) < 1e-12);
        CHECK(std::abs(rep.ratio - 0.5) < 1e-8);
        if (n == 1)
            first = rep.ratio;
        else
            CHECK(std::abs(rep.ratio - first) < 1e-8);
    }
}

TEST_CASE("littlewood-paley: zero input and weighted ratios") {
    const auto& ctx = testutil::ctx();
    const auto& cat = testutil::catalog();
    CircleFn zero = CircleFn::from_spectrum(ctx.grid, {{0, cplx(0.0, 0.0)}});
    auto rep0 = littlewood_paley_weighted(zero, cat.weights[1], ctx.quad);
    CHECK(rep0.ratio == 1.0);

    Rng rng(5);
    std::vector<std::pair<int, cplx>> spec;
    for (int k = -8; k <= 8; ++k) spec.emplace_back(k, rng.complex_box(1.0));
    CircleFn f = CircleFn::from_spectrum(ctx.grid, spec);
    for (int wi : {1, 2, 6}) {
        auto rep = littlewood_paley_weighted(f, cat.weights[wi], ctx.quad);
        CHECK(rep.ratio > 0.05);
        CHECK(rep.ratio < 5.0);
        MESSAGE("LP ratio for ", cat.weights[wi].name(), ": ", rep.ratio);
    }
}

TEST_CASE("u(z) = 1 + |phi(z)|^2 - |phi|^2(z) stays in [0, 1] when garsia <= 1") {
    const auto& ctx = testutil::ctx();
    const auto& cat = testutil::catalog();
    const CircleFn& phi = cat.symbols[2]; // rescaled to garsia norm 1
    REQUIRE(garsia_norm(phi, ctx.scan).value == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& pt : ctx.scan.points) {
        PoissonWeights pw = poisson_weights(*ctx.grid, pt.z.z);
        double m2 = 0.0;
        cplx m1(0.0, 0.0);
        for (int j = 0; j < ctx.grid->n; ++j) {
            m1 += pw.p[j] * phi.samples()[j];
            m2 += pw.p[j] * std::norm(phi.samples()[j]);
        }
        m1 /= pw.total;
        m2 /= pw.total;
        double u = 1.0 + std::norm(m1) - m2;
        CHECK(u >= -1e-10);
        CHECK(u <= 1.0 + 1e-10);
    }
}

TEST_CASE("analytic polar evaluation matches Horner") {
    const auto& q = testutil::ctx().quad;
    Rng rng(13);
    std::vector<cplx> coeffs(40);
    for (auto& c : coeffs) c = rng.complex_box(1.0);
    auto vals = eval_analytic_on_polar(coeffs, q);
    for (int i : {3, 128, 250}) {
        for (int a : {1, 200, 511}) {
            cplx z = q.node(i, a);
            cplx direct(0.0, 0.0);
            for (std::size_t k = coeffs.size(); k-- > 0;) direct = direct * z + coeffs[k];
            CHECK(std::abs(vals[static_cast<std::size_t>(i) * q.n_angular + a] - direct) < 1e-10);
        }
    }
}

TEST_SUITE_END();
