#include "doctest.h"

#include <cmath>

#include "hardy/circle.hpp"
#include "hardy/rng.hpp"
#include "test_util.hpp"

using namespace hardy;

TEST_SUITE_BEGIN("circle");

TEST_CASE("grid: node weights sum to one, nodes avoid lattice angles") {
    auto g = testutil::grid();
    double sum = 0.0;
    for (int j = 0; j < g->n; ++j) sum += g->node_weight();
    CHECK(std::abs(sum - 1.0) < 1e-14);
    for (double t : g->theta) {
        CHECK(t > -kPi);
        CHECK(t < kPi);
        CHECK(std::abs(t) > 1e-12); // no node at the default singularity angle
    }
    CHECK_THROWS_AS(CircleGrid::make(8), std::invalid_argument);
    CHECK_THROWS_AS(CircleGrid::make(100), std::invalid_argument);
}

TEST_CASE("transform: constants and monomials") {
    auto g = testutil::grid();
    CircleFn one = CircleFn::from_function(g, [](double) { return 1.0; });
    CHECK(std::abs(one.fhat(0) - 1.0) < 1e-14);
    for (int k : {-5, -1, 1, 2, 77}) CHECK(std::abs(one.fhat(k)) < 1e-13);

    CircleFn zeta = CircleFn::from_function(g, [](double t) { return cplx(std::cos(t), std::sin(t)); });
    CHECK(std::abs(zeta.fhat(1) - 1.0) < 1e-13);
    CHECK(std::abs(zeta.fhat(0)) < 1e-13);
    CHECK(std::abs(zeta.fhat(-1)) < 1e-13);
}

TEST_CASE("transform: samples <-> fourier round trip") {
    auto g = testutil::grid();
    Rng rng(7);
    std::vector<cplx> s(g->n);
    for (auto& v : s) v = rng.complex_box(1.0);
    CircleFn f = CircleFn::from_samples(g, s);
    std::vector<cplx> back = circle_synthesize(*g, f.fourier());
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g->n; ++j) {
        num += std::norm(back[j] - s[j]);
        den += std::norm(s[j]);
    }
    CHECK(std::sqrt(num / den) < 1e-10);
}

TEST_CASE("transform: grid-refinement self-consistency for |theta|^(1/2)") {
    auto f4 = CircleFn::from_function(CircleGrid::make(4096),
                                      [](double t) { return std::sqrt(std::abs(t)); });
    auto f8 = CircleFn::from_function(CircleGrid::make(8192),
                                      [](double t) { return std::sqrt(std::abs(t)); });
    for (int k = -64; k <= 64; ++k) CHECK(std::abs(f4.fhat(k) - f8.fhat(k)) < 1e-4);
}

TEST_CASE("riesz projections: split, reconstruction, idempotence") {
    auto g = testutil::grid();
    CircleFn f = CircleFn::from_spectrum(g, {{1, cplx(1, 0)}, {-1, cplx(1, 0)}});
    CircleFn fm = riesz_project(f, ProjSign::minus);
    CHECK(std::abs(fm.fhat(-1) - 1.0) < 1e-14);
    CHECK(std::abs(fm.fhat(1)) < 1e-14);

    CircleFn one = CircleFn::from_spectrum(g, {{0, cplx(3.5, -1)}});
    CHECK(std::abs(riesz_project(one, ProjSign::minus).fhat(0)) < 1e-15);

    Rng rng(11);
    std::vector<std::pair<int, cplx>> spec;
    for (int k = -32; k <= 32; ++k) spec.emplace_back(k, rng.complex_box(1.0));
    CircleFn r = CircleFn::from_spectrum(g, spec);
    CircleFn p = riesz_project(r, ProjSign::plus);
    CircleFn m = riesz_project(r, ProjSign::minus);
    for (int k = -40; k <= 40; ++k) {
        CHECK(std::abs(p.fhat(k) + m.fhat(k) - r.fhat(k)) == 0.0); // exact in coefficients
        CHECK(std::abs(riesz_project(p, ProjSign::minus).fhat(k)) == 0.0);
    }
    for (int k = -40; k <= 40; ++k)
        CHECK(std::abs(riesz_project(p, ProjSign::plus).fhat(k) - p.fhat(k)) < 1e-15);
}

TEST_CASE("harmonic extension: mean value and harmonic monomial") {
    auto g = testutil::grid();
    CircleFn c = CircleFn::from_spectrum(g, {{0, cplx(2.0, -0.5)}});
    for (cplx z : {cplx(0, 0), cplx(0.5, 0.25), cplx(-0.9, 0)}) {
        cplx v = harmonic_extend(c, DiskPoint(z));
        CHECK(std::abs(v - cplx(2.0, -0.5)) < 1e-12);
    }
    CircleFn re = CircleFn::from_function(g, [](double t) { return std::cos(t); });
    cplx v = harmonic_extend(re, DiskPoint(cplx(0.5, 0)));
    CHECK(std::abs(v - 0.5) < 1e-12);
}

TEST_CASE("harmonic extension: quadrature matches spectral series for |theta|^(1/2)") {
    auto g = testutil::grid();
    CircleFn f = CircleFn::from_function(g, [](double t) { return std::sqrt(std::abs(t)); });
    DiskPoint z(cplx(0.3, 0.0));
    cplx quad = harmonic_extend(f, z);
    cplx series = spectral_extend(f, z.z);
    CHECK(std::abs(quad - series) < 1e-6);
}

TEST_CASE("kernels: closed forms and normalization") {
    auto g = testutil::grid();
    Kernel p0{DiskPoint(cplx(0, 0)), KernelKind::poisson};
    for (double t : {0.0, 1.0, -2.5}) CHECK(std::abs(p0.eval(t).real() - 1.0) < 1e-14);

    // P_{0.9}(1) = (1 - 0.81) / (1 - 0.9)^2 = 19
    CHECK(std::abs(poisson_kernel(cplx(0.9, 0.0), 0.0) - 19.0) < 1e-10);

    // pointwise identity P_z = (1 - |z|^2) |K_z|^2
    Rng rng(3);
    for (int i = 0; i < 25; ++i) {
        cplx z = rng.complex_in_disk(0.97);
        double t = rng.uniform(-kPi, kPi);
        double lhs = poisson_kernel(z, t);
        double rhs = (1.0 - std::norm(z)) * std::norm(szego_kernel(z, t));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
    }

    // quadrature normalization: radii to 1 - 2^-7 keep grid aliasing below 1e-8
    for (int i = 1; i <= 7; ++i) {
        double r = 1.0 - std::ldexp(1.0, -i);
        for (double t : {0.0, 0.7, 2.9}) {
            cplx z = std::polar(r, t);
            PoissonWeights pw = poisson_weights(*g, z);
            CHECK(std::abs(pw.total - 1.0) < 1e-8);
            Kernel kz{DiskPoint(z), KernelKind::normalized};
            double nrm = 0.0;
            for (int j = 0; j < g->n; ++j) nrm += std::norm(kz.eval(g->theta[j])) / g->n;
            CHECK(std::abs(std::sqrt(nrm) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("kernels: grid aliasing of the raw quadrature follows 2 r^N") {
    auto g = testutil::grid();
    double r = 1.0 - std::ldexp(1.0, -10);
    PoissonWeights pw = poisson_weights(*g, std::polar(r, 0.3));
    double expected = 2.0 * std::pow(r, static_cast<double>(g->n));
    CHECK(std::abs(pw.total - 1.0) < 3.0 * expected);
    CHECK(std::abs(pw.total - 1.0) > 0.1 * expected);
}

TEST_CASE("disk points: radius cap") {
    DiskPoint z(cplx(2.0, 0.0));
    CHECK(z.radius() <= DiskPoint::radius_cap() + 1e-15);
    DiskPoint w(cplx(0.3, -0.4));
    CHECK(std::abs(w.z - cplx(0.3, -0.4)) == 0.0);
}

TEST_CASE("poisson bounds: upper bound and frozen lower-bound constant") {
    auto g = testutil::grid();
    const DiskScan& scan = testutil::ctx().scan;
    const double frozen_a = 0.05; // measured minimum is ~0.18; must stay >= 1/(10 pi)
    CHECK(frozen_a >= 1.0 / (10.0 * kPi));
    double min_seen = 1e300;
    for (const auto& pt : scan.points) {
        if (pt.level == 0) continue;
        double r = pt.z.radius();
        double measure = 1.0 - r; // m(I) = 1 - |z|
        double center = std::arg(pt.z.z);
        double upper = 2.0 / (1.0 - r);
        double half = kPi * measure;
        for (int j = 0; j < g->n; ++j) {
            double p = poisson_kernel(pt.z.z, g->theta[j]);
            CHECK(p <= upper * (1.0 + 1e-12));
            if (std::abs(wrap_angle(g->theta[j] - center)) <= half)
                min_seen = std::min(min_seen, p * measure);
        }
    }
    CHECK(min_seen >= frozen_a);
}

TEST_SUITE_END();
