#include "doctest.h"

#include <cmath>
#include <sstream>

#include "hardy/carleson.hpp"
#include "hardy/catalog.hpp"
#include "test_util.hpp"

using namespace hardy;

namespace {

const CarlesonCorpus& test_corpus() {
    static const CarlesonCorpus c = [] {
        Rng rng(424242);
        DiskScan kscan = DiskScan::make(4, 16);
        return CarlesonCorpus::make(kscan, 32, 40, 32, rng);
    }();
    return c;
}

DiskMeasure random_measure(Rng& rng, int n_atoms) {
    DiskMeasure m;
    m.provenance = "random";
    for (int i = 0; i < n_atoms; ++i)
        m.atoms.push_back({rng.complex_in_disk(0.995), rng.uniform(0.0, 1.0)});
    return m;
}

} // namespace

TEST_SUITE_BEGIN("carleson");

TEST_CASE("disk measure: file format round trip and parse diagnostics") {
    Rng rng(99);
    DiskMeasure m = random_measure(rng, 17);
    std::ostringstream os;
    m.serialize(os);
    std::istringstream is(os.str());
    DiskMeasure back = DiskMeasure::parse(is);
    REQUIRE(back.atoms.size() == m.atoms.size());
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        CHECK(back.atoms[i].z == m.atoms[i].z);     // exact round trip
        CHECK(back.atoms[i].mass == m.atoms[i].mass);
    }

    std::istringstream bad1("0.1 0.2 0.3\n0.5 oops\n");
    CHECK_THROWS_WITH_AS(DiskMeasure::parse(bad1), "measure:2: expected 're im mass'",
                         std::runtime_error);
    std::istringstream bad2("# fine\n0.1 0.2 -1\n");
    CHECK_THROWS_AS(DiskMeasure::parse(bad2), std::runtime_error);
    std::istringstream bad3("garbage line\n");
    CHECK_THROWS_WITH_AS(DiskMeasure::parse(bad3), "measure:1: expected 're im mass'",
                         std::runtime_error);
    std::istringstream ok("# comment\n\n0.1 -0.2 0.5 # trailing comment\n");
    CHECK(DiskMeasure::parse(ok).atoms.size() == 1);
}

TEST_CASE("carleson constants: atom at the origin with unit weights") {
    const auto& ctx = testutil::ctx();
    const auto& unit = testutil::unit_weight();
    DiskMeasure tau;
    tau.atoms.push_back({cplx(0.0, 0.0), 1.0});
    auto c = carleson_constants(tau, unit, unit, test_corpus(), ctx.scan, ctx.sectors);
    CHECK(std::abs(c.B - 1.0) < 1e-12); // attained by the constant corpus member
    CHECK(std::abs(c.C - 1.0) < 1e-12); // P_0(0) = 1, witnessed at z = 0
    CHECK(std::abs(c.D - 1.0) < 1e-12); // only h = 1 sectors reach r = 0; mu(I_S) = 1
    CHECK(std::abs(c.C_witness.z) < 1e-12);
}

TEST_CASE("carleson constants: zero measure") {
    const auto& ctx = testutil::ctx();
    const auto& unit = testutil::unit_weight();
    DiskMeasure tau;
    tau.atoms.push_back({cplx(0.3, 0.1), 0.0});
    auto c = carleson_constants(tau, unit, unit, test_corpus(), ctx.scan, ctx.sectors);
    CHECK(c.B == 0.0);
    CHECK(c.C == 0.0);
    CHECK(c.D == 0.0);
}

TEST_CASE("discretized area measure: uniform sector bound and radial oracle") {
    const auto& ctx = testutil::ctx();
    const auto& unit = testutil::unit_weight();
    DiskMeasure tau = DiskMeasure::from_density(ctx.quad, [](int, int) { return 1.0; }, "area");
    CHECK(std::abs(tau.total_mass() - 0.5) < 1e-10);

    std::vector<double> mass(tau.atoms.size());
    for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = tau.atoms[i].mass;
    SectorMassIndex idx(tau, mass);
    double Dmax = 0.0;
    for (const Sector& s : ctx.sectors.sectors) {
        double v = idx.sector_sum(s) / unit.integral(s.footprint());
        Dmax = std::max(Dmax, v);
        // analytic sector mass: (2h)(h - h^2/2)/(2pi); footprint measure h
        double expect = s.h * (2.0 - s.h) / kTwoPi;
        if (s.h >= 0.25) {
            CHECK(std::abs(v - expect) <= 0.02 * expect); // well-resolved sectors
        } else {
            CHECK(v <= 2.0 * expect + 1e-9); // thin sectors: radial/angular cut slack
        }
    }
    CHECK(Dmax <= (2.0 / kPi) * 1.1);
}

TEST_CASE("constants are exactly homogeneous and monotone in the measure") {
    const auto& ctx = testutil::ctx();
    const auto& cat = testutil::catalog();
    Rng rng(5150);
    DiskMeasure tau = random_measure(rng, 30);
    const WeightFn& lam = cat.weights[2];
    const WeightFn& mu = cat.weights[1];
    auto base = carleson_constants(tau, lam, mu, test_corpus(), ctx.scan, ctx.sectors);

    auto scaled = carleson_constants(tau.scaled(4.0), lam, mu, test_corpus(), ctx.scan, ctx.sectors);
    CHECK(scaled.B == 4.0 * base.B); // power-of-two scaling is bitwise exact
    CHECK(scaled.C == 4.0 * base.C);
    CHECK(scaled.D == 4.0 * base.D);

    auto scaled2 = carleson_constants(tau.scaled(3.7), lam, mu, test_corpus(), ctx.scan, ctx.sectors);
    CHECK(scaled2.B == doctest::Approx(3.7 * base.B).epsilon(1e-12));

    auto grown = carleson_constants(tau.with_atom(cplx(0.5, 0.5), 0.8), lam, mu, test_corpus(),
                                    ctx.scan, ctx.sectors);
    CHECK(grown.B >= base.B);
    CHECK(grown.C >= base.C);
    CHECK(grown.D >= base.D);
}

TEST_CASE("equivalence ordering: chain check and alarm flag") {
    const auto& ctx = testutil::ctx();
    const auto& cat = testutil::catalog();
    const auto& unit = testutil::unit_weight();

    DiskMeasure atom0;
    atom0.atoms.push_back({cplx(0.0, 0.0), 1.0});
    auto rep = check_equivalence_ordering(atom0, unit, unit, test_corpus(), ctx.scan, ctx.sectors);
    CHECK(rep.chain_pass);
    CHECK(!rep.alarm);
    for (double r : {rep.constants.B / rep.constants.C, rep.constants.C / rep.constants.D,
                     rep.constants.B / rep.constants.D}) {
        CHECK(r >= 0.1);
        CHECK(r <= 10.0);
    }

    Rng rng(808);
    for (int i = 0; i < 5; ++i) {
        DiskMeasure tau = random_measure(rng, 10 + 5 * i);
        for (auto [li, mi] : {std::pair<int, int>{0, 0}, {2, 1}}) {
            auto r = check_equivalence_ordering(tau, cat.weights[li], cat.weights[mi], test_corpus(),
                                                ctx.scan, ctx.sectors);
            CHECK(r.chain_pass);
            CHECK(!r.alarm);
            CHECK(std::isfinite(r.constants.B));
            CHECK(std::isfinite(r.constants.C));
            CHECK(std::isfinite(r.constants.D));
        }
    }
}

TEST_CASE("uchiyama: zero symbol, rescaled symbols, precondition guard") {
    const auto& ctx = testutil::ctx();
    const auto& cat = testutil::catalog();
    const auto& unit = testutil::unit_weight();

    CircleFn zero = CircleFn::from_spectrum(ctx.grid, {{0, cplx(0.0, 0.0)}});
    DiskMeasure mz = uchiyama_measure(zero, ctx.quad, ctx.scan);
    CHECK(mz.total_mass() < 1e-20);

    CircleFn half = CircleFn::from_spectrum(ctx.grid, {{-1, cplx(0.5, 0.0)}});
    DiskMeasure mh = uchiyama_measure(half, ctx.quad, ctx.scan);
    auto ch = carleson_constants(mh, unit, unit, test_corpus(), ctx.scan, ctx.sectors);
    CHECK(ch.B <= std::exp(1.0) * 1.1);
    CHECK(std::abs(ch.B - 0.25) < 0.02); // LP measure scaled by |dbar phi|^2 = 1/4

    DiskMeasure ml = uchiyama_measure(cat.symbols[2], ctx.quad, ctx.scan); // garsia = 1
    auto cl = carleson_constants(ml, unit, unit, test_corpus(), ctx.scan, ctx.sectors);
    CHECK(cl.B <= std::exp(1.0) * 1.1);
    MESSAGE("uchiyama embedding constant for logtype: ", cl.B);

    CircleFn big = CircleFn::from_spectrum(ctx.grid, {{-1, cplx(2.0, 0.0)}});
    CHECK_THROWS_AS(uchiyama_measure(big, ctx.quad, ctx.scan), std::domain_error);
}

TEST_CASE("treil-volberg: zero measure, closed-form area case, random sweep") {
    const auto& ctx = testutil::ctx();
    const auto& cat = testutil::catalog();
    const auto& unit = testutil::unit_weight();

    DiskMeasure zero;
    zero.atoms.push_back({cplx(0.1, 0.0), 0.0});
    auto r0 = treil_volberg_check(zero, cat.weights[1], test_corpus(), ctx.scan);
    CHECK(r0.pass);
    CHECK(r0.hypothesis_B2 == 0.0);

    DiskMeasure area =
        DiskMeasure::from_density(ctx.quad, [](int, int) { return 0.3; }, "area-0.3");
    auto ra = treil_volberg_check(area, unit, test_corpus(), ctx.scan);
    CHECK(ra.pass);
    CHECK(ra.hypothesis_B2 == doctest::Approx(0.15).epsilon(1e-3)); // sup at z=0: 0.3 * 1/2
    CHECK(ra.conclusion_max <= 16.0 * ra.hypothesis_B2 * 1.1);

    Rng rng(31337);
    for (int i = 0; i < 5; ++i) {
        DiskMeasure tau = random_measure(rng, 12);
        for (int wi : {1, 5, 6}) {
            auto r = treil_volberg_check(tau, cat.weights[wi], test_corpus(), ctx.scan);
            CHECK(r.hypothesis_finite);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("gradient measure equivalence: constants, conj(zeta) radial oracle, random anti-analytic") {
    const auto& ctx = testutil::ctx();
    const auto& cat = testutil::catalog();
    const auto& unit = testutil::unit_weight();

    CircleFn c = CircleFn::from_spectrum(ctx.grid, {{0, cplx(3.0, -1.0)}});
    auto rc = gradient_measure_equivalence(c, unit, unit, ctx.quad, ctx.sectors);
    CHECK(rc.D1 == 0.0);
    CHECK(rc.D2 == 0.0);
    CHECK(rc.pass);

    CircleFn cz = CircleFn::from_spectrum(ctx.grid, {{-1, cplx(1.0, 0.0)}});
    auto r1 = gradient_measure_equivalence(cz, unit, unit, ctx.quad, ctx.sectors);
    CHECK(r1.pass);
    // |grad|^2 = 2; radial oracle for the sector masses at h = 1/2:
    //   log-density sector mass over h: 2*(2h/2pi) * int_{1-h}^1 ln(1/r) r dr / h
    {
        double a = 0.5;
        double I1 = (0.25 - a * a / 4.0 + 0.5 * a * a * std::log(a));
        double expect1 = 2.0 * (2.0 / kTwoPi) * I1;
        double I2 = 0.75 - (0.25 - a * a / 2.0 + a * a * a * a / 4.0) - 0.25; // int (1-r^2) r dr over [a,1]
        (void)I2;
        DiskMeasure m1 = DiskMeasure::from_density(
            ctx.quad, [&](int i, int) { return 2.0 * ctx.quad.log_kern[i]; }, "grad_log_density");
        std::vector<double> mass(m1.atoms.size());
        for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = m1.atoms[i].mass;
        SectorMassIndex idx(m1, mass);
        double got = idx.sector_sum(Sector{0.5, 0.0}) / 0.5;
        CHECK(std::abs(got - expect1) <= 0.05 * expect1);
    }

    Rng rng(2718);
    std::vector<std::pair<int, cplx>> spec;
    for (int k = 1; k <= 16; ++k) spec.emplace_back(-k, rng.complex_box(1.0));
    CircleFn anti = CircleFn::from_spectrum(ctx.grid, spec);
    auto r2 = gradient_measure_equivalence(anti, cat.weights[1], cat.weights[1], ctx.quad, ctx.sectors);
    CHECK(r2.pass);
    CHECK(r2.D1 > 0.0);
    CHECK(r2.D2 > 0.0);
    MESSAGE("density equivalence D1/D2 for random anti-analytic: ", r2.ratio_12);

    std::vector<std::pair<int, cplx>> two_sided = {{-1, cplx(1, 0)}, {2, cplx(1, 0)}};
    CHECK_THROWS_AS(
        gradient_measure_equivalence(CircleFn::from_spectrum(ctx.grid, two_sided), unit, unit,
                                     ctx.quad, ctx.sectors),
        std::domain_error);
}

TEST_CASE("gradient poisson bound: closed form at the origin and recorded constants") {
    auto grid = CircleGrid::make(1024);
    DiskQuadrature quad = DiskQuadrature::make(96, 256);
    DiskScan scan = DiskScan::make(5, 32);
    WeightFn unit = WeightFn::constant(grid, 1.0);

    CircleFn c = CircleFn::from_spectrum(grid, {{0, cplx(1.0, 1.0)}});
    auto rc = gradient_poisson_bound_check(c, unit, unit, quad, scan);
    CHECK(rc.lhs < 1e-20);
    CHECK(rc.rhs_plain < 1e-20);

    CircleFn cz = CircleFn::from_spectrum(grid, {{-1, cplx(1.0, 0.0)}});
    auto r = gradient_poisson_bound_check(cz, unit, unit, quad, scan);
    // at z0 = 0 the left side is 2 * int (1-|z|^2) dA = 1/2, the right side 1
    CHECK(r.lhs >= 0.5 - 1e-6);
    CHECK(r.rhs_plain >= 1.0 - 1e-9);
    CHECK(r.lhs <= 1.5 * r.rhs_plain);
    CHECK(std::isfinite(r.C_plain));
    CHECK(std::isfinite(r.C_poisson));
    MESSAGE("gradient bound C_plain=", r.C_plain, " C_poisson=", r.C_poisson);

    WeightFn mu = WeightFn::power(grid, 0.3);
    WeightFn lam = WeightFn::power(grid, -0.3);
    auto rw = gradient_poisson_bound_check(cz, lam, mu, quad, scan);
    CHECK(std::isfinite(rw.C_plain));
    CHECK(rw.lhs > 0.0);
}

TEST_SUITE_END();
