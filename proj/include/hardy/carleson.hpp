#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardy/circle.hpp"
#include "hardy/disk.hpp"
#include "hardy/oscillation.hpp"
#include "hardy/rng.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// P_z evaluated at an interior point w (both in the disk).
inline double poisson_kernel_at(cplx z, cplx w) {
    cplx den = 1.0 - z * std::conj(w);
    return (1.0 - std::norm(z)) / std::norm(den);
}

/// Finite atomic nonnegative measure on the disk. Measures discretized on a
/// polar quadrature keep the ring layout so harmonic extensions and sector
/// sums can run ring-wise.
struct DiskMeasure {
    struct Atom {
        cplx z;
        double mass = 0.0;
    };
    struct PolarLayout {
        std::vector<double> radii; // ring radii, atoms ordered ring-major
        int n_angular = 0;
    };

    std::vector<Atom> atoms;
    std::string provenance = "custom";
    std::optional<PolarLayout> polar;

    double total_mass() const {
        double s = 0.0;
        for (const auto& a : atoms) s += a.mass;
        return s;
    }

    DiskMeasure scaled(double s) const {
        if (s < 0.0) throw std::domain_error("DiskMeasure::scaled: negative factor");
        DiskMeasure out = *this;
        for (auto& a : out.atoms) a.mass *= s;
        return out;
    }

    DiskMeasure with_atom(cplx z, double mass) const {
        if (mass < 0.0) throw std::domain_error("DiskMeasure: negative mass");
        DiskMeasure out = *this;
        out.atoms.push_back({DiskPoint(z).z, mass});
        out.polar.reset();
        return out;
    }

    /// Discretize density(z) * dA on the quadrature (masses = density * node weight).
    template <class Density>
    static DiskMeasure from_density(const DiskQuadrature& q, Density&& density,
                                    std::string provenance = "density") {
        DiskMeasure m;
        m.provenance = std::move(provenance);
        m.atoms.reserve(q.size());
        for (int i = 0; i < q.n_radial; ++i)
            for (int a = 0; a < q.n_angular; ++a) {
                double mass = density(i, a) * q.weight(i, a);
                if (mass < 0.0) mass = 0.0;
                m.atoms.push_back({q.node(i, a), mass});
            }
        m.polar = PolarLayout{q.r, q.n_angular};
        return m;
    }

    void serialize(std::ostream& os) const {
        os << "# hardy-lab disk measure: re im mass per line\n";
        char buf[128];
        for (const auto& a : atoms) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", a.z.real(), a.z.imag(), a.mass);
            os << buf;
        }
    }

    static DiskMeasure parse(std::istream& is, const std::string& origin = "measure") {
        DiskMeasure m;
        m.provenance = "file";
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            std::size_t h = line.find('#');
            if (h != std::string::npos) line.erase(h);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            std::istringstream ls(line);
            double re, im, mass;
            if (!(ls >> re >> im >> mass)) {
                throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                         ": expected 're im mass'");
            }
            std::string rest;
            if (ls >> rest)
                throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                         ": trailing tokens after 're im mass'");
            if (mass < 0.0)
                throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": negative mass");
            m.atoms.push_back({DiskPoint(cplx(re, im)).z, mass});
        }
        return m;
    }

    void save_file(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("DiskMeasure: cannot open " + path);
        serialize(os);
    }

    static DiskMeasure load_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("DiskMeasure: cannot open " + path);
        return parse(is, path);
    }
};

/// Carleson sector S = {r e^{i t} : 1-h <= r < 1, |t - theta0| <= h} with the
/// footprint arc I_S of normalized measure h centered at theta0.
struct Sector {
    double h = 1.0;
    double theta0 = 0.0;

    bool contains(cplx z) const {
        double r = std::abs(z);
        if (r < 1.0 - h) return false;
        return std::abs(wrap_angle(std::arg(z) - theta0)) <= h;
    }

    Arc footprint() const { return Arc{theta0, std::min(h, 1.0)}; }
};

struct SectorFamily {
    std::vector<Sector> sectors;

    static SectorFamily make(int j_max = 6, int n_centers = 64) {
        if (j_max < 0 || n_centers < 1) throw std::invalid_argument("SectorFamily: bad parameters");
        SectorFamily fam;
        for (int j = 0; j <= j_max; ++j) {
            double h = std::ldexp(1.0, -j);
            for (int c = 0; c < n_centers; ++c)
                fam.sectors.push_back(Sector{h, kTwoPi * c / n_centers});
        }
        return fam;
    }
};

/// Harmonic extension of a weight at every atom of a measure.
inline std::vector<double> weight_at_atoms(const WeightFn& w, const DiskMeasure& tau) {
    std::vector<double> out(tau.atoms.size());
    if (w.family() == WeightFamily::constant) {
        double c = w.values()[0];
        std::fill(out.begin(), out.end(), c);
        return out;
    }
    if (tau.polar) {
        const auto& lay = *tau.polar;
        const int A = lay.n_angular;
        const int half = w.grid().n / 2;
        std::vector<cplx> bins(A);
        const CircleFn& f = w.fn();
        for (std::size_t i = 0; i < lay.radii.size(); ++i) {
            std::fill(bins.begin(), bins.end(), cplx(0.0, 0.0));
            bins[0] += f.fhat(0);
            double rk = lay.radii[i];
            for (int k = 1; k <= half; ++k) {
                if (k < half) bins[k % A] += f.fhat(k) * rk;
                bins[((-k) % A + A) % A] += f.fhat(-k) * rk;
                rk *= lay.radii[i];
                if (rk < 1e-300) break;
            }
            Fft::plan(A).inverse(bins);
            for (int a = 0; a < A; ++a) out[i * A + a] = bins[a].real();
        }
        return out;
    }
    for (std::size_t i = 0; i < tau.atoms.size(); ++i)
        out[i] = harmonic_extend_real(w.fn(), poisson_weights(w.grid(), tau.atoms[i].z));
    return out;
}

/// Test corpus for embedding constants: degree-`kernel_degree` partial sums of
/// Szego kernels at scan points plus seeded random analytic polynomials.
struct CarlesonCorpus {
    struct Fn {
        std::string name;
        std::vector<cplx> coeffs; // analytic coefficients a_0..a_d
    };
    std::vector<Fn> fns;

    static CarlesonCorpus make(const DiskScan& kernel_scan, int kernel_degree, int n_random,
                               int random_degree, Rng& rng) {
        CarlesonCorpus c;
        c.fns.push_back({"const", {cplx(1.0, 0.0)}});
        for (const auto& pt : kernel_scan.points) {
            if (pt.level == 0) continue;
            std::vector<cplx> a(kernel_degree + 1);
            cplx zb = std::conj(pt.z.z);
            cplx p(1.0, 0.0);
            for (int k = 0; k <= kernel_degree; ++k) {
                a[k] = p;
                p *= zb;
            }
            c.fns.push_back({"kernel", std::move(a)});
        }
        for (int i = 0; i < n_random; ++i) {
            int deg = rng.uniform_int(1, random_degree);
            std::vector<cplx> a(deg + 1);
            for (auto& v : a) v = rng.complex_box(1.0);
            c.fns.push_back({"random", std::move(a)});
        }
        return c;
    }
};

inline cplx horner_eval(const std::vector<cplx>& coeffs, cplx z) {
    cplx s(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) s = s * z + coeffs[i];
    return s;
}

/// int_T |f|^2 mu dm for every corpus function (f realized on the grid).
inline std::vector<double> corpus_weighted_norms(const CarlesonCorpus& corpus, const WeightFn& mu) {
    std::vector<double> out(corpus.fns.size());
    auto grid = mu.grid_ptr();
    for (std::size_t i = 0; i < corpus.fns.size(); ++i) {
        std::vector<std::pair<int, cplx>> spec;
        spec.reserve(corpus.fns[i].coeffs.size());
        for (std::size_t k = 0; k < corpus.fns[i].coeffs.size(); ++k)
            spec.emplace_back(static_cast<int>(k), corpus.fns[i].coeffs[k]);
        CircleFn f = CircleFn::from_spectrum(grid, spec);
        double s = 0.0;
        for (int j = 0; j < grid->n; ++j) s += std::norm(f.samples()[j]) * mu.values()[j];
        out[i] = s / grid->n;
    }
    return out;
}

/// sum_a |f(z_a)|^2 * mass_a for every corpus function, with `mass` the
/// per-atom masses (already carrying the lambda factor when needed).
inline std::vector<double> corpus_disk_sums(const CarlesonCorpus& corpus, const DiskMeasure& tau,
                                            const std::vector<double>& mass) {
    std::vector<double> out(corpus.fns.size(), 0.0);
    if (tau.polar) {
        const auto& lay = *tau.polar;
        const int A = lay.n_angular;
        std::vector<cplx> bins(A);
        for (std::size_t fi = 0; fi < corpus.fns.size(); ++fi) {
            const auto& coeffs = corpus.fns[fi].coeffs;
            double acc = 0.0;
            for (std::size_t i = 0; i < lay.radii.size(); ++i) {
                std::fill(bins.begin(), bins.end(), cplx(0.0, 0.0));
                double rk = 1.0;
                for (std::size_t k = 0; k < coeffs.size(); ++k) {
                    bins[k % A] += coeffs[k] * rk;
                    rk *= lay.radii[i];
                }
                Fft::plan(A).inverse(bins);
                const double* ms = mass.data() + i * A;
                for (int a = 0; a < A; ++a) acc += std::norm(bins[a]) * ms[a];
            }
            out[fi] = acc;
        }
        return out;
    }
    for (std::size_t fi = 0; fi < corpus.fns.size(); ++fi) {
        double acc = 0.0;
        for (std::size_t i = 0; i < tau.atoms.size(); ++i)
            acc += std::norm(horner_eval(corpus.fns[fi].coeffs, tau.atoms[i].z)) * mass[i];
        out[fi] = acc;
    }
    return out;
}

/// Fast sector sums of per-atom masses; ring-wise windows for polar measures.
class SectorMassIndex {
public:
    SectorMassIndex(const DiskMeasure& tau, std::vector<double> mass)
        : tau_(&tau), mass_(std::move(mass)) {
        if (mass_.size() != tau.atoms.size())
            throw std::invalid_argument("SectorMassIndex: mass size mismatch");
    }

    double sector_sum(const Sector& s) const {
        const auto& tau = *tau_;
        double acc = 0.0;
        if (tau.polar) {
            const auto& lay = *tau.polar;
            const int A = lay.n_angular;
            const double step = kTwoPi / A;
            for (std::size_t i = 0; i < lay.radii.size(); ++i) {
                if (lay.radii[i] < 1.0 - s.h) continue;
                int lo = static_cast<int>(std::floor((s.theta0 - s.h) / step)) - 1;
                int hi = static_cast<int>(std::ceil((s.theta0 + s.h) / step)) + 1;
                for (int a = lo; a <= hi; ++a) {
                    int aa = ((a % A) + A) % A;
                    // window is conservative; apply the exact membership test
                    if (std::abs(wrap_angle(aa * step - s.theta0)) <= s.h)
                        acc += mass_[i * A + aa];
                }
            }
            return acc;
        }
        for (std::size_t i = 0; i < tau.atoms.size(); ++i)
            if (s.contains(tau.atoms[i].z)) acc += mass_[i];
        return acc;
    }

private:
    const DiskMeasure* tau_;
    std::vector<double> mass_;
};

struct CarlesonConstants {
    double B = 0.0; // corpus embedding constant (certified lower bound of the true B)
    double C = 0.0; // sup over the scan of (1/mu(z)) ||P_z||_{L1(lambda dtau)}
    double D = 0.0; // sup over sectors of (lambda dtau)(S) / mu(I_S)
    std::size_t B_witness = 0;
    DiskPoint C_witness;
    Sector D_witness;
};

/// Per-pair context reusable across many measures: corpus norms against mu
/// and the mu extension over the scan.
struct CarlesonWeightData {
    const WeightFn* lambda = nullptr;
    const WeightFn* mu = nullptr;
    std::vector<double> corpus_norms_mu;
    std::vector<double> mu_on_scan;

    static CarlesonWeightData make(const WeightFn& lambda, const WeightFn& mu,
                                   const CarlesonCorpus& corpus, const DiskScan& scan) {
        CarlesonWeightData d;
        d.lambda = &lambda;
        d.mu = &mu;
        d.corpus_norms_mu = corpus_weighted_norms(corpus, mu);
        d.mu_on_scan.reserve(scan.points.size());
        for (const auto& pt : scan.points)
            d.mu_on_scan.push_back(
                harmonic_extend_real(mu.fn(), poisson_weights(mu.grid(), pt.z.z)));
        return d;
    }
};

/// The two-weight Carleson conditions (B, C, D) for an atomic measure; with
/// unit weights this is the classical embedding theorem. lambda at an interior atom means
/// the harmonic extension of lambda there.
inline CarlesonConstants carleson_constants(const DiskMeasure& tau, const CarlesonWeightData& wd,
                                            const CarlesonCorpus& corpus, const DiskScan& scan,
                                            const SectorFamily& sectors) {
    CarlesonConstants out;
    std::vector<double> lam = weight_at_atoms(*wd.lambda, tau);
    std::vector<double> lam_mass(tau.atoms.size());
    for (std::size_t i = 0; i < tau.atoms.size(); ++i) lam_mass[i] = lam[i] * tau.atoms[i].mass;

    // (i) over the corpus
    std::vector<double> disk = corpus_disk_sums(corpus, tau, lam_mass);
    for (std::size_t i = 0; i < corpus.fns.size(); ++i) {
        double ratio = disk[i] / wd.corpus_norms_mu[i];
        if (ratio > out.B) {
            out.B = ratio;
            out.B_witness = i;
        }
    }

    // (ii) over the scan
    for (std::size_t p = 0; p < scan.points.size(); ++p) {
        const auto& pt = scan.points[p];
        double s = 0.0;
        for (std::size_t i = 0; i < tau.atoms.size(); ++i)
            s += poisson_kernel_at(pt.z.z, tau.atoms[i].z) * lam_mass[i];
        double v = s / wd.mu_on_scan[p];
        if (v > out.C) {
            out.C = v;
            out.C_witness = pt.z;
        }
    }

    // (iii) over the sector family
    SectorMassIndex idx(tau, lam_mass);
    for (const Sector& s : sectors.sectors) {
        double muIS = wd.mu->integral(s.footprint());
        if (!(muIS > 0.0)) throw std::domain_error("carleson_constants: degenerate weight on I_S");
        double v = idx.sector_sum(s) / muIS;
        if (v > out.D) {
            out.D = v;
            out.D_witness = s;
        }
    }
    return out;
}

inline CarlesonConstants carleson_constants(const DiskMeasure& tau, const WeightFn& lambda,
                                            const WeightFn& mu, const CarlesonCorpus& corpus,
                                            const DiskScan& scan, const SectorFamily& sectors) {
    return carleson_constants(tau, CarlesonWeightData::make(lambda, mu, corpus, scan), corpus, scan,
                              sectors);
}

struct OrderingReport {
    CarlesonConstants constants;
    double max_chain_violation = 0.0; // sector chain (lambda tau)(S) * minP <= ||P_z0||
    bool chain_pass = true;
    bool alarm = false; // C/D beyond the alarm ratio
    double alarm_value = 0.0;
};

/// Directly provable orderings between the three constants plus the alarm
/// flag for suspicious C/D divergence.
inline OrderingReport check_equivalence_ordering(const DiskMeasure& tau,
                                                 const CarlesonWeightData& wd,
                                                 const CarlesonCorpus& corpus,
                                                 const DiskScan& scan, const SectorFamily& sectors,
                                                 double alarm_ratio = 1e4) {
    const WeightFn& lambda = *wd.lambda;
    OrderingReport rep;
    rep.constants = carleson_constants(tau, wd, corpus, scan, sectors);

    std::vector<double> lam = weight_at_atoms(lambda, tau);
    std::vector<double> lam_mass(tau.atoms.size());
    for (std::size_t i = 0; i < tau.atoms.size(); ++i) lam_mass[i] = lam[i] * tau.atoms[i].mass;
    SectorMassIndex idx(tau, lam_mass);

    for (const Sector& s : sectors.sectors) {
        cplx z0 = std::polar(1.0 - 0.5 * s.h, s.theta0);
        double minP = std::numeric_limits<double>::infinity();
        double sector_mass = 0.0;
        for (std::size_t i = 0; i < tau.atoms.size(); ++i) {
            if (!s.contains(tau.atoms[i].z)) continue;
            sector_mass += lam_mass[i];
            minP = std::min(minP, poisson_kernel_at(z0, tau.atoms[i].z));
        }
        if (sector_mass <= 0.0) continue;
        double lhs = sector_mass * minP;
        double rhs = 0.0;
        for (std::size_t i = 0; i < tau.atoms.size(); ++i)
            rhs += poisson_kernel_at(z0, tau.atoms[i].z) * lam_mass[i];
        double viol = lhs - rhs * (1.0 + 1e-12);
        rep.max_chain_violation = std::max(rep.max_chain_violation, viol);
        if (viol > 0.0) rep.chain_pass = false;
    }

    if (rep.constants.D > 0.0) {
        rep.alarm_value = rep.constants.C / rep.constants.D;
        rep.alarm = rep.alarm_value > alarm_ratio;
    }
    return rep;
}

inline OrderingReport check_equivalence_ordering(const DiskMeasure& tau, const WeightFn& lambda,
                                                 const WeightFn& mu, const CarlesonCorpus& corpus,
                                                 const DiskScan& scan, const SectorFamily& sectors,
                                                 double alarm_ratio = 1e4) {
    return check_equivalence_ordering(tau, CarlesonWeightData::make(lambda, mu, corpus, scan),
                                      corpus, scan, sectors, alarm_ratio);
}

/// Uchiyama measure 4 |dbar phi|^2 ln(1/|z|) dA discretized on the
/// quadrature. Caller must rescale phi to Garsia norm <= 1 first.
inline DiskMeasure uchiyama_measure(const CircleFn& phi, const DiskQuadrature& q,
                                    const DiskScan& scan) {
    double garsia = garsia_norm(phi, scan).value;
    if (garsia > 1.0 + 1e-8)
        throw std::domain_error("uchiyama_measure: garsia norm exceeds 1 (rescale the symbol)");
    auto [d, dbar] = gradient_on_polar(phi, q);
    (void)d;
    DiskMeasure m;
    m.provenance = "uchiyama";
    m.atoms.reserve(q.size());
    for (int i = 0; i < q.n_radial; ++i)
        for (int a = 0; a < q.n_angular; ++a) {
            std::size_t idx = static_cast<std::size_t>(i) * q.n_angular + a;
            double dens = 4.0 * std::norm(dbar[idx]) * q.log_kern[i];
            m.atoms.push_back({q.node(i, a), dens * q.weight(i, a)});
        }
    m.polar = DiskMeasure::PolarLayout{q.r, q.n_angular};
    return m;
}

struct TreilVolbergReport {
    double hypothesis_B2 = 0.0;
    bool hypothesis_finite = true;
    double conclusion_max = 0.0; // max over the corpus of the embedding ratio
    double bound = 0.0;          // 16 B^2 (1 + slack)
    bool pass = true;
};

/// Reusable per-weight context for Treil-Volberg sweeps.
struct TreilVolbergWeightData {
    const WeightFn* w = nullptr;
    std::vector<double> w_on_scan;
    std::vector<double> corpus_norms_winv;

    static TreilVolbergWeightData make(const WeightFn& w, const CarlesonCorpus& corpus,
                                       const DiskScan& scan) {
        TreilVolbergWeightData d;
        d.w = &w;
        d.w_on_scan.reserve(scan.points.size());
        for (const auto& pt : scan.points)
            d.w_on_scan.push_back(harmonic_extend_real(w.fn(), poisson_weights(w.grid(), pt.z.z)));
        d.corpus_norms_winv = corpus_weighted_norms(corpus, w.inverse());
        return d;
    }
};

/// Treil-Volberg bound: if int P_z w(xi)^2 dtau <= B^2 w(z) on the scan (plus the atom
/// locations), then int |f|^2 dtau <= 16 B^2 int |f|^2 w^{-1} dm on the corpus.
inline TreilVolbergReport treil_volberg_check(const DiskMeasure& tau,
                                              const TreilVolbergWeightData& wd,
                                              const CarlesonCorpus& corpus, const DiskScan& scan,
                                              double slack = 0.1) {
    const WeightFn& w = *wd.w;
    TreilVolbergReport rep;
    std::vector<double> wext = weight_at_atoms(w, tau);
    std::vector<double> w2_mass(tau.atoms.size());
    for (std::size_t i = 0; i < tau.atoms.size(); ++i)
        w2_mass[i] = wext[i] * wext[i] * tau.atoms[i].mass;

    auto poisson_sum = [&](cplx z) {
        double s = 0.0;
        for (std::size_t i = 0; i < tau.atoms.size(); ++i)
            s += poisson_kernel_at(z, tau.atoms[i].z) * w2_mass[i];
        return s;
    };
    for (std::size_t p = 0; p < scan.points.size(); ++p)
        rep.hypothesis_B2 =
            std::max(rep.hypothesis_B2, poisson_sum(scan.points[p].z.z) / wd.w_on_scan[p]);
    if (!tau.polar) { // atom locations sharpen the hypothesis sup for sparse measures
        for (const auto& a : tau.atoms) {
            double wz = harmonic_extend_real(w.fn(), poisson_weights(w.grid(), a.z));
            rep.hypothesis_B2 = std::max(rep.hypothesis_B2, poisson_sum(a.z) / wz);
        }
    }
    rep.hypothesis_finite = std::isfinite(rep.hypothesis_B2) && rep.hypothesis_B2 < 1e10;
    if (!rep.hypothesis_finite) {
        rep.pass = false;
        return rep;
    }

    std::vector<double> plain_mass(tau.atoms.size());
    for (std::size_t i = 0; i < tau.atoms.size(); ++i) plain_mass[i] = tau.atoms[i].mass;
    std::vector<double> disk = corpus_disk_sums(corpus, tau, plain_mass);
    for (std::size_t i = 0; i < corpus.fns.size(); ++i)
        rep.conclusion_max = std::max(rep.conclusion_max, disk[i] / wd.corpus_norms_winv[i]);
    rep.bound = 16.0 * rep.hypothesis_B2 * (1.0 + slack);
    rep.pass = rep.conclusion_max <= rep.bound;
    return rep;
}

inline TreilVolbergReport treil_volberg_check(const DiskMeasure& tau, const WeightFn& w,
                                              const CarlesonCorpus& corpus, const DiskScan& scan,
                                              double slack = 0.1) {
    return treil_volberg_check(tau, TreilVolbergWeightData::make(w, corpus, scan), corpus, scan,
                               slack);
}

struct GradientMeasureEquivalence {
    double D1 = 0.0; // sector constant of |grad phi|^2 ln(1/|z|) dA
    double D2 = 0.0; // sector constant of |grad phi|^2 (1-|z|^2) dA
    double ratio_12 = 0.0; // D1 / D2 (recorded constant)
    bool pass = true;      // D2 <= 2 D1 (exact atomwise)
};

/// The log-kernel and linear-kernel gradient measures are lambda-mu Carleson
/// together. 1-|z|^2 <= 2 ln(1/|z|) holds atomwise, so D2 <= 2 D1 exactly.
inline GradientMeasureEquivalence gradient_measure_equivalence(const CircleFn& phi, const WeightFn& lambda,
                                        const WeightFn& mu, const DiskQuadrature& q,
                                        const SectorFamily& sectors) {
    const int half = phi.grid().n / 2;
    bool has_pos = false, has_neg = false;
    for (int k = 1; k <= half; ++k) {
        if (k < half && std::abs(phi.fhat(k)) > 1e-12) has_pos = true;
        if (std::abs(phi.fhat(-k)) > 1e-12) has_neg = true;
    }
    if (has_pos && has_neg)
        throw std::domain_error("gradient_measure_equivalence: symbol must be analytic or anti-analytic");

    auto [d, dbar] = gradient_on_polar(phi, q);
    std::vector<double> grad2(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        grad2[i] = 2.0 * (std::norm(d[i]) + std::norm(dbar[i]));

    DiskMeasure m1 = DiskMeasure::from_density(
        q, [&](int i, int a) { return grad2[static_cast<std::size_t>(i) * q.n_angular + a] * q.log_kern[i]; },
        "grad_log_density");
    DiskMeasure m2 = DiskMeasure::from_density(
        q,
        [&](int i, int a) {
            return grad2[static_cast<std::size_t>(i) * q.n_angular + a] * (1.0 - q.r[i] * q.r[i]);
        },
        "grad_linear_density");

    std::vector<double> lam = weight_at_atoms(lambda, m1); // same node layout for both
    std::vector<double> mass1(m1.atoms.size()), mass2(m2.atoms.size());
    for (std::size_t i = 0; i < m1.atoms.size(); ++i) {
        mass1[i] = lam[i] * m1.atoms[i].mass;
        mass2[i] = lam[i] * m2.atoms[i].mass;
    }
    SectorMassIndex idx1(m1, mass1), idx2(m2, mass2);

    GradientMeasureEquivalence rep;
    for (const Sector& s : sectors.sectors) {
        double muIS = mu.integral(s.footprint());
        double d1 = idx1.sector_sum(s) / muIS;
        double d2 = idx2.sector_sum(s) / muIS;
        rep.D1 = std::max(rep.D1, d1);
        rep.D2 = std::max(rep.D2, d2);
        if (d2 > 2.0 * d1 * (1.0 + 1e-12)) rep.pass = false;
    }
    rep.ratio_12 = (rep.D2 > 0.0) ? rep.D1 / rep.D2 : 0.0;
    return rep;
}

struct GradientPoissonBound {
    double lhs = 0.0;         // sup (1/mu(z0)) int |grad phi|^2 lambda(z) (1-|z|^2) P_z0 dA
    double rhs_plain = 0.0;   // sup (1/mu(z0)) int |phi - phi(z0)|^2 lambda dm (as printed)
    double rhs_poisson = 0.0; // the P_z0-weighted variant (two-weight Garsia squared)
    double C_plain = 0.0;
    double C_poisson = 0.0;
};

/// Poisson-weighted gradient energy against boundary oscillation, with both
/// right-hand-side variants; constants recorded per pair.
inline GradientPoissonBound gradient_poisson_bound_check(const CircleFn& phi, const WeightFn& lambda, const WeightFn& mu,
                                  const DiskQuadrature& q, const DiskScan& scan) {
    const CircleGrid& g = phi.grid();
    auto [d, dbar] = gradient_on_polar(phi, q);
    auto lamz = extend_on_polar(lambda.fn(), q);
    std::vector<double> field(q.size());
    for (int i = 0; i < q.n_radial; ++i)
        for (int a = 0; a < q.n_angular; ++a) {
            std::size_t idx = static_cast<std::size_t>(i) * q.n_angular + a;
            double grad2 = 2.0 * (std::norm(d[idx]) + std::norm(dbar[idx]));
            field[idx] = grad2 * lamz[idx].real() * (1.0 - q.r[i] * q.r[i]) * q.weight(i, a);
        }

    GradientPoissonBound rep;
    for (const auto& pt : scan.points) {
        PoissonWeights pw = poisson_weights(g, pt.z.z);
        cplx phiz = harmonic_extend(phi, pw);
        double muz = 0.0, num_plain = 0.0, num_pois = 0.0, den_pois = 0.0;
        for (int j = 0; j < g.n; ++j) {
            muz += pw.p[j] * mu.values()[j];
            double dev = std::norm(phi.samples()[j] - phiz);
            num_plain += lambda.values()[j] * dev;
            num_pois += pw.p[j] * lambda.values()[j] * dev;
            den_pois += pw.p[j] * mu.values()[j];
        }
        muz /= pw.total;
        num_plain /= g.n;

        double lhs = 0.0;
        for (int i = 0; i < q.n_radial; ++i)
            for (int a = 0; a < q.n_angular; ++a) {
                std::size_t idx = static_cast<std::size_t>(i) * q.n_angular + a;
                lhs += field[idx] * poisson_kernel_at(pt.z.z, q.node(i, a));
            }
        rep.lhs = std::max(rep.lhs, lhs / muz);
        rep.rhs_plain = std::max(rep.rhs_plain, num_plain / muz);
        rep.rhs_poisson = std::max(rep.rhs_poisson, num_pois / den_pois);
    }
    rep.C_plain = (rep.rhs_plain > 0.0) ? rep.lhs / rep.rhs_plain : 0.0;
    rep.C_poisson = (rep.rhs_poisson > 0.0) ? rep.lhs / rep.rhs_poisson : 0.0;
    return rep;
}

} // namespace hardy
