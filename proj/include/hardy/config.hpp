#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardy {

/// Run configuration: grid/scan/arc/sector/quadrature sizes, test-matrix
/// knobs, and the seed that fixes every random draw. Parsed from a sectioned
/// key=value text file; unknown keys and malformed lines are reported with
/// line numbers.
struct ExperimentConfig {
    int grid_n = 4096;
    int scan_kmax = 8;
    int scan_angles = 128;
    int arc_jmax = 10;
    int arc_centers = 64;
    int sector_jmax = 6;
    int sector_centers = 64;
    int quad_radial = 256;
    int quad_angular = 512;
    // reduced geometry for the gradient-measure sweeps, condition (ii) on
    // quadrature measures, and the kernel-testing lower bounds
    int sweep_kmax = 6;
    int sweep_angles = 64;
    int sweep_quad_radial = 128;
    int sweep_quad_angular = 256;
    std::vector<int> ladder = {16, 32, 64, 128};
    int corpus_random = 200;
    int corpus_degree = 64;
    int corpus_kernel_kmax = 5;
    int corpus_kernel_angles = 16;
    int carleson_measures = 20;
    int carleson_atoms = 30;
    std::uint64_t seed = 20240613ull;

    void validate() const {
        auto require = [](bool ok, const std::string& what) {
            if (!ok) throw std::invalid_argument("config: " + what);
        };
        require(grid_n >= 16 && grid_n <= (1 << 20) && (grid_n & (grid_n - 1)) == 0,
                "grid.n must be a power of two in [16, 2^20]");
        require(scan_kmax >= 1 && scan_kmax <= 23, "scan.kmax in [1, 23]");
        require(scan_angles >= 4 && scan_angles <= 4096, "scan.angles in [4, 4096]");
        require(arc_jmax >= 1 && arc_jmax <= 16, "arcs.j_max in [1, 16]");
        require(static_cast<double>(grid_n) >= 4.0 * (1 << arc_jmax),
                "arcs.j_max too deep for grid.n (smallest arc must cover >= 4 grid cells)");
        require(arc_centers >= 1 && arc_centers <= 1024, "arcs.centers in [1, 1024]");
        require(sector_jmax >= 0 && sector_jmax <= 16, "sectors.j_max in [0, 16]");
        require(sector_centers >= 1 && sector_centers <= 1024, "sectors.centers in [1, 1024]");
        require(quad_radial >= 4 && quad_radial <= 2048, "quad.radial in [4, 2048]");
        require(quad_angular >= 4 && quad_angular <= 4096 &&
                    (quad_angular & (quad_angular - 1)) == 0,
                "quad.angular must be a power of two in [4, 4096]");
        require(sweep_kmax >= 1 && sweep_kmax <= 23, "sweep.kmax in [1, 23]");
        require(sweep_angles >= 4 && sweep_angles <= 4096, "sweep.angles in [4, 4096]");
        require(sweep_quad_radial >= 4 && sweep_quad_radial <= 2048, "sweep.quad_radial");
        require(sweep_quad_angular >= 4 && sweep_quad_angular <= 4096 &&
                    (sweep_quad_angular & (sweep_quad_angular - 1)) == 0,
                "sweep.quad_angular must be a power of two");
        require(!ladder.empty() && ladder.size() <= 16, "run.ladder nonempty, <= 16 entries");
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            require(ladder[i] >= 1 && ladder[i] <= 1024, "run.ladder entries in [1, 1024]");
            if (i) require(ladder[i] > ladder[i - 1], "run.ladder strictly increasing");
        }
        require(corpus_random >= 0 && corpus_random <= 10000, "corpus.random in [0, 10000]");
        require(corpus_degree >= 1 && corpus_degree < grid_n / 2, "corpus.degree below band limit");
        require(corpus_kernel_kmax >= 1 && corpus_kernel_kmax <= 23, "corpus.kernel_kmax");
        require(corpus_kernel_angles >= 1 && corpus_kernel_angles <= 1024, "corpus.kernel_angles");
        require(carleson_measures >= 1 && carleson_measures <= 1000, "carleson.measures");
        require(carleson_atoms >= 1 && carleson_atoms <= 100000, "carleson.atoms");
    }

    static ExperimentConfig parse(std::istream& is, const std::string& origin = "config") {
        ExperimentConfig cfg;
        std::string line, section;
        int lineno = 0;
        auto fail = [&](const std::string& msg) {
            throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": " + msg);
        };
        while (std::getline(is, line)) {
            ++lineno;
            std::size_t h = line.find('#');
            if (h != std::string::npos) line.erase(h);
            std::string s = trim(line);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') fail("unterminated section header");
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            std::size_t eq = s.find('=');
            if (eq == std::string::npos) fail("expected key = value");
            std::string key = trim(s.substr(0, eq));
            std::string value = trim(s.substr(eq + 1));
            if (key.empty() || value.empty()) fail("empty key or value");
            std::string full = section.empty() ? key : section + "." + key;
            try {
                if (!cfg.apply(full, value)) fail("unknown key '" + full + "'");
            } catch (const std::runtime_error&) {
                throw;
            } catch (const std::exception&) {
                fail("malformed value '" + value + "' for key '" + full + "'");
            }
        }
        cfg.validate();
        return cfg;
    }

    static ExperimentConfig parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("config: cannot open " + path);
        return parse(is, path);
    }

    /// Canonical text form: every knob, sorted by key (hash input and report
    /// header payload).
    std::string canonical() const {
        std::map<std::string, std::string> kv = {
            {"arcs.centers", std::to_string(arc_centers)},
            {"arcs.j_max", std::to_string(arc_jmax)},
            {"carleson.atoms", std::to_string(carleson_atoms)},
            {"carleson.measures", std::to_string(carleson_measures)},
            {"corpus.degree", std::to_string(corpus_degree)},
            {"corpus.kernel_angles", std::to_string(corpus_kernel_angles)},
            {"corpus.kernel_kmax", std::to_string(corpus_kernel_kmax)},
            {"corpus.random", std::to_string(corpus_random)},
            {"grid.n", std::to_string(grid_n)},
            {"quad.angular", std::to_string(quad_angular)},
            {"quad.radial", std::to_string(quad_radial)},
            {"run.seed", std::to_string(seed)},
            {"scan.angles", std::to_string(scan_angles)},
            {"scan.kmax", std::to_string(scan_kmax)},
            {"sectors.centers", std::to_string(sector_centers)},
            {"sectors.j_max", std::to_string(sector_jmax)},
            {"sweep.angles", std::to_string(sweep_angles)},
            {"sweep.kmax", std::to_string(sweep_kmax)},
            {"sweep.quad_angular", std::to_string(sweep_quad_angular)},
            {"sweep.quad_radial", std::to_string(sweep_quad_radial)},
        };
        std::string ladder_s;
        for (std::size_t i = 0; i < ladder.size(); ++i)
            ladder_s += (i ? "," : "") + std::to_string(ladder[i]);
        kv["run.ladder"] = ladder_s;
        std::string out;
        for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
        return out;
    }

    std::uint64_t hash() const { // FNV-1a of the canonical form
        std::uint64_t h = 14695981039346656037ull;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

private:
    static std::string trim(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    bool apply(const std::string& key, const std::string& value) {
        auto as_int = [&](int& slot) { slot = std::stoi(value); };
        auto as_u64 = [&](std::uint64_t& slot) { slot = std::stoull(value); };
        if (key == "grid.n") { as_int(grid_n); return true; }
        if (key == "scan.kmax") { as_int(scan_kmax); return true; }
        if (key == "scan.angles") { as_int(scan_angles); return true; }
        if (key == "arcs.j_max") { as_int(arc_jmax); return true; }
        if (key == "arcs.centers") { as_int(arc_centers); return true; }
        if (key == "sectors.j_max") { as_int(sector_jmax); return true; }
        if (key == "sectors.centers") { as_int(sector_centers); return true; }
        if (key == "quad.radial") { as_int(quad_radial); return true; }
        if (key == "quad.angular") { as_int(quad_angular); return true; }
        if (key == "sweep.kmax") { as_int(sweep_kmax); return true; }
        if (key == "sweep.angles") { as_int(sweep_angles); return true; }
        if (key == "sweep.quad_radial") { as_int(sweep_quad_radial); return true; }
        if (key == "sweep.quad_angular") { as_int(sweep_quad_angular); return true; }
        if (key == "corpus.random") { as_int(corpus_random); return true; }
        if (key == "corpus.degree") { as_int(corpus_degree); return true; }
        if (key == "corpus.kernel_kmax") { as_int(corpus_kernel_kmax); return true; }
        if (key == "corpus.kernel_angles") { as_int(corpus_kernel_angles); return true; }
        if (key == "carleson.measures") { as_int(carleson_measures); return true; }
        if (key == "carleson.atoms") { as_int(carleson_atoms); return true; }
        if (key == "run.seed") { as_u64(seed); return true; }
        if (key == "run.ladder") {
            ladder.clear();
            std::istringstream ls(value);
            std::string tok;
            while (std::getline(ls, tok, ',')) ladder.push_back(std::stoi(trim(tok)));
            return true;
        }
        return false;
    }
};

} // namespace hardy
