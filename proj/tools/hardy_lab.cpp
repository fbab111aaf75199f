#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>

#include "hardy/harness.hpp"

namespace {

int run_lab(const std::string& subcommand, const std::string& config_path,
            const std::string& out_dir, const std::optional<std::uint64_t>& seed,
            const std::optional<int>& grid, const std::optional<int>& kmax,
            const std::optional<std::string>& measure) {
    hardy::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = hardy::ExperimentConfig::parse_file(config_path);
    if (seed) cfg.seed = *seed;
    if (grid) cfg.grid_n = *grid;
    if (kmax) cfg.scan_kmax = *kmax;
    cfg.validate();

    hardy::Lab lab(cfg, out_dir);
    auto experiments = lab.run(subcommand, measure);

    bool all_pass = true;
    for (const auto& e : experiments) {
        const char* status = e.error ? "ERROR" : (e.all_pass() ? "PASS" : "FAIL");
        std::printf("[hardy-lab] %-24s %s", e.name.c_str(), status);
        if (e.error) std::printf("  (%s)", e.error_what.c_str());
        std::printf("\n");
        all_pass = all_pass && e.all_pass();
    }
    std::printf("[hardy-lab] overall: %s (%zu experiments, reports in %s)\n",
                all_pass ? "PASS" : "FAIL", experiments.size(), out_dir.c_str());
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hardy-lab: numerical experiments on Muckenhoupt weights, BMO/Garsia norms,\n"
                 "Carleson embeddings, and Hankel/integral operators between weighted Hardy spaces"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> grid, kmax;
    std::optional<std::string> measure;

    app.add_option("--config", config_path, "configuration file (sectioned key = value)");
    app.add_option("--out", out_dir, "output directory for reports")->capture_default_str();
    app.add_option("--seed", seed, "seed fixing every random draw");
    app.add_option("--grid", grid, "circle grid size N (power of two)");
    app.add_option("--kmax", kmax, "disk-scan radial depth (radii 1 - 2^-i, i <= kmax)");
    app.add_option("--measure", measure,
                   "disk-measure file ('re im mass' per line) for the carleson subcommand");

    for (const char* name : {"weights", "norms", "carleson", "rkt", "intop", "all"})
        app.add_subcommand(name, std::string("run the ") + name + " experiment set");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string sub = app.get_subcommands().front()->get_name();
        return run_lab(sub, config_path, out_dir, seed, grid, kmax, measure);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "hardy-lab: %s\n", ex.what());
        return 2;
    }
}
