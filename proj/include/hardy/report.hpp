#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardy/config.hpp"

namespace hardy {

using json = nlohmann::json;

#ifndef HARDY_LAB_VERSION
#define HARDY_LAB_VERSION "0.0.0"
#endif
inline const char* artifact_version() { return HARDY_LAB_VERSION; }

/// One asserted inequality or identity; both sides are always stored.
struct CheckRow {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string relation = "<="; // "<=", "==", "~" (within tol), "finite"
    double tol = 0.0;
    bool pass = false;
    std::string note;

    json to_json() const {
        json j{{"name", name}, {"lhs", lhs},   {"rhs", rhs},
               {"relation", relation}, {"tol", tol}, {"pass", pass}};
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

inline CheckRow check_le(std::string name, double lhs, double rhs, double tol = 0.0,
                         std::string note = "") {
    CheckRow r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.relation = "<=";
    r.tol = tol;
    r.pass = lhs <= rhs + tol;
    r.note = std::move(note);
    return r;
}

inline CheckRow check_close(std::string name, double lhs, double rhs, double tol,
                            std::string note = "") {
    CheckRow r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.relation = "~";
    r.tol = tol;
    r.pass = std::abs(lhs - rhs) <= tol;
    r.note = std::move(note);
    return r;
}

inline CheckRow check_finite(std::string name, double value, std::string note = "") {
    CheckRow r;
    r.name = std::move(name);
    r.lhs = value;
    r.rhs = 0.0;
    r.relation = "finite";
    r.pass = std::isfinite(value);
    r.note = std::move(note);
    return r;
}

/// A named experiment: inputs, pass/fail rows, free-form tables. An internal
/// error aborts the record (error flag set), never the run.
struct Experiment {
    std::string name;
    json inputs = json::object();
    std::vector<CheckRow> checks;
    json tables = json::object();
    bool error = false;
    std::string error_what;

    bool all_pass() const {
        if (error) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    json to_json(const ExperimentConfig& cfg) const {
        json j;
        j["artifact_version"] = artifact_version();
        j["config_hash"] = cfg.hash();
        j["seed"] = cfg.seed;
        j["experiment"] = name;
        j["inputs"] = inputs;
        j["error"] = error;
        if (error) j["error_what"] = error_what;
        json rows = json::array();
        for (const auto& c : checks) rows.push_back(c.to_json());
        j["checks"] = rows;
        j["tables"] = tables;
        j["pass"] = all_pass();
        return j;
    }
};

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Writes one JSON document per experiment plus flat CSV tables.
class ReportWriter {
public:
    ReportWriter(std::filesystem::path dir, const ExperimentConfig& cfg)
        : dir_(std::move(dir)), cfg_(cfg) {
        std::filesystem::create_directories(dir_);
    }

    const std::filesystem::path& dir() const { return dir_; }

    void write(const Experiment& e) {
        std::ofstream os(dir_ / (e.name + ".json"));
        if (!os) throw std::runtime_error("report: cannot write " + e.name + ".json");
        os << e.to_json(cfg_).dump(2) << "\n";
    }

    void write_csv(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
        std::ofstream os(dir_ / (name + ".csv"));
        if (!os) throw std::runtime_error("report: cannot write " + name + ".csv");
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
    }

    void write_summary(const std::vector<Experiment>& all) {
        json j;
        j["artifact_version"] = artifact_version();
        j["config_hash"] = cfg_.hash();
        j["seed"] = cfg_.seed;
        j["config"] = cfg_.canonical();
        bool pass = true;
        json items = json::array();
        for (const auto& e : all) {
            items.push_back({{"experiment", e.name}, {"pass", e.all_pass()}});
            pass = pass && e.all_pass();
        }
        j["experiments"] = items;
        j["pass"] = pass;
        std::ofstream os(dir_ / "summary.json");
        os << j.dump(2) << "\n";
    }

private:
    std::filesystem::path dir_;
    ExperimentConfig cfg_;
};

} // namespace hardy
