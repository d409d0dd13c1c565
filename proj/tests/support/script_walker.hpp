#pragma once

// Independent oracle for scripted mock runs: walks a mock-script JSON
// with its own cursor bookkeeping and its own small parsers, predicting
// the records and metrics a clean (rejection-free) run must produce.
// It deliberately shares no parsing or metric code with the engine.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace testsupport {

struct WalkerRecord {
    std::string scenario_id;
    std::string provenance; // "prototype" or "probe:<j>"
    std::string mode;       // "claim", "evidence", "wisdom_of_crowds"
    int grade = 0;
    bool verdict_correct = false;
};

struct WalkerMetrics {
    std::size_t count = 0;
    std::size_t low = 0;  // grade <= threshold
    std::size_t cvpj = 0; // correct verdict and grade <= threshold
    long long grade_sum = 0;
    double inverse_sum = 0.0; // sum of 1/grade in record order

    double imr() const { return static_cast<double>(low) / static_cast<double>(count); }
    double jfr() const { return static_cast<double>(cvpj) / static_cast<double>(count); }
    double mean_grade() const {
        return static_cast<double>(grade_sum) / static_cast<double>(count);
    }
    double limit_bound() const { return inverse_sum / static_cast<double>(count); }
};

struct WalkerParams {
    std::vector<std::string> scenario_ids; // taxonomy order
    int k = 10;
    int m = 5;
    int batch = 1;
    int grade_threshold = 3;
    int early_stop_window = 5;
    int min_probes = 5;
};

struct WalkerResult {
    std::vector<WalkerRecord> records;
    WalkerMetrics overall;
    std::map<std::string, WalkerMetrics> per_scenario;
    std::map<std::string, WalkerMetrics> per_object; // keyed by scenario-id prefix
    std::map<std::string, WalkerMetrics> per_mode;
};

WalkerResult walk_script(const std::filesystem::path& script_path, const WalkerParams& params);

} // namespace testsupport
