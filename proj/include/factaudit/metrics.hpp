#pragma once

#include "factaudit/types.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace factaudit {

// IMR / JFR / mean grade / limitation bound over one pool slice.
// Counts are kept as exact integers; the real-valued fields are derived
// from them, and percentages are formatted only at render time.
struct MetricSet {
    double imr = 0.0;        // low-grade fraction, in [0,1]
    double jfr = 0.0;        // correct-verdict-poor-justification fraction, <= imr
    double mean_grade = 0.0; // in [1,10]
    double limit_bound = 0.0; // mean of 1/grade
    std::size_t count = 0;

    std::size_t low_count = 0;  // grade <= threshold
    std::size_t cvpj_count = 0; // verdict correct and grade <= threshold
    long long grade_sum = 0;

    bool operator==(const MetricSet&) const = default;
};

// Throws EmptySlice on an empty record list.
MetricSet compute_metrics(const std::vector<EvaluationRecord>& records,
                          int grade_threshold = 3);

// JFR/IMR: the share of low-grade cases whose verdict was still correct.
// Throws ZeroImr when imr == 0.
double jfr_imr_ratio(const MetricSet& metrics);

enum class ReportFormat { Markdown, Json, Csv };

struct AuditReport {
    // keys: scenario id / object slug / test-mode string
    std::map<std::string, MetricSet> per_scenario;
    std::map<std::string, MetricSet> per_object;
    std::map<std::string, MetricSet> per_mode;
    MetricSet overall;
    std::vector<std::string> poor_case_ids; // grade < epsilon, pool order
    int taxonomy_revision = 0;
    std::string config_digest;

    // display names for scenario/object keys, for the markdown render
    std::map<std::string, std::string> scenario_names;
    std::map<std::string, std::string> object_names;
    std::map<std::string, std::string> scenario_objects; // scenario id -> object slug

    bool operator==(const AuditReport&) const = default;
};

AuditReport build_report(const MemoryPool& pool, const Taxonomy& taxonomy, double epsilon,
                         int grade_threshold, const std::string& config_digest);

// Markdown mirrors the per-object IMR(%)/JFR(%)/Grade table layout with
// direction markers; Json and Csv round-trip losslessly.
std::string render_report(const AuditReport& report, ReportFormat format);

AuditReport report_from_json(const std::string& json_text);

} // namespace factaudit
