#include "factaudit/metrics.hpp"

#include "factaudit/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace factaudit {

using ordered_json = nlohmann::ordered_json;

MetricSet compute_metrics(const std::vector<EvaluationRecord>& records, int grade_threshold) {
    if (records.empty()) fail(ErrorCode::EmptySlice, "compute_metrics needs a nonempty slice");
    MetricSet m;
    m.count = records.size();
    double inverse_sum = 0.0;
    for (const auto& r : records) {
        m.grade_sum += r.grade;
        inverse_sum += 1.0 / r.grade;
        if (r.grade <= grade_threshold) {
            ++m.low_count;
            if (r.verdict_correct) ++m.cvpj_count;
        }
    }
    const double n = static_cast<double>(m.count);
    m.imr = static_cast<double>(m.low_count) / n;
    m.jfr = static_cast<double>(m.cvpj_count) / n;
    m.mean_grade = static_cast<double>(m.grade_sum) / n;
    m.limit_bound = inverse_sum / n;
    return m;
}

double jfr_imr_ratio(const MetricSet& metrics) {
    if (metrics.low_count == 0) fail(ErrorCode::ZeroImr, "jfr/imr undefined when imr is zero");
    return static_cast<double>(metrics.cvpj_count) / static_cast<double>(metrics.low_count);
}

AuditReport build_report(const MemoryPool& pool, const Taxonomy& taxonomy, double epsilon,
                         int grade_threshold, const std::string& config_digest) {
    AuditReport report;
    report.taxonomy_revision = taxonomy.revision();
    report.config_digest = config_digest;

    std::map<std::string, std::vector<EvaluationRecord>> by_scenario;
    std::map<std::string, std::vector<EvaluationRecord>> by_object;
    std::map<std::string, std::vector<EvaluationRecord>> by_mode;
    for (const auto& r : pool.records()) {
        by_scenario[r.test_case.scenario_id].push_back(r);
        const TestScenario* scenario = taxonomy.find(r.test_case.scenario_id);
        const FactObject object =
            scenario ? scenario->object : FactObject::extended("unknown");
        by_object[object.slug()].push_back(r);
        report.object_names[object.slug()] = object.name();
        report.scenario_objects[r.test_case.scenario_id] = object.slug();
        by_mode[to_string(r.test_case.test_mode)].push_back(r);
        if (r.grade < epsilon) report.poor_case_ids.push_back(r.test_case.id);
    }
    for (const auto& [id, records] : by_scenario) {
        report.per_scenario[id] = compute_metrics(records, grade_threshold);
        const TestScenario* scenario = taxonomy.find(id);
        report.scenario_names[id] = scenario ? scenario->name : id;
    }
    for (const auto& [slug, records] : by_object)
        report.per_object[slug] = compute_metrics(records, grade_threshold);
    for (const auto& [mode, records] : by_mode)
        report.per_mode[mode] = compute_metrics(records, grade_threshold);
    if (!pool.empty()) report.overall = compute_metrics(pool.records(), grade_threshold);
    return report;
}

namespace {

std::string fixed2(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

std::string fixed5(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5f", value);
    return buf;
}

void metric_row(std::ostringstream& out, const std::string& label, const MetricSet& m) {
    out << "| " << label << " | " << fixed2(m.imr * 100.0) << " | " << fixed2(m.jfr * 100.0)
        << " | " << fixed2(m.mean_grade) << " |\n";
}

std::string render_markdown(const AuditReport& report) {
    std::ostringstream out;
    out << "# Audit Report\n\n";
    out << "Taxonomy revision: " << report.taxonomy_revision
        << " | Config digest: " << report.config_digest << " | Records: " << report.overall.count
        << "\n\n";
    out << "## Per object\n\n";
    out << "| Object | IMR↓ (%) | JFR↓ (%) | Grade↑ |\n";
    out << "|---|---|---|---|\n";
    for (const auto& [slug, metrics] : report.per_object) {
        auto it = report.object_names.find(slug);
        metric_row(out, it == report.object_names.end() ? slug : it->second, metrics);
    }
    metric_row(out, "Overall", report.overall);
    out << "\n## Per scenario\n\n";
    out << "| Scenario | Count | IMR↓ (%) | JFR↓ (%) | Grade↑ | Limit bound |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& [id, metrics] : report.per_scenario) {
        auto it = report.scenario_names.find(id);
        out << "| " << (it == report.scenario_names.end() ? id : it->second) << " | "
            << metrics.count << " | " << fixed2(metrics.imr * 100.0) << " | "
            << fixed2(metrics.jfr * 100.0) << " | " << fixed2(metrics.mean_grade) << " | "
            << fixed5(metrics.limit_bound) << " |\n";
    }
    if (!report.per_mode.empty()) {
        out << "\n## Per test mode\n\n";
        out << "| Mode | Count | IMR↓ (%) | JFR↓ (%) | Grade↑ |\n";
        out << "|---|---|---|---|---|\n";
        for (const auto& [mode, metrics] : report.per_mode) {
            out << "| " << mode << " | " << metrics.count << " | " << fixed2(metrics.imr * 100.0)
                << " | " << fixed2(metrics.jfr * 100.0) << " | " << fixed2(metrics.mean_grade)
                << " |\n";
        }
    }
    out << "\nPoor cases (grade below threshold): " << report.poor_case_ids.size() << "\n";
    return out.str();
}

ordered_json metric_to_json(const MetricSet& m) {
    ordered_json j;
    j["imr"] = m.imr;
    j["jfr"] = m.jfr;
    j["mean_grade"] = m.mean_grade;
    j["limit_bound"] = m.limit_bound;
    j["count"] = m.count;
    j["low_count"] = m.low_count;
    j["cvpj_count"] = m.cvpj_count;
    j["grade_sum"] = m.grade_sum;
    return j;
}

MetricSet metric_from_json(const ordered_json& j) {
    MetricSet m;
    m.imr = j.at("imr").get<double>();
    m.jfr = j.at("jfr").get<double>();
    m.mean_grade = j.at("mean_grade").get<double>();
    m.limit_bound = j.at("limit_bound").get<double>();
    m.count = j.at("count").get<std::size_t>();
    m.low_count = j.at("low_count").get<std::size_t>();
    m.cvpj_count = j.at("cvpj_count").get<std::size_t>();
    m.grade_sum = j.at("grade_sum").get<long long>();
    return m;
}

std::string render_json(const AuditReport& report) {
    ordered_json j;
    j["taxonomy_revision"] = report.taxonomy_revision;
    j["config_digest"] = report.config_digest;
    j["overall"] = metric_to_json(report.overall);
    ordered_json per_scenario = ordered_json::object();
    for (const auto& [id, m] : report.per_scenario) per_scenario[id] = metric_to_json(m);
    j["per_scenario"] = std::move(per_scenario);
    ordered_json per_object = ordered_json::object();
    for (const auto& [slug, m] : report.per_object) per_object[slug] = metric_to_json(m);
    j["per_object"] = std::move(per_object);
    ordered_json per_mode = ordered_json::object();
    for (const auto& [mode, m] : report.per_mode) per_mode[mode] = metric_to_json(m);
    j["per_mode"] = std::move(per_mode);
    j["poor_case_ids"] = report.poor_case_ids;
    j["scenario_names"] = report.scenario_names;
    j["object_names"] = report.object_names;
    j["scenario_objects"] = report.scenario_objects;
    return j.dump(2) + "\n";
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

// shortest representation that round-trips the double exactly
std::string roundtrip(double value) {
    return ordered_json(value).dump();
}

std::string render_csv(const AuditReport& report) {
    std::ostringstream out;
    out << "scenario_id,object,count,imr,jfr,mean_grade,limit_bound\n";
    for (const auto& [id, m] : report.per_scenario) {
        auto obj = report.scenario_objects.find(id);
        out << csv_escape(id) << ','
            << csv_escape(obj == report.scenario_objects.end() ? "unknown" : obj->second) << ','
            << m.count << ',' << roundtrip(m.imr) << ',' << roundtrip(m.jfr) << ','
            << roundtrip(m.mean_grade) << ',' << roundtrip(m.limit_bound) << '\n';
    }
    return out.str();
}

} // namespace

std::string render_report(const AuditReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Markdown: return render_markdown(report);
    case ReportFormat::Json: return render_json(report);
    case ReportFormat::Csv: return render_csv(report);
    }
    return {};
}

AuditReport report_from_json(const std::string& json_text) {
    ordered_json j = ordered_json::parse(json_text);
    AuditReport report;
    report.taxonomy_revision = j.at("taxonomy_revision").get<int>();
    report.config_digest = j.at("config_digest").get<std::string>();
    report.overall = metric_from_json(j.at("overall"));
    for (const auto& [key, value] : j.at("per_scenario").items())
        report.per_scenario[key] = metric_from_json(value);
    for (const auto& [key, value] : j.at("per_object").items())
        report.per_object[key] = metric_from_json(value);
    for (const auto& [key, value] : j.at("per_mode").items())
        report.per_mode[key] = metric_from_json(value);
    report.poor_case_ids = j.at("poor_case_ids").get<std::vector<std::string>>();
    report.scenario_names = j.at("scenario_names").get<std::map<std::string, std::string>>();
    report.object_names = j.at("object_names").get<std::map<std::string, std::string>>();
    report.scenario_objects = j.at("scenario_objects").get<std::map<std::string, std::string>>();
    return report;
}

} // namespace factaudit
