#include "factaudit/persist.hpp"

#include "factaudit/errors.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace factaudit {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string verdict_field(const TargetResponse& response) {
    if (!response.verdict) return "unparsed";
    return to_string(*response.verdict);
}

std::optional<Verdict> parse_verdict_field(const std::string& text) {
    if (text == "factual") return Verdict::Factual;
    if (text == "non_factual") return Verdict::NonFactual;
    if (text == "not_enough_information") return Verdict::NotEnoughInformation;
    return std::nullopt; // "unparsed" and anything else
}

} // namespace

std::string record_to_line(const EvaluationRecord& r) {
    ordered_json j;
    j["id"] = r.test_case.id;
    j["scenario_id"] = r.test_case.scenario_id;
    j["key_point"] = r.test_case.key_point;
    j["source_claim"] = r.test_case.source_claim;
    j["auxiliary_info"] = r.test_case.auxiliary_info;
    j["test_mode"] = to_string(r.test_case.test_mode);
    j["provenance"] = to_string(r.test_case.provenance);
    j["verdict"] = verdict_field(r.response);
    j["justification"] = r.response.justification;
    j["raw"] = r.response.raw;
    j["grade"] = r.grade;
    j["comment"] = r.comment;
    j["verdict_correct"] = r.verdict_correct;
    j["importance_weight"] = r.importance_weight;
    // replace invalid UTF-8 from a model instead of aborting the append
    return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

EvaluationRecord record_from_line(const std::string& line) {
    ordered_json j = ordered_json::parse(line);
    const auto mode = parse_test_mode(j.at("test_mode").get<std::string>());
    if (!mode) fail(ErrorCode::ParseError, "unknown test_mode in pool line");
    const auto provenance = parse_provenance(j.at("provenance").get<std::string>());
    if (!provenance) fail(ErrorCode::ParseError, "unknown provenance in pool line");

    TestCase c = TestCase::make(j.at("id").get<std::string>(),
                                j.at("scenario_id").get<std::string>(),
                                j.at("key_point").get<std::string>(),
                                j.at("source_claim").get<std::string>(),
                                j.at("auxiliary_info").get<std::vector<std::string>>(), *mode,
                                *provenance);
    TargetResponse response;
    response.verdict = parse_verdict_field(j.at("verdict").get<std::string>());
    response.justification = j.at("justification").get<std::string>();
    response.raw = j.at("raw").get<std::string>();

    // Loaded records carry no reference answer; scoring is already done.
    return EvaluationRecord::make(std::move(c), std::move(response), ReferenceAnswer{},
                                  j.at("grade").get<int>(), j.at("comment").get<std::string>(),
                                  j.at("verdict_correct").get<bool>(),
                                  j.at("importance_weight").get<double>());
}

MemoryPool load_pool(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open pool file: " + path.string());
    MemoryPool pool;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            pool.append(record_from_line(line));
        } catch (const std::exception& e) {
            fail(ErrorCode::CorruptCheckpoint,
                 "pool line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return pool;
}

void save_pool(const MemoryPool& pool, const std::filesystem::path& path) {
    std::ostringstream out;
    for (const auto& record : pool.records()) out << record_to_line(record) << '\n';
    atomic_write(path, out.str());
}

void append_pool_line(const std::filesystem::path& path, const std::string& line) {
    std::ofstream out(path, std::ios::app);
    if (!out) fail(ErrorCode::IoError, "cannot open pool file for append: " + path.string());
    out << line << '\n';
    out.flush();
    if (!out) fail(ErrorCode::IoError, "pool append failed: " + path.string());
}

std::string taxonomy_to_json(const Taxonomy& taxonomy) {
    ordered_json j;
    j["revision"] = taxonomy.revision();
    ordered_json scenarios = ordered_json::array();
    for (const auto& s : taxonomy.scenarios()) {
        ordered_json e;
        e["id"] = s.id;
        e["object"] = s.object.name();
        e["name"] = s.name;
        e["description"] = s.description;
        e["origin"] = s.origin.kind == ScenarioOrigin::Kind::Seed
                          ? std::string("seed")
                          : "adaptive:" + std::to_string(s.origin.iteration);
        scenarios.push_back(std::move(e));
    }
    j["scenarios"] = std::move(scenarios);
    ordered_json history = ordered_json::array();
    for (const auto& h : taxonomy.history()) {
        ordered_json e;
        e["revision"] = h.revision;
        e["added_scenario_id"] = h.added_scenario_id;
        e["outer_iteration"] = h.outer_iteration;
        history.push_back(std::move(e));
    }
    j["history"] = std::move(history);
    return j.dump(2);
}

Taxonomy taxonomy_from_json(const std::string& json_text) {
    ordered_json j = ordered_json::parse(json_text);
    std::vector<TestScenario> scenarios;
    for (const auto& e : j.at("scenarios")) {
        TestScenario s;
        s.id = e.at("id").get<std::string>();
        s.object = FactObject::parse(e.at("object").get<std::string>());
        s.name = e.at("name").get<std::string>();
        s.description = e.at("description").get<std::string>();
        const std::string origin = e.at("origin").get<std::string>();
        if (origin == "seed") {
            s.origin = ScenarioOrigin::seed();
        } else if (origin.rfind("adaptive:", 0) == 0) {
            s.origin = ScenarioOrigin::adaptive(std::stoi(origin.substr(9)));
        } else {
            fail(ErrorCode::ParseError, "unknown scenario origin: " + origin);
        }
        scenarios.push_back(std::move(s));
    }
    std::vector<Taxonomy::RevisionEntry> history;
    if (j.contains("history")) {
        for (const auto& e : j.at("history")) {
            history.push_back({e.at("revision").get<int>(),
                               e.at("added_scenario_id").get<std::string>(),
                               e.at("outer_iteration").get<int>()});
        }
    }
    Taxonomy t;
    t.restore(std::move(scenarios), j.at("revision").get<int>(), std::move(history));
    return t;
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
    try {
        return taxonomy_from_json(read_file(path));
    } catch (const AuditError&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::ParseError, "taxonomy file " + path.string() + ": " + e.what());
    }
}

void save_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path) {
    atomic_write(path, taxonomy_to_json(taxonomy) + "\n");
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) fail(ErrorCode::IoError, "cannot open for write: " + tmp.string());
        out << content;
        out.flush();
        if (!out) fail(ErrorCode::IoError, "write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(ErrorCode::IoError, "rename failed: " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace factaudit
