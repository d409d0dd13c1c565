#include "support/script_walker.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace testsupport {

namespace {

using nlohmann::json;

// cursor-walked view of the script; repeat_last tags keep serving their
// final entry
class Tape {
public:
    explicit Tape(const std::filesystem::path& path) {
        std::ifstream in(path);
        json j = json::parse(in);
        for (const auto& [tag, value] : j.at("tags").items()) {
            Entry entry;
            if (value.is_array()) {
                entry.responses = value.get<std::vector<std::string>>();
            } else {
                entry.responses = value.at("responses").get<std::vector<std::string>>();
                entry.repeat = value.value("repeat_last", false);
            }
            entries_[tag] = std::move(entry);
        }
    }

    std::string take(const std::string& tag) {
        auto& entry = entries_.at(tag);
        if (entry.cursor >= entry.responses.size()) {
            if (!entry.repeat) throw std::runtime_error("walker: tape exhausted for " + tag);
            return entry.responses.back();
        }
        return entry.responses[entry.cursor++];
    }

private:
    struct Entry {
        std::vector<std::string> responses;
        bool repeat = false;
        std::size_t cursor = 0;
    };
    std::map<std::string, Entry> entries_;
};

std::string compact_lower(const std::string& text) {
    std::string out;
    for (unsigned char c : text) {
        if (c == '-' || std::isspace(c)) continue;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

// 0 = factual, 1 = non-factual, 2 = not enough information, -1 = none
int verdict_of(const std::string& text) {
    const std::string compact = compact_lower(text);
    const std::size_t p_nei = compact.find("notenoughinformation");
    const std::size_t p_non = compact.find("nonfactual");
    const std::size_t p_fac = compact.find("factual");
    std::size_t best = std::string::npos;
    int verdict = -1;
    if (p_nei < best) { best = p_nei; verdict = 2; }
    if (p_non < best) { best = p_non; verdict = 1; }
    if (p_fac < best) { best = p_fac; verdict = 0; }
    return verdict;
}

int bracketed_value(const std::string& text, bool last) {
    int value = -1;
    std::size_t pos = 0;
    while ((pos = text.find("[[", pos)) != std::string::npos) {
        const std::size_t end = text.find("]]", pos + 2);
        if (end == std::string::npos) break;
        try {
            value = std::stoi(text.substr(pos + 2, end - pos - 2));
        } catch (const std::exception&) {
        }
        if (!last) return value;
        pos = end + 2;
    }
    return value;
}

struct Block {
    std::string claim;
    std::string mode;
};

std::vector<Block> split_blocks(const std::string& text) {
    std::vector<Block> blocks;
    std::istringstream in(text);
    std::string line;
    Block current;
    bool open = false;
    auto push = [&] {
        if (open && !current.claim.empty()) blocks.push_back(current);
        current = Block{};
    };
    while (std::getline(in, line)) {
        if (line.rfind("KEY_POINT:", 0) == 0) {
            push();
            open = true;
        } else if (line.rfind("SOURCE_CLAIM:", 0) == 0) {
            current.claim = line.substr(13);
        } else if (line.rfind("TEST_MODE:", 0) == 0) {
            std::string mode = line.substr(10);
            mode.erase(0, mode.find_first_not_of(" \t"));
            if (mode == "wisdom of crowds") mode = "wisdom_of_crowds";
            current.mode = mode;
        }
    }
    push();
    return blocks;
}

void tally(WalkerMetrics& metrics, const WalkerRecord& record, int threshold) {
    metrics.count += 1;
    metrics.grade_sum += record.grade;
    metrics.inverse_sum += 1.0 / record.grade;
    if (record.grade <= threshold) {
        metrics.low += 1;
        if (record.verdict_correct) metrics.cvpj += 1;
    }
}

} // namespace

WalkerResult walk_script(const std::filesystem::path& script_path, const WalkerParams& params) {
    Tape tape(script_path);
    WalkerResult result;

    auto evaluate = [&](const std::string& scenario_id, const Block& block,
                        const std::string& provenance) {
        (void)tape.take("inspector.fine");
        (void)tape.take("evaluator.reference");
        const std::string candidate2 = tape.take("evaluator.reference");
        const std::string candidate3 = tape.take("evaluator.reference");
        const int choice = bracketed_value(tape.take("evaluator.judge"), false);
        const std::string& approved = choice == 3 ? candidate3 : candidate2; // fixture picks 2
        const int gold = verdict_of(approved);
        const int predicted = verdict_of(tape.take("target.infer"));
        const int grade = bracketed_value(tape.take("evaluator.score"), true);
        if (grade < 1 || grade > 10)
            throw std::runtime_error("walker: bad grade in script for " + scenario_id);
        WalkerRecord record;
        record.scenario_id = scenario_id;
        record.provenance = provenance;
        record.mode = block.mode;
        record.grade = grade;
        record.verdict_correct = predicted >= 0 && predicted == gold;
        result.records.push_back(record);
        return record;
    };

    for (const auto& scenario_id : params.scenario_ids) {
        const auto blocks = split_blocks(tape.take("inquirer.generate"));
        if (static_cast<int>(blocks.size()) < params.k)
            throw std::runtime_error("walker: fixture yields fewer than k blocks");
        for (int i = 0; i < params.k; ++i)
            evaluate(scenario_id, blocks[static_cast<std::size_t>(i)], "prototype");

        std::vector<int> probe_grades;
        for (int j = 1; j <= params.m; ++j) {
            if (static_cast<int>(probe_grades.size()) >= params.min_probes &&
                static_cast<int>(probe_grades.size()) >= params.early_stop_window) {
                bool all_above = true;
                for (std::size_t i = probe_grades.size() -
                                     static_cast<std::size_t>(params.early_stop_window);
                     i < probe_grades.size(); ++i)
                    if (probe_grades[i] <= params.grade_threshold) all_above = false;
                if (all_above) break;
            }
            const auto probe_blocks = split_blocks(tape.take("prober.generate"));
            for (int b = 0; b < params.batch && b < static_cast<int>(probe_blocks.size()); ++b) {
                const auto record = evaluate(scenario_id, probe_blocks[static_cast<std::size_t>(b)],
                                             "probe:" + std::to_string(j));
                probe_grades.push_back(record.grade);
            }
        }
    }

    for (const auto& record : result.records) {
        tally(result.overall, record, params.grade_threshold);
        tally(result.per_scenario[record.scenario_id], record, params.grade_threshold);
        const auto slash = record.scenario_id.find('/');
        tally(result.per_object[record.scenario_id.substr(0, slash)], record,
              params.grade_threshold);
        tally(result.per_mode[record.mode], record, params.grade_threshold);
    }
    return result;
}

} // namespace testsupport
