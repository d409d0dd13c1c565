#include "factaudit/types.hpp"

#include "factaudit/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace factaudit {

namespace {

std::string lower(const std::string& text) {
    std::string out = text;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string slugify(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_dash = false;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            if (pending_dash && !out.empty()) out.push_back('-');
            pending_dash = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            pending_dash = true;
        }
    }
    return out;
}

std::string normalize_claim(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = true;
        } else {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    return out;
}

// ── FactObject ──────────────────────────────────────────────────────

FactObject FactObject::extended(const std::string& name) {
    if (name.empty()) fail(ErrorCode::ConfigError, "extended fact object needs a nonempty name");
    return FactObject(Kind::Extended, name);
}

std::string FactObject::name() const {
    switch (kind_) {
    case Kind::ComplexClaim: return "Complex Claim";
    case Kind::FakeNews: return "Fake News";
    case Kind::SocialRumor: return "Social Rumor";
    case Kind::Extended: return extended_name_;
    }
    return extended_name_;
}

std::string FactObject::slug() const {
    switch (kind_) {
    case Kind::ComplexClaim: return "complex_claim";
    case Kind::FakeNews: return "fake_news";
    case Kind::SocialRumor: return "social_rumor";
    case Kind::Extended: return slugify(extended_name_);
    }
    return slugify(extended_name_);
}

FactObject FactObject::parse(const std::string& text) {
    const std::string key = slugify(text);
    if (key == "complex-claim" || key == "complexclaim" || key == "complex-claims")
        return complex_claim();
    if (key == "fake-news" || key == "fakenews") return fake_news();
    if (key == "social-rumor" || key == "socialrumor" || key == "social-rumors")
        return social_rumor();
    return extended(text);
}

// ── Taxonomy ────────────────────────────────────────────────────────

bool Taxonomy::has_name(const std::string& name) const {
    const std::string needle = lower(name);
    return std::any_of(scenarios_.begin(), scenarios_.end(),
                       [&](const TestScenario& s) { return lower(s.name) == needle; });
}

const TestScenario* Taxonomy::find(const std::string& scenario_id) const {
    auto it = std::find_if(scenarios_.begin(), scenarios_.end(),
                           [&](const TestScenario& s) { return s.id == scenario_id; });
    return it == scenarios_.end() ? nullptr : &*it;
}

void Taxonomy::insert(TestScenario scenario) {
    if (scenario.name.empty()) fail(ErrorCode::ConfigError, "scenario name must be nonempty");
    if (scenario.id.empty()) fail(ErrorCode::ConfigError, "scenario id must be nonempty");
    if (find(scenario.id))
        fail(ErrorCode::DuplicateScenario, "duplicate scenario id: " + scenario.id);
    if (has_name(scenario.name))
        fail(ErrorCode::DuplicateScenario, "duplicate scenario name: " + scenario.name);
    scenarios_.push_back(std::move(scenario));
}

void Taxonomy::add_seed(TestScenario scenario) {
    scenario.origin = ScenarioOrigin::seed();
    insert(std::move(scenario));
}

void Taxonomy::add_adaptive(TestScenario scenario, int outer_iteration) {
    scenario.origin = ScenarioOrigin::adaptive(outer_iteration);
    const std::string id = scenario.id;
    insert(std::move(scenario));
    ++revision_;
    history_.push_back({revision_, id, outer_iteration});
}

void Taxonomy::restore(std::vector<TestScenario> scenarios, int revision,
                       std::vector<RevisionEntry> history) {
    scenarios_ = std::move(scenarios);
    revision_ = revision;
    history_ = std::move(history);
}

TestScenario make_seed_scenario(FactObject object, const std::string& name,
                                const std::string& description) {
    TestScenario s;
    s.id = object.slug() + "/" + slugify(name);
    s.object = object;
    s.name = name;
    s.description = description;
    s.origin = ScenarioOrigin::seed();
    return s;
}

Taxonomy seed_taxonomy() {
    Taxonomy t;
    const auto cc = FactObject::complex_claim();
    const auto fn = FactObject::fake_news();
    const auto sr = FactObject::social_rumor();
    t.add_seed(make_seed_scenario(cc, "Multi-Step Reasoning",
        "Claims whose verification requires chaining several independent facts "
        "or inference steps before a verdict can be reached."));
    t.add_seed(make_seed_scenario(cc, "Aggregated Statistical Reasoning",
        "Claims built on aggregate statistics that must be checked by combining "
        "or comparing quantitative figures from multiple sources."));
    t.add_seed(make_seed_scenario(fn, "Mismatched Headline or Caption",
        "News items whose headline or caption misrepresents what the article "
        "body or pictured content actually says."));
    t.add_seed(make_seed_scenario(fn, "Manipulated Content",
        "Genuine material that has been altered, doctored, or selectively "
        "edited to mislead the audience."));
    t.add_seed(make_seed_scenario(sr, "Wishing Rumor",
        "Rumors expressing hoped-for outcomes that spread because people want "
        "them to be true."));
    t.add_seed(make_seed_scenario(sr, "Dreading Rumor",
        "Fear-driven rumors that spread on anxiety about a feared event or "
        "threat."));
    return t;
}

// ── Test modes and provenance ───────────────────────────────────────

const char* to_string(TestMode mode) {
    switch (mode) {
    case TestMode::Claim: return "claim";
    case TestMode::Evidence: return "evidence";
    case TestMode::WisdomOfCrowds: return "wisdom_of_crowds";
    }
    return "claim";
}

std::optional<TestMode> parse_test_mode(const std::string& text) {
    const std::string key = slugify(text);
    if (key == "claim") return TestMode::Claim;
    if (key == "evidence") return TestMode::Evidence;
    if (key == "wisdom-of-crowds" || key == "wisdomofcrowds" || key == "wisdom")
        return TestMode::WisdomOfCrowds;
    return std::nullopt;
}

std::string to_string(const Provenance& provenance) {
    if (provenance.kind == Provenance::Kind::Prototype) return "prototype";
    return "probe:" + std::to_string(provenance.iteration);
}

std::optional<Provenance> parse_provenance(const std::string& text) {
    if (text == "prototype") return Provenance::prototype();
    if (text.rfind("probe:", 0) == 0) {
        try {
            int iteration = std::stoi(text.substr(6));
            if (iteration >= 1) return Provenance::probe(iteration);
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

// ── TestCase ────────────────────────────────────────────────────────

TestCase TestCase::make(std::string id, std::string scenario_id, std::string key_point,
                        std::string source_claim, std::vector<std::string> auxiliary_info,
                        TestMode mode, Provenance provenance) {
    if (source_claim.empty()) fail(ErrorCode::ParseError, "source claim must be nonempty");
    if (mode == TestMode::Claim && !auxiliary_info.empty())
        fail(ErrorCode::ParseError, "claim mode requires empty auxiliary info");
    if (mode != TestMode::Claim && auxiliary_info.empty())
        fail(ErrorCode::ParseError,
             std::string(to_string(mode)) + " mode requires nonempty auxiliary info");
    TestCase c;
    c.id = std::move(id);
    c.scenario_id = std::move(scenario_id);
    c.key_point = std::move(key_point);
    c.source_claim = std::move(source_claim);
    c.auxiliary_info = std::move(auxiliary_info);
    c.test_mode = mode;
    c.provenance = provenance;
    return c;
}

// ── Verdicts ────────────────────────────────────────────────────────

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Factual: return "factual";
    case Verdict::NonFactual: return "non_factual";
    case Verdict::NotEnoughInformation: return "not_enough_information";
    }
    return "factual";
}

std::optional<std::pair<Verdict, std::size_t>> scan_verdict_with_end(const std::string& text) {
    // Normalize away case, hyphens and spaces so "Non-Factual", "non factual"
    // and "NonFactual" all land on the same needle; keep a map back to the
    // original indices for justification extraction.
    std::string norm;
    std::vector<std::size_t> to_orig;
    norm.reserve(text.size());
    to_orig.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '-' || std::isspace(c)) continue;
        norm.push_back(static_cast<char>(std::tolower(c)));
        to_orig.push_back(i);
    }
    struct Label {
        const char* needle;
        std::size_t length;
        Verdict verdict;
    };
    // Longer labels first so that on equal start positions "nonfactual"
    // beats its "factual" suffix.
    static constexpr std::array<Label, 3> labels{{
        {"notenoughinformation", 20, Verdict::NotEnoughInformation},
        {"nonfactual", 10, Verdict::NonFactual},
        {"factual", 7, Verdict::Factual},
    }};
    std::size_t best_pos = std::string::npos;
    std::size_t best_len = 0;
    std::optional<Verdict> best;
    for (const auto& label : labels) {
        const std::size_t pos = norm.find(label.needle);
        if (pos != std::string::npos && pos < best_pos) {
            best_pos = pos;
            best_len = label.length;
            best = label.verdict;
        }
    }
    if (!best) return std::nullopt;
    const std::size_t end_norm = best_pos + best_len - 1;
    return std::make_pair(*best, to_orig[end_norm] + 1);
}

std::optional<Verdict> scan_verdict(const std::string& text) {
    const auto match = scan_verdict_with_end(text);
    if (!match) return std::nullopt;
    return match->first;
}

// ── EvaluationRecord / MemoryPool ───────────────────────────────────

EvaluationRecord EvaluationRecord::make(TestCase test_case, TargetResponse response,
                                        ReferenceAnswer reference, int grade, std::string comment,
                                        bool verdict_correct, double importance_weight) {
    if (grade < 1 || grade > 10)
        fail(ErrorCode::InvalidGrade, "grade " + std::to_string(grade) + " outside [1,10]");
    if (!(importance_weight > 0.0))
        fail(ErrorCode::InvalidGrade, "importance weight must be positive");
    EvaluationRecord r;
    r.test_case = std::move(test_case);
    r.response = std::move(response);
    r.reference = std::move(reference);
    r.grade = grade;
    r.comment = std::move(comment);
    r.verdict_correct = verdict_correct;
    r.importance_weight = importance_weight;
    return r;
}

void MemoryPool::append(EvaluationRecord record) {
    if (record.grade < 1 || record.grade > 10)
        fail(ErrorCode::InvalidGrade,
             "grade " + std::to_string(record.grade) + " outside [1,10]");
    scenario_index_[record.test_case.scenario_id].push_back(records_.size());
    records_.push_back(std::move(record));
}

const std::vector<std::size_t>& MemoryPool::scenario_positions(
    const std::string& scenario_id) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = scenario_index_.find(scenario_id);
    return it == scenario_index_.end() ? kEmpty : it->second;
}

std::vector<EvaluationRecord> MemoryPool::scenario_records(const std::string& scenario_id) const {
    std::vector<EvaluationRecord> out;
    for (std::size_t pos : scenario_positions(scenario_id)) out.push_back(records_[pos]);
    return out;
}

std::vector<EvaluationRecord> poor_cases(const MemoryPool& pool, double epsilon) {
    std::vector<EvaluationRecord> out;
    for (const auto& record : pool.records())
        if (record.grade < epsilon) out.push_back(record);
    return out;
}

} // namespace factaudit
