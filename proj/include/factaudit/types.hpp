#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace factaudit {

// ── Fact-checking objects and scenarios ─────────────────────────────

// Top-level category of misinformation under audit. The three built-in
// labels are always available; extended objects appear when the taxonomy
// grows adaptively.
class FactObject {
public:
    enum class Kind { ComplexClaim, FakeNews, SocialRumor, Extended };

    static FactObject complex_claim() { return FactObject(Kind::ComplexClaim, ""); }
    static FactObject fake_news() { return FactObject(Kind::FakeNews, ""); }
    static FactObject social_rumor() { return FactObject(Kind::SocialRumor, ""); }
    static FactObject extended(const std::string& name); // name nonempty

    // Accepts display names ("Complex Claim"), slugs ("complex_claim") and
    // compact forms ("ComplexClaim"), case-insensitively; anything else
    // becomes an Extended object.
    static FactObject parse(const std::string& text);

    Kind kind() const noexcept { return kind_; }
    std::string name() const;  // "Complex Claim", or the extended name
    std::string slug() const;  // "complex_claim", or slugified extended name

    bool operator==(const FactObject& other) const noexcept {
        return kind_ == other.kind_ && extended_name_ == other.extended_name_;
    }
    bool operator<(const FactObject& other) const noexcept {
        if (kind_ != other.kind_) return kind_ < other.kind_;
        return extended_name_ < other.extended_name_;
    }

private:
    FactObject(Kind kind, std::string ext) : kind_(kind), extended_name_(std::move(ext)) {}
    Kind kind_;
    std::string extended_name_; // set only for Kind::Extended
};

struct ScenarioOrigin {
    enum class Kind { Seed, AdaptivelyAdded };
    Kind kind = Kind::Seed;
    int iteration = 0; // outer iteration that added the scenario

    static ScenarioOrigin seed() { return {Kind::Seed, 0}; }
    static ScenarioOrigin adaptive(int iteration) { return {Kind::AdaptivelyAdded, iteration}; }
    bool operator==(const ScenarioOrigin&) const = default;
};

struct TestScenario {
    std::string id;          // unique within a taxonomy
    FactObject object = FactObject::complex_claim();
    std::string name;        // nonempty, e.g. "Multi-Step Reasoning"
    std::string description;
    ScenarioOrigin origin;

    bool operator==(const TestScenario&) const = default;
};

// Evolving set of test scenarios; revision 0 is the seed taxonomy.
class Taxonomy {
public:
    struct RevisionEntry {
        int revision = 0;
        std::string added_scenario_id;
        int outer_iteration = 0;
        bool operator==(const RevisionEntry&) const = default;
    };

    Taxonomy() = default;

    // Throws DuplicateScenario on id or (case-insensitive) name collision.
    void add_seed(TestScenario scenario);
    void add_adaptive(TestScenario scenario, int outer_iteration);

    bool has_name(const std::string& name) const; // case-insensitive
    const TestScenario* find(const std::string& scenario_id) const;

    const std::vector<TestScenario>& scenarios() const noexcept { return scenarios_; }
    int revision() const noexcept { return revision_; }
    const std::vector<RevisionEntry>& history() const noexcept { return history_; }

    // Used only by deserialization, which restores a previously valid state.
    void restore(std::vector<TestScenario> scenarios, int revision,
                 std::vector<RevisionEntry> history);

    bool operator==(const Taxonomy&) const = default;

private:
    void insert(TestScenario scenario);
    std::vector<TestScenario> scenarios_;
    int revision_ = 0;
    std::vector<RevisionEntry> history_;
};

// Seed taxonomy: the three built-in objects, two scenarios each.
Taxonomy seed_taxonomy();

// ── Test cases ──────────────────────────────────────────────────────

enum class TestMode { Claim, Evidence, WisdomOfCrowds };

const char* to_string(TestMode mode);                       // "claim", ...
std::optional<TestMode> parse_test_mode(const std::string& text);

struct Provenance {
    enum class Kind { Prototype, Probe };
    Kind kind = Kind::Prototype;
    int iteration = 0; // probe iteration j >= 1; 0 for prototypes

    static Provenance prototype() { return {Kind::Prototype, 0}; }
    static Provenance probe(int iteration) { return {Kind::Probe, iteration}; }
    bool operator==(const Provenance&) const = default;
};

std::string to_string(const Provenance& provenance);        // "prototype", "probe:3"
std::optional<Provenance> parse_provenance(const std::string& text);

// One fact-checking probe: the key point, source claim, auxiliary
// evidence and problem setting handed to the target model.
struct TestCase {
    std::string id;
    std::string scenario_id;
    std::string key_point;
    std::string source_claim;                // nonempty
    std::vector<std::string> auxiliary_info; // empty iff mode == Claim
    TestMode test_mode = TestMode::Claim;
    Provenance provenance;

    // Validates the source-claim and mode/auxiliary-info invariants.
    static TestCase make(std::string id, std::string scenario_id, std::string key_point,
                         std::string source_claim, std::vector<std::string> auxiliary_info,
                         TestMode mode, Provenance provenance);

    bool operator==(const TestCase&) const = default;
};

// ── Verdicts and responses ──────────────────────────────────────────

enum class Verdict { Factual, NonFactual, NotEnoughInformation };

const char* to_string(Verdict verdict); // "factual", "non_factual", "not_enough_information"

struct TargetResponse {
    std::optional<Verdict> verdict; // nullopt = unparsed
    std::string justification;      // cleaned projection of raw
    std::string raw;                // full model output, verbatim
    std::uint64_t latency_ms = 0;

    bool unparsed() const noexcept { return !verdict.has_value(); }
};

struct ReferenceAnswer {
    Verdict gold_verdict = Verdict::Factual;
    std::string reference_justification;
    std::vector<std::string> voter_outputs; // exactly 3 candidates when populated
    bool judge_approved = false;            // must be true before scoring
};

// ── Evaluation records and the memory pool ──────────────────────────

// One memory-pool entry: test case, target response, judge grade and
// comment, plus the importance weight under the sampling proposal.
struct EvaluationRecord {
    TestCase test_case;
    TargetResponse response;
    ReferenceAnswer reference;
    int grade = 1;            // integer in [1,10]
    std::string comment;
    bool verdict_correct = false;
    double importance_weight = 1.0; // > 0; 1.0 under the uniform density

    double limit_score() const noexcept { return 1.0 / grade; }

    // Validates the grade range (InvalidGrade) and weight positivity.
    static EvaluationRecord make(TestCase test_case, TargetResponse response,
                                 ReferenceAnswer reference, int grade, std::string comment,
                                 bool verdict_correct, double importance_weight = 1.0);
};

// Append-only store of evaluation records with a per-scenario index.
class MemoryPool {
public:
    // Throws InvalidGrade when the record's grade is out of range.
    void append(EvaluationRecord record);

    const std::vector<EvaluationRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    // Positions of a scenario's records, in pool order.
    const std::vector<std::size_t>& scenario_positions(const std::string& scenario_id) const;
    std::vector<EvaluationRecord> scenario_records(const std::string& scenario_id) const;

private:
    std::vector<EvaluationRecord> records_;
    std::map<std::string, std::vector<std::size_t>> scenario_index_;
};

// Records with grade < epsilon, in pool order; with integer grades and
// epsilon 4.0 this is exactly the set the IMR numerator counts.
std::vector<EvaluationRecord> poor_cases(const MemoryPool& pool, double epsilon);

// ── Run configuration ───────────────────────────────────────────────

struct BackendSpec {
    enum class Kind { HttpOpenAiCompatible, ScriptedMock };
    Kind kind = Kind::ScriptedMock;

    // http
    std::string base_url;
    std::string model;
    std::string api_key_env_var; // name of the env var, never the secret

    // mock
    std::string script_path;
    std::uint64_t seed = 0;

    int timeout_ms = 30000;
    int max_retries = 3;
};

struct RoleTemperatures {
    double appraiser = 1.0;
    double appraiser_judge = 0.0;
    double inquirer = 0.0;
    double quality_inspector = 0.0;
    double evaluator_voters = 1.0;
    double evaluator_judge = 0.0;
    double prober = 1.0;
    double target = 0.0;
};

struct EvidenceConfig {
    enum class Kind { Stub, Wikipedia };
    Kind kind = Kind::Stub;
    std::string endpoint = "https://en.wikipedia.org/w/api.php";
    int timeout_ms = 10000;
    std::string cache_path; // defaults to <run_dir>/../wiki_cache.json when empty
};

// All loop constants for one audit run.
struct AuditConfig {
    int k_prototypes = 10;      // prototype seed questions per scenario
    int m_probe_iterations = 30;
    int n_outer_loops = 3;
    double epsilon = 4.0;       // poor-case threshold; s < 4.0 == s <= 3 for integer grades
    int imr_grade_threshold = 3;
    int stop_token_limit = 3;
    int max_inspector_retries = 5;
    int probe_batch = 1;
    int early_stop_window = 5;
    int min_probes = 5;
    int max_parallel = 4;       // in-flight completions per backend; 1 = fully deterministic
    int max_tokens = 1024;
    std::uint64_t seed = 0;

    std::optional<TestMode> mode_pin; // fixed-mode ablation
    std::string scenario_filter;      // glob on scenario names; empty = all
    std::string taxonomy_path;        // optional taxonomy file; empty = seed taxonomy

    RoleTemperatures temperatures;
    BackendSpec target_backend;
    BackendSpec controller_backend;
    EvidenceConfig evidence;
    std::string prompt_dir; // optional prompt-template overrides
};

// lowercase, non-alphanumerics collapsed to single '-'
std::string slugify(const std::string& text);

// lowercase + whitespace runs collapsed; used for claim deduplication
std::string normalize_claim(const std::string& text);

// Case/space/hyphen-insensitive scan for the three verdict labels; the
// earliest match in the text wins, longer label preferred on overlap.
std::optional<Verdict> scan_verdict(const std::string& text);

// Same scan, also returning the index one past the matched label in the
// original text (for justification extraction).
std::optional<std::pair<Verdict, std::size_t>> scan_verdict_with_end(const std::string& text);

} // namespace factaudit
