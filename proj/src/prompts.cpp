#include "factaudit/prompts.hpp"

#include "factaudit/errors.hpp"
#include "factaudit/persist.hpp"

#include <algorithm>
#include <array>
#include <fstream>

namespace factaudit::agents {

const char* to_string(PromptRole role) {
    switch (role) {
    case PromptRole::Appraiser: return "appraiser";
    case PromptRole::AppraiserJudge: return "appraiser_judge";
    case PromptRole::Inquirer: return "inquirer";
    case PromptRole::QualityInspector: return "quality_inspector";
    case PromptRole::EvaluatorReference: return "evaluator_reference";
    case PromptRole::EvaluatorJudge: return "evaluator_judge";
    case PromptRole::EvaluatorScore: return "evaluator_score";
    case PromptRole::Prober: return "prober";
    case PromptRole::Target: return "target";
    }
    return "appraiser";
}

std::vector<std::string> PromptTemplate::extract_placeholders(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = text.find('{', pos)) != std::string::npos) {
        const std::size_t end = text.find('}', pos);
        if (end == std::string::npos) break;
        std::string name = text.substr(pos + 1, end - pos - 1);
        const bool identifier =
            !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
                return std::isalnum(c) || c == '_';
            });
        if (identifier && std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(name);
        pos = end + 1;
    }
    return out;
}

PromptTemplate::PromptTemplate(PromptRole role, std::string text,
                               std::vector<std::string> placeholders)
    : role_(role), text_(std::move(text)), placeholders_(std::move(placeholders)) {
    auto found = extract_placeholders(text_);
    std::sort(found.begin(), found.end());
    auto declared = placeholders_;
    std::sort(declared.begin(), declared.end());
    if (found != declared)
        fail(ErrorCode::ConfigError, std::string("placeholder mismatch in template for role ") +
                                         to_string(role_));
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const {
    for (const auto& name : placeholders_) {
        if (!values.count(name))
            fail(ErrorCode::ConfigError, "missing value for placeholder {" + name + "} in " +
                                             to_string(role_) + " template");
    }
    for (const auto& [key, value] : values) {
        if (std::find(placeholders_.begin(), placeholders_.end(), key) == placeholders_.end())
            fail(ErrorCode::ConfigError,
                 "unknown placeholder value \"" + key + "\" for " + to_string(role_));
    }
    std::string out = text_;
    for (const auto& [key, value] : values) {
        const std::string needle = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

namespace {

constexpr const char* kAppraiserText = R"(You are the Appraiser of a fact-checking audit. You maintain a taxonomy of
fact-checking test scenarios and extend it when the audited model shows
weaknesses not covered by any existing scenario.

Current taxonomy:
{taxonomy_outline}

Poorly handled test cases from the memory pool (lowest grades first formed
this digest, newest first):
{poor_digest}

Decide whether a genuinely new, valuable test scenario would expose further
weaknesses. If no worthwhile scenario remains, output exactly:
[stop]

Otherwise propose exactly one new scenario that does not duplicate any
existing scenario name, in this format:
OBJECT: <Complex Claim | Fake News | Social Rumor | a new object name>
SCENARIO: <short scenario name>
DESCRIPTION: <one or two sentences describing the scenario>
)";

constexpr const char* kAppraiserJudgeText = R"(You review a proposed addition to a fact-checking test taxonomy.

Current taxonomy:
{taxonomy_outline}

Proposed scenario:
OBJECT: {object}
SCENARIO: {scenario_name}
DESCRIPTION: {scenario_description}

Judge whether the proposal is a suitable, non-overlapping, check-worthy
addition. Answer with exactly one line: either
ACCEPT
or
REJECT: <short reason>
)";

constexpr const char* kInquirerText = R"(You are the Inquirer of a fact-checking audit. Generate prototype
fact-checking test data for the scenario below.

Fact-checking object: {object}
Test scenario: {scenario_name}
Scenario description: {scenario_description}

Produce {count} test cases. {mode_instruction}

Emit each case as a block with these labeled fields:
KEY_POINT: <the specific task instruction for this test case>
SOURCE_CLAIM: <the claim to be verified>
AUXILIARY_INFO:
- <evidence snippet or conversation post, one per line; omit the bullets
  entirely for claim mode>
TEST_MODE: <claim | evidence | wisdom of crowds>

Rules: in claim mode AUXILIARY_INFO must be empty; in evidence mode it is a
set of evidence snippets grounded in encyclopedic knowledge; in wisdom of
crowds mode it is a simulated social-media conversation thread about the
claim. Blocks are separated by a blank line and each block starts with
KEY_POINT:.
)";

constexpr const char* kQualityInspectorText = R"(You are the Quality Inspector of a fact-checking audit. Scrutinize one
generated test case.

TEST_MODE: {test_mode}
KEY_POINT: {key_point}
SOURCE_CLAIM: {source_claim}
AUXILIARY_INFO:
{auxiliary_block}

Check that the source claim is check-worthy and unambiguous, and that the
auxiliary information fits the test mode: empty for claim mode, plausible
encyclopedic evidence for evidence mode, and a conversation thread that is
valuable enough for fact verification in wisdom of crowds mode.

Answer with exactly one line: either
ACCEPT
or
REJECT: <short reason>
)";

constexpr const char* kEvaluatorReferenceText = R"(You are a careful fact-checking expert. Produce a reference answer for the
question below. Start with the verdict, exactly one of: Factual,
Non-Factual, Not Enough Information. Then give a thorough justification
citing the decisive facts.

{question}
)";

constexpr const char* kEvaluatorJudgeText = R"(Three candidate reference answers were produced for the fact-checking
question below. Select the best one, or reject all if none is reliable
enough to serve as the reference.

{question}

Candidate 1:
{candidate_1}

Candidate 2:
{candidate_2}

Candidate 3:
{candidate_3}

Answer with exactly one line: "Choice: [[k]]" where k is 1, 2 or 3, or
"Choice: [[0]]" to reject all candidates.
)";

constexpr const char* kEvaluatorScoreText = R"(You are an impartial judge grading a fact-checking response. Compare the
assistant's response against the reference answer for correctness of the
verdict and the soundness, relevance and completeness of the justification.

Do not assign a grade higher than three if the response underperformed in
either the verdict prediction or the justification production stage. An
invalid justification must receive a low grade even when the predicted
verdict is correct.

Question:
{question}

Reference answer:
{reference}

Assistant's response:
{response}

Explain your assessment, then end with the grade on the final line in
exactly this format: "Rating: [[n]]" where n is an integer from 1 to 10.
)";

constexpr const char* kProberText = R"(You are the Prober of a fact-checking audit. Based on the audit history for
this scenario, craft new, unseen test data that stresses the weaknesses the
history reveals. Favor the patterns behind the low-graded cases and avoid
repeating any previous source claim.

Fact-checking object: {object}
Test scenario: {scenario_name}
Scenario description: {scenario_description}

Audit history (lowest grades emphasized, newest first):
{history_digest}

Produce {count} new test cases. {mode_instruction}

Use the same block format:
KEY_POINT: <task instruction>
SOURCE_CLAIM: <claim to verify, different from all previous claims>
AUXILIARY_INFO:
- <snippet or post per line; omit for claim mode>
TEST_MODE: <claim | evidence | wisdom of crowds>
)";

constexpr const char* kTargetText = R"(Verify the following claim. First state the verdict, exactly one of:
Factual, Non-Factual, Not Enough Information. Then justify your verdict.

CLAIM: {source_claim}
{auxiliary_block}
)";

struct RoleSpec {
    PromptRole role;
    const char* text;
};

constexpr std::array<RoleSpec, 9> kDefaultTemplates{{
    {PromptRole::Appraiser, kAppraiserText},
    {PromptRole::AppraiserJudge, kAppraiserJudgeText},
    {PromptRole::Inquirer, kInquirerText},
    {PromptRole::QualityInspector, kQualityInspectorText},
    {PromptRole::EvaluatorReference, kEvaluatorReferenceText},
    {PromptRole::EvaluatorJudge, kEvaluatorJudgeText},
    {PromptRole::EvaluatorScore, kEvaluatorScoreText},
    {PromptRole::Prober, kProberText},
    {PromptRole::Target, kTargetText},
}};

} // namespace

PromptCatalog PromptCatalog::defaults() {
    PromptCatalog catalog;
    for (const auto& spec : kDefaultTemplates) {
        catalog.templates_.emplace(
            spec.role,
            PromptTemplate(spec.role, spec.text, PromptTemplate::extract_placeholders(spec.text)));
    }
    return catalog;
}

void PromptCatalog::apply_overrides(const std::filesystem::path& dir) {
    for (auto& [role, tmpl] : templates_) {
        const std::filesystem::path file = dir / (std::string(to_string(role)) + ".txt");
        if (!std::filesystem::exists(file)) continue;
        const std::string text = read_file(file);
        tmpl = PromptTemplate(role, text, PromptTemplate::extract_placeholders(text));
    }
}

void PromptCatalog::write_to(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream readme(dir / "README.txt", std::ios::trunc);
    readme << "Prompt templates, one file per agent role. Edit freely; the engine\n"
              "substitutes the {placeholder} names listed below, and a template must\n"
              "use exactly its declared placeholders.\n\n";
    for (const auto& [role, tmpl] : templates_) {
        std::ofstream out(dir / (std::string(to_string(role)) + ".txt"), std::ios::trunc);
        out << tmpl.text();
        readme << to_string(role) << ".txt:";
        for (const auto& name : tmpl.placeholders()) readme << " {" << name << "}";
        readme << "\n";
    }
    std::ofstream version(dir / "catalog_version", std::ios::trunc);
    version << kCatalogVersion << "\n";
}

const PromptTemplate& PromptCatalog::get(PromptRole role) const {
    auto it = templates_.find(role);
    if (it == templates_.end())
        fail(ErrorCode::ConfigError, std::string("no template for role ") + to_string(role));
    return it->second;
}

} // namespace factaudit::agents
