#pragma once

#include "factaudit/evidence.hpp"
#include "factaudit/gateway.hpp"
#include "factaudit/parsing.hpp"
#include "factaudit/prompts.hpp"
#include "factaudit/types.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace factaudit::agents {

// Shared wiring for the agent operations: controller backend for every
// agent role, target backend for inference, plus the catalog and the
// per-role temperatures.
struct AgentContext {
    gateway::LlmGateway* controller = nullptr;
    gateway::LlmGateway* target = nullptr;
    const PromptCatalog* prompts = nullptr;
    RoleTemperatures temperatures;
    int max_tokens = 1024;
    int max_inspector_retries = 5;
    std::optional<TestMode> mode_pin;
};

// ── Prompt-side digests ─────────────────────────────────────────────

std::string taxonomy_outline(const Taxonomy& taxonomy);

// The 20 lowest-grade records, rendered newest first, one line per
// record clipped to 500 characters.
std::string record_digest(const std::vector<EvaluationRecord>& records,
                          const Taxonomy& taxonomy);

// Question text sent to the target and embedded into evaluator prompts.
std::string build_question(const PromptCatalog& prompts, const TestCase& test_case);

// ── Appraiser ───────────────────────────────────────────────────────

struct ScenarioProposal {
    enum class Outcome { NewScenario, Stop };
    Outcome outcome = Outcome::Stop;
    TestScenario scenario; // origin AdaptivelyAdded(iteration) when NewScenario
    std::string rationale; // raw appraiser output
};

// Throws ParseError when the output matches neither shape and
// DuplicateScenario when the proposed name already exists.
ScenarioProposal appraiser_propose(const AgentContext& ctx, const Taxonomy& taxonomy,
                                   const std::vector<EvaluationRecord>& poor, int iteration);

// Figure-of-merit check of a NewScenario proposal; rejected proposals are
// discarded by the caller.
bool appraiser_judge_scenario(const AgentContext& ctx, const ScenarioProposal& proposal,
                              const Taxonomy& taxonomy);

// ── Generation (Inquirer / Prober) ──────────────────────────────────

struct GenerationOutcome {
    std::vector<TestCase> cases;            // ids are assigned on acceptance
    std::vector<BlockRejection> rejections; // short batches show up here
};

GenerationOutcome inquirer_generate(const AgentContext& ctx, const TestScenario& scenario,
                                    int count);

// pool_slice must be this scenario's records (nonempty); existing_claims
// are normalized source claims already in the pool.
GenerationOutcome prober_generate(const AgentContext& ctx, const TestScenario& scenario,
                                  const std::vector<EvaluationRecord>& pool_slice, int batch,
                                  int iteration, const std::set<std::string>& existing_claims);

// ── Quality Inspector ───────────────────────────────────────────────

struct ValidationOutcome {
    bool accepted = false;
    std::string stage;  // "structural", "grounding" or "llm"
    std::string reason; // empty on accept
};

ValidationOutcome inspector_validate(const AgentContext& ctx, const TestCase& test_case,
                                     evidence::EvidenceChecker& checker);

// ── Target / Evaluator ──────────────────────────────────────────────

TargetResponse target_infer(const AgentContext& ctx, const TestCase& test_case);

// Three voters + a judge pick; regenerates on full rejection up to
// max_inspector_retries rounds, then throws ReferenceUnobtainable.
ReferenceAnswer evaluator_reference(const AgentContext& ctx, const TestCase& test_case);

struct ScoreResult {
    int grade = 1;
    std::string comment;
};

// LLM-as-a-judge scoring; re-asks once on a missing/out-of-range rating
// token, then throws ParseError.
ScoreResult evaluator_score(const AgentContext& ctx, const TestCase& test_case,
                            const TargetResponse& response, const ReferenceAnswer& reference);

} // namespace factaudit::agents
