#include "factaudit/agents.hpp"

#include "factaudit/errors.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace factaudit::agents {

namespace {

constexpr std::size_t kDigestRecords = 20;
constexpr std::size_t kDigestLineClip = 500;

std::string clip_line(std::string text, std::size_t limit) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    if (text.size() > limit) {
        text = text.substr(0, limit) + "...";
    }
    return text;
}

std::string mode_instruction(const std::optional<TestMode>& pin) {
    if (!pin) {
        return "Choose for each case the most suitable test mode among [claim], "
               "[evidence] and [wisdom of crowds].";
    }
    switch (*pin) {
    case TestMode::Claim:
        return "Every case must use test mode [claim]; AUXILIARY_INFO must be empty.";
    case TestMode::Evidence:
        return "Every case must use test mode [evidence] with gold evidence snippets "
               "as AUXILIARY_INFO.";
    case TestMode::WisdomOfCrowds:
        return "Every case must use test mode [wisdom of crowds] with a simulated "
               "conversation thread as AUXILIARY_INFO.";
    }
    return "";
}

std::string auxiliary_block(const TestCase& test_case) {
    if (test_case.auxiliary_info.empty()) return "";
    std::ostringstream out;
    out << (test_case.test_mode == TestMode::WisdomOfCrowds ? "CONVERSATION THREAD:"
                                                            : "EVIDENCE:");
    for (const auto& snippet : test_case.auxiliary_info) out << "\n- " << snippet;
    return out.str();
}

// Turns parsed drafts into test cases, enforcing the mode pin and the
// mode/auxiliary-info invariant; violations become rejections.
GenerationOutcome drafts_to_cases(BlockParse parse, const std::string& scenario_id,
                                  Provenance provenance, const std::optional<TestMode>& pin,
                                  const std::set<std::string>* existing_claims) {
    GenerationOutcome outcome;
    outcome.rejections = std::move(parse.rejections);
    for (auto& draft : parse.drafts) {
        if (pin && draft.test_mode != *pin) {
            outcome.rejections.push_back(
                {clip_line(draft.source_claim, 120),
                 std::string("test mode is not the pinned mode ") + to_string(*pin)});
            continue;
        }
        if (existing_claims &&
            existing_claims->count(normalize_claim(draft.source_claim)) > 0) {
            outcome.rejections.push_back(
                {clip_line(draft.source_claim, 120), "duplicate source claim"});
            continue;
        }
        try {
            outcome.cases.push_back(TestCase::make("", scenario_id, draft.key_point,
                                                   draft.source_claim, draft.auxiliary_info,
                                                   *draft.test_mode, provenance));
        } catch (const AuditError& e) {
            outcome.rejections.push_back({clip_line(draft.source_claim, 120), e.what()});
        }
    }
    return outcome;
}

} // namespace

std::string taxonomy_outline(const Taxonomy& taxonomy) {
    std::ostringstream out;
    for (const auto& scenario : taxonomy.scenarios()) {
        out << "- [" << scenario.object.name() << "] " << scenario.name << ": "
            << scenario.description << "\n";
    }
    return out.str();
}

std::string record_digest(const std::vector<EvaluationRecord>& records,
                          const Taxonomy& taxonomy) {
    if (records.empty()) return "(no records yet)\n";
    // order of arrival == pool order, so larger index == newer
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (records[a].grade != records[b].grade) return records[a].grade < records[b].grade;
        return a > b; // newer first within a grade
    });
    if (order.size() > kDigestRecords) order.resize(kDigestRecords);
    std::sort(order.begin(), order.end(), std::greater<>()); // newest first

    std::ostringstream out;
    for (std::size_t index : order) {
        const auto& record = records[index];
        const TestScenario* scenario = taxonomy.find(record.test_case.scenario_id);
        std::ostringstream line;
        line << "- [" << (scenario ? scenario->name : record.test_case.scenario_id)
             << "] grade " << record.grade << " | claim: " << record.test_case.source_claim
             << " | comment: " << record.comment;
        out << clip_line(line.str(), kDigestLineClip) << "\n";
    }
    return out.str();
}

std::string build_question(const PromptCatalog& prompts, const TestCase& test_case) {
    return prompts.get(PromptRole::Target)
        .render({{"source_claim", test_case.source_claim},
                 {"auxiliary_block", auxiliary_block(test_case)}});
}

// ── Appraiser ───────────────────────────────────────────────────────

ScenarioProposal appraiser_propose(const AgentContext& ctx, const Taxonomy& taxonomy,
                                   const std::vector<EvaluationRecord>& poor, int iteration) {
    const std::string prompt =
        ctx.prompts->get(PromptRole::Appraiser)
            .render({{"taxonomy_outline", taxonomy_outline(taxonomy)},
                     {"poor_digest", record_digest(poor, taxonomy)}});
    const auto result = ctx.controller->complete(gateway::user_request(
        prompt, ctx.temperatures.appraiser, "", ctx.max_tokens, "appraiser.propose"));

    ScenarioProposal proposal;
    proposal.rationale = result.content;
    const ProposalDraft draft = parse_proposal(result.content);
    if (draft.stop) {
        proposal.outcome = ScenarioProposal::Outcome::Stop;
        return proposal;
    }
    if (taxonomy.has_name(draft.name))
        fail(ErrorCode::DuplicateScenario, "proposed scenario already exists: " + draft.name);

    FactObject object = FactObject::complex_claim();
    if (draft.object) {
        object = *draft.object;
    } else if (!poor.empty()) {
        // fallback form carries no object; attribute to the object of the
        // newest lowest-graded record
        std::size_t pick = 0;
        for (std::size_t i = 1; i < poor.size(); ++i)
            if (poor[i].grade <= poor[pick].grade) pick = i;
        if (const TestScenario* s = taxonomy.find(poor[pick].test_case.scenario_id))
            object = s->object;
    }

    proposal.outcome = ScenarioProposal::Outcome::NewScenario;
    proposal.scenario.id = object.slug() + "/" + slugify(draft.name);
    proposal.scenario.object = object;
    proposal.scenario.name = draft.name;
    proposal.scenario.description = draft.description;
    proposal.scenario.origin = ScenarioOrigin::adaptive(iteration);
    return proposal;
}

bool appraiser_judge_scenario(const AgentContext& ctx, const ScenarioProposal& proposal,
                              const Taxonomy& taxonomy) {
    if (proposal.outcome != ScenarioProposal::Outcome::NewScenario)
        fail(ErrorCode::ConfigError, "judge called on a stop proposal");
    const std::string prompt =
        ctx.prompts->get(PromptRole::AppraiserJudge)
            .render({{"taxonomy_outline", taxonomy_outline(taxonomy)},
                     {"object", proposal.scenario.object.name()},
                     {"scenario_name", proposal.scenario.name},
                     {"scenario_description", proposal.scenario.description}});
    const auto result = ctx.controller->complete(gateway::user_request(
        prompt, ctx.temperatures.appraiser_judge, "", ctx.max_tokens, "appraiser.judge"));
    return parse_accept_reject(result.content).accepted;
}

// ── Inquirer / Prober ───────────────────────────────────────────────

GenerationOutcome inquirer_generate(const AgentContext& ctx, const TestScenario& scenario,
                                    int count) {
    const std::string prompt =
        ctx.prompts->get(PromptRole::Inquirer)
            .render({{"object", scenario.object.name()},
                     {"scenario_name", scenario.name},
                     {"scenario_description", scenario.description},
                     {"count", std::to_string(count)},
                     {"mode_instruction", mode_instruction(ctx.mode_pin)}});
    const auto result = ctx.controller->complete(gateway::user_request(
        prompt, ctx.temperatures.inquirer, "", ctx.max_tokens, "inquirer.generate"));
    return drafts_to_cases(parse_case_blocks(result.content), scenario.id,
                           Provenance::prototype(), ctx.mode_pin, nullptr);
}

GenerationOutcome prober_generate(const AgentContext& ctx, const TestScenario& scenario,
                                  const std::vector<EvaluationRecord>& pool_slice, int batch,
                                  int iteration, const std::set<std::string>& existing_claims) {
    if (pool_slice.empty())
        fail(ErrorCode::ConfigError, "prober needs evaluated records for the scenario");
    Taxonomy one;
    one.add_seed(scenario);
    const std::string prompt =
        ctx.prompts->get(PromptRole::Prober)
            .render({{"object", scenario.object.name()},
                     {"scenario_name", scenario.name},
                     {"scenario_description", scenario.description},
                     {"history_digest", record_digest(pool_slice, one)},
                     {"count", std::to_string(batch)},
                     {"mode_instruction", mode_instruction(ctx.mode_pin)}});
    const auto result = ctx.controller->complete(gateway::user_request(
        prompt, ctx.temperatures.prober, "", ctx.max_tokens, "prober.generate"));
    return drafts_to_cases(parse_case_blocks(result.content), scenario.id,
                           Provenance::probe(iteration), ctx.mode_pin, &existing_claims);
}

// ── Quality Inspector ───────────────────────────────────────────────

ValidationOutcome inspector_validate(const AgentContext& ctx, const TestCase& test_case,
                                     evidence::EvidenceChecker& checker) {
    if (test_case.test_mode == TestMode::Claim && !test_case.auxiliary_info.empty())
        return {false, "structural", "claim-mode AI must be empty"};
    if (test_case.test_mode != TestMode::Claim && test_case.auxiliary_info.empty())
        return {false, "structural", "evidence-bearing mode with empty AI"};

    if (test_case.test_mode == TestMode::Evidence) {
        for (const auto& snippet : test_case.auxiliary_info) {
            if (!checker.check_snippet(snippet).grounded)
                return {false, "grounding",
                        "no wiki grounding for: " + clip_line(snippet, 120)};
        }
    }

    const std::string prompt =
        ctx.prompts->get(PromptRole::QualityInspector)
            .render({{"test_mode", to_string(test_case.test_mode)},
                     {"key_point", test_case.key_point},
                     {"source_claim", test_case.source_claim},
                     {"auxiliary_block", auxiliary_block(test_case)}});
    const auto result = ctx.controller->complete(gateway::user_request(
        prompt, ctx.temperatures.quality_inspector, "", ctx.max_tokens, "inspector.fine"));
    const AcceptReject verdict = parse_accept_reject(result.content);
    if (!verdict.accepted) return {false, "llm", verdict.reason};
    return {true, "", ""};
}

// ── Target ──────────────────────────────────────────────────────────

TargetResponse target_infer(const AgentContext& ctx, const TestCase& test_case) {
    const std::string question = build_question(*ctx.prompts, test_case);
    const auto start = std::chrono::steady_clock::now();
    const auto result = ctx.target->complete(gateway::user_request(
        question, ctx.temperatures.target, "", ctx.max_tokens, "target.infer"));
    TargetResponse response = split_response(result.content);
    response.latency_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              start)
            .count());
    return response;
}

// ── Evaluator ───────────────────────────────────────────────────────

ReferenceAnswer evaluator_reference(const AgentContext& ctx, const TestCase& test_case) {
    const std::string question = build_question(*ctx.prompts, test_case);
    const std::string voter_prompt =
        ctx.prompts->get(PromptRole::EvaluatorReference).render({{"question", question}});

    for (int round = 0; round < ctx.max_inspector_retries; ++round) {
        const auto candidates = ctx.controller->complete_n(
            gateway::user_request(voter_prompt, ctx.temperatures.evaluator_voters, "",
                                  ctx.max_tokens, "evaluator.reference"),
            3);
        const std::string judge_prompt =
            ctx.prompts->get(PromptRole::EvaluatorJudge)
                .render({{"question", question},
                         {"candidate_1", candidates[0].content},
                         {"candidate_2", candidates[1].content},
                         {"candidate_3", candidates[2].content}});
        const auto judged = ctx.controller->complete(
            gateway::user_request(judge_prompt, ctx.temperatures.evaluator_judge, "",
                                  ctx.max_tokens, "evaluator.judge"));
        const auto choice = last_bracketed_int(judged.content, "choice");
        if (!choice || *choice < 1 || *choice > 3) continue; // rejected all, regenerate
        const std::string& approved = candidates[static_cast<std::size_t>(*choice - 1)].content;
        const auto verdict = scan_verdict(approved);
        if (!verdict) continue; // unreadable verdict cannot be approved

        ReferenceAnswer reference;
        reference.gold_verdict = *verdict;
        reference.reference_justification = split_response(approved).justification;
        for (const auto& candidate : candidates)
            reference.voter_outputs.push_back(candidate.content);
        reference.judge_approved = true;
        return reference;
    }
    fail(ErrorCode::ReferenceUnobtainable,
         "no reference approved after " + std::to_string(ctx.max_inspector_retries) +
             " rounds for claim: " + clip_line(test_case.source_claim, 120));
}

ScoreResult evaluator_score(const AgentContext& ctx, const TestCase& test_case,
                            const TargetResponse& response, const ReferenceAnswer& reference) {
    if (!reference.judge_approved)
        fail(ErrorCode::ConfigError, "scoring requires a judge-approved reference");
    const std::string question = build_question(*ctx.prompts, test_case);
    const std::string reference_text =
        std::string(to_string(reference.gold_verdict)) + ". " +
        reference.reference_justification;
    const std::string prompt = ctx.prompts->get(PromptRole::EvaluatorScore)
                                   .render({{"question", question},
                                            {"reference", reference_text},
                                            {"response", response.raw}});
    const auto request = gateway::user_request(prompt, ctx.temperatures.evaluator_judge, "",
                                               ctx.max_tokens, "evaluator.score");
    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) { // one re-ask on a bad rating token
        const auto result = ctx.controller->complete(request);
        try {
            const int grade = parse_grade(result.content);
            return {grade, result.content};
        } catch (const AuditError& e) {
            if (e.code() != ErrorCode::NoRatingToken && e.code() != ErrorCode::GradeOutOfRange)
                throw;
            last_error = e.what();
        }
    }
    fail(ErrorCode::ParseError, "no usable rating after re-ask: " + last_error);
}

} // namespace factaudit::agents
