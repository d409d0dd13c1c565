#include "factaudit/orchestrator.hpp"

#include "factaudit/errors.hpp"
#include "factaudit/persist.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <json.hpp>

namespace factaudit::orch {

using nlohmann::ordered_json;

const char* to_string(RunStatus status) {
    switch (status) {
    case RunStatus::Running: return "running";
    case RunStatus::Completed: return "completed";
    case RunStatus::Halted: return "halted";
    }
    return "running";
}

namespace {

RunStatus parse_status(const std::string& text) {
    if (text == "running") return RunStatus::Running;
    if (text == "completed") return RunStatus::Completed;
    if (text == "halted") return RunStatus::Halted;
    fail(ErrorCode::CorruptCheckpoint, "unknown run status: " + text);
}

const char* to_string(ScenarioProgress::Stage stage) {
    switch (stage) {
    case ScenarioProgress::Stage::Idle: return "idle";
    case ScenarioProgress::Stage::EvaluatePrototypes: return "evaluate_prototypes";
    case ScenarioProgress::Stage::Probe: return "probe";
    }
    return "idle";
}

ScenarioProgress::Stage parse_stage(const std::string& text) {
    if (text == "idle") return ScenarioProgress::Stage::Idle;
    if (text == "evaluate_prototypes") return ScenarioProgress::Stage::EvaluatePrototypes;
    if (text == "probe") return ScenarioProgress::Stage::Probe;
    fail(ErrorCode::CorruptCheckpoint, "unknown scenario stage: " + text);
}

ordered_json case_to_json(const TestCase& c) {
    ordered_json j;
    j["id"] = c.id;
    j["scenario_id"] = c.scenario_id;
    j["key_point"] = c.key_point;
    j["source_claim"] = c.source_claim;
    j["auxiliary_info"] = c.auxiliary_info;
    j["test_mode"] = to_string(c.test_mode);
    j["provenance"] = to_string(c.provenance);
    return j;
}

TestCase case_from_json(const ordered_json& j) {
    const auto mode = parse_test_mode(j.at("test_mode").get<std::string>());
    const auto provenance = parse_provenance(j.at("provenance").get<std::string>());
    if (!mode || !provenance)
        fail(ErrorCode::CorruptCheckpoint, "bad pending case in checkpoint");
    return TestCase::make(j.at("id").get<std::string>(), j.at("scenario_id").get<std::string>(),
                          j.at("key_point").get<std::string>(),
                          j.at("source_claim").get<std::string>(),
                          j.at("auxiliary_info").get<std::vector<std::string>>(), *mode,
                          *provenance);
}

std::string case_id(const std::string& scenario_id, const Provenance& provenance, int index) {
    char buf[32];
    if (provenance.kind == Provenance::Kind::Prototype) {
        std::snprintf(buf, sizeof(buf), "#p%03d", index);
    } else {
        std::snprintf(buf, sizeof(buf), "#j%03d.%d", provenance.iteration, index);
    }
    return scenario_id + buf;
}

Taxonomy filter_taxonomy(const Taxonomy& taxonomy, const std::string& pattern) {
    if (pattern.empty()) return taxonomy;
    std::vector<TestScenario> kept;
    for (const auto& scenario : taxonomy.scenarios())
        if (glob_match(pattern, scenario.name)) kept.push_back(scenario);
    if (kept.empty())
        fail(ErrorCode::ConfigError, "scenario filter matched no scenario: " + pattern);
    Taxonomy filtered;
    filtered.restore(std::move(kept), taxonomy.revision(), {});
    return filtered;
}

} // namespace

// ── Lifecycle ───────────────────────────────────────────────────────

AuditRun::AuditRun(AuditConfig config, std::filesystem::path run_dir, Hooks hooks)
    : run_dir_(std::move(run_dir)), hooks_(std::move(hooks)) {
    state_.config = std::move(config);
    std::filesystem::create_directories(run_dir_);

    const std::string lock_path = (run_dir_ / ".lock").string();
    lock_fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (lock_fd_ < 0) fail(ErrorCode::IoError, "cannot open lock file: " + lock_path);
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        fail(ErrorCode::RunLocked, "another orchestrator holds " + lock_path);
    }
}

AuditRun::~AuditRun() {
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

std::unique_ptr<AuditRun> AuditRun::start(AuditConfig config, std::filesystem::path run_dir,
                                          Hooks hooks) {
    validate_config(config);
    if (std::filesystem::exists(run_dir / kCheckpointFile))
        fail(ErrorCode::ConfigError,
             "run directory already holds a checkpoint; use resume: " + run_dir.string());
    auto run = std::unique_ptr<AuditRun>(
        new AuditRun(std::move(config), std::move(run_dir), std::move(hooks)));
    run->init_fresh();
    return run;
}

std::unique_ptr<AuditRun> AuditRun::resume(std::filesystem::path run_dir, Hooks hooks) {
    const auto snapshot = run_dir / kConfigSnapshot;
    if (!std::filesystem::exists(run_dir / kCheckpointFile))
        fail(ErrorCode::CorruptCheckpoint, "no checkpoint in " + run_dir.string());
    AuditConfig config = load_config(snapshot);
    auto run = std::unique_ptr<AuditRun>(
        new AuditRun(std::move(config), std::move(run_dir), std::move(hooks)));
    run->load_checkpoint();
    return run;
}

void AuditRun::init_fresh() {
    // drop leftovers from any aborted earlier run without a checkpoint
    for (const char* stale : {kTranscriptLog, kRejectionLog, "report.md", "report.json",
                              "metrics.csv"}) {
        std::error_code ec;
        std::filesystem::remove(run_dir_ / stale, ec);
    }
    atomic_write(run_dir_ / kConfigSnapshot, config_snapshot(state_.config));
    Taxonomy initial = state_.config.taxonomy_path.empty()
                           ? seed_taxonomy()
                           : load_taxonomy(state_.config.taxonomy_path);
    state_.taxonomy = filter_taxonomy(initial, state_.config.scenario_filter);
    save_taxonomy(state_.taxonomy, run_dir_ / kTaxonomyFile);
    atomic_write(run_dir_ / kPoolFile, "");
    open_backends();
    checkpoint();
}

void AuditRun::open_backends() {
    // the run seed feeds backend-side randomness (retry jitter) unless the
    // backend pins its own
    BackendSpec target_spec = state_.config.target_backend;
    BackendSpec controller_spec = state_.config.controller_backend;
    if (target_spec.seed == 0) target_spec.seed = state_.config.seed;
    if (controller_spec.seed == 0) controller_spec.seed = state_.config.seed + 1;
    target_ = std::make_unique<gateway::LlmGateway>(target_spec, state_.config.max_parallel);
    controller_ =
        std::make_unique<gateway::LlmGateway>(controller_spec, state_.config.max_parallel);

    transcript_ = std::make_unique<std::ofstream>(run_dir_ / kTranscriptLog, std::ios::app);
    auto sink = [this](const gateway::TranscriptEvent& event) {
        static std::mutex log_mutex;
        ordered_json j;
        j["tag"] = event.tag;
        j["backend"] = event.backend;
        j["attempts"] = event.attempts;
        j["usage_tokens"] = event.usage_tokens;
        j["elapsed_ms"] = event.elapsed_ms;
        j["unix_ms"] = event.unix_ms;
        j["request"] = event.request;
        j["response"] = event.response;
        std::lock_guard lock(log_mutex);
        (*transcript_) << j.dump() << "\n";
        transcript_->flush();
    };
    target_->set_transcript_sink(sink);
    controller_->set_transcript_sink(sink);

    checker_ = evidence::make_checker(state_.config.evidence, run_dir_);
    prompts_ = agents::PromptCatalog::defaults();
    if (!state_.config.prompt_dir.empty()) prompts_.apply_overrides(state_.config.prompt_dir);

    ctx_.controller = controller_.get();
    ctx_.target = target_.get();
    ctx_.prompts = &prompts_;
    ctx_.temperatures = state_.config.temperatures;
    ctx_.max_tokens = state_.config.max_tokens;
    ctx_.max_inspector_retries = state_.config.max_inspector_retries;
    ctx_.mode_pin = state_.config.mode_pin;
}

// ── Checkpointing ───────────────────────────────────────────────────

void AuditRun::checkpoint() {
    ordered_json j;
    j["config_digest"] = config_digest(state_.config);
    j["outer_iteration"] = state_.outer_iteration;
    j["consecutive_stops"] = state_.consecutive_stops;
    j["per_scenario_probe_count"] = state_.per_scenario_probe_count;
    j["completed_scenarios"] = state_.completed_scenarios;
    j["status"] = to_string(state_.status);
    j["halt_reason"] = state_.halt_reason;
    j["completed_via"] = state_.completed_via;
    j["pool_records"] = state_.pool.size();
    j["active_scenario_id"] = state_.active_scenario_id;
    j["stage"] = to_string(state_.progress.stage);
    ordered_json pending = ordered_json::array();
    for (const auto& c : state_.progress.pending) pending.push_back(case_to_json(c));
    j["pending_cases"] = std::move(pending);
    j["evaluated"] = state_.progress.evaluated;
    j["probe_iteration"] = state_.progress.probe_iteration;
    ordered_json mock_state;
    mock_state["target"] = target_ ? target_->mock_state_json() : "";
    mock_state["controller"] = controller_ ? controller_->mock_state_json() : "";
    j["mock_state"] = std::move(mock_state);
    atomic_write(run_dir_ / kCheckpointFile, j.dump(2));
    ++checkpoint_index_;
    if (hooks_.on_checkpoint) hooks_.on_checkpoint(checkpoint_index_);
}

void AuditRun::load_checkpoint() {
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(run_dir_ / kCheckpointFile));
    } catch (const std::exception& e) {
        fail(ErrorCode::CorruptCheckpoint, std::string("unreadable checkpoint: ") + e.what());
    }
    if (j.at("config_digest").get<std::string>() != config_digest(state_.config))
        fail(ErrorCode::CorruptCheckpoint, "config snapshot does not match checkpoint digest");

    state_.taxonomy = load_taxonomy(run_dir_ / kTaxonomyFile);
    state_.pool = load_pool(run_dir_ / kPoolFile);
    state_.outer_iteration = j.at("outer_iteration").get<int>();
    state_.consecutive_stops = j.at("consecutive_stops").get<int>();
    state_.per_scenario_probe_count =
        j.at("per_scenario_probe_count").get<std::map<std::string, int>>();
    state_.completed_scenarios = j.at("completed_scenarios").get<std::set<std::string>>();
    state_.status = parse_status(j.at("status").get<std::string>());
    state_.halt_reason = j.at("halt_reason").get<std::string>();
    state_.completed_via = j.at("completed_via").get<std::string>();
    state_.active_scenario_id = j.at("active_scenario_id").get<std::string>();
    state_.progress.stage = parse_stage(j.at("stage").get<std::string>());
    state_.progress.pending.clear();
    for (const auto& e : j.at("pending_cases")) state_.progress.pending.push_back(case_from_json(e));
    state_.progress.evaluated = j.at("evaluated").get<int>();
    state_.progress.probe_iteration = j.at("probe_iteration").get<int>();

    const std::size_t expected = j.at("pool_records").get<std::size_t>();
    const std::size_t actual = state_.pool.size();
    if (actual != expected && actual != expected + 1) {
        // truncated: the first missing line; over-long: the first line the
        // checkpoint cannot account for
        const std::size_t bad_line = actual < expected ? actual + 1 : expected + 2;
        fail(ErrorCode::CorruptCheckpoint,
             "pool holds " + std::to_string(actual) + " records, checkpoint expects " +
                 std::to_string(expected) + " (bad pool line " + std::to_string(bad_line) +
                 ")");
    }

    open_backends();
    if (j.contains("mock_state")) {
        target_->restore_mock_state(j["mock_state"].value("target", ""));
        controller_->restore_mock_state(j["mock_state"].value("controller", ""));
    }

    if (actual == expected + 1) {
        // crash landed between a pool append and its checkpoint; the extra
        // record is durable and counts as evaluated
        const std::size_t index = static_cast<std::size_t>(state_.progress.evaluated);
        if (index >= state_.progress.pending.size())
            fail(ErrorCode::CorruptCheckpoint,
                 "pool holds an extra record with no pending case to account for it");
        const bool both_mock =
            state_.config.target_backend.kind == BackendSpec::Kind::ScriptedMock &&
            state_.config.controller_backend.kind == BackendSpec::Kind::ScriptedMock;
        if (both_mock) {
            // replay the case from the checkpointed tape position; the
            // deterministic mock must reproduce the appended record exactly
            const EvaluationRecord replayed = evaluate_case(state_.progress.pending[index]);
            const std::string last_line = record_to_line(state_.pool.records().back());
            if (record_to_line(replayed) != last_line)
                fail(ErrorCode::CorruptCheckpoint,
                     "unaccounted pool record does not replay from the checkpoint (bad pool "
                     "line " + std::to_string(actual) + ")");
        }
        state_.progress.evaluated += 1;
    }

    // a resumed Halted run may continue; a Completed one will no-op
    if (state_.status == RunStatus::Halted) {
        state_.status = RunStatus::Running;
        state_.halt_reason.clear();
    }
}

// ── Main loop ───────────────────────────────────────────────────────

RunState& AuditRun::run() {
    try {
        while (state_.status == RunStatus::Running) {
            // round-robin in insertion order; scenarios whose verification
            // already finished in an earlier iteration are visited but not
            // reprocessed
            const std::vector<TestScenario> snapshot = state_.taxonomy.scenarios();
            for (const auto& scenario : snapshot) {
                if (state_.completed_scenarios.count(scenario.id)) continue;
                process_scenario(scenario);
            }
            adaptive_update();
        }
        if (state_.status == RunStatus::Completed) write_reports();
    } catch (const AuditError& e) {
        state_.status = RunStatus::Halted;
        state_.halt_reason = e.what();
        checkpoint();
    }
    return state_;
}

void AuditRun::process_scenario(const TestScenario& scenario) {
    if (state_.active_scenario_id != scenario.id) {
        state_.active_scenario_id = scenario.id;
        state_.progress = ScenarioProgress{};
    }
    if (state_.progress.stage == ScenarioProgress::Stage::Idle) {
        generate_prototypes(scenario);
    }
    if (state_.progress.stage == ScenarioProgress::Stage::EvaluatePrototypes) {
        evaluate_pending(scenario);
        state_.progress.stage = ScenarioProgress::Stage::Probe;
        state_.progress.pending.clear();
        state_.progress.evaluated = 0;
        checkpoint();
    }
    if (state_.progress.stage == ScenarioProgress::Stage::Probe) {
        probe_loop(scenario);
    }
    state_.completed_scenarios.insert(scenario.id);
    state_.active_scenario_id.clear();
    state_.progress = ScenarioProgress{};
    checkpoint();
}

// Stage 1: inquirer/inspector rounds until k accepted prototype cases.
void AuditRun::generate_prototypes(const TestScenario& scenario) {
    const int k = state_.config.k_prototypes;
    std::vector<TestCase> accepted;
    int rounds = 0;
    while (static_cast<int>(accepted.size()) < k) {
        if (rounds >= state_.config.max_inspector_retries)
            fail(ErrorCode::PrototypeStarvation,
                 "scenario " + scenario.id + ": only " + std::to_string(accepted.size()) +
                     "/" + std::to_string(k) + " prototypes after " + std::to_string(rounds) +
                     " rounds");
        ++rounds;
        auto outcome =
            agents::inquirer_generate(ctx_, scenario, k - static_cast<int>(accepted.size()));
        for (const auto& rejection : outcome.rejections)
            log_rejection(scenario.id, "parse", rejection.reason, rejection.block);
        for (auto& candidate : outcome.cases) {
            if (static_cast<int>(accepted.size()) >= k) break;
            const auto verdict = agents::inspector_validate(ctx_, candidate, *checker_);
            if (!verdict.accepted) {
                log_rejection(scenario.id, verdict.stage, verdict.reason,
                              candidate.source_claim);
                continue;
            }
            candidate.id = case_id(scenario.id, candidate.provenance,
                                   static_cast<int>(accepted.size()) + 1);
            accepted.push_back(std::move(candidate));
        }
    }
    state_.progress.stage = ScenarioProgress::Stage::EvaluatePrototypes;
    state_.progress.pending = std::move(accepted);
    state_.progress.evaluated = 0;
    checkpoint();
}

// Stage 2a: evaluate pending cases, appending in case order. Pipelines
// for distinct cases may run concurrently; appends stay serialized.
void AuditRun::evaluate_pending(const TestScenario&) {
    auto& progress = state_.progress;
    const int total = static_cast<int>(progress.pending.size());
    if (state_.config.max_parallel > 1 && total - progress.evaluated > 1) {
        std::vector<std::future<EvaluationRecord>> futures;
        for (int i = progress.evaluated; i < total; ++i) {
            futures.push_back(std::async(std::launch::async, [this, &progress, i] {
                return evaluate_case(progress.pending[static_cast<std::size_t>(i)]);
            }));
        }
        for (auto& future : futures) {
            append_record(future.get());
            progress.evaluated += 1;
            checkpoint();
        }
        return;
    }
    while (progress.evaluated < total) {
        append_record(evaluate_case(progress.pending[static_cast<std::size_t>(progress.evaluated)]));
        progress.evaluated += 1;
        checkpoint();
    }
}

// Stage 2b: sequential probe iterations with early stop.
void AuditRun::probe_loop(const TestScenario& scenario) {
    auto& progress = state_.progress;
    const int m = state_.config.m_probe_iterations;
    while (true) {
        if (!progress.pending.empty()) {
            // finish the in-flight batch (fresh or resumed)
            const int total = static_cast<int>(progress.pending.size());
            while (progress.evaluated < total) {
                append_record(
                    evaluate_case(progress.pending[static_cast<std::size_t>(progress.evaluated)]));
                progress.evaluated += 1;
                checkpoint();
            }
            progress.probe_iteration += 1;
            state_.per_scenario_probe_count[scenario.id] = progress.probe_iteration;
            progress.pending.clear();
            progress.evaluated = 0;
            checkpoint();
            continue;
        }
        if (progress.probe_iteration >= m) break;
        if (early_stop(scenario.id)) break;

        const int j = progress.probe_iteration + 1;
        std::vector<TestCase> batch;
        int rounds = 0;
        const int want = state_.config.probe_batch;
        while (static_cast<int>(batch.size()) < want &&
               rounds < state_.config.max_inspector_retries) {
            ++rounds;
            auto outcome = agents::prober_generate(
                ctx_, scenario, state_.pool.scenario_records(scenario.id),
                want - static_cast<int>(batch.size()), j, pool_claims());
            for (const auto& rejection : outcome.rejections)
                log_rejection(scenario.id, "parse", rejection.reason, rejection.block);
            for (auto& candidate : outcome.cases) {
                if (static_cast<int>(batch.size()) >= want) break;
                const auto verdict = agents::inspector_validate(ctx_, candidate, *checker_);
                if (!verdict.accepted) {
                    log_rejection(scenario.id, verdict.stage, verdict.reason,
                                  candidate.source_claim);
                    continue;
                }
                candidate.id =
                    case_id(scenario.id, candidate.provenance, static_cast<int>(batch.size()) + 1);
                batch.push_back(std::move(candidate));
            }
        }
        if (batch.empty()) {
            // nothing usable this iteration; it still counts toward m
            log_rejection(scenario.id, "probe", "iteration yielded no accepted case",
                          "j=" + std::to_string(j));
            progress.probe_iteration = j;
            state_.per_scenario_probe_count[scenario.id] = j;
            checkpoint();
            continue;
        }
        progress.pending = std::move(batch);
        progress.evaluated = 0;
        checkpoint();
    }
}

bool AuditRun::early_stop(const std::string& scenario_id) const {
    const int window = state_.config.early_stop_window;
    const int min_probes = state_.config.min_probes;
    std::vector<int> probe_grades;
    for (std::size_t pos : state_.pool.scenario_positions(scenario_id)) {
        const auto& record = state_.pool.records()[pos];
        if (record.test_case.provenance.kind == Provenance::Kind::Probe)
            probe_grades.push_back(record.grade);
    }
    if (static_cast<int>(probe_grades.size()) < min_probes) return false;
    if (static_cast<int>(probe_grades.size()) < window) return false;
    for (std::size_t i = probe_grades.size() - static_cast<std::size_t>(window);
         i < probe_grades.size(); ++i) {
        if (probe_grades[i] <= state_.config.imr_grade_threshold) return false;
    }
    return true;
}

// Stage 3: appraiser proposal over the poor cases, judged, with the
// consecutive-stop termination rule.
void AuditRun::adaptive_update() {
    constexpr int kAppraiserReinvocations = 3;
    const auto poor = poor_cases(state_.pool, state_.config.epsilon);

    bool added = false;
    bool stopped = false;
    for (int attempt = 0; attempt <= kAppraiserReinvocations; ++attempt) {
        agents::ScenarioProposal proposal;
        try {
            proposal =
                agents::appraiser_propose(ctx_, state_.taxonomy, poor, state_.outer_iteration);
        } catch (const AuditError& e) {
            if (e.code() == ErrorCode::DuplicateScenario) {
                log_rejection("(taxonomy)", "appraiser", e.what(), "");
                continue; // counts as a failed attempt
            }
            throw;
        }
        if (proposal.outcome == agents::ScenarioProposal::Outcome::Stop) {
            stopped = true;
            break;
        }
        if (agents::appraiser_judge_scenario(ctx_, proposal, state_.taxonomy)) {
            state_.taxonomy.add_adaptive(proposal.scenario, state_.outer_iteration);
            save_taxonomy(state_.taxonomy, run_dir_ / kTaxonomyFile);
            state_.consecutive_stops = 0;
            added = true;
            break;
        }
        log_rejection("(taxonomy)", "appraiser_judge",
                      "proposal rejected: " + proposal.scenario.name, "");
    }
    if (!added) {
        (void)stopped; // judged-out proposals count as a stop as well
        state_.consecutive_stops += 1;
    }

    state_.outer_iteration += 1;
    if (state_.consecutive_stops >= state_.config.stop_token_limit) {
        state_.status = RunStatus::Completed;
        state_.completed_via = "stop_rule";
    } else if (state_.outer_iteration >= state_.config.n_outer_loops) {
        state_.status = RunStatus::Completed;
        state_.completed_via = "n_bound";
    }
    checkpoint();
}

// ── Per-case pipeline ───────────────────────────────────────────────

EvaluationRecord AuditRun::evaluate_case(const TestCase& test_case) {
    const ReferenceAnswer reference = agents::evaluator_reference(ctx_, test_case);
    const TargetResponse response = agents::target_infer(ctx_, test_case);
    const agents::ScoreResult score = agents::evaluator_score(ctx_, test_case, response, reference);
    const bool verdict_correct =
        response.verdict.has_value() && *response.verdict == reference.gold_verdict;
    return EvaluationRecord::make(test_case, response, reference, score.grade, score.comment,
                                  verdict_correct, 1.0);
}

void AuditRun::append_record(EvaluationRecord record) {
    const std::string line = record_to_line(record);
    append_pool_line(run_dir_ / kPoolFile, line);
    state_.pool.append(std::move(record));
}

void AuditRun::log_rejection(const std::string& scenario_id, const std::string& stage,
                             const std::string& reason, const std::string& detail) {
    std::ofstream out(run_dir_ / kRejectionLog, std::ios::app);
    ordered_json j;
    j["scenario_id"] = scenario_id;
    j["stage"] = stage;
    j["reason"] = reason;
    j["detail"] = detail;
    out << j.dump() << "\n";
}

std::set<std::string> AuditRun::pool_claims() const {
    std::set<std::string> claims;
    for (const auto& record : state_.pool.records())
        claims.insert(normalize_claim(record.test_case.source_claim));
    return claims;
}

// ── Reports ─────────────────────────────────────────────────────────

AuditReport AuditRun::final_report() const {
    return build_report(state_.pool, state_.taxonomy, state_.config.epsilon,
                        state_.config.imr_grade_threshold, config_digest(state_.config));
}

void AuditRun::write_reports() {
    if (state_.pool.empty()) return;
    const AuditReport report = final_report();
    atomic_write(run_dir_ / "report.md", render_report(report, ReportFormat::Markdown));
    atomic_write(run_dir_ / "report.json", render_report(report, ReportFormat::Json));
    atomic_write(run_dir_ / "metrics.csv", render_report(report, ReportFormat::Csv));
}

RunState run_audit(const AuditConfig& config, const std::filesystem::path& run_dir, Hooks hooks) {
    auto run = AuditRun::start(config, run_dir, std::move(hooks));
    return run->run();
}

} // namespace factaudit::orch
