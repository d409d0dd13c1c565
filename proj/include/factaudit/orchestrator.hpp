#pragma once

#include "factaudit/agents.hpp"
#include "factaudit/config.hpp"
#include "factaudit/evidence.hpp"
#include "factaudit/gateway.hpp"
#include "factaudit/metrics.hpp"
#include "factaudit/types.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace factaudit::orch {

enum class RunStatus { Running, Completed, Halted };

const char* to_string(RunStatus status);

// Where the active scenario stands; everything needed to pick the
// pipeline back up after a kill.
struct ScenarioProgress {
    enum class Stage { Idle, EvaluatePrototypes, Probe };
    Stage stage = Stage::Idle;
    std::vector<TestCase> pending; // accepted cases awaiting evaluation
    int evaluated = 0;             // how many of pending are appended
    int probe_iteration = 0;       // last completed probe iteration j
};

struct RunState {
    AuditConfig config;
    Taxonomy taxonomy;
    MemoryPool pool;
    int outer_iteration = 0;
    int consecutive_stops = 0;
    std::map<std::string, int> per_scenario_probe_count;
    std::set<std::string> completed_scenarios; // verification finished
    RunStatus status = RunStatus::Running;
    std::string halt_reason;
    std::string completed_via; // "stop_rule" or "n_bound"

    std::string active_scenario_id;
    ScenarioProgress progress;
};

// Thrown by the checkpoint test hook to simulate a kill; never caught by
// the orchestrator itself.
struct RunAborted {
    std::size_t checkpoint_index = 0;
};

struct Hooks {
    // Called after every durable checkpoint with its 1-based index.
    std::function<void(std::size_t)> on_checkpoint;
};

// One full audit over a run directory: prototype emulation, verification
// with iterative probing, adaptive updating, all checkpointed after
// every pool append and taxonomy revision.
class AuditRun {
public:
    // Fresh run: refuses a directory that already holds a checkpoint.
    static std::unique_ptr<AuditRun> start(AuditConfig config, std::filesystem::path run_dir,
                                           Hooks hooks = {});
    // Reconstructs the state from the checkpoint; evaluated cases are
    // never re-sent to any backend. Throws CorruptCheckpoint.
    static std::unique_ptr<AuditRun> resume(std::filesystem::path run_dir, Hooks hooks = {});

    ~AuditRun();

    // Drives the run to Completed or Halted and writes the final report
    // files. Unrecoverable stage errors become Halted(reason) with a
    // durable checkpoint.
    RunState& run();

    const RunState& state() const noexcept { return state_; }
    const std::filesystem::path& run_dir() const noexcept { return run_dir_; }
    AuditReport final_report() const;

    // file names inside a run directory
    static constexpr const char* kConfigSnapshot = "config.snapshot.ini";
    static constexpr const char* kTaxonomyFile = "taxonomy.json";
    static constexpr const char* kPoolFile = "pool.jsonl";
    static constexpr const char* kCheckpointFile = "checkpoint.json";
    static constexpr const char* kRejectionLog = "rejections.log";
    static constexpr const char* kTranscriptLog = "transcript.jsonl";

private:
    AuditRun(AuditConfig config, std::filesystem::path run_dir, Hooks hooks);

    void init_fresh();
    void load_checkpoint();
    void open_backends();
    void checkpoint();
    void process_scenario(const TestScenario& scenario);
    void generate_prototypes(const TestScenario& scenario);
    void evaluate_pending(const TestScenario& scenario);
    void probe_loop(const TestScenario& scenario);
    bool early_stop(const std::string& scenario_id) const;
    void adaptive_update();
    EvaluationRecord evaluate_case(const TestCase& test_case);
    void append_record(EvaluationRecord record);
    void log_rejection(const std::string& scenario_id, const std::string& stage,
                       const std::string& reason, const std::string& detail);
    std::set<std::string> pool_claims() const;
    void write_reports();

    RunState state_;
    std::filesystem::path run_dir_;
    Hooks hooks_;
    std::size_t checkpoint_index_ = 0;

    std::unique_ptr<gateway::LlmGateway> target_;
    std::unique_ptr<gateway::LlmGateway> controller_;
    std::unique_ptr<evidence::EvidenceChecker> checker_;
    agents::PromptCatalog prompts_;
    agents::AgentContext ctx_;

    int lock_fd_ = -1;
    std::unique_ptr<std::ofstream> transcript_;
};

// Convenience wrapper: start (or refuse), run to completion, return the
// final state.
RunState run_audit(const AuditConfig& config, const std::filesystem::path& run_dir,
                   Hooks hooks = {});

} // namespace factaudit::orch
