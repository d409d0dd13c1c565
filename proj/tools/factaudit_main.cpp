// factaudit CLI: configure, run, resume, report and simulate audits.
#include "factaudit/config.hpp"
#include "factaudit/errors.hpp"
#include "factaudit/gateway.hpp"
#include "factaudit/metrics.hpp"
#include "factaudit/orchestrator.hpp"
#include "factaudit/persist.hpp"
#include "factaudit/prompts.hpp"
#include "factaudit/sampling.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

using namespace factaudit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitHalted = 3;
constexpr int kExitBackend = 4;

int exit_code_for(const AuditError& error) {
    switch (error.code()) {
    case ErrorCode::ConfigError:
    case ErrorCode::CorruptCheckpoint:
    case ErrorCode::RunLocked:
        return kExitConfig;
    case ErrorCode::AuthError:
    case ErrorCode::TimeoutError:
    case ErrorCode::ExhaustedRetries:
    case ErrorCode::MockScriptMiss:
    case ErrorCode::ToolError:
        return kExitBackend;
    default:
        return kExitBackend;
    }
}

struct Overrides {
    int max_parallel = 0; // 0 = not set
    std::int64_t seed = -1;
    std::string scenario_filter;
    std::string mode_pin;
};

void apply_overrides(AuditConfig& config, const Overrides& overrides) {
    if (overrides.max_parallel > 0) config.max_parallel = overrides.max_parallel;
    if (overrides.seed >= 0) config.seed = static_cast<std::uint64_t>(overrides.seed);
    if (!overrides.scenario_filter.empty()) config.scenario_filter = overrides.scenario_filter;
    if (!overrides.mode_pin.empty()) {
        const auto mode = parse_test_mode(overrides.mode_pin);
        if (!mode) fail(ErrorCode::ConfigError, "unknown --mode-pin value: " + overrides.mode_pin);
        config.mode_pin = mode;
    }
}

int cmd_init(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto config_path = dir / "config.ini";
    if (std::filesystem::exists(config_path))
        fail(ErrorCode::ConfigError, "refusing to overwrite " + config_path.string());
    atomic_write(config_path, default_config_text());
    agents::PromptCatalog::defaults().write_to(dir / "prompts");

    // example mock script rich enough to drive a default run end to end
    auto block = [](const std::string& claim) {
        return "KEY_POINT: Verify the statement below.\nSOURCE_CLAIM: " + claim +
               "\nAUXILIARY_INFO:\nTEST_MODE: claim\n";
    };
    std::vector<std::string> prototype_batches;
    std::string batch;
    for (int i = 1; i <= 10; ++i)
        batch += block("Example prototype claim number " + std::to_string(i) + ".") + "\n";
    prototype_batches.push_back(batch);
    std::vector<std::string> probes;
    for (int j = 1; j <= 40; ++j)
        probes.push_back(block("Example probe claim number " + std::to_string(j) + "."));

    nlohmann::ordered_json script;
    script["tags"] = {
        {"appraiser.propose", {{"responses", {"[stop]"}}, {"repeat_last", true}}},
        {"appraiser.judge", {{"responses", {"ACCEPT"}}, {"repeat_last", true}}},
        {"inquirer.generate", {{"responses", prototype_batches}, {"repeat_last", true}}},
        {"inspector.fine", {{"responses", {"ACCEPT"}}, {"repeat_last", true}}},
        {"evaluator.reference",
         {{"responses", {"Factual. Example reference justification."}}, {"repeat_last", true}}},
        {"evaluator.judge", {{"responses", {"Choice: [[1]]"}}, {"repeat_last", true}}},
        {"evaluator.score",
         {{"responses", {"Solid answer overall.\nRating: [[8]]"}}, {"repeat_last", true}}},
        {"target.infer",
         {{"responses", {"Factual. Example target justification."}}, {"repeat_last", true}}},
        {"prober.generate", {{"responses", probes}, {"repeat_last", true}}},
    };
    atomic_write(dir / "script.json", script.dump(2));
    std::cout << "initialized " << dir.string() << " (config.ini, prompts/, script.json)\n";
    return kExitOk;
}

int cmd_validate(const std::filesystem::path& config_path) {
    AuditConfig config = load_config(config_path);
    validate_config(config);
    if (!config.taxonomy_path.empty()) load_taxonomy(config.taxonomy_path);
    auto prompts = agents::PromptCatalog::defaults();
    if (!config.prompt_dir.empty()) prompts.apply_overrides(config.prompt_dir);

    gateway::LlmGateway target(config.target_backend, 1);
    gateway::LlmGateway controller(config.controller_backend, 1);
    std::cout << "target: " << target.probe() << "\n";
    std::cout << "controller: " << controller.probe() << "\n";

    // mock scripts must cover every tag the pipeline can request
    auto require_tags = [](const BackendSpec& spec, const std::vector<std::string>& tags,
                           const char* name) {
        if (spec.kind != BackendSpec::Kind::ScriptedMock) return;
        const auto script = gateway::MockScript::load(spec.script_path);
        std::string missing;
        for (const auto& tag : tags)
            if (!script.has_tag(tag)) missing += (missing.empty() ? "" : ", ") + tag;
        if (!missing.empty())
            fail(ErrorCode::ConfigError,
                 std::string(name) + " mock script lacks tags: " + missing);
    };
    require_tags(config.target_backend, {"target.infer"}, "target");
    require_tags(config.controller_backend,
                 {"appraiser.propose", "appraiser.judge", "inquirer.generate", "inspector.fine",
                  "evaluator.reference", "evaluator.judge", "evaluator.score", "prober.generate"},
                 "controller");
    std::cout << "config ok (digest " << config_digest(config) << ")\n";
    return kExitOk;
}

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& run_dir,
            const Overrides& overrides) {
    AuditConfig config = load_config(config_path);
    apply_overrides(config, overrides);
    auto run = orch::AuditRun::start(std::move(config), run_dir);
    const orch::RunState& state = run->run();
    if (state.status == orch::RunStatus::Halted) {
        std::cerr << "run halted: " << state.halt_reason << "\n";
        return kExitHalted;
    }
    std::cout << "completed via " << state.completed_via << ": " << state.pool.size()
              << " records, taxonomy revision " << state.taxonomy.revision() << "\n";
    return kExitOk;
}

int cmd_resume(const std::filesystem::path& run_dir) {
    auto run = orch::AuditRun::resume(run_dir);
    const orch::RunState& state = run->run();
    if (state.status == orch::RunStatus::Halted) {
        std::cerr << "run halted: " << state.halt_reason << "\n";
        return kExitHalted;
    }
    std::cout << "completed via " << state.completed_via << ": " << state.pool.size()
              << " records, taxonomy revision " << state.taxonomy.revision() << "\n";
    return kExitOk;
}

int cmd_report(const std::filesystem::path& run_dir, const std::string& format) {
    const AuditConfig config = load_config(run_dir / orch::AuditRun::kConfigSnapshot);
    const Taxonomy taxonomy = load_taxonomy(run_dir / orch::AuditRun::kTaxonomyFile);
    const MemoryPool pool = load_pool(run_dir / orch::AuditRun::kPoolFile);
    if (pool.empty()) fail(ErrorCode::EmptySlice, "pool is empty; nothing to report");
    const AuditReport report = build_report(pool, taxonomy, config.epsilon,
                                            config.imr_grade_threshold, config_digest(config));
    atomic_write(run_dir / "report.md", render_report(report, ReportFormat::Markdown));
    atomic_write(run_dir / "report.json", render_report(report, ReportFormat::Json));
    atomic_write(run_dir / "metrics.csv", render_report(report, ReportFormat::Csv));

    ReportFormat requested = ReportFormat::Markdown;
    if (format == "json") requested = ReportFormat::Json;
    else if (format == "csv") requested = ReportFormat::Csv;
    else if (format != "md") fail(ErrorCode::ConfigError, "unknown --format: " + format);
    std::cout << render_report(report, requested);
    return kExitOk;
}

int cmd_simulate(const std::filesystem::path& params_path, const std::filesystem::path& out_csv) {
    sim::SimulationParams params;
    if (!params_path.empty()) {
        nlohmann::json j = nlohmann::json::parse(read_file(params_path));
        params.space_size = j.value("space_size", params.space_size);
        params.samples = j.value("samples", params.samples);
        params.rounds = j.value("rounds", params.rounds);
        params.lambda = j.value("lambda", params.lambda);
        params.seed = j.value("seed", params.seed);
    }
    const auto rows = sim::run_simulation(params);
    atomic_write(out_csv, sim::simulation_csv(rows));
    std::cout << "wrote " << rows.size() << " rounds to " << out_csv.string()
              << " (exact expectation " << rows.front().exact << ", seed " << params.seed
              << ")\n";
    const auto space = sim::random_space(params.space_size, params.seed);
    const auto check = sim::eq3_check(space, sim::proposal_from_p(space));
    if (!check.holds)
        std::cerr << "note: full-space weight bound does not hold for this proposal "
                     "(premise mass "
                  << check.premise_mass << ")\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive fact-checking audit engine"};
    app.require_subcommand(1);

    std::string init_dir;
    auto* init = app.add_subcommand("init", "scaffold a run directory with a default config");
    init->add_option("dir", init_dir, "directory to create")->required();

    std::string validate_config_path;
    auto* validate = app.add_subcommand("validate", "check config and backend reachability");
    validate->add_option("--config", validate_config_path, "config file")
        ->envname("FACTAUDIT_CONFIG")
        ->required();

    std::string run_config_path;
    std::string run_dir;
    Overrides overrides;
    auto* run = app.add_subcommand("run", "execute a full audit");
    run->add_option("--config", run_config_path, "config file")
        ->envname("FACTAUDIT_CONFIG")
        ->required();
    run->add_option("--run-dir", run_dir, "run directory")
        ->envname("FACTAUDIT_RUN_DIR")
        ->required();
    run->add_option("--max-parallel", overrides.max_parallel, "in-flight completions")
        ->envname("FACTAUDIT_MAX_PARALLEL");
    run->add_option("--seed", overrides.seed, "run seed")->envname("FACTAUDIT_SEED");
    run->add_option("--scenario-filter", overrides.scenario_filter, "glob on scenario names")
        ->envname("FACTAUDIT_SCENARIO_FILTER");
    run->add_option("--mode-pin", overrides.mode_pin, "pin test mode: claim|evidence|wisdom")
        ->envname("FACTAUDIT_MODE_PIN");

    std::string resume_dir;
    auto* resume = app.add_subcommand("resume", "continue a checkpointed run");
    resume->add_option("run_dir", resume_dir, "run directory")->required();

    std::string report_dir;
    std::string report_format = "md";
    auto* report = app.add_subcommand("report", "recompute and print the audit report");
    report->add_option("run_dir", report_dir, "run directory")->required();
    report->add_option("--format", report_format, "md|json|csv")->envname("FACTAUDIT_FORMAT");

    std::string sim_params;
    std::string sim_out = "simulation.csv";
    auto* simulate = app.add_subcommand("simulate", "run the sampling simulator");
    simulate->add_option("params", sim_params, "JSON parameter file (optional)");
    simulate->add_option("out_csv", sim_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (init->parsed()) return cmd_init(init_dir);
        if (validate->parsed()) return cmd_validate(validate_config_path);
        if (run->parsed()) return cmd_run(run_config_path, run_dir, overrides);
        if (resume->parsed()) return cmd_resume(resume_dir);
        if (report->parsed()) return cmd_report(report_dir, report_format);
        if (simulate->parsed()) return cmd_simulate(sim_params, sim_out);
    } catch (const AuditError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBackend;
    }
    return kExitUsage;
}
