// Acceptance suite: one test case per criterion, reported as a single
// pass/fail line each by the "criteria" reporter.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "factaudit/config.hpp"
#include "factaudit/errors.hpp"
#include "factaudit/metrics.hpp"
#include "factaudit/orchestrator.hpp"
#include "factaudit/parsing.hpp"
#include "factaudit/persist.hpp"
#include "factaudit/sampling.hpp"

#include "support/golden_fixture.hpp"
#include "support/script_walker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>

using namespace factaudit;

namespace {

// ── criteria reporter: one line per test case ───────────────────────

struct CriteriaReporter : public doctest::IReporter {
    std::ostream& out;
    const doctest::TestCaseData* current = nullptr;

    explicit CriteriaReporter(const doctest::ContextOptions& in) : out(*in.cout) {}

    void report_query(const doctest::QueryData&) override {}
    void test_run_start() override {}
    void test_run_end(const doctest::TestRunStats& stats) override {
        out << (stats.numTestCasesFailed == 0 ? "all criteria passed"
                                              : "criteria failed: " +
                                                    std::to_string(stats.numTestCasesFailed))
            << "\n";
    }
    void test_case_start(const doctest::TestCaseData& data) override { current = &data; }
    void test_case_reenter(const doctest::TestCaseData&) override {}
    void test_case_end(const doctest::CurrentTestCaseStats& stats) override {
        out << (stats.failure_flags == doctest::TestCaseFailureReason::None ? "[PASS] "
                                                                            : "[FAIL] ")
            << (current ? current->m_name : "?") << "\n";
    }
    void test_case_exception(const doctest::TestCaseException& e) override {
        out << "       exception: " << e.error_string << "\n";
    }
    void subcase_start(const doctest::SubcaseSignature&) override {}
    void subcase_end() override {}
    void log_assert(const doctest::AssertData& ad) override {
        if (!ad.m_failed) return;
        out << "       assert failed " << ad.m_file << ":" << ad.m_line << ": " << ad.m_expr;
        if (ad.m_decomp.size()) out << "  -> " << ad.m_decomp;
        out << "\n";
    }
    void log_message(const doctest::MessageData&) override {}
    void test_case_skipped(const doctest::TestCaseData&) override {}
};

REGISTER_REPORTER("criteria", 1, CriteriaReporter);

// ── helpers ─────────────────────────────────────────────────────────

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FACTAUDIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

EvaluationRecord metric_record(int grade, bool correct) {
    static int counter = 0;
    const int n = ++counter;
    TestCase c = TestCase::make("m" + std::to_string(n), "s1", "kp",
                                "claim " + std::to_string(n), {}, TestMode::Claim,
                                Provenance::prototype());
    TargetResponse response;
    response.verdict = Verdict::Factual;
    response.raw = "Factual.";
    ReferenceAnswer reference;
    reference.gold_verdict = Verdict::Factual;
    reference.judge_approved = true;
    return EvaluationRecord::make(c, response, reference, grade, "", correct);
}

void check_metrics_match(const MetricSet& engine, const testsupport::WalkerMetrics& oracle) {
    CHECK(engine.count == oracle.count);
    CHECK(engine.low_count == oracle.low);
    CHECK(engine.cvpj_count == oracle.cvpj);
    CHECK(engine.grade_sum == oracle.grade_sum);
    CHECK(engine.imr == oracle.imr());
    CHECK(engine.jfr == oracle.jfr());
    CHECK(engine.mean_grade == oracle.mean_grade());
    CHECK(engine.limit_bound == doctest::Approx(oracle.limit_bound()).epsilon(1e-15));
}

sim::Proposal mixture_with_uniform(const sim::SyntheticSpace& space, double uniform_share) {
    std::vector<double> q(space.size);
    const double u = uniform_share / static_cast<double>(space.size);
    for (std::size_t i = 0; i < space.size; ++i)
        q[i] = (1.0 - uniform_share) * space.p[i] + u;
    return sim::Proposal::make(std::move(q));
}

} // namespace

TEST_CASE("criterion 1: golden mock run is byte-stable and matches the walker oracle") {
    const auto started = std::chrono::steady_clock::now();
    testsupport::TempDir tmp("acc1");
    const auto fixture = testsupport::write_golden_run_a(tmp.path() / "fix");

    // three executions through the real CLI, byte-identical pools
    std::string pool_bytes;
    for (int i = 0; i < 3; ++i) {
        const auto run_dir = tmp.path() / ("run" + std::to_string(i));
        REQUIRE(run_cli("run --config " + fixture.config_path.string() + " --run-dir " +
                        run_dir.string()) == 0);
        const std::string bytes = read_file(run_dir / orch::AuditRun::kPoolFile);
        if (i == 0) pool_bytes = bytes;
        else CHECK(bytes == pool_bytes);
    }
    REQUIRE(!pool_bytes.empty());

    // walker oracle: record counts and metrics derived from the script alone
    testsupport::WalkerParams params;
    params.scenario_ids = testsupport::golden_tables().scenario_ids;
    params.k = 10;
    params.m = 5;
    params.batch = 1;
    const auto oracle = testsupport::walk_script(fixture.script_path, params);
    REQUIRE(oracle.records.size() == 45);
    CHECK(oracle.overall.count == 45);
    CHECK(oracle.overall.low == 13);
    CHECK(oracle.overall.cvpj == 6);
    CHECK(oracle.overall.grade_sum == 295);

    const auto run_dir = tmp.path() / "run0";
    const AuditConfig config = load_config(run_dir / orch::AuditRun::kConfigSnapshot);
    const MemoryPool pool = load_pool(run_dir / orch::AuditRun::kPoolFile);
    const Taxonomy taxonomy = load_taxonomy(run_dir / orch::AuditRun::kTaxonomyFile);
    REQUIRE(pool.size() == oracle.records.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto& record = pool.records()[i];
        const auto& expected = oracle.records[i];
        CHECK(record.test_case.scenario_id == expected.scenario_id);
        CHECK(to_string(record.test_case.provenance) == expected.provenance);
        CHECK(to_string(record.test_case.test_mode) == expected.mode);
        CHECK(record.grade == expected.grade);
        CHECK(record.verdict_correct == expected.verdict_correct);
        CHECK(record.importance_weight == 1.0);
    }

    const AuditReport report = build_report(pool, taxonomy, config.epsilon,
                                            config.imr_grade_threshold, config_digest(config));
    check_metrics_match(report.overall, oracle.overall);
    for (const auto& [scenario_id, metrics] : oracle.per_scenario)
        check_metrics_match(report.per_scenario.at(scenario_id), metrics);
    for (const auto& [object_slug, metrics] : oracle.per_object)
        check_metrics_match(report.per_object.at(object_slug), metrics);
    for (const auto& [mode, metrics] : oracle.per_mode)
        check_metrics_match(report.per_mode.at(mode), metrics);

    // formatted values to two decimals for the overall slice
    char formatted[64];
    std::snprintf(formatted, sizeof(formatted), "%.2f %.2f %.2f", report.overall.imr * 100.0,
                  report.overall.jfr * 100.0, report.overall.mean_grade);
    CHECK(std::string(formatted) == "28.89 13.33 6.56");

    // `report` reproduces the files written at completion byte for byte
    REQUIRE(run_cli("report " + run_dir.string() + " --format csv") == 0);
    const AuditReport rebuilt = build_report(pool, taxonomy, config.epsilon,
                                             config.imr_grade_threshold, config_digest(config));
    CHECK(render_report(rebuilt, ReportFormat::Csv) == read_file(run_dir / "metrics.csv"));
    CHECK(render_report(rebuilt, ReportFormat::Json) == read_file(run_dir / "report.json"));

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    CHECK(elapsed < 10000); // all three runs plus checks inside 10 s, no network
}

TEST_CASE("criterion 2: metric formula suite") {
    // worked values
    const auto worked = compute_metrics(
        {metric_record(2, true), metric_record(3, false), metric_record(8, true)}, 3);
    CHECK(worked.imr == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(worked.jfr == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const auto bound = compute_metrics(
        {metric_record(2, true), metric_record(4, true), metric_record(5, true)}, 3);
    CHECK(std::abs(bound.limit_bound - 0.31666666666666665) < 1e-9);
    CHECK(std::abs(bound.limit_bound - 0.31667) < 1e-5);

    // jfr <= imr and permutation invariance on random slices
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<EvaluationRecord> records;
        const int n = 2 + static_cast<int>(rng() % 50);
        for (int i = 0; i < n; ++i)
            records.push_back(metric_record(1 + static_cast<int>(rng() % 10), (rng() & 1) != 0));
        const auto base = compute_metrics(records, 3);
        CHECK(base.jfr <= base.imr);
        std::shuffle(records.begin(), records.end(), rng);
        const auto shuffled = compute_metrics(records, 3);
        CHECK(shuffled.imr == base.imr);
        CHECK(shuffled.jfr == base.jfr);
        CHECK(shuffled.grade_sum == base.grade_sum);
        CHECK(shuffled.limit_bound == doctest::Approx(base.limit_bound).epsilon(1e-12));
    }

    // epsilon 4.0 counts exactly the grade <= 3 set
    MemoryPool pool;
    std::mt19937 rng2(5);
    for (int i = 0; i < 100; ++i)
        pool.append(metric_record(1 + static_cast<int>(rng2() % 10), true));
    CHECK(poor_cases(pool, 4.0).size() == compute_metrics(pool.records(), 3).low_count);
}

TEST_CASE("criterion 3: ordering, stop rule and the probe cap") {
    testsupport::TempDir tmp("acc3");

    // prototypes precede probes and probe indices ascend in the golden pool
    const auto golden = testsupport::write_golden_run_a(tmp.path() / "fix");
    auto golden_run =
        orch::AuditRun::start(load_config(golden.config_path), tmp.path() / "run_golden");
    const auto& golden_state = golden_run->run();
    REQUIRE(golden_state.status == orch::RunStatus::Completed);
    for (const auto& scenario_id : testsupport::golden_tables().scenario_ids) {
        bool seen_probe = false;
        int last_probe = 0;
        for (const auto& record : golden_state.pool.scenario_records(scenario_id)) {
            if (record.test_case.provenance.kind == Provenance::Kind::Prototype) {
                CHECK(!seen_probe);
            } else {
                seen_probe = true;
                CHECK(record.test_case.provenance.iteration == last_probe + 1);
                last_probe = record.test_case.provenance.iteration;
            }
        }
    }

    // termination after exactly three consecutive [stop] outputs; the
    // script would miss on a fourth proposal
    const auto stop = testsupport::write_stop_rule_fixture(tmp.path() / "stopfix");
    auto stop_run = orch::AuditRun::start(load_config(stop.config_path), tmp.path() / "run_stop");
    const auto& stop_state = stop_run->run();
    CHECK(stop_state.status == orch::RunStatus::Completed);
    CHECK(stop_state.completed_via == "stop_rule");
    CHECK(stop_state.consecutive_stops == 3);

    // hard cap: exactly m probe iterations per scenario
    const auto cap = testsupport::write_probe_cap_fixture(tmp.path() / "capfix");
    auto cap_run = orch::AuditRun::start(load_config(cap.config_path), tmp.path() / "run_cap");
    const auto& cap_state = cap_run->run();
    CHECK(cap_state.status == orch::RunStatus::Completed);
    CHECK(cap_state.pool.size() == 31);
    CHECK(cap_state.per_scenario_probe_count.at("complex_claim/multi-step-reasoning") == 30);
}

TEST_CASE("criterion 4: resume equivalence at every checkpoint boundary") {
    testsupport::TempDir tmp("acc4");
    const auto fixture = testsupport::write_golden_run_a(tmp.path() / "fix");

    // uninterrupted reference run, counting checkpoints
    std::size_t total_checkpoints = 0;
    orch::Hooks counter;
    counter.on_checkpoint = [&](std::size_t index) { total_checkpoints = index; };
    auto reference =
        orch::AuditRun::start(load_config(fixture.config_path), tmp.path() / "full", counter);
    REQUIRE(reference->run().status == orch::RunStatus::Completed);
    const std::string full_pool = read_file(tmp.path() / "full" / orch::AuditRun::kPoolFile);
    REQUIRE(total_checkpoints > 40);

    for (std::size_t boundary = 1; boundary <= total_checkpoints; ++boundary) {
        const auto dir = tmp.path() / ("kill" + std::to_string(boundary));
        orch::Hooks hooks;
        hooks.on_checkpoint = [boundary](std::size_t index) {
            if (index == boundary) throw orch::RunAborted{index};
        };
        bool aborted = false;
        try {
            auto run = orch::AuditRun::start(load_config(fixture.config_path), dir, hooks);
            run->run();
        } catch (const orch::RunAborted&) {
            aborted = true;
        }
        REQUIRE(aborted);
        auto resumed = orch::AuditRun::resume(dir);
        const auto& state = resumed->run();
        REQUIRE(state.status == orch::RunStatus::Completed);
        const std::string pool = read_file(dir / orch::AuditRun::kPoolFile);
        if (pool != full_pool) {
            MESSAGE("pool mismatch after resume at boundary ", boundary);
            REQUIRE(pool == full_pool);
        }
    }
}

TEST_CASE("criterion 5: parser robustness") {
    using agents::parse_grade;
    // transcript-shaped judge outputs with the bracketed rating token
    CHECK(parse_grade("The verdict matches but the justification has a unit error.\n"
                      "The response also omits the growth conditions the reference covers.\n"
                      "Rating: [[2]]") == 2);
    CHECK(parse_grade("1. **Correctness**: one statement is misleading.\n"
                      "2. **Completeness**: no expert consensus cited.\n"
                      "In summary the verdict is right but shallow.\n\nRating: [[3]]\n") == 3);
    CHECK(parse_grade("Rating: [[10]]") == 10);
    CHECK(parse_grade("rating:[[1]]") == 1);

    for (const char* bad : {"Rating: [[0]]", "Rating: [[11]]", "Rating: [[-3]]"}) {
        try {
            parse_grade(bad);
            FAIL("expected GradeOutOfRange for ", bad);
        } catch (const AuditError& e) {
            CHECK(e.code() == ErrorCode::GradeOutOfRange);
        }
    }
    try {
        parse_grade("no token in sight");
        FAIL("expected NoRatingToken");
    } catch (const AuditError& e) {
        CHECK(e.code() == ErrorCode::NoRatingToken);
    }

    // verdict labels: all three plus the unparsed fallback
    CHECK(scan_verdict("Factual. Confirmed by the registry.") == Verdict::Factual);
    CHECK(scan_verdict("Non-Factual. The record contradicts it.") == Verdict::NonFactual);
    CHECK(scan_verdict("Not Enough Information: conflicting sources.") ==
          Verdict::NotEnoughInformation);
    CHECK(scan_verdict("NONFACTUAL claim") == Verdict::NonFactual);
    CHECK(scan_verdict("I cannot determine this.") == std::nullopt);
    const auto split = agents::split_response("I cannot determine this.");
    CHECK(split.justification == split.raw);
}

TEST_CASE("criterion 6: importance sampling estimators against the enumeration oracle") {
    const auto started = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto space = sim::random_space(1000, seed);
        const double exact = sim::exact_expectation(space);

        // unbiasedness band with a nondegenerate proposal
        const auto proposal = mixture_with_uniform(space, 0.5);
        const auto is = sim::is_estimate(space, proposal, 10000);
        const double se = std::sqrt(is.variance / 10000.0);
        CHECK(std::abs(is.estimate - exact) < 4.0 * se);

        // zero-variance optimal proposal
        const auto optimal = sim::optimal_proposal(space);
        const auto zero = sim::is_estimate(space, optimal, 2000);
        CHECK(zero.variance < 1e-20);

        // q = p with a shared draw stream reproduces plain monte carlo
        std::mt19937_64 rng_a(seed + 1000);
        std::mt19937_64 rng_b(seed + 1000);
        const auto mc = sim::mc_estimate(space, 10000, rng_a);
        const auto same = sim::is_estimate(space, sim::proposal_from_p(space), 10000, rng_b);
        CHECK(mc.estimate == same.estimate);
        CHECK(mc.variance == same.variance);
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    CHECK(elapsed < 30000);
}

TEST_CASE("criterion 7: refinement variance ordering across rounds") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto space = sim::random_space(1000, seed);
        std::mt19937_64 rng(seed);
        auto proposal = sim::proposal_from_p(space);
        double round0_variance = 0.0;
        double round0_se = 0.0;
        double previous_variance = 0.0;
        double previous_se = 0.0;
        for (int round = 0; round < 5; ++round) {
            const auto result = sim::is_estimate(space, proposal, 10000, rng);
            const double se = sim::variance_standard_error(result.observations);
            if (round == 0) {
                round0_variance = result.variance;
                round0_se = se;
            } else {
                const double step_slack =
                    2.0 * std::sqrt(se * se + previous_se * previous_se);
                CHECK(result.variance <= previous_variance + step_slack);
                const double zero_slack =
                    2.0 * std::sqrt(se * se + round0_se * round0_se);
                CHECK(result.variance <= round0_variance + zero_slack);
            }
            previous_variance = result.variance;
            previous_se = se;
            proposal = sim::refine_proposal(space, proposal, result.observations, 0.5);
        }
    }
}

TEST_CASE("criterion 8: renderer emits the per-object table shape") {
    // published aggregate values are used here only as renderer input;
    // live-model numbers are explicitly not reproduction targets
    AuditReport report;
    report.overall.imr = 0.1202;
    report.overall.jfr = 0.0355;
    report.overall.mean_grade = 7.21;
    report.overall.count = 990;
    report.per_object["complex_claim"] = report.overall;
    report.object_names["complex_claim"] = "Complex Claim";
    report.config_digest = "fixture";
    const std::string md = render_report(report, ReportFormat::Markdown);
    CHECK(md.find("| Object | IMR↓ (%) | JFR↓ (%) | Grade↑ |") !=
          std::string::npos);
    CHECK(md.find("| Complex Claim | 12.02 | 3.55 | 7.21 |") != std::string::npos);
    CHECK(md.find("| Overall | 12.02 | 3.55 | 7.21 |") != std::string::npos);

    // the golden run writes the same table shape from engine-made records
    testsupport::TempDir tmp("acc8");
    const auto fixture = testsupport::write_golden_run_a(tmp.path() / "fix");
    auto run = orch::AuditRun::start(load_config(fixture.config_path), tmp.path() / "run");
    REQUIRE(run->run().status == orch::RunStatus::Completed);
    const std::string engine_md = read_file(tmp.path() / "run" / "report.md");
    CHECK(engine_md.find("| Object | IMR↓ (%) | JFR↓ (%) | Grade↑ |") !=
          std::string::npos);
    CHECK(engine_md.find("| Overall | 28.89 | 13.33 | 6.56 |") != std::string::npos);
}

TEST_CASE("criterion 9: mode-pin ablation plumbing") {
    testsupport::TempDir tmp("acc9");
    const auto fixture = testsupport::write_claim_pin_fixture(tmp.path() / "fix");
    const auto run_dir = tmp.path() / "run";
    REQUIRE(run_cli("run --config " + fixture.config_path.string() + " --run-dir " +
                    run_dir.string() + " --mode-pin claim") == 0);
    const MemoryPool pool = load_pool(run_dir / orch::AuditRun::kPoolFile);
    REQUIRE(pool.size() == 5);
    for (const auto& record : pool.records()) {
        CHECK(record.test_case.test_mode == TestMode::Claim);
        CHECK(record.test_case.auxiliary_info.empty());
    }
    // the pinned mode is recorded in the config snapshot
    const AuditConfig snapshot = load_config(run_dir / orch::AuditRun::kConfigSnapshot);
    CHECK(snapshot.mode_pin == TestMode::Claim);
}
