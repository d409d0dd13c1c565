#include "factaudit/errors.hpp"
#include "factaudit/persist.hpp"

#include "support/golden_fixture.hpp"

#include <doctest.h>

#include <fstream>
#include <random>

using namespace factaudit;

namespace {

EvaluationRecord sample_record(int grade, const std::string& id = "s1#p001") {
    TestCase c = TestCase::make(id, "complex_claim/multi-step-reasoning", "key point",
                                "A claim with \"quotes\" and\nnewlines.",
                                {"snippet one", "snippet two"}, TestMode::Evidence,
                                Provenance::probe(4));
    TargetResponse response;
    response.verdict = Verdict::NonFactual;
    response.raw = "Non-Factual. Because of reasons.";
    response.justification = "Because of reasons.";
    response.latency_ms = 12;
    ReferenceAnswer reference;
    reference.gold_verdict = Verdict::NonFactual;
    reference.judge_approved = true;
    return EvaluationRecord::make(c, response, reference, grade, "judge comment", true, 1.0);
}

} // namespace

TEST_CASE("pool line carries the exact field names in order") {
    const std::string line = record_to_line(sample_record(7));
    CHECK(line.rfind("{\"id\":", 0) == 0);
    const char* keys[] = {"\"id\"",           "\"scenario_id\"",   "\"key_point\"",
                          "\"source_claim\"", "\"auxiliary_info\"", "\"test_mode\"",
                          "\"provenance\"",   "\"verdict\"",        "\"justification\"",
                          "\"raw\"",          "\"grade\"",          "\"comment\"",
                          "\"verdict_correct\"", "\"importance_weight\""};
    std::size_t last = 0;
    for (const char* key : keys) {
        const std::size_t pos = line.find(key);
        REQUIRE(pos != std::string::npos);
        CHECK(pos >= last);
        last = pos;
    }
    CHECK(line.find('\n') == std::string::npos);
}

TEST_CASE("record round trip is byte-stable") {
    const auto original = sample_record(3);
    const std::string line = record_to_line(original);
    const auto reparsed = record_from_line(line);
    CHECK(record_to_line(reparsed) == line);
    CHECK(reparsed.test_case == original.test_case);
    CHECK(reparsed.grade == original.grade);
    CHECK(reparsed.verdict_correct == original.verdict_correct);
    CHECK(reparsed.importance_weight == original.importance_weight);
    CHECK(reparsed.response.verdict == original.response.verdict);
    CHECK(reparsed.response.raw == original.response.raw);
}

TEST_CASE("unparsed verdict survives the round trip") {
    auto record = sample_record(5);
    record.response.verdict = std::nullopt;
    record.verdict_correct = false;
    const auto reparsed = record_from_line(record_to_line(record));
    CHECK(!reparsed.response.verdict.has_value());
    CHECK(record_to_line(reparsed) == record_to_line(record));
}

TEST_CASE("pool file save, append and load") {
    testsupport::TempDir tmp("pool");
    const auto path = tmp.path() / "pool.jsonl";
    MemoryPool pool;
    pool.append(sample_record(2, "a#p001"));
    pool.append(sample_record(9, "a#p002"));
    pool.append(sample_record(7, "a#p003"));
    save_pool(pool, path);
    const std::string before = read_file(path);
    append_pool_line(path, record_to_line(sample_record(5, "a#j001.1")));

    const MemoryPool loaded = load_pool(path);
    REQUIRE(loaded.size() == 4);
    CHECK(loaded.records()[0].grade == 2);
    CHECK(loaded.records()[3].test_case.id == "a#j001.1");
    // append-only: the first three records survive byte for byte
    CHECK(read_file(path).rfind(before, 0) == 0);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(record_to_line(loaded.records()[i]) == record_to_line(pool.records()[i]));
}

TEST_CASE("malformed pool line names the bad line number") {
    testsupport::TempDir tmp("poolbad");
    const auto path = tmp.path() / "pool.jsonl";
    {
        std::ofstream out(path);
        out << record_to_line(sample_record(2)) << "\n";
        out << "{\"id\": \"truncated\"\n";
    }
    try {
        load_pool(path);
        FAIL("expected CorruptCheckpoint");
    } catch (const AuditError& e) {
        CHECK(e.code() == ErrorCode::CorruptCheckpoint);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("taxonomy document round trip") {
    Taxonomy t = seed_taxonomy();
    TestScenario added;
    added.id = "fake_news/satire-mistaken-as-news";
    added.object = FactObject::fake_news();
    added.name = "Satire Mistaken as News";
    added.description = "Satirical pieces circulated as genuine reporting.";
    t.add_adaptive(added, 1);

    const std::string doc = taxonomy_to_json(t);
    const Taxonomy loaded = taxonomy_from_json(doc);
    CHECK(loaded == t);
    CHECK(taxonomy_to_json(loaded) == doc);

    testsupport::TempDir tmp("tax");
    save_taxonomy(t, tmp.path() / "taxonomy.json");
    CHECK(load_taxonomy(tmp.path() / "taxonomy.json") == t);
}

TEST_CASE("random records survive the line round trip byte for byte") {
    std::mt19937 rng(20240810);
    // whole characters so multi-byte UTF-8 sequences stay intact
    const std::vector<std::string> alphabet = {
        "a", "Z", "0", " ", "\"", "\\", "{", "}", "[", "]", ",", ":", "|", "#",
        "\t", "\n", "\xE2\x82\xAC", "\xC3\xA9", "\xF0\x9F\x99\x82"};
    auto random_text = [&](std::size_t max_len) {
        std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
        std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
        std::string out;
        const std::size_t len = len_dist(rng);
        while (out.size() < len) out += alphabet[pick(rng)];
        return out;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const bool claim_mode = (rng() & 1) != 0;
        std::vector<std::string> aux;
        if (!claim_mode) {
            const std::size_t n = 1 + rng() % 4;
            for (std::size_t i = 0; i < n; ++i) aux.push_back("s" + random_text(40));
        }
        TestCase c = TestCase::make(
            "id-" + std::to_string(trial), "scene/" + std::to_string(trial % 5),
            random_text(60), "c" + random_text(80), aux,
            claim_mode ? TestMode::Claim
                       : ((rng() & 1) ? TestMode::Evidence : TestMode::WisdomOfCrowds),
            (rng() & 1) ? Provenance::prototype()
                        : Provenance::probe(1 + static_cast<int>(rng() % 30)));
        TargetResponse response;
        switch (rng() % 4) {
        case 0: response.verdict = Verdict::Factual; break;
        case 1: response.verdict = Verdict::NonFactual; break;
        case 2: response.verdict = Verdict::NotEnoughInformation; break;
        default: response.verdict = std::nullopt; break;
        }
        response.raw = random_text(120);
        response.justification = random_text(100);
        const auto record = EvaluationRecord::make(
            std::move(c), std::move(response), ReferenceAnswer{},
            1 + static_cast<int>(rng() % 10), random_text(90), (rng() & 1) != 0, 1.0);
        const std::string line = record_to_line(record);
        const auto reparsed = record_from_line(line);
        CHECK(record_to_line(reparsed) == line);
    }
}

TEST_CASE("a stray invalid byte in model output cannot break the append") {
    auto record = sample_record(4);
    record.response.raw = std::string("truncated sequence \xE2 here");
    record.response.justification = record.response.raw;
    const std::string line = record_to_line(record); // must not throw
    const auto reparsed = record_from_line(line);
    // the replacement form is stable under a second round trip
    CHECK(record_to_line(reparsed) == line);
    CHECK(reparsed.grade == 4);
}

TEST_CASE("atomic write leaves no temp file behind") {
    testsupport::TempDir tmp("atomic");
    const auto path = tmp.path() / "file.txt";
    atomic_write(path, "hello");
    CHECK(read_file(path) == "hello");
    CHECK(!std::filesystem::exists(path.string() + ".tmp"));
    atomic_write(path, "world");
    CHECK(read_file(path) == "world");
}
