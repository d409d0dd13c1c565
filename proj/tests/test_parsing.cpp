#include "factaudit/errors.hpp"
#include "factaudit/parsing.hpp"

#include <doctest.h>

using namespace factaudit;
using namespace factaudit::agents;

namespace {

// judge-transcript-shaped fixture: multi-paragraph assessment prose with
// structured criticism, ending in the bracketed rating token
const char* kLongTranscriptRatingTwo =
    "The assistant's response begins by declaring the claim \"Factual\", which matches the\n"
    "reference. It cites the same two sources and lands near the same figure.\n"
    "\n"
    "However, the justification contains a unit-conversion slip: the quoted length does\n"
    "not equal the metric value given next to it. This inconsistency introduces\n"
    "confusion, and the response never addresses the growth conditions the reference\n"
    "treats as decisive [1].\n"
    "\n"
    "Overall, while the conclusion is right, the justification is flawed and shallow.\n"
    "\n"
    "Rating: [[2]]";

const char* kLongTranscriptRatingThree =
    "The response labels the claim correctly and aligns with the reference classification.\n"
    "Still, several points need attention:\n"
    "\n"
    "1. **Correctness**: one supporting statement is misleading about isolated incidents.\n"
    "2. **Soundness**: the origin of the myth is mentioned but never connected to the\n"
    "   conclusion.\n"
    "3. **Completeness**: no expert consensus is cited, unlike the reference.\n"
    "\n"
    "In summary, the verdict is right but the justification lacks depth.\n"
    "\n"
    "Rating: [[3]]\n";

} // namespace

TEST_CASE("grade token parses from transcript-shaped judge output") {
    CHECK(parse_grade("... Rating: [[2]]") == 2);
    CHECK(parse_grade(kLongTranscriptRatingTwo) == 2);
    CHECK(parse_grade(kLongTranscriptRatingThree) == 3);
    CHECK(parse_grade("Rating: [[10]]") == 10);
    CHECK(parse_grade("rating:[[5]]") == 5);
    CHECK(parse_grade("Rating - [[4]]") == 4);
    CHECK(parse_grade("Rating: [[ 7 ]]") == 7);
    CHECK(parse_grade("The rating follows.\nRating:\n[[6]]") == 6);
}

TEST_CASE("last rating token wins") {
    CHECK(parse_grade("Rating: [[3]] revised after reflection. Rating: [[7]]") == 7);
}

TEST_CASE("grade range is enforced") {
    try {
        parse_grade("Rating: [[0]]");
        FAIL("expected GradeOutOfRange");
    } catch (const AuditError& e) {
        CHECK(e.code() == ErrorCode::GradeOutOfRange);
    }
    try {
        parse_grade("Rating: [[11]]");
        FAIL("expected GradeOutOfRange");
    } catch (const AuditError& e) {
        CHECK(e.code() == ErrorCode::GradeOutOfRange);
    }
}

TEST_CASE("missing rating token") {
    try {
        parse_grade("The response was acceptable overall but nothing more.");
        FAIL("expected NoRatingToken");
    } catch (const AuditError& e) {
        CHECK(e.code() == ErrorCode::NoRatingToken);
    }
    // a bare bracketed number without the keyword does not count
    CHECK_THROWS_AS(parse_grade("scores: [[9]]"), AuditError);
    // citation brackets in the prose do not confuse the scan
    CHECK(parse_grade("see [2] and [3] for details. Rating: [[8]]") == 8);
}

TEST_CASE("choice token") {
    CHECK(last_bracketed_int("Choice: [[2]]", "choice") == 2);
    CHECK(last_bracketed_int("Choice: [[0]]", "choice") == 0);
    CHECK(last_bracketed_int("no token here", "choice") == std::nullopt);
}

TEST_CASE("accept/reject markers") {
    CHECK(parse_accept_reject("ACCEPT").accepted);
    CHECK(parse_accept_reject("  accept\n").accepted);
    const auto rejected = parse_accept_reject("REJECT: overlaps existing scenario");
    CHECK(!rejected.accepted);
    CHECK(rejected.reason == "overlaps existing scenario");
    CHECK(!parse_accept_reject("Verdict follows.\nREJECT: too vague").accepted);
    CHECK_THROWS_AS(parse_accept_reject("maybe?"), AuditError);
}

TEST_CASE("case blocks parse with all three modes") {
    const std::string text =
        "KEY_POINT: Verify the statistic.\n"
        "SOURCE_CLAIM: The reservoir holds two million liters.\n"
        "AUXILIARY_INFO:\n"
        "TEST_MODE: claim\n"
        "\n"
        "KEY_POINT: Verify against the provided evidence.\n"
        "SOURCE_CLAIM: The bridge opened in 1932.\n"
        "AUXILIARY_INFO:\n"
        "- City archive note about the opening ceremony.\n"
        "- Engineering registry entry with the completion date.\n"
        "TEST_MODE: evidence\n"
        "\n"
        "KEY_POINT: Judge the thread.\n"
        "SOURCE_CLAIM: A celebrity moved to the village.\n"
        "AUXILIARY_INFO:\n"
        "- user_1: saw them at the bakery!\n"
        "- user_2: that photo is from years ago.\n"
        "TEST_MODE: wisdom of crowds\n";
    const auto parsed = parse_case_blocks(text);
    CHECK(parsed.rejections.empty());
    REQUIRE(parsed.drafts.size() == 3);
    CHECK(parsed.drafts[0].test_mode == TestMode::Claim);
    CHECK(parsed.drafts[0].auxiliary_info.empty());
    CHECK(parsed.drafts[1].test_mode == TestMode::Evidence);
    CHECK(parsed.drafts[1].auxiliary_info.size() == 2);
    CHECK(parsed.drafts[2].test_mode == TestMode::WisdomOfCrowds);
    CHECK(parsed.drafts[2].source_claim == "A celebrity moved to the village.");
}

TEST_CASE("broken blocks become rejections, good ones still parse") {
    const std::string text =
        "KEY_POINT: missing claim below.\n"
        "AUXILIARY_INFO:\n"
        "TEST_MODE: claim\n"
        "\n"
        "KEY_POINT: fine block.\n"
        "SOURCE_CLAIM: Valid claim.\n"
        "AUXILIARY_INFO:\n"
        "TEST_MODE: claim\n"
        "\n"
        "KEY_POINT: unknown mode.\n"
        "SOURCE_CLAIM: Another claim.\n"
        "TEST_MODE: riddle\n";
    const auto parsed = parse_case_blocks(text);
    REQUIRE(parsed.drafts.size() == 1);
    CHECK(parsed.drafts[0].source_claim == "Valid claim.");
    REQUIRE(parsed.rejections.size() == 2);
    CHECK(parsed.rejections[0].reason == "missing source claim");
    CHECK(parsed.rejections[1].reason.find("unknown test mode") == 0);
}

TEST_CASE("multi-line field continuation") {
    const std::string text =
        "KEY_POINT: Verify the claim\n"
        "  across both halves of the statement.\n"
        "SOURCE_CLAIM: First half\n"
        "and second half.\n"
        "AUXILIARY_INFO:\n"
        "- a snippet that\n"
        "  wraps onto the next line\n"
        "TEST_MODE: evidence\n";
    const auto parsed = parse_case_blocks(text);
    REQUIRE(parsed.drafts.size() == 1);
    CHECK(parsed.drafts[0].key_point == "Verify the claim across both halves of the statement.");
    CHECK(parsed.drafts[0].source_claim == "First half and second half.");
    REQUIRE(parsed.drafts[0].auxiliary_info.size() == 1);
    CHECK(parsed.drafts[0].auxiliary_info[0] == "a snippet that wraps onto the next line");
}

TEST_CASE("no blocks parse from prose") {
    const auto parsed = parse_case_blocks("I could not generate anything useful this time.");
    CHECK(parsed.drafts.empty());
    CHECK(parsed.rejections.empty());
}

TEST_CASE("proposal parse stop marker") {
    CHECK(parse_proposal("[stop]").stop);
    CHECK(parse_proposal("  [STOP]  ").stop);
    CHECK(parse_proposal("I think we are done here: [stop]").stop);
}

TEST_CASE("proposal parse labeled block") {
    const auto draft = parse_proposal("OBJECT: Complex Claim\n"
                                      "SCENARIO: Aggregated Statistical Reasoning\n"
                                      "DESCRIPTION: Claims built on combined statistics\n"
                                      "  across multiple sources.");
    CHECK(!draft.stop);
    REQUIRE(draft.object.has_value());
    CHECK(*draft.object == FactObject::complex_claim());
    CHECK(draft.name == "Aggregated Statistical Reasoning");
    CHECK(draft.description ==
          "Claims built on combined statistics across multiple sources.");
}

TEST_CASE("proposal fallback name-colon-description line") {
    const auto draft =
        parse_proposal("Aggregated Statistical Reasoning: claims that aggregate figures.");
    CHECK(!draft.stop);
    CHECK(!draft.object.has_value());
    CHECK(draft.name == "Aggregated Statistical Reasoning");
    CHECK(draft.description == "claims that aggregate figures.");
}

TEST_CASE("proposal parse error on neither shape") {
    CHECK_THROWS_AS(parse_proposal("no structure whatsoever"), AuditError);
}

TEST_CASE("response split extracts verdict and justification") {
    const auto nonfactual = split_response("Non-Factual. There is no credible evidence.");
    CHECK(nonfactual.verdict == Verdict::NonFactual);
    CHECK(nonfactual.justification == "There is no credible evidence.");
    CHECK(nonfactual.raw == "Non-Factual. There is no credible evidence.");

    const auto unparsed = split_response("I cannot determine this.");
    CHECK(!unparsed.verdict.has_value());
    CHECK(unparsed.justification == "I cannot determine this.");

    const auto nei = split_response("Not Enough Information: the sources conflict");
    CHECK(nei.verdict == Verdict::NotEnoughInformation);
    CHECK(nei.justification == "the sources conflict");

    const auto bare = split_response("Factual");
    CHECK(bare.verdict == Verdict::Factual);
    CHECK(bare.justification.empty());
}
