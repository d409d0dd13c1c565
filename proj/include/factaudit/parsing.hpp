#pragma once

#include "factaudit/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace factaudit::agents {

// Last "<keyword>: [[n]]" occurrence in the text, tolerant of whitespace
// and punctuation between the keyword and the brackets. Keyword matching
// is case-insensitive.
std::optional<int> last_bracketed_int(const std::string& text, const std::string& keyword);

// Integer grade from judge output ("... Rating: [[2]]"). Throws
// NoRatingToken when absent and GradeOutOfRange outside [1,10].
int parse_grade(const std::string& text);

// "ACCEPT" / "REJECT: reason" one-line markers.
struct AcceptReject {
    bool accepted = false;
    std::string reason;
};
// Throws ParseError when neither marker is present.
AcceptReject parse_accept_reject(const std::string& text);

// One raw generation block before invariants are enforced.
struct CaseDraft {
    std::string key_point;
    std::string source_claim;
    std::vector<std::string> auxiliary_info;
    std::optional<TestMode> test_mode;
};

struct BlockRejection {
    std::string block;  // offending text, clipped
    std::string reason;
};

struct BlockParse {
    std::vector<CaseDraft> drafts;
    std::vector<BlockRejection> rejections;
};

// Splits generation output into KEY_POINT/SOURCE_CLAIM/AUXILIARY_INFO/
// TEST_MODE blocks. Structurally broken blocks land in rejections; the
// mode/auxiliary-info consistency check happens later, against the
// (possibly pinned) test mode.
BlockParse parse_case_blocks(const std::string& text);

// Appraiser output: either a literal [stop] marker or an
// OBJECT/SCENARIO/DESCRIPTION block. A bare "Name: description" line is
// accepted as a fallback with no object attribution.
struct ProposalDraft {
    bool stop = false;
    std::optional<FactObject> object; // absent for the fallback form
    std::string name;
    std::string description;
};
// Throws ParseError when the output matches neither shape.
ProposalDraft parse_proposal(const std::string& text);

// Verdict + justification split of a raw model answer: justification is
// the text after the first verdict label (or the full text when the
// verdict is unparsed).
TargetResponse split_response(const std::string& raw);

} // namespace factaudit::agents
