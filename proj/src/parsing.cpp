#include "factaudit/parsing.hpp"

#include "factaudit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace factaudit::agents {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

std::string lower(const std::string& text) {
    std::string out = text;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Returns the text after "LABEL:" when the line starts with that label
// (case-insensitive), else nullopt.
std::optional<std::string> match_label(const std::string& line, const char* label) {
    const std::string low = lower(line);
    std::size_t pos = 0;
    while (pos < low.size() && std::isspace(static_cast<unsigned char>(low[pos]))) ++pos;
    const std::string needle = lower(label);
    if (low.compare(pos, needle.size(), needle) != 0) return std::nullopt;
    pos += needle.size();
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size() || line[pos] != ':') return std::nullopt;
    ++pos;
    return trim(line.substr(pos));
}

std::string clip(const std::string& text, std::size_t limit = 300) {
    if (text.size() <= limit) return text;
    return text.substr(0, limit) + "...";
}

} // namespace

std::optional<int> last_bracketed_int(const std::string& text, const std::string& keyword) {
    const std::string low = lower(text);
    const std::string needle = lower(keyword);
    std::optional<int> result;
    std::size_t pos = 0;
    while ((pos = low.find(needle, pos)) != std::string::npos) {
        std::size_t i = pos + needle.size();
        // tolerate whitespace/punctuation between the keyword and "[["
        while (i < low.size() &&
               (std::isspace(static_cast<unsigned char>(low[i])) ||
                (std::ispunct(static_cast<unsigned char>(low[i])) && low[i] != '['))) {
            ++i;
        }
        if (i + 1 < low.size() && low[i] == '[' && low[i + 1] == '[') {
            i += 2;
            while (i < low.size() && std::isspace(static_cast<unsigned char>(low[i]))) ++i;
            std::size_t digits_begin = i;
            if (i < low.size() && (low[i] == '-' || low[i] == '+')) ++i;
            while (i < low.size() && std::isdigit(static_cast<unsigned char>(low[i]))) ++i;
            std::size_t digits_end = i;
            while (i < low.size() && std::isspace(static_cast<unsigned char>(low[i]))) ++i;
            if (digits_end > digits_begin && i + 1 < low.size() && low[i] == ']' &&
                low[i + 1] == ']') {
                try {
                    result = std::stoi(text.substr(digits_begin, digits_end - digits_begin));
                } catch (const std::exception&) {
                }
            }
        }
        pos += needle.size();
    }
    return result;
}

int parse_grade(const std::string& text) {
    const auto value = last_bracketed_int(text, "rating");
    if (!value) fail(ErrorCode::NoRatingToken, "no \"Rating: [[n]]\" token in judge output");
    if (*value < 1 || *value > 10)
        fail(ErrorCode::GradeOutOfRange, "grade " + std::to_string(*value) + " outside [1,10]");
    return *value;
}

AcceptReject parse_accept_reject(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = lower(trim(line));
        if (t.rfind("accept", 0) == 0) return {true, ""};
        if (t.rfind("reject", 0) == 0) {
            const auto colon = line.find(':');
            std::string reason =
                colon == std::string::npos ? std::string() : trim(line.substr(colon + 1));
            return {false, std::move(reason)};
        }
    }
    fail(ErrorCode::ParseError, "no ACCEPT/REJECT marker in: " + clip(text));
}

BlockParse parse_case_blocks(const std::string& text) {
    BlockParse out;
    enum class Field { None, KeyPoint, SourceClaim, Auxiliary, TestMode };

    struct OpenBlock {
        CaseDraft draft;
        std::string raw;
        std::string mode_text;
        bool has_mode_label = false;
    };
    std::optional<OpenBlock> block;

    auto finalize = [&](OpenBlock&& b) {
        b.draft.key_point = trim(b.draft.key_point);
        b.draft.source_claim = trim(b.draft.source_claim);
        if (b.draft.source_claim.empty()) {
            out.rejections.push_back({clip(b.raw), "missing source claim"});
            return;
        }
        if (!b.has_mode_label) {
            out.rejections.push_back({clip(b.raw), "missing test mode"});
            return;
        }
        b.draft.test_mode = parse_test_mode(b.mode_text);
        if (!b.draft.test_mode) {
            out.rejections.push_back({clip(b.raw), "unknown test mode: " + b.mode_text});
            return;
        }
        out.drafts.push_back(std::move(b.draft));
    };

    Field field = Field::None;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto v = match_label(line, "KEY_POINT")) {
            if (block) finalize(std::move(*block));
            block = OpenBlock{};
            block->raw = line;
            block->draft.key_point = *v;
            field = Field::KeyPoint;
            continue;
        }
        if (block) block->raw += "\n" + line;
        if (!block) continue; // prose before the first block
        if (auto v = match_label(line, "SOURCE_CLAIM")) {
            block->draft.source_claim = *v;
            field = Field::SourceClaim;
            continue;
        }
        if (auto v = match_label(line, "AUXILIARY_INFO")) {
            field = Field::Auxiliary;
            const std::string rest = trim(*v);
            const std::string rest_low = lower(rest);
            if (!rest.empty() && rest_low != "none" && rest_low != "(none)" && rest != "-")
                block->draft.auxiliary_info.push_back(rest);
            continue;
        }
        if (auto v = match_label(line, "TEST_MODE")) {
            block->mode_text = *v;
            block->has_mode_label = true;
            field = Field::TestMode;
            continue;
        }
        const std::string t = trim(line);
        if (t.empty()) continue;
        switch (field) {
        case Field::KeyPoint:
            block->draft.key_point += " " + t;
            break;
        case Field::SourceClaim:
            block->draft.source_claim += " " + t;
            break;
        case Field::Auxiliary:
            if (t[0] == '-' || t[0] == '*') {
                block->draft.auxiliary_info.push_back(trim(t.substr(1)));
            } else if (!block->draft.auxiliary_info.empty()) {
                block->draft.auxiliary_info.back() += " " + t;
            } else {
                block->draft.auxiliary_info.push_back(t);
            }
            break;
        case Field::TestMode:
        case Field::None:
            break;
        }
    }
    if (block) finalize(std::move(*block));
    return out;
}

ProposalDraft parse_proposal(const std::string& text) {
    if (lower(text).find("[stop]") != std::string::npos) {
        ProposalDraft draft;
        draft.stop = true;
        return draft;
    }
    ProposalDraft draft;
    std::istringstream in(text);
    std::string line;
    bool saw_scenario = false;
    std::string* continuation = nullptr;
    while (std::getline(in, line)) {
        if (auto v = match_label(line, "OBJECT")) {
            if (!v->empty()) draft.object = FactObject::parse(*v);
            continuation = nullptr;
            continue;
        }
        if (auto v = match_label(line, "SCENARIO")) {
            draft.name = *v;
            saw_scenario = true;
            continuation = nullptr;
            continue;
        }
        if (auto v = match_label(line, "DESCRIPTION")) {
            draft.description = *v;
            continuation = &draft.description;
            continue;
        }
        const std::string t = trim(line);
        if (!t.empty() && continuation) *continuation += " " + t;
    }
    if (saw_scenario && !draft.name.empty()) return draft;

    // fallback: a bare "Name: description" line
    std::istringstream again(text);
    while (std::getline(again, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto colon = t.find(':');
        if (colon != std::string::npos && colon > 0 && colon < 80) {
            draft.name = trim(t.substr(0, colon));
            draft.description = trim(t.substr(colon + 1));
            if (!draft.name.empty()) return draft;
        }
        break;
    }
    fail(ErrorCode::ParseError, "appraiser output matches neither [stop] nor a scenario block: " +
                                    clip(text));
}

TargetResponse split_response(const std::string& raw) {
    TargetResponse response;
    response.raw = raw;
    const auto match = scan_verdict_with_end(raw);
    if (!match) {
        response.verdict = std::nullopt;
        response.justification = raw;
        return response;
    }
    response.verdict = match->first;
    std::size_t pos = match->second;
    while (pos < raw.size()) {
        const unsigned char c = static_cast<unsigned char>(raw[pos]);
        if (std::isspace(c) || c == '.' || c == ':' || c == ',' || c == ';' || c == '-' ||
            c == '!') {
            ++pos;
        } else {
            break;
        }
    }
    response.justification = raw.substr(pos);
    return response;
}

} // namespace factaudit::agents
