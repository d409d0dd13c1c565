#include "factaudit/evidence.hpp"

#include "factaudit/errors.hpp"
#include "factaudit/persist.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace factaudit::evidence {

using nlohmann::json;

std::string extract_query(const std::string& snippet) {
    std::string query = snippet;
    for (std::size_t i = 0; i + 1 < snippet.size(); ++i) {
        const char c = snippet[i];
        if ((c == '.' || c == '!' || c == '?') &&
            std::isspace(static_cast<unsigned char>(snippet[i + 1]))) {
            query = snippet.substr(0, i + 1);
            break;
        }
    }
    if (query.size() > 300) query = query.substr(0, 300);
    return query;
}

std::string normalize_query(const std::string& query) {
    std::string out;
    out.reserve(query.size());
    bool pending_space = false;
    for (unsigned char c : query) {
        if (std::isspace(c)) {
            pending_space = true;
        } else {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    return out;
}

bool check_case(EvidenceChecker& checker, const TestCase& test_case) {
    if (test_case.test_mode != TestMode::Evidence)
        fail(ErrorCode::ConfigError, "check_case requires an evidence-mode test case");
    for (const auto& snippet : test_case.auxiliary_info) {
        if (!checker.check_snippet(snippet).grounded) return false;
    }
    return true;
}

// ── Wikipedia checker ───────────────────────────────────────────────

WikipediaChecker::WikipediaChecker(std::string endpoint, int timeout_ms,
                                   std::filesystem::path cache_path)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms),
      cache_path_(std::move(cache_path)) {
    load_cache();
}

void WikipediaChecker::load_cache() {
    if (cache_path_.empty() || !std::filesystem::exists(cache_path_)) return;
    json j = json::parse(read_file(cache_path_));
    for (const auto& [key, value] : j.items()) {
        GroundingResult result;
        result.query = value.at("query").get<std::string>();
        result.hit_titles = value.at("hit_titles").get<std::vector<std::string>>();
        result.grounded = !result.hit_titles.empty();
        cache_[key] = std::move(result);
    }
}

void WikipediaChecker::flush_cache() const {
    if (cache_path_.empty()) return;
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::lock_guard lock(mutex_);
    for (const auto& [key, result] : cache_) {
        nlohmann::ordered_json e;
        e["query"] = result.query;
        e["hit_titles"] = result.hit_titles;
        j[key] = std::move(e);
    }
    atomic_write(cache_path_, j.dump(2));
}

std::size_t WikipediaChecker::cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

GroundingResult WikipediaChecker::check_snippet(const std::string& snippet) {
    if (snippet.empty()) fail(ErrorCode::ToolError, "cannot ground an empty snippet");
    const std::string query = extract_query(snippet);
    const std::string key = normalize_query(query);
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    GroundingResult result = search(query);
    {
        std::lock_guard lock(mutex_);
        cache_[key] = result;
    }
    flush_cache();
    return result;
}

GroundingResult WikipediaChecker::search(const std::string& query) {
    const auto scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos)
        fail(ErrorCode::ConfigError, "evidence endpoint must include a scheme: " + endpoint_);
    const auto path_start = endpoint_.find('/', scheme_end + 3);
    const std::string origin =
        path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? "/w/api.php" : endpoint_.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
    client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);

    httplib::Params params{{"action", "query"},
                           {"list", "search"},
                           {"srsearch", query},
                           {"srlimit", "5"},
                           {"format", "json"}};
    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) { // initial try + 2 retries
        auto response = client.Get(path, params, httplib::Headers{});
        if (!response) {
            last_error = httplib::to_string(response.error());
            continue;
        }
        if (response->status != 200) {
            last_error = "HTTP " + std::to_string(response->status);
            continue;
        }
        try {
            json j = json::parse(response->body);
            GroundingResult result;
            result.query = query;
            for (const auto& hit : j.at("query").at("search"))
                result.hit_titles.push_back(hit.at("title").get<std::string>());
            result.grounded = !result.hit_titles.empty();
            return result;
        } catch (const json::exception& e) {
            last_error = std::string("malformed search response: ") + e.what();
        }
    }
    fail(ErrorCode::ToolError, "wikipedia search failed after retries: " + last_error);
}

// ── Stub checker ────────────────────────────────────────────────────

StubChecker::StubChecker(std::vector<std::string> ungrounded_markers)
    : ungrounded_markers_(std::move(ungrounded_markers)) {}

GroundingResult StubChecker::check_snippet(const std::string& snippet) {
    GroundingResult result;
    result.query = extract_query(snippet);
    for (const auto& marker : ungrounded_markers_) {
        if (snippet.find(marker) != std::string::npos) {
            result.grounded = false;
            return result;
        }
    }
    result.hit_titles = {"stub"};
    result.grounded = true;
    return result;
}

std::unique_ptr<EvidenceChecker> make_checker(const EvidenceConfig& config,
                                              const std::filesystem::path& run_dir) {
    if (config.kind == EvidenceConfig::Kind::Stub)
        return std::make_unique<StubChecker>();
    std::filesystem::path cache = config.cache_path.empty()
                                      ? run_dir.parent_path() / "wiki_cache.json"
                                      : std::filesystem::path(config.cache_path);
    return std::make_unique<WikipediaChecker>(config.endpoint, config.timeout_ms, cache);
}

} // namespace factaudit::evidence
