#pragma once

#include "factaudit/types.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace factaudit::evidence {

struct GroundingResult {
    std::string query;
    std::vector<std::string> hit_titles;
    bool grounded = false; // == hit_titles nonempty
};

// Coarse evidence-grounding check: does a snippet have plausible
// encyclopedic backing? Implementations must be safe for concurrent
// queries.
class EvidenceChecker {
public:
    virtual ~EvidenceChecker() = default;

    // Throws ToolError on unrecoverable lookup failure.
    virtual GroundingResult check_snippet(const std::string& snippet) = 0;
};

// true iff every auxiliary snippet of an evidence-mode case is grounded.
bool check_case(EvidenceChecker& checker, const TestCase& test_case);

// First sentence of the snippet, capped at 300 characters.
std::string extract_query(const std::string& snippet);

// collapse whitespace + lowercase; the cache key
std::string normalize_query(const std::string& query);

// Wikipedia search-API backed checker with a persistent read-through
// cache; a warm cache never touches the network.
class WikipediaChecker : public EvidenceChecker {
public:
    WikipediaChecker(std::string endpoint, int timeout_ms,
                     std::filesystem::path cache_path);

    GroundingResult check_snippet(const std::string& snippet) override;

    std::size_t cache_size() const;
    void flush_cache() const; // also flushed on every insert

private:
    GroundingResult search(const std::string& query);
    void load_cache();

    std::string endpoint_;
    int timeout_ms_;
    std::filesystem::path cache_path_;
    mutable std::mutex mutex_;
    std::map<std::string, GroundingResult> cache_;
};

// Test/offline checker: grounded unless the snippet contains one of the
// configured markers.
class StubChecker : public EvidenceChecker {
public:
    explicit StubChecker(std::vector<std::string> ungrounded_markers = {});
    GroundingResult check_snippet(const std::string& snippet) override;

private:
    std::vector<std::string> ungrounded_markers_;
};

std::unique_ptr<EvidenceChecker> make_checker(const EvidenceConfig& config,
                                              const std::filesystem::path& run_dir);

} // namespace factaudit::evidence
