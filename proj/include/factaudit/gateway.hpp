#pragma once

#include "factaudit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace factaudit::gateway {

enum class Role { System, User, Assistant };

const char* to_string(Role role);

struct ChatMessage {
    Role role = Role::User;
    std::string content; // nonempty for user messages
};

struct CompletionRequest {
    std::vector<ChatMessage> messages; // nonempty
    double temperature = 0.0;          // in [0,2], passed through verbatim
    std::string model;
    int max_tokens = 1024;
    std::string request_tag; // agent role + purpose; routes mock responses
};

struct CompletionResult {
    std::string content;
    std::uint64_t usage_tokens = 0;
    std::string backend; // "mock" or "http"
    int attempts = 1;    // <= max_retries + 1
};

struct TranscriptEvent {
    std::string tag;
    std::string backend;
    std::string request;  // rendered prompt messages
    std::string response;
    std::uint64_t usage_tokens = 0;
    int attempts = 1;
    std::uint64_t elapsed_ms = 0;
    std::uint64_t unix_ms = 0;
};

// Deterministic scripted backend: a JSON file maps request_tag to an
// ordered list of canned responses, consumed in sequence. A tag may set
// repeat_last to keep serving its final entry.
class MockScript {
public:
    static MockScript load(const std::filesystem::path& path);
    static MockScript from_json(const std::string& json_text);

    // Next response for a tag; throws MockScriptMiss when the tag is
    // unknown or its entries are exhausted.
    std::string next(const std::string& tag);

    bool has_tag(const std::string& tag) const;
    std::vector<std::string> tags() const;

    // Cursor persistence, so resumed runs continue mid-script.
    std::string state_to_json() const;
    void restore_state(const std::string& json_text);

private:
    struct Entry {
        std::vector<std::string> responses;
        bool repeat_last = false;
        std::uint64_t cursor = 0;
    };
    std::map<std::string, Entry> entries_;
};

// Retry delay before attempt `attempt` (1-based retry count): 500ms base,
// doubling, plus jitter in [0, base/2).
std::uint64_t backoff_ms(int retry, std::uint64_t jitter);

// Uniform chat-completion surface over the scripted mock and the
// OpenAI-compatible HTTP backend, with retry/timeout policy and a
// bounded-parallelism limiter.
class LlmGateway {
public:
    explicit LlmGateway(BackendSpec spec, int max_parallel = 4);
    ~LlmGateway();

    CompletionResult complete(const CompletionRequest& request);
    std::vector<CompletionResult> complete_n(const CompletionRequest& request, int n);

    const BackendSpec& spec() const noexcept { return spec_; }

    // Requests seen per tag (all attempts of one completion count once).
    std::map<std::string, std::uint64_t> tag_counts() const;

    void set_transcript_sink(std::function<void(const TranscriptEvent&)> sink);

    // Mock script cursor snapshot for checkpointing; empty string for
    // HTTP backends. Restoring rewinds/advances the tape so a resumed
    // run replays deterministically from its checkpoint.
    std::string mock_state_json() const;
    void restore_mock_state(const std::string& json_text);

    // Test hook replacing the real sleep between retries.
    void set_sleep_hook(std::function<void(std::uint64_t ms)> hook);

    // Connectivity probe for `validate`: never issues a completion.
    // Returns a human-readable status line; throws on hard failure.
    std::string probe();

private:
    CompletionResult complete_once(const CompletionRequest& request);
    CompletionResult complete_http(const CompletionRequest& request, int& attempts);

    BackendSpec spec_;
    std::unique_ptr<MockScript> mock_;

    mutable std::mutex mutex_;
    std::map<std::string, std::uint64_t> tag_counts_;
    std::function<void(const TranscriptEvent&)> transcript_;
    std::function<void(std::uint64_t)> sleep_;
    std::uint64_t jitter_state_ = 0;

    class Limiter;
    std::unique_ptr<Limiter> limiter_;
};

// Convenience: single user message request.
CompletionRequest user_request(std::string content, double temperature, std::string model,
                               int max_tokens, std::string tag);

} // namespace factaudit::gateway
