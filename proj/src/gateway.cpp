#include "factaudit/gateway.hpp"

#include "factaudit/errors.hpp"
#include "factaudit/persist.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#include <json.hpp>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace factaudit::gateway {

using nlohmann::json;

const char* to_string(Role role) {
    switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    }
    return "user";
}

// ── Mock script ─────────────────────────────────────────────────────

MockScript MockScript::load(const std::filesystem::path& path) {
    return from_json(read_file(path));
}

MockScript MockScript::from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        fail(ErrorCode::ConfigError, std::string("mock script is not valid JSON: ") + e.what());
    }
    if (!j.contains("tags") || !j["tags"].is_object())
        fail(ErrorCode::ConfigError, "mock script needs a top-level \"tags\" object");
    MockScript script;
    for (const auto& [tag, value] : j["tags"].items()) {
        Entry entry;
        if (value.is_array()) {
            entry.responses = value.get<std::vector<std::string>>();
        } else if (value.is_object()) {
            entry.responses = value.at("responses").get<std::vector<std::string>>();
            entry.repeat_last = value.value("repeat_last", false);
        } else {
            fail(ErrorCode::ConfigError, "mock script tag " + tag + " must be array or object");
        }
        if (entry.responses.empty())
            fail(ErrorCode::ConfigError, "mock script tag " + tag + " has no responses");
        script.entries_[tag] = std::move(entry);
    }
    return script;
}

std::string MockScript::next(const std::string& tag) {
    auto it = entries_.find(tag);
    if (it == entries_.end())
        fail(ErrorCode::MockScriptMiss, "no script entry for tag \"" + tag + "\"");
    Entry& entry = it->second;
    if (entry.cursor >= entry.responses.size()) {
        if (!entry.repeat_last)
            fail(ErrorCode::MockScriptMiss,
                 "tag \"" + tag + "\" exhausted after " +
                     std::to_string(entry.responses.size()) + " responses");
        ++entry.cursor; // keep counting consumption past the end
        return entry.responses.back();
    }
    return entry.responses[entry.cursor++];
}

bool MockScript::has_tag(const std::string& tag) const {
    return entries_.count(tag) > 0;
}

std::vector<std::string> MockScript::tags() const {
    std::vector<std::string> out;
    for (const auto& [tag, entry] : entries_) out.push_back(tag);
    return out;
}

std::string MockScript::state_to_json() const {
    nlohmann::ordered_json cursors = nlohmann::ordered_json::object();
    for (const auto& [tag, entry] : entries_) cursors[tag] = entry.cursor;
    nlohmann::ordered_json j;
    j["cursors"] = std::move(cursors);
    return j.dump();
}

void MockScript::restore_state(const std::string& json_text) {
    json j = json::parse(json_text);
    for (const auto& [tag, cursor] : j.at("cursors").items()) {
        auto it = entries_.find(tag);
        if (it != entries_.end()) it->second.cursor = cursor.get<std::uint64_t>();
    }
}

// ── Retry policy ────────────────────────────────────────────────────

std::uint64_t backoff_ms(int retry, std::uint64_t jitter) {
    const std::uint64_t base = 500ull << (retry - 1);
    return base + jitter % (base / 2);
}

// ── Parallelism limiter ─────────────────────────────────────────────

class LlmGateway::Limiter {
public:
    explicit Limiter(int slots) : slots_(slots > 0 ? slots : 1) {}
    void acquire() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return in_flight_ < slots_; });
        ++in_flight_;
    }
    void release() {
        {
            std::lock_guard lock(m_);
            --in_flight_;
        }
        cv_.notify_one();
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    int slots_;
    int in_flight_ = 0;
};

namespace {

std::string render_messages(const CompletionRequest& request) {
    std::string out;
    for (const auto& message : request.messages) {
        out += std::string("[") + to_string(message.role) + "] " + message.content + "\n";
    }
    return out;
}

struct ParsedUrl {
    std::string origin;      // scheme://host[:port]
    std::string path_prefix; // "" or "/v1"
};

ParsedUrl split_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        fail(ErrorCode::ConfigError, "base_url must include a scheme: " + base_url);
    const auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

} // namespace

// ── Gateway ─────────────────────────────────────────────────────────

LlmGateway::LlmGateway(BackendSpec spec, int max_parallel)
    : spec_(std::move(spec)), limiter_(std::make_unique<Limiter>(max_parallel)) {
    if (spec_.kind == BackendSpec::Kind::ScriptedMock) {
        mock_ = std::make_unique<MockScript>(MockScript::load(spec_.script_path));
    }
    jitter_state_ = spec_.seed * 6364136223846793005ull + 1442695040888963407ull;
    sleep_ = [](std::uint64_t ms) {
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    };
}

LlmGateway::~LlmGateway() = default;

void LlmGateway::set_transcript_sink(std::function<void(const TranscriptEvent&)> sink) {
    std::lock_guard lock(mutex_);
    transcript_ = std::move(sink);
}

void LlmGateway::set_sleep_hook(std::function<void(std::uint64_t)> hook) {
    std::lock_guard lock(mutex_);
    sleep_ = std::move(hook);
}

std::string LlmGateway::mock_state_json() const {
    if (!mock_) return "";
    std::lock_guard lock(mutex_);
    return mock_->state_to_json();
}

void LlmGateway::restore_mock_state(const std::string& json_text) {
    if (!mock_ || json_text.empty()) return;
    std::lock_guard lock(mutex_);
    mock_->restore_state(json_text);
}

std::map<std::string, std::uint64_t> LlmGateway::tag_counts() const {
    std::lock_guard lock(mutex_);
    return tag_counts_;
}

CompletionResult LlmGateway::complete(const CompletionRequest& request) {
    if (request.messages.empty())
        fail(ErrorCode::ConfigError, "completion request needs at least one message");
    for (const auto& message : request.messages)
        if (message.role == Role::User && message.content.empty())
            fail(ErrorCode::ConfigError, "user message content must be nonempty");
    if (request.temperature < 0.0 || request.temperature > 2.0)
        fail(ErrorCode::ConfigError, "temperature outside [0,2]");

    limiter_->acquire();
    struct SlotGuard {
        Limiter& limiter;
        ~SlotGuard() { limiter.release(); }
    } guard{*limiter_};
    const auto start = std::chrono::steady_clock::now();
    CompletionResult result = complete_once(request);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    std::function<void(const TranscriptEvent&)> sink;
    {
        std::lock_guard lock(mutex_);
        ++tag_counts_[request.request_tag];
        sink = transcript_;
    }
    if (sink) {
        TranscriptEvent event;
        event.tag = request.request_tag;
        event.backend = result.backend;
        event.request = render_messages(request);
        event.response = result.content;
        event.usage_tokens = result.usage_tokens;
        event.attempts = result.attempts;
        event.elapsed_ms = static_cast<std::uint64_t>(elapsed);
        event.unix_ms = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
        sink(event);
    }
    return result;
}

std::vector<CompletionResult> LlmGateway::complete_n(const CompletionRequest& request, int n) {
    if (n < 1) fail(ErrorCode::ConfigError, "complete_n needs n >= 1");
    std::vector<CompletionResult> results;
    results.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) results.push_back(complete(request));
    return results;
}

CompletionResult LlmGateway::complete_once(const CompletionRequest& request) {
    if (spec_.kind == BackendSpec::Kind::ScriptedMock) {
        CompletionResult result;
        {
            std::lock_guard lock(mutex_);
            result.content = mock_->next(request.request_tag);
        }
        result.usage_tokens = result.content.size() / 4 + 1;
        result.backend = "mock";
        result.attempts = 1;
        return result;
    }
    int attempts = 0;
    return complete_http(request, attempts);
}

CompletionResult LlmGateway::complete_http(const CompletionRequest& request, int& attempts) {
    if (spec_.api_key_env_var.empty())
        fail(ErrorCode::AuthError, "http backend needs api_key_env_var");
    const char* key = std::getenv(spec_.api_key_env_var.c_str());
    if (!key || !*key)
        fail(ErrorCode::AuthError, "environment variable " + spec_.api_key_env_var + " is not set");

    const ParsedUrl url = split_base_url(spec_.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(spec_.timeout_ms / 1000, (spec_.timeout_ms % 1000) * 1000);
    client.set_read_timeout(spec_.timeout_ms / 1000, (spec_.timeout_ms % 1000) * 1000);
    client.set_bearer_token_auth(key);

    json body;
    body["model"] = request.model.empty() ? spec_.model : request.model;
    json messages = json::array();
    for (const auto& message : request.messages)
        messages.push_back({{"role", to_string(message.role)}, {"content", message.content}});
    body["messages"] = std::move(messages);
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    const std::string payload = body.dump();
    const std::string path = url.path_prefix + "/chat/completions";

    std::string last_error;
    bool last_was_timeout = false;
    for (attempts = 1; attempts <= spec_.max_retries + 1; ++attempts) {
        if (attempts > 1) {
            std::uint64_t jitter;
            std::function<void(std::uint64_t)> sleeper;
            {
                std::lock_guard lock(mutex_);
                jitter_state_ = jitter_state_ * 6364136223846793005ull + 1442695040888963407ull;
                jitter = jitter_state_ >> 33;
                sleeper = sleep_;
            }
            sleeper(backoff_ms(attempts - 1, jitter));
        }
        auto response = client.Post(path, payload, "application/json");
        if (!response) {
            const auto err = response.error();
            last_was_timeout = err == httplib::Error::ConnectionTimeout ||
                               err == httplib::Error::Read || err == httplib::Error::Write;
            last_error = httplib::to_string(err);
            continue; // transport error: retry
        }
        if (response->status == 401 || response->status == 403)
            fail(ErrorCode::AuthError,
                 "backend rejected credentials (HTTP " + std::to_string(response->status) + ")");
        if (response->status == 429 || response->status >= 500) {
            last_was_timeout = false;
            last_error = "HTTP " + std::to_string(response->status);
            continue; // retryable
        }
        if (response->status != 200)
            fail(ErrorCode::IoError,
                 "backend returned HTTP " + std::to_string(response->status) + ": " +
                     response->body);
        try {
            json j = json::parse(response->body);
            CompletionResult result;
            result.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (j.contains("usage") && j["usage"].contains("total_tokens"))
                result.usage_tokens = j["usage"]["total_tokens"].get<std::uint64_t>();
            result.backend = "http";
            result.attempts = attempts;
            return result;
        } catch (const json::exception& e) {
            fail(ErrorCode::ParseError,
                 std::string("malformed chat-completions response: ") + e.what());
        }
    }
    attempts = spec_.max_retries + 1;
    if (last_was_timeout)
        fail(ErrorCode::TimeoutError, "backend timed out after " +
                                          std::to_string(spec_.max_retries + 1) +
                                          " attempts: " + last_error);
    fail(ErrorCode::ExhaustedRetries, "backend failed after " +
                                          std::to_string(spec_.max_retries + 1) +
                                          " attempts: " + last_error);
}

std::string LlmGateway::probe() {
    if (spec_.kind == BackendSpec::Kind::ScriptedMock) {
        const auto tags = mock_->tags();
        return "mock script " + spec_.script_path + " loaded, " + std::to_string(tags.size()) +
               " tags";
    }
    if (spec_.api_key_env_var.empty())
        fail(ErrorCode::AuthError, "http backend needs api_key_env_var");
    const char* key = std::getenv(spec_.api_key_env_var.c_str());
    if (!key || !*key)
        fail(ErrorCode::AuthError, "environment variable " + spec_.api_key_env_var + " is not set");
    const ParsedUrl url = split_base_url(spec_.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(spec_.timeout_ms / 1000, (spec_.timeout_ms % 1000) * 1000);
    client.set_bearer_token_auth(key);
    auto response = client.Get(url.path_prefix + "/models");
    if (!response)
        fail(ErrorCode::TimeoutError,
             "connectivity probe failed: " + httplib::to_string(response.error()));
    return "http backend reachable (HTTP " + std::to_string(response->status) + ")";
}

CompletionRequest user_request(std::string content, double temperature, std::string model,
                               int max_tokens, std::string tag) {
    CompletionRequest request;
    request.messages.push_back({Role::User, std::move(content)});
    request.temperature = temperature;
    request.model = std::move(model);
    request.max_tokens = max_tokens;
    request.request_tag = std::move(tag);
    return request;
}

} // namespace factaudit::gateway
