#include "factaudit/config.hpp"

#include "factaudit/errors.hpp"
#include "factaudit/persist.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace factaudit {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

Sections parse_sections(const std::string& text) {
    Sections sections;
    std::string current = "audit";
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip trailing comments introduced by whitespace + '#'
        for (std::size_t i = 0; i + 1 < line.size(); ++i) {
            if (line[i + 1] == '#' && std::isspace(static_cast<unsigned char>(line[i]))) {
                line = line.substr(0, i);
                break;
            }
        }
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                fail(ErrorCode::ConfigError,
                     "line " + std::to_string(line_no) + ": unterminated section header");
            current = trim(t.substr(1, t.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::ConfigError,
                 "line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            fail(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": empty key");
        sections[current][key] = value;
    }
    return sections;
}

int to_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const int out = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        fail(ErrorCode::ConfigError, "key " + key + ": not an integer: " + value);
    }
}

double to_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        fail(ErrorCode::ConfigError, "key " + key + ": not a number: " + value);
    }
}

std::uint64_t to_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const unsigned long long out = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        fail(ErrorCode::ConfigError, "key " + key + ": not a nonnegative integer: " + value);
    }
}

BackendSpec parse_backend(const Section& section, const std::string& name) {
    BackendSpec spec;
    for (const auto& [key, value] : section) {
        if (key == "kind") {
            if (value == "mock") spec.kind = BackendSpec::Kind::ScriptedMock;
            else if (value == "http") spec.kind = BackendSpec::Kind::HttpOpenAiCompatible;
            else fail(ErrorCode::ConfigError, name + ".kind must be mock or http: " + value);
        } else if (key == "base_url") {
            spec.base_url = value;
        } else if (key == "model") {
            spec.model = value;
        } else if (key == "api_key_env_var") {
            spec.api_key_env_var = value;
        } else if (key == "script_path") {
            spec.script_path = value;
        } else if (key == "seed") {
            spec.seed = to_u64(value, name + ".seed");
        } else if (key == "timeout_ms") {
            spec.timeout_ms = to_int(value, name + ".timeout_ms");
        } else if (key == "max_retries") {
            spec.max_retries = to_int(value, name + ".max_retries");
        } else {
            fail(ErrorCode::ConfigError, "unknown key " + name + "." + key);
        }
    }
    return spec;
}

} // namespace

AuditConfig parse_config(const std::string& text) {
    const Sections sections = parse_sections(text);
    AuditConfig config;
    for (const auto& [section_name, section] : sections) {
        if (section_name == "audit") {
            for (const auto& [key, value] : section) {
                if (key == "k_prototypes") config.k_prototypes = to_int(value, key);
                else if (key == "m_probe_iterations") config.m_probe_iterations = to_int(value, key);
                else if (key == "n_outer_loops") config.n_outer_loops = to_int(value, key);
                else if (key == "epsilon") config.epsilon = to_double(value, key);
                else if (key == "imr_grade_threshold") config.imr_grade_threshold = to_int(value, key);
                else if (key == "stop_token_limit") config.stop_token_limit = to_int(value, key);
                else if (key == "max_inspector_retries") config.max_inspector_retries = to_int(value, key);
                else if (key == "probe_batch") config.probe_batch = to_int(value, key);
                else if (key == "early_stop_window") config.early_stop_window = to_int(value, key);
                else if (key == "min_probes") config.min_probes = to_int(value, key);
                else if (key == "max_parallel") config.max_parallel = to_int(value, key);
                else if (key == "max_tokens") config.max_tokens = to_int(value, key);
                else if (key == "seed") config.seed = to_u64(value, key);
                else if (key == "scenario_filter") config.scenario_filter = value;
                else if (key == "taxonomy_path") config.taxonomy_path = value;
                else if (key == "prompt_dir") config.prompt_dir = value;
                else if (key == "mode_pin") {
                    const auto mode = parse_test_mode(value);
                    if (!mode) fail(ErrorCode::ConfigError, "unknown mode_pin: " + value);
                    config.mode_pin = mode;
                } else {
                    fail(ErrorCode::ConfigError, "unknown key audit." + key);
                }
            }
        } else if (section_name == "temperatures") {
            for (const auto& [key, value] : section) {
                const double t = to_double(value, "temperatures." + key);
                if (key == "appraiser") config.temperatures.appraiser = t;
                else if (key == "appraiser_judge") config.temperatures.appraiser_judge = t;
                else if (key == "inquirer") config.temperatures.inquirer = t;
                else if (key == "quality_inspector") config.temperatures.quality_inspector = t;
                else if (key == "evaluator_voters") config.temperatures.evaluator_voters = t;
                else if (key == "evaluator_judge") config.temperatures.evaluator_judge = t;
                else if (key == "prober") config.temperatures.prober = t;
                else if (key == "target") config.temperatures.target = t;
                else fail(ErrorCode::ConfigError, "unknown key temperatures." + key);
            }
        } else if (section_name == "target_backend") {
            config.target_backend = parse_backend(section, "target_backend");
        } else if (section_name == "controller_backend") {
            config.controller_backend = parse_backend(section, "controller_backend");
        } else if (section_name == "evidence") {
            for (const auto& [key, value] : section) {
                if (key == "checker") {
                    if (value == "stub") config.evidence.kind = EvidenceConfig::Kind::Stub;
                    else if (value == "wikipedia")
                        config.evidence.kind = EvidenceConfig::Kind::Wikipedia;
                    else fail(ErrorCode::ConfigError, "evidence.checker must be stub or wikipedia");
                } else if (key == "endpoint") {
                    config.evidence.endpoint = value;
                } else if (key == "timeout_ms") {
                    config.evidence.timeout_ms = to_int(value, "evidence.timeout_ms");
                } else if (key == "cache_path") {
                    config.evidence.cache_path = value;
                } else {
                    fail(ErrorCode::ConfigError, "unknown key evidence." + key);
                }
            }
        } else {
            fail(ErrorCode::ConfigError, "unknown section [" + section_name + "]");
        }
    }
    validate_config(config);
    return config;
}

AuditConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        fail(ErrorCode::ConfigError, "config file not found: " + path.string());
    AuditConfig config = parse_config(read_file(path));
    // resolve to absolute paths so the config snapshot re-loads identically
    // from inside the run directory
    const std::filesystem::path base = std::filesystem::absolute(path).parent_path();
    auto resolve = [&](std::string& value) {
        if (value.empty()) return;
        std::filesystem::path p(value);
        if (p.is_relative()) value = (base / p).lexically_normal().string();
    };
    resolve(config.target_backend.script_path);
    resolve(config.controller_backend.script_path);
    resolve(config.taxonomy_path);
    resolve(config.prompt_dir);
    resolve(config.evidence.cache_path);
    return config;
}

void validate_config(const AuditConfig& config) {
    auto positive = [](int value, const char* key) {
        if (value < 1) fail(ErrorCode::ConfigError, std::string(key) + " must be positive");
    };
    positive(config.k_prototypes, "k_prototypes");
    positive(config.m_probe_iterations, "m_probe_iterations");
    positive(config.n_outer_loops, "n_outer_loops");
    positive(config.stop_token_limit, "stop_token_limit");
    positive(config.max_inspector_retries, "max_inspector_retries");
    positive(config.probe_batch, "probe_batch");
    positive(config.early_stop_window, "early_stop_window");
    positive(config.min_probes, "min_probes");
    positive(config.max_parallel, "max_parallel");
    positive(config.max_tokens, "max_tokens");
    if (!(config.epsilon > 0.0)) fail(ErrorCode::ConfigError, "epsilon must be positive");
    if (config.imr_grade_threshold < 1 || config.imr_grade_threshold > 10)
        fail(ErrorCode::ConfigError, "imr_grade_threshold must be in [1,10]");
    const double temps[] = {config.temperatures.appraiser,        config.temperatures.appraiser_judge,
                            config.temperatures.inquirer,         config.temperatures.quality_inspector,
                            config.temperatures.evaluator_voters, config.temperatures.evaluator_judge,
                            config.temperatures.prober,           config.temperatures.target};
    for (double t : temps)
        if (t < 0.0 || t > 2.0) fail(ErrorCode::ConfigError, "temperatures must be in [0,2]");
}

namespace {

void write_backend(std::ostringstream& out, const char* name, const BackendSpec& spec) {
    out << "[" << name << "]\n";
    out << "kind = " << (spec.kind == BackendSpec::Kind::ScriptedMock ? "mock" : "http") << "\n";
    if (!spec.base_url.empty()) out << "base_url = " << spec.base_url << "\n";
    if (!spec.model.empty()) out << "model = " << spec.model << "\n";
    if (!spec.api_key_env_var.empty()) out << "api_key_env_var = " << spec.api_key_env_var << "\n";
    if (!spec.script_path.empty()) out << "script_path = " << spec.script_path << "\n";
    out << "seed = " << spec.seed << "\n";
    out << "timeout_ms = " << spec.timeout_ms << "\n";
    out << "max_retries = " << spec.max_retries << "\n";
}

std::string format_double(double value) {
    std::ostringstream out;
    out << value;
    std::string text = out.str();
    if (text.find('.') == std::string::npos && text.find('e') == std::string::npos)
        text += ".0";
    return text;
}

} // namespace

std::string config_snapshot(const AuditConfig& config) {
    std::ostringstream out;
    out << "[audit]\n";
    out << "k_prototypes = " << config.k_prototypes << "\n";
    out << "m_probe_iterations = " << config.m_probe_iterations << "\n";
    out << "n_outer_loops = " << config.n_outer_loops << "\n";
    out << "epsilon = " << format_double(config.epsilon) << "\n";
    out << "imr_grade_threshold = " << config.imr_grade_threshold << "\n";
    out << "stop_token_limit = " << config.stop_token_limit << "\n";
    out << "max_inspector_retries = " << config.max_inspector_retries << "\n";
    out << "probe_batch = " << config.probe_batch << "\n";
    out << "early_stop_window = " << config.early_stop_window << "\n";
    out << "min_probes = " << config.min_probes << "\n";
    out << "max_parallel = " << config.max_parallel << "\n";
    out << "max_tokens = " << config.max_tokens << "\n";
    out << "seed = " << config.seed << "\n";
    if (config.mode_pin) out << "mode_pin = " << to_string(*config.mode_pin) << "\n";
    if (!config.scenario_filter.empty())
        out << "scenario_filter = " << config.scenario_filter << "\n";
    if (!config.taxonomy_path.empty()) out << "taxonomy_path = " << config.taxonomy_path << "\n";
    if (!config.prompt_dir.empty()) out << "prompt_dir = " << config.prompt_dir << "\n";
    out << "\n[temperatures]\n";
    out << "appraiser = " << format_double(config.temperatures.appraiser) << "\n";
    out << "appraiser_judge = " << format_double(config.temperatures.appraiser_judge) << "\n";
    out << "inquirer = " << format_double(config.temperatures.inquirer) << "\n";
    out << "quality_inspector = " << format_double(config.temperatures.quality_inspector) << "\n";
    out << "evaluator_voters = " << format_double(config.temperatures.evaluator_voters) << "\n";
    out << "evaluator_judge = " << format_double(config.temperatures.evaluator_judge) << "\n";
    out << "prober = " << format_double(config.temperatures.prober) << "\n";
    out << "target = " << format_double(config.temperatures.target) << "\n";
    out << "\n";
    write_backend(out, "target_backend", config.target_backend);
    out << "\n";
    write_backend(out, "controller_backend", config.controller_backend);
    out << "\n[evidence]\n";
    out << "checker = "
        << (config.evidence.kind == EvidenceConfig::Kind::Stub ? "stub" : "wikipedia") << "\n";
    out << "endpoint = " << config.evidence.endpoint << "\n";
    out << "timeout_ms = " << config.evidence.timeout_ms << "\n";
    if (!config.evidence.cache_path.empty())
        out << "cache_path = " << config.evidence.cache_path << "\n";
    return out.str();
}

std::string config_digest(const AuditConfig& config) {
    const std::string snapshot = config_snapshot(config);
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : snapshot) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string default_config_text() {
    return R"(# factaudit run configuration
# Loop constants follow the framework defaults: k prototype cases per
# scenario, up to m probe iterations, poor-case threshold epsilon 4.0
# (equivalent to grade <= 3 for integer grades), and the adaptive stage
# stops after stop_token_limit consecutive [stop] outputs.

[audit]
k_prototypes = 10
m_probe_iterations = 30
n_outer_loops = 3
epsilon = 4.0
imr_grade_threshold = 3
stop_token_limit = 3
max_inspector_retries = 5
probe_batch = 1
early_stop_window = 5
min_probes = 5
max_parallel = 4
max_tokens = 1024
seed = 0
# mode_pin = claim            # pin one of: claim, evidence, wisdom_of_crowds
# scenario_filter = *Rumor    # glob on scenario names
# taxonomy_path = taxonomy.json
# prompt_dir = prompts

# per-role sampling temperatures
[temperatures]
appraiser = 1.0
appraiser_judge = 0.0
inquirer = 0.0
quality_inspector = 0.0
evaluator_voters = 1.0
evaluator_judge = 0.0
prober = 1.0
target = 0.0

# The model under audit.
[target_backend]
kind = mock                   # mock | http
script_path = script.json
seed = 0
# base_url = https://api.openai.com/v1
# model = gpt-4o
# api_key_env_var = OPENAI_API_KEY
timeout_ms = 30000
max_retries = 3

# The controller driving all agent roles.
[controller_backend]
kind = mock
script_path = script.json
seed = 0
# base_url = https://api.openai.com/v1
# model = gpt-4o
# api_key_env_var = OPENAI_API_KEY
timeout_ms = 30000
max_retries = 3

# Coarse grounding checks for evidence-mode cases.
[evidence]
checker = stub                # stub | wikipedia
endpoint = https://en.wikipedia.org/w/api.php
timeout_ms = 10000
# cache_path = wiki_cache.json
)";
}

bool glob_match(const std::string& pattern, const std::string& text) {
    if (pattern.empty()) return true;
    auto low = [](const std::string& s) {
        std::string out = s;
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    };
    const std::string p = low(pattern);
    const std::string t = low(text);
    // iterative glob with backtracking over '*'
    std::size_t pi = 0, ti = 0, star = std::string::npos, mark = 0;
    while (ti < t.size()) {
        if (pi < p.size() && (p[pi] == '?' || p[pi] == t[ti])) {
            ++pi;
            ++ti;
        } else if (pi < p.size() && p[pi] == '*') {
            star = pi++;
            mark = ti;
        } else if (star != std::string::npos) {
            pi = star + 1;
            ti = ++mark;
        } else {
            return false;
        }
    }
    while (pi < p.size() && p[pi] == '*') ++pi;
    return pi == p.size();
}

} // namespace factaudit
