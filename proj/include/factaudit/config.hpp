#pragma once

#include "factaudit/types.hpp"

#include <filesystem>
#include <string>

namespace factaudit {

// Flat sectioned key = value text, '#' comments. Unknown sections or
// keys are rejected so typos surface immediately.
AuditConfig parse_config(const std::string& text);

// Parses the file and resolves relative paths (mock scripts, taxonomy,
// prompt dir, evidence cache) against the file's directory.
AuditConfig load_config(const std::filesystem::path& path);

// Commented default configuration written by `init`.
std::string default_config_text();

// Canonical serialization; the digest is an FNV-1a hash of it.
std::string config_snapshot(const AuditConfig& config);
std::string config_digest(const AuditConfig& config);

// Throws ConfigError for out-of-range loop constants or temperatures.
void validate_config(const AuditConfig& config);

// Simple glob with '*' and '?', case-insensitive; empty pattern matches
// everything. Used for --scenario-filter.
bool glob_match(const std::string& pattern, const std::string& text);

} // namespace factaudit
