#pragma once

#include "factaudit/types.hpp"

#include <filesystem>
#include <string>

namespace factaudit {

// Persisted memory-pool line format: one JSON object per line, fields in
// this exact order:
//   id, scenario_id, key_point, source_claim, auxiliary_info, test_mode,
//   provenance, verdict, justification, raw, grade, comment,
//   verdict_correct, importance_weight
// The reference answer and latency are live-pipeline data and are not
// part of the persisted schema.
std::string record_to_line(const EvaluationRecord& record);
EvaluationRecord record_from_line(const std::string& line);

// Loads a pool from a line-delimited file; malformed lines raise
// CorruptCheckpoint naming the 1-based line number.
MemoryPool load_pool(const std::filesystem::path& path);
void save_pool(const MemoryPool& pool, const std::filesystem::path& path);

// Appends one line and flushes, so the record is durable before the
// caller checkpoints. Throws IoError on failure.
void append_pool_line(const std::filesystem::path& path, const std::string& line);

// Taxonomy document: a single JSON file carrying scenarios, the current
// revision and the revision history.
std::string taxonomy_to_json(const Taxonomy& taxonomy);
Taxonomy taxonomy_from_json(const std::string& json_text);
Taxonomy load_taxonomy(const std::filesystem::path& path);
void save_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path);

// Write-to-temp-then-rename; used for checkpoints and other files that
// must never be observed half-written.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace factaudit
