#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "hpt/config.hpp"

namespace hpt {

// Pipeline stages in execution order. Each stage writes its own output CSVs;
// `run` executes all of them and writes manifest.json.
enum class Stage { ingest, integrate, jumps, correlate, contagion, figures };

Stage parse_stage(const std::string& name);
std::string stage_name(Stage s);

struct StageResult {
    std::vector<std::filesystem::path> files_written;
};

// Executes the requested stages (prerequisite data is recomputed in memory,
// deterministically, so per-stage invocations compose to the same files as a
// full run). Throws on failure; files written before the failure remain.
StageResult run_stages(const RunConfig& cfg, const std::set<Stage>& stages);

// Full run: all stages plus manifest.json (written even when a stage fails,
// with the failed stage marked).
int run_all(const RunConfig& cfg);

// FNV-1a 64-bit over the file bytes, lowercase hex.
std::string file_hash(const std::filesystem::path& path);
long long file_row_count(const std::filesystem::path& path);

}  // namespace hpt
