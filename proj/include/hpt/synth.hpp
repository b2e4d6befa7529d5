#pragma once

#include <filesystem>

#include "hpt/config.hpp"

namespace hpt {

// Writes synth_hpi.csv, synth_factors.csv and synth_truth.json (the
// ground-truth sidecar) into out_dir. Deterministic for a given (config, seed).
struct SynthOutputs {
    std::filesystem::path hpi_csv;
    std::filesystem::path factor_csv;
    std::filesystem::path truth_json;
};

SynthOutputs generate_synthetic(const SynthConfig& synth, unsigned long long seed,
                                const std::filesystem::path& out_dir);

}  // namespace hpt
