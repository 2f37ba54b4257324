#pragma once

#include <optional>

#include "vil/config.hpp"
#include "vil/report.hpp"

namespace vil {

/// Subcommand drivers. Each writes its artifact tree under cfg.out_dir and finishes
/// with a manifest.json listing every output file with its SHA-256 content hash.
/// Identical configs produce byte-identical trees at any thread count.
int run_synth(const ExperimentConfig& cfg);
int run_evolve(const ExperimentConfig& cfg,
               const std::optional<std::filesystem::path>& input_snapshot = std::nullopt);
int run_flow(const ExperimentConfig& cfg, const std::filesystem::path& trajectory_dir);
/// Exit code 0 iff no check produced a "violated" row.
int run_verify(const ExperimentConfig& cfg, const std::vector<std::string>& selected);
int run_sweep(const ExperimentConfig& cfg);

std::string sha256_file(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& out_dir);

}  // namespace vil
