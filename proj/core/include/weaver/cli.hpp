#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "weaver/config.hpp"

namespace weaver {

// Parses argv, loads the config, applies overrides (flag > config file >
// CONCEPT_WEAVER_SEED > default for the seed; flag > file for everything
// else), and dispatches one subcommand. Returns the process exit code;
// each failure prints a single diagnostic line to stderr.
int run_cli(int argc, const char* const* argv);

// Copies the resolved seed into the UMAP parameters so every stage shares
// it; run_cli applies this after the overrides.
PipelineConfig finalize(PipelineConfig config);

// 0.0, 0.1, ..., 1.0 — the sweep grid used when --thresholds is absent.
std::vector<double> default_thresholds();

// Subcommand bodies, testable without argv plumbing. The config must be
// finalized; artifacts land under config.output_dir and a short summary is
// printed to `out`. Failures throw.
void cmd_extract(const PipelineConfig& config, std::ostream& out);
void cmd_build(const PipelineConfig& config, std::ostream& out);
void cmd_sweep(const PipelineConfig& config, const std::vector<double>& thresholds,
               const std::string& labels_path, std::ostream& out);
void cmd_conductance(const PipelineConfig& config, const std::vector<double>& thresholds,
                     std::ostream& out);
void cmd_export(const PipelineConfig& config, std::ostream& out);

}  // namespace weaver
