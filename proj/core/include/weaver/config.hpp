#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "weaver/graph.hpp"

namespace weaver {

// One corpus declaration. Paths are kept as written in the config file and
// resolved against the config's directory at use time.
struct CorpusSpec {
    std::string corpus_id;
    std::string text_root;  // markdown tree; empty when the corpus has no prose
    std::string code_root;  // source tree; empty when the corpus has no code
    std::string code_glob = "*.jl";

    bool operator==(const CorpusSpec&) const = default;
};

struct PipelineConfig {
    std::vector<CorpusSpec> corpora;
    std::string vectors_path;  // word2vec text format
    BuildParams build;
    std::uint64_t seed = 0;
    std::string output_dir = "out";       // resolved against the working directory
    std::filesystem::path base_dir = "."; // directory the config file lives in

    // base_dir-relative resolution for corpus and vector paths.
    std::filesystem::path resolve(const std::string& path) const;
};

struct LoadedConfig {
    PipelineConfig config;
    bool has_seed = false;  // the file set "seed" explicitly
};

// Parses and shape-checks config JSON: corpora non-empty with unique ids of
// [A-Za-z0-9_.-]+, each corpus naming at least one root, vectors_path
// present, parameters in range, unknown keys rejected. Does not touch the
// filesystem.
LoadedConfig parse_config(std::istream& in, const std::string& origin,
                          const std::filesystem::path& base_dir);

// parse_config on the file, base_dir = the file's directory, then
// validate_config_paths.
LoadedConfig load_config(const std::string& path);

// Existence checks for every declared root and the vector file; errors name
// the failing corpus.
void validate_config_paths(const PipelineConfig& config);

// Canonical serialization of the effective configuration (sorted keys,
// compact, paths as written) excluding output_dir and base_dir — the
// domain of the config hash.
std::string canonical_config_json(const PipelineConfig& config);

// FNV-1a 64-bit hash of canonical_config_json, as 16 lowercase hex digits.
std::string config_hash(const PipelineConfig& config);

}  // namespace weaver
