#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weaver/code_entities.hpp"
#include "weaver/config.hpp"
#include "weaver/corpus.hpp"
#include "weaver/dbscan.hpp"
#include "weaver/graph.hpp"
#include "weaver/triples.hpp"

namespace support {

inline std::filesystem::path fixture_dir() {
    return std::filesystem::path(WEAVER_FIXTURE_DIR);
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Unique scratch directory, removed (recursively) on destruction.
class TempDir {
  public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 64; ++attempt) {
            char name[32];
            std::snprintf(name, sizeof name, "weaver_%016llx",
                          static_cast<unsigned long long>(rng()));
            path_ = base / name;
            std::error_code ec;
            if (std::filesystem::create_directory(path_, ec)) return;
        }
        throw std::runtime_error("cannot create scratch directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

  private:
    std::filesystem::path path_;
};

// The extraction front half of the pipeline, built from public operations:
// markdown -> sentences -> triples, plus source mining.
inline weaver::CorpusInput extract_corpus_input(const weaver::PipelineConfig& config,
                                                const weaver::CorpusSpec& spec) {
    weaver::CorpusInput input;
    input.corpus_id = spec.corpus_id;
    if (!spec.text_root.empty()) {
        for (const auto& doc :
             weaver::load_corpus(config.resolve(spec.text_root), spec.corpus_id)) {
            auto sentences =
                weaver::split_sentences(weaver::clean_text(doc), doc.doc_id, spec.corpus_id);
            auto triples = weaver::extract_triples(sentences);
            input.triples.insert(input.triples.end(), triples.begin(), triples.end());
        }
    }
    if (!spec.code_root.empty()) {
        input.entities = weaver::extract_directory(config.resolve(spec.code_root).string(),
                                                   spec.corpus_id, spec.code_glob);
    }
    return input;
}

inline std::vector<weaver::CorpusInput> extract_all(const weaver::PipelineConfig& config) {
    std::vector<weaver::CorpusInput> inputs;
    for (const auto& spec : config.corpora) inputs.push_back(extract_corpus_input(config, spec));
    return inputs;
}

// Reference DBSCAN: materializes density-reachability as a transitive
// closure over the full distance matrix. Cubic time, meant only as an
// independent cross-check for the production implementation.
//
// Cluster ids follow discovery order (ascending minimal core index) and a
// border point joins the earliest-discovered cluster owning a core within
// eps, mirroring the production tie-break.
inline weaver::ClusterAssignment naive_dbscan(const std::vector<weaver::EmbeddingVector>& points,
                                              double eps, int min_pts,
                                              weaver::Metric metric = weaver::Metric::EUCLIDEAN) {
    const int n = static_cast<int>(points.size());
    std::vector<std::vector<char>> close(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            close[i][j] = weaver::metric_distance(metric, points[i], points[j]) <= eps;
    std::vector<char> core(n, 0);
    for (int i = 0; i < n; ++i) {
        int within = 0;
        for (int j = 0; j < n; ++j) within += close[i][j];
        core[i] = within >= min_pts;
    }
    // Transitive closure of core-core adjacency.
    std::vector<std::vector<char>> reach = close;
    for (int k = 0; k < n; ++k) {
        if (!core[k]) continue;
        for (int i = 0; i < n; ++i) {
            if (!core[i] || !reach[i][k]) continue;
            for (int j = 0; j < n; ++j)
                if (core[j] && reach[k][j]) reach[i][j] = 1;
        }
    }
    weaver::ClusterAssignment out;
    out.labels.assign(n, weaver::kNoise);
    out.params = {eps, min_pts, metric};
    for (int i = 0; i < n; ++i) {
        if (!core[i] || out.labels[i] != weaver::kNoise) continue;
        int cluster = out.num_clusters++;
        for (int j = 0; j < n; ++j)
            if (core[j] && reach[i][j]) out.labels[j] = cluster;
    }
    for (int i = 0; i < n; ++i) {
        if (core[i] || out.labels[i] != weaver::kNoise) continue;
        int best = weaver::kNoise;
        for (int j = 0; j < n; ++j)
            if (core[j] && close[j][i] && (best == weaver::kNoise || out.labels[j] < best))
                best = out.labels[j];
        out.labels[i] = best;
    }
    return out;
}

// Partition equality up to cluster relabeling; noise must map to noise.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::vector<int> fwd, rev;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == weaver::kNoise) != (b[i] == weaver::kNoise)) return false;
        if (a[i] == weaver::kNoise) continue;
        if (a[i] >= static_cast<int>(fwd.size())) fwd.resize(a[i] + 1, -1);
        if (b[i] >= static_cast<int>(rev.size())) rev.resize(b[i] + 1, -1);
        if (fwd[a[i]] == -1) fwd[a[i]] = b[i];
        if (rev[b[i]] == -1) rev[b[i]] = a[i];
        if (fwd[a[i]] != b[i] || rev[b[i]] != a[i]) return false;
    }
    return true;
}

}  // namespace support
