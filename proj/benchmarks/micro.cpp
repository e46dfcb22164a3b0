// Microbenchmarks for the pipeline's hot paths, all on synthetic data so
// they run anywhere the library builds.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "weaver/code_entities.hpp"
#include "weaver/corpus.hpp"
#include "weaver/dbscan.hpp"
#include "weaver/embeddings.hpp"
#include "weaver/triples.hpp"
#include "weaver/umap.hpp"

namespace {

using weaver::EmbeddingVector;

std::vector<EmbeddingVector> random_points(int n, int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<EmbeddingVector> points(n, EmbeddingVector(dim));
    for (auto& p : points)
        for (double& x : p) x = coord(rng);
    return points;
}

weaver::VectorStore synthetic_store(int words, int dim) {
    std::ostringstream text;
    text << words << ' ' << dim << '\n';
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int w = 0; w < words; ++w) {
        text << "word" << w;
        for (int d = 0; d < dim; ++d) text << ' ' << coord(rng);
        text << '\n';
    }
    std::istringstream in(text.str());
    return weaver::VectorStore::parse(in, "synthetic");
}

void BM_cosine_similarity(benchmark::State& state) {
    auto points = random_points(2, 300, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(weaver::cosine_similarity(points[0], points[1]));
}
BENCHMARK(BM_cosine_similarity);

void BM_embed_phrase(benchmark::State& state) {
    auto store = synthetic_store(2000, 100);
    const std::string phrase = "word12 word345 word678 word901 word1234 word1999";
    for (auto _ : state) benchmark::DoNotOptimize(store.embed_phrase(phrase));
}
BENCHMARK(BM_embed_phrase);

void BM_clean_text(benchmark::State& state) {
    std::string page;
    for (int i = 0; i < 40; ++i)
        page +=
            "# Heading\n\n"
            "The transmission rate $\\beta S I$ governs spread; see `step!` and "
            "[the appendix](appendix.md). We observe that $R_0 > 1$ implies growth.\n\n"
            "```julia\nfunction step!(u, p)\n    u .+= p\nend\n```\n\n";
    for (auto _ : state) benchmark::DoNotOptimize(weaver::clean_text(page));
}
BENCHMARK(BM_clean_text);

void BM_extract_triples(benchmark::State& state) {
    std::vector<weaver::CleanSentence> sentences;
    for (int i = 0; i < 200; ++i) {
        weaver::CleanSentence s;
        s.text = "The infection model tracks susceptible individuals and predicts the epidemic.";
        s.doc_id = "bench.md";
        s.corpus_id = "bench";
        s.index = i;
        sentences.push_back(std::move(s));
    }
    for (auto _ : state) benchmark::DoNotOptimize(weaver::extract_triples(sentences));
}
BENCHMARK(BM_extract_triples);

void BM_normalize_identifier(benchmark::State& state) {
    const std::string name = "dβ_SusceptibleInfected2Recovered_dt";
    for (auto _ : state) benchmark::DoNotOptimize(weaver::normalize_identifier(name));
}
BENCHMARK(BM_normalize_identifier);

void BM_dbscan(benchmark::State& state) {
    auto points = random_points(static_cast<int>(state.range(0)), 4, 2);
    for (auto _ : state) benchmark::DoNotOptimize(weaver::dbscan(points, 0.15, 4));
}
BENCHMARK(BM_dbscan)->Arg(100)->Arg(400);

void BM_umap_reduce(benchmark::State& state) {
    auto points = random_points(static_cast<int>(state.range(0)), 10, 3);
    weaver::UmapParams params;
    params.k = 10;
    params.n_epochs = 50;
    params.seed = 5;
    for (auto _ : state) benchmark::DoNotOptimize(weaver::reduce(points, params));
}
BENCHMARK(BM_umap_reduce)->Arg(100)->Arg(250);

}  // namespace

BENCHMARK_MAIN();
