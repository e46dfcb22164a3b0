#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace weaver {

// A word or phrase vector. Phrase vectors are mean-pooled token vectors;
// an all-zero vector marks a phrase with no in-vocabulary token.
using EmbeddingVector = std::vector<double>;

bool is_zero_vector(const EmbeddingVector& v);

// cos(a, b) in [-1, 1]; defined as 0.0 when either norm is zero.
// Throws std::invalid_argument on dimension mismatch.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// 1 - cosine_similarity, the distance used for raw-embedding-space clustering.
double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b);

double euclidean_distance(const EmbeddingVector& a, const EmbeddingVector& b);

enum class Metric { COSINE, EUCLIDEAN };

// COSINE -> cosine_distance, EUCLIDEAN -> euclidean_distance.
double metric_distance(Metric metric, const EmbeddingVector& a,
                       const EmbeddingVector& b);

const char* metric_name(Metric metric);
Metric metric_from_name(const std::string& name);

// In-memory store of pretrained word vectors, keyed by lowercase word.
//
// Loads the word2vec text format: an optional "count dim" header line
// followed by "word v1 v2 ... vd" rows. Duplicate words keep the first
// occurrence. Immutable after load, safe for concurrent reads.
class VectorStore {
 public:
  VectorStore() = default;

  // Throws std::runtime_error naming the offending row on inconsistent
  // dimensions or non-numeric components.
  static VectorStore load(const std::filesystem::path& path);
  static VectorStore parse(std::istream& in, const std::string& origin);

  int dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }

  // Lowercase lookup; nullptr when absent.
  const EmbeddingVector* find(const std::string& word) const;

  // Mean of in-vocabulary token vectors (tokens lowercased first).
  // All-OOV input yields the zero vector.
  EmbeddingVector embed_tokens(const std::vector<std::string>& tokens) const;

  // Whitespace-tokenizes, then embeds as above.
  EmbeddingVector embed_phrase(const std::string& phrase) const;

  void insert(const std::string& word, EmbeddingVector v);

 private:
  int dim_ = 0;
  std::unordered_map<std::string, EmbeddingVector> vocab_;
};

}  // namespace weaver
