#include "weaver/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace weaver {

namespace {

std::string to_lower_ascii(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

bool is_zero_vector(const EmbeddingVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(
        "cosine_similarity: dimension mismatch (" + std::to_string(a.size()) +
        " vs " + std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double cosine_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  return 1.0 - cosine_similarity(a, b);
}

double euclidean_distance(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("euclidean_distance: dimension mismatch");
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

double metric_distance(Metric metric, const EmbeddingVector& a,
                       const EmbeddingVector& b) {
  return metric == Metric::COSINE ? cosine_distance(a, b)
                                  : euclidean_distance(a, b);
}

const char* metric_name(Metric metric) {
  return metric == Metric::COSINE ? "cosine" : "euclidean";
}

Metric metric_from_name(const std::string& name) {
  if (name == "cosine") return Metric::COSINE;
  if (name == "euclidean") return Metric::EUCLIDEAN;
  throw std::invalid_argument("unknown metric '" + name +
                              "' (expected cosine or euclidean)");
}

VectorStore VectorStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open vector file: " + path.string());
  }
  return parse(in, path.string());
}

VectorStore VectorStore::parse(std::istream& in, const std::string& origin) {
  VectorStore store;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::string> toks;
    std::string tok;
    while (fields >> tok) toks.push_back(tok);
    if (toks.empty()) continue;

    // "count dim" header: exactly two numeric fields on the first row.
    if (row == 1 && toks.size() == 2) {
      double a, b;
      if (parse_double(toks[0], a) && parse_double(toks[1], b)) continue;
    }
    if (toks.size() < 2) {
      throw std::runtime_error(origin + ": row " + std::to_string(row) +
                               ": expected word followed by vector components");
    }
    EmbeddingVector vec;
    vec.reserve(toks.size() - 1);
    for (std::size_t i = 1; i < toks.size(); ++i) {
      double v;
      if (!parse_double(toks[i], v)) {
        throw std::runtime_error(origin + ": row " + std::to_string(row) +
                                 ": non-numeric component '" + toks[i] + "'");
      }
      vec.push_back(v);
    }
    if (store.dim_ == 0) {
      store.dim_ = static_cast<int>(vec.size());
    } else if (static_cast<int>(vec.size()) != store.dim_) {
      throw std::runtime_error(
          origin + ": row " + std::to_string(row) + ": expected " +
          std::to_string(store.dim_) + " components, got " +
          std::to_string(vec.size()));
    }
    store.vocab_.emplace(to_lower_ascii(toks[0]), std::move(vec));
  }
  return store;
}

const EmbeddingVector* VectorStore::find(const std::string& word) const {
  auto it = vocab_.find(to_lower_ascii(word));
  return it == vocab_.end() ? nullptr : &it->second;
}

EmbeddingVector VectorStore::embed_tokens(
    const std::vector<std::string>& tokens) const {
  EmbeddingVector sum(static_cast<std::size_t>(dim_), 0.0);
  int hits = 0;
  for (const auto& t : tokens) {
    if (const EmbeddingVector* v = find(t)) {
      for (int i = 0; i < dim_; ++i) sum[static_cast<std::size_t>(i)] += (*v)[static_cast<std::size_t>(i)];
      ++hits;
    }
  }
  if (hits == 0) return EmbeddingVector(static_cast<std::size_t>(dim_), 0.0);
  for (double& x : sum) x /= hits;
  return sum;
}

EmbeddingVector VectorStore::embed_phrase(const std::string& phrase) const {
  std::istringstream in(phrase);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return embed_tokens(tokens);
}

void VectorStore::insert(const std::string& word, EmbeddingVector v) {
  if (dim_ == 0) dim_ = static_cast<int>(v.size());
  vocab_.emplace(to_lower_ascii(word), std::move(v));
}

}  // namespace weaver
