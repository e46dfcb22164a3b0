#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "weaver/evaluate.hpp"
#include "weaver/graph.hpp"

namespace weaver {

// Provenance carried by every output file, as a comment or field: two runs
// with equal config hash and seed must produce byte-identical outputs.
struct OutputStamp {
    std::string config_hash;  // 16 hex digits
    std::uint64_t seed = 0;
};

// Shortest round-trip decimal rendering, locale-independent.
std::string format_double(double value);

// GraphML with typed node attributes {kind, label, corpus_id, members} and
// edge attributes {kind, label, weight}; the stamp rides in an XML comment.
void write_graphml(std::ostream& out, const KnowledgeGraph& graph, const OutputStamp& stamp);

// DOT digraph. A single-corpus graph is colored by node kind (CONCEPT large
// red, OBJECT small red, CODE blue); a multi-corpus graph is colored by
// corpus in first-appearance order over a fixed palette.
void write_dot(std::ostream& out, const KnowledgeGraph& graph, const OutputStamp& stamp);

// Full JSON serialization: config hash, seed, build params, nodes (vectors
// included) and edges, pretty-printed with stable key order.
void write_graph_json(std::ostream& out, const KnowledgeGraph& graph, const OutputStamp& stamp);

// JSONL metadata row {"config_hash", "seed"}; importers skip it when it
// leads a file.
void write_jsonl_meta(std::ostream& out, const OutputStamp& stamp);

// CSV `point_id,x1,...,xc`, one row per layout point.
void write_layout_csv(std::ostream& out, const std::vector<std::string>& point_ids,
                      const LowDimLayout& layout, const OutputStamp& stamp);

// CSV `point_id,label`; noise points carry the kNoise label.
void write_assignment_csv(std::ostream& out, const std::vector<std::string>& point_ids,
                          const ClusterAssignment& assignment, const OutputStamp& stamp);

// CSV `threshold,tp,fp,fn,precision,recall`; an undefined ratio renders as
// an empty cell.
void write_pr_csv(std::ostream& out, const std::vector<PRPoint>& points, const OutputStamp& stamp);

// CSV `threshold,cut_edges,volume,phi,fraction`; undefined phi renders as
// an empty cell.
void write_conductance_csv(std::ostream& out,
                           const std::vector<std::pair<double, ConductanceReport>>& sweep,
                           const OutputStamp& stamp);

}  // namespace weaver
