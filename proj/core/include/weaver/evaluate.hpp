#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "weaver/graph.hpp"

namespace weaver {

// Hand-labeled ground-truth code-object pairs.
struct LabeledEdgeSet {
    std::set<std::pair<std::string, std::string>> pairs;  // (code name, object label)
};

// Reads labels from JSONL with fields {code_name, object_label}; rejects
// invalid rows with errors naming the row.
LabeledEdgeSet load_labels(const std::string& path);
LabeledEdgeSet load_labels(std::istream& in, const std::string& origin);

struct PRPoint {
    double threshold = 0.0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::optional<double> precision;  // tp/(tp+fp); empty when tp+fp == 0
    std::optional<double> recall;     // tp/(tp+fn); empty when tp+fn == 0
};

// Compares the graph's SIMILARITY edges against labels by exact
// (code name, object label) string matching with set semantics. Throws when
// the label set is empty.
PRPoint precision_recall(const KnowledgeGraph& graph, const LabeledEdgeSet& labels);

// One PRPoint per threshold, reusing the assembler's cached similarity
// matrix. Thresholds must be ascending and each within [0,1].
std::vector<PRPoint> sweep(const GraphAssembler& assembler, const LabeledEdgeSet& labels,
                           const std::vector<double>& thresholds);

// Threshold interval across which precision and recall cross, found by
// scanning adjacent sweep points; degenerate [t,t] when they are equal at t;
// nullopt when they never cross.
std::optional<std::pair<double, double>> crossing_interval(const std::vector<PRPoint>& points);

struct ConductanceReport {
    std::string corpus_id;             // which corpus formed S
    std::vector<std::string> s_nodes;  // node ids in S, sorted
    int cut_edges = 0;                 // edges with exactly one endpoint in S
    int volume = 0;                    // sum of binarized degrees over S
    std::optional<double> phi;         // cut/volume; empty when volume == 0
    double fraction = 0.0;             // |S| / |V|
};

// Conductance of the cut separating corpus_id_a's nodes from the rest, over
// the binarized undirected adjacency (multi-edges collapsed). Throws when
// every node, or no node, belongs to corpus_id_a.
ConductanceReport conductance(const KnowledgeGraph& graph, const std::string& corpus_id_a);

// Conductance per threshold, in threshold order; thresholds validated as in
// sweep.
std::vector<std::pair<double, ConductanceReport>> conductance_sweep(
    const GraphAssembler& assembler, const std::string& corpus_id_a,
    const std::vector<double>& thresholds);

}  // namespace weaver
