#include <algorithm>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

#include "weaver/evaluate.hpp"

namespace weaver {

namespace {

using nlohmann::json;

void check_thresholds(const std::vector<double>& thresholds) {
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < 0.0 || thresholds[i] > 1.0)
            throw std::invalid_argument("threshold " + std::to_string(thresholds[i]) +
                                        " outside [0, 1]");
        if (i > 0 && thresholds[i] < thresholds[i - 1])
            throw std::invalid_argument("thresholds must be sorted ascending");
    }
}

}  // namespace

LabeledEdgeSet load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open labels file: " + path);
    return load_labels(in, path);
}

LabeledEdgeSet load_labels(std::istream& in, const std::string& origin) {
    LabeledEdgeSet out;
    std::string line;
    int row = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string where = origin + ": row " + std::to_string(row);
        json parsed = json::parse(line, nullptr, false);
        if (parsed.is_discarded()) throw std::runtime_error(where + ": malformed JSON");
        if (first_data_row && parsed.is_object() && parsed.contains("config_hash")) {
            first_data_row = false;  // leading metadata row from an exporter
            continue;
        }
        first_data_row = false;
        if (!parsed.is_object()) throw std::runtime_error(where + ": expected a JSON object");
        for (const char* field : {"code_name", "object_label"}) {
            if (!parsed.contains(field))
                throw std::runtime_error(where + ": missing field '" + field + "'");
            if (!parsed.at(field).is_string())
                throw std::runtime_error(where + ": field '" + std::string(field) +
                                         "' must be a string");
        }
        std::string code = parsed.at("code_name").get<std::string>();
        std::string object = parsed.at("object_label").get<std::string>();
        if (code.empty() || object.empty())
            throw std::runtime_error(where + ": empty name in label pair");
        out.pairs.emplace(std::move(code), std::move(object));
    }
    return out;
}

PRPoint precision_recall(const KnowledgeGraph& graph, const LabeledEdgeSet& labels) {
    if (labels.pairs.empty())
        throw std::invalid_argument("label set is empty; precision/recall undefined");

    std::unordered_map<std::string, const KGNode*> by_id;
    by_id.reserve(graph.nodes.size());
    for (const KGNode& n : graph.nodes) by_id[n.id] = &n;

    std::set<std::pair<std::string, std::string>> predicted;
    for (const KGEdge& e : graph.edges) {
        if (e.kind != EdgeKind::SIMILARITY) continue;
        predicted.emplace(by_id.at(e.src)->label, by_id.at(e.dst)->label);
    }

    PRPoint point;
    point.threshold = graph.params.tau;
    for (const auto& pair : predicted) {
        if (labels.pairs.count(pair) > 0)
            ++point.tp;
        else
            ++point.fp;
    }
    for (const auto& pair : labels.pairs)
        if (predicted.count(pair) == 0) ++point.fn;

    if (point.tp + point.fp > 0)
        point.precision = static_cast<double>(point.tp) / (point.tp + point.fp);
    if (point.tp + point.fn > 0)
        point.recall = static_cast<double>(point.tp) / (point.tp + point.fn);
    return point;
}

std::vector<PRPoint> sweep(const GraphAssembler& assembler, const LabeledEdgeSet& labels,
                           const std::vector<double>& thresholds) {
    check_thresholds(thresholds);
    std::vector<PRPoint> points;
    points.reserve(thresholds.size());
    for (double t : thresholds) {
        PRPoint p = precision_recall(assembler.assemble(t), labels);
        p.threshold = t;
        points.push_back(p);
    }
    return points;
}

std::optional<std::pair<double, double>> crossing_interval(const std::vector<PRPoint>& points) {
    auto diff = [](const PRPoint& p) -> std::optional<double> {
        if (!p.precision || !p.recall) return std::nullopt;
        return *p.precision - *p.recall;
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto d = diff(points[i]);
        if (d && *d == 0.0) return std::pair{points[i].threshold, points[i].threshold};
        if (i + 1 < points.size()) {
            auto next = diff(points[i + 1]);
            if (d && next && (*d < 0.0) != (*next < 0.0) && *next != 0.0)
                return std::pair{points[i].threshold, points[i + 1].threshold};
        }
    }
    return std::nullopt;
}

ConductanceReport conductance(const KnowledgeGraph& graph, const std::string& corpus_id_a) {
    const int n = static_cast<int>(graph.nodes.size());
    std::unordered_map<std::string, int> index;
    index.reserve(graph.nodes.size());
    std::vector<bool> in_s(n, false);
    ConductanceReport report;
    report.corpus_id = corpus_id_a;

    int inside = 0;
    for (int i = 0; i < n; ++i) {
        index[graph.nodes[i].id] = i;
        if (graph.nodes[i].corpus_id == corpus_id_a) {
            in_s[i] = true;
            ++inside;
            report.s_nodes.push_back(graph.nodes[i].id);
        }
    }
    if (inside == 0)
        throw std::runtime_error("no nodes from corpus '" + corpus_id_a + "' in the graph");
    if (inside == n)
        throw std::runtime_error("every node is from corpus '" + corpus_id_a +
                                 "'; the partition is empty on one side");
    std::sort(report.s_nodes.begin(), report.s_nodes.end());

    // binarized undirected adjacency: any edge between i and j counts once
    std::set<std::pair<int, int>> adjacency;
    for (const KGEdge& e : graph.edges) {
        int a = index.at(e.src);
        int b = index.at(e.dst);
        if (a == b) continue;
        adjacency.emplace(std::min(a, b), std::max(a, b));
    }

    std::vector<int> degree(n, 0);
    for (const auto& [a, b] : adjacency) {
        ++degree[a];
        ++degree[b];
        if (in_s[a] != in_s[b]) ++report.cut_edges;
    }
    for (int i = 0; i < n; ++i)
        if (in_s[i]) report.volume += degree[i];

    if (report.volume > 0)
        report.phi = static_cast<double>(report.cut_edges) / report.volume;
    report.fraction = static_cast<double>(inside) / n;
    return report;
}

std::vector<std::pair<double, ConductanceReport>> conductance_sweep(
    const GraphAssembler& assembler, const std::string& corpus_id_a,
    const std::vector<double>& thresholds) {
    check_thresholds(thresholds);
    std::vector<std::pair<double, ConductanceReport>> out;
    out.reserve(thresholds.size());
    for (double t : thresholds)
        out.emplace_back(t, conductance(assembler.assemble(t), corpus_id_a));
    return out;
}

}  // namespace weaver
