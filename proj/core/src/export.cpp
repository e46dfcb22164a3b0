#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

#include "weaver/export.hpp"

namespace weaver {

namespace {

using nlohmann::json;

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += sep;
        out += parts[i];
    }
    return out;
}

void stamp_comment(std::ostream& out, const char* open, const OutputStamp& stamp,
                   const char* close) {
    out << open << "config_hash=" << stamp.config_hash << " seed=" << stamp.seed << close << '\n';
}

json params_json(const BuildParams& p) {
    json u;
    u["k"] = p.umap.k;
    u["n_components"] = p.umap.n_components;
    u["min_dist"] = p.umap.min_dist;
    u["n_epochs"] = p.umap.n_epochs;
    u["seed"] = p.umap.seed;
    u["metric"] = metric_name(p.umap.metric);
    json out;
    out["eps_subject"] = p.eps_subject;
    out["eps_object"] = p.eps_object;
    out["min_pts"] = p.min_pts;
    out["tau"] = p.tau;
    out["min_component_size"] = p.min_component_size;
    out["umap"] = std::move(u);
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw std::runtime_error("cannot format double");
    return std::string(buf, end);
}

void write_graphml(std::ostream& out, const KnowledgeGraph& graph, const OutputStamp& stamp) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    stamp_comment(out, "<!-- ", stamp, " -->");
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"d0\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
        << "  <key id=\"d1\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
        << "  <key id=\"d2\" for=\"node\" attr.name=\"corpus_id\" attr.type=\"string\"/>\n"
        << "  <key id=\"d3\" for=\"node\" attr.name=\"members\" attr.type=\"string\"/>\n"
        << "  <key id=\"d4\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n"
        << "  <key id=\"d5\" for=\"edge\" attr.name=\"label\" attr.type=\"string\"/>\n"
        << "  <key id=\"d6\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (const KGNode& n : graph.nodes) {
        out << "    <node id=\"" << xml_escape(n.id) << "\">\n"
            << "      <data key=\"d0\">" << node_kind_name(n.kind) << "</data>\n"
            << "      <data key=\"d1\">" << xml_escape(n.label) << "</data>\n"
            << "      <data key=\"d2\">" << xml_escape(n.corpus_id) << "</data>\n"
            << "      <data key=\"d3\">" << xml_escape(join(n.members, " | ")) << "</data>\n"
            << "    </node>\n";
    }
    for (const KGEdge& e : graph.edges) {
        out << "    <edge source=\"" << xml_escape(e.src) << "\" target=\"" << xml_escape(e.dst)
            << "\">\n"
            << "      <data key=\"d4\">" << edge_kind_name(e.kind) << "</data>\n"
            << "      <data key=\"d5\">" << xml_escape(e.label) << "</data>\n"
            << "      <data key=\"d6\">" << format_double(e.weight) << "</data>\n"
            << "    </edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const KnowledgeGraph& graph, const OutputStamp& stamp) {
    static const char* kPalette[] = {"red",    "green", "blue",  "orange",
                                     "purple", "cyan",  "brown", "gold"};
    constexpr int kPaletteSize = 8;

    std::vector<std::string> corpora;  // first-appearance order
    for (const KGNode& n : graph.nodes)
        if (std::find(corpora.begin(), corpora.end(), n.corpus_id) == corpora.end())
            corpora.push_back(n.corpus_id);

    stamp_comment(out, "// ", stamp, "");
    out << "digraph knowledge_graph {\n  node [style=filled];\n";
    for (const KGNode& n : graph.nodes) {
        out << "  \"" << dot_escape(n.id) << "\" [label=\"" << dot_escape(n.label) << "\"";
        if (corpora.size() <= 1) {
            switch (n.kind) {
                case NodeKind::CONCEPT:
                    out << ", fillcolor=red, fontsize=14";
                    break;
                case NodeKind::OBJECT:
                    out << ", fillcolor=red, fontsize=8, width=0.2, height=0.2";
                    break;
                case NodeKind::CODE:
                    out << ", fillcolor=blue, fontcolor=white";
                    break;
            }
        } else {
            auto it = std::find(corpora.begin(), corpora.end(), n.corpus_id);
            int slot = static_cast<int>(it - corpora.begin()) % kPaletteSize;
            out << ", fillcolor=" << kPalette[slot];
            if (n.kind == NodeKind::OBJECT) out << ", fontsize=8, width=0.2, height=0.2";
            if (n.kind == NodeKind::CODE) out << ", shape=box";
        }
        out << "];\n";
    }
    for (const KGEdge& e : graph.edges) {
        out << "  \"" << dot_escape(e.src) << "\" -> \"" << dot_escape(e.dst) << "\"";
        if (e.kind == EdgeKind::VERB)
            out << " [label=\"" << dot_escape(e.label) << "\"]";
        else
            out << " [style=dashed, label=\"" << format_double(e.weight) << "\"]";
        out << ";\n";
    }
    out << "}\n";
}

void write_graph_json(std::ostream& out, const KnowledgeGraph& graph, const OutputStamp& stamp) {
    json doc;
    doc["config_hash"] = stamp.config_hash;
    doc["seed"] = stamp.seed;
    doc["build_params"] = params_json(graph.params);
    doc["nodes"] = json::array();
    for (const KGNode& n : graph.nodes) {
        json row;
        row["id"] = n.id;
        row["kind"] = node_kind_name(n.kind);
        row["label"] = n.label;
        row["corpus_id"] = n.corpus_id;
        row["members"] = n.members;
        row["vector"] = n.vector;
        doc["nodes"].push_back(std::move(row));
    }
    doc["edges"] = json::array();
    for (const KGEdge& e : graph.edges) {
        json row;
        row["src"] = e.src;
        row["dst"] = e.dst;
        row["kind"] = edge_kind_name(e.kind);
        row["label"] = e.label;
        row["weight"] = e.weight;
        doc["edges"].push_back(std::move(row));
    }
    out << doc.dump(2) << '\n';
}

void write_jsonl_meta(std::ostream& out, const OutputStamp& stamp) {
    json row;
    row["config_hash"] = stamp.config_hash;
    row["seed"] = stamp.seed;
    out << row.dump() << '\n';
}

void write_layout_csv(std::ostream& out, const std::vector<std::string>& point_ids,
                      const LowDimLayout& layout, const OutputStamp& stamp) {
    if (point_ids.size() != layout.coords.size())
        throw std::invalid_argument("layout row count does not match point id count");
    stamp_comment(out, "# ", stamp, "");
    out << "point_id";
    for (int c = 1; c <= layout.n_components; ++c) out << ",x" << c;
    out << '\n';
    for (std::size_t i = 0; i < point_ids.size(); ++i) {
        out << csv_field(point_ids[i]);
        for (double x : layout.coords[i]) out << ',' << format_double(x);
        out << '\n';
    }
}

void write_assignment_csv(std::ostream& out, const std::vector<std::string>& point_ids,
                          const ClusterAssignment& assignment, const OutputStamp& stamp) {
    if (point_ids.size() != assignment.labels.size())
        throw std::invalid_argument("assignment size does not match point id count");
    stamp_comment(out, "# ", stamp, "");
    out << "point_id,label\n";
    for (std::size_t i = 0; i < point_ids.size(); ++i)
        out << csv_field(point_ids[i]) << ',' << assignment.labels[i] << '\n';
}

void write_pr_csv(std::ostream& out, const std::vector<PRPoint>& points,
                  const OutputStamp& stamp) {
    stamp_comment(out, "# ", stamp, "");
    out << "threshold,tp,fp,fn,precision,recall\n";
    for (const PRPoint& p : points) {
        out << format_double(p.threshold) << ',' << p.tp << ',' << p.fp << ',' << p.fn << ',';
        if (p.precision) out << format_double(*p.precision);
        out << ',';
        if (p.recall) out << format_double(*p.recall);
        out << '\n';
    }
}

void write_conductance_csv(std::ostream& out,
                           const std::vector<std::pair<double, ConductanceReport>>& sweep,
                           const OutputStamp& stamp) {
    stamp_comment(out, "# ", stamp, "");
    out << "threshold,cut_edges,volume,phi,fraction\n";
    for (const auto& [threshold, report] : sweep) {
        out << format_double(threshold) << ',' << report.cut_edges << ',' << report.volume << ',';
        if (report.phi) out << format_double(*report.phi);
        out << ',' << format_double(report.fraction) << '\n';
    }
}

}  // namespace weaver
