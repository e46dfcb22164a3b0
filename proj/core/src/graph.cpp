#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "weaver/graph.hpp"

namespace weaver {

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::CONCEPT: return "CONCEPT";
        case NodeKind::OBJECT: return "OBJECT";
        case NodeKind::CODE: return "CODE";
    }
    return "OBJECT";
}

NodeKind node_kind_from_name(const std::string& name) {
    if (name == "CONCEPT") return NodeKind::CONCEPT;
    if (name == "OBJECT") return NodeKind::OBJECT;
    if (name == "CODE") return NodeKind::CODE;
    throw std::invalid_argument("unknown node kind '" + name + "'");
}

const char* edge_kind_name(EdgeKind kind) {
    return kind == EdgeKind::VERB ? "VERB" : "SIMILARITY";
}

EdgeKind edge_kind_from_name(const std::string& name) {
    if (name == "VERB") return EdgeKind::VERB;
    if (name == "SIMILARITY") return EdgeKind::SIMILARITY;
    throw std::invalid_argument("unknown edge kind '" + name + "'");
}

void validate_params(const BuildParams& params) {
    if (params.tau < 0.0 || params.tau > 1.0)
        throw std::invalid_argument("tau must be in [0, 1]");
    if (params.eps_subject <= 0.0) throw std::invalid_argument("eps_subject must be positive");
    if (params.eps_object <= 0.0) throw std::invalid_argument("eps_object must be positive");
    if (params.min_pts < 1) throw std::invalid_argument("min_pts must be at least 1");
    if (params.min_component_size < 0)
        throw std::invalid_argument("min_component_size must be non-negative");
    if (params.umap.k < 1) throw std::invalid_argument("umap k must be at least 1");
    if (params.umap.n_components < 1)
        throw std::invalid_argument("umap n_components must be at least 1");
    if (params.umap.n_epochs < 1) throw std::invalid_argument("umap n_epochs must be at least 1");
    if (params.umap.min_dist < 0.0) throw std::invalid_argument("umap min_dist must be non-negative");
}

const KGNode* KnowledgeGraph::find_node(const std::string& id) const {
    for (const KGNode& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

namespace {

struct EmbeddedPhrases {
    std::vector<std::string> phrases;
    std::vector<EmbeddingVector> vectors;
};

// Deduplicates phrases in first-appearance order and keeps the embeddable
// ones (phrases with every token out of vocabulary embed to zero and drop).
EmbeddedPhrases embed_distinct(const std::vector<std::string>& raw, const VectorStore& store,
                               const char* role, bool warn) {
    EmbeddedPhrases out;
    std::unordered_set<std::string> seen;
    for (const std::string& p : raw) {
        if (!seen.insert(p).second) continue;
        EmbeddingVector v = store.embed_phrase(p);
        if (is_zero_vector(v)) {
            if (warn)
                std::cerr << "warning: dropping unembeddable " << role << " phrase '" << p
                          << "'\n";
            continue;
        }
        out.phrases.push_back(p);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

// Member whose original-space embedding is closest (cosine) to the cluster
// centroid; ties keep the earliest member.
int representative_index(const std::vector<int>& members,
                         const std::vector<EmbeddingVector>& vectors) {
    const std::size_t dim = vectors[members[0]].size();
    EmbeddingVector centroid(dim, 0.0);
    for (int m : members)
        for (std::size_t d = 0; d < dim; ++d) centroid[d] += vectors[m][d];
    for (double& x : centroid) x /= static_cast<double>(members.size());

    int best = members[0];
    double best_dist = cosine_distance(vectors[best], centroid);
    for (std::size_t i = 1; i < members.size(); ++i) {
        double d = cosine_distance(vectors[members[i]], centroid);
        if (d < best_dist) {
            best_dist = d;
            best = members[i];
        }
    }
    return best;
}

}  // namespace

SubjectClusters cluster_subjects(const std::vector<Triple>& triples, const VectorStore& store,
                                 const UmapParams& umap_params, double eps_subject, int min_pts,
                                 const std::string& corpus_id) {
    std::vector<std::string> raw;
    raw.reserve(triples.size());
    for (const Triple& t : triples) raw.push_back(t.subject);
    EmbeddedPhrases ep = embed_distinct(raw, store, "subject", false);
    if (ep.phrases.empty())
        throw std::runtime_error("corpus '" + corpus_id + "': no embeddable subject phrases");

    SubjectClusters out;
    out.phrases = ep.phrases;
    const int n = static_cast<int>(ep.phrases.size());

    // UMAP needs at least one neighbor and some nonzero distance; degenerate
    // inputs (a single point, or all points coincident) go straight to the
    // origin, where DBSCAN still groups them.
    bool flat = n == 1;
    if (!flat) {
        flat = true;
        for (int i = 0; i < n && flat; ++i)
            for (int j = i + 1; j < n; ++j)
                if (euclidean_distance(ep.vectors[i], ep.vectors[j]) > 0.0) {
                    flat = false;
                    break;
                }
    }
    UmapParams up = umap_params;
    up.k = std::min(up.k, n - 1);
    if (flat) {
        out.layout.coords.assign(n, std::vector<double>(up.n_components, 0.0));
        out.layout.n_components = up.n_components;
        out.layout.min_dist = up.min_dist;
        out.layout.n_epochs = up.n_epochs;
        out.layout.seed = up.seed;
    } else {
        out.layout = reduce(ep.vectors, up);
    }

    out.assignment = dbscan(out.layout.coords, eps_subject, min_pts, Metric::EUCLIDEAN);

    for (int c = 0; c < out.assignment.num_clusters; ++c) {
        std::vector<int> members = out.assignment.members_of(c);
        int rep = representative_index(members, ep.vectors);
        KGNode node;
        node.id = "concept:" + corpus_id + ":" + std::to_string(c);
        node.kind = NodeKind::CONCEPT;
        node.label = ep.phrases[rep];
        node.corpus_id = corpus_id;
        node.vector = ep.vectors[rep];
        for (int m : members) {
            node.members.push_back(ep.phrases[m]);
            out.phrase_to_node[ep.phrases[m]] = node.id;
        }
        out.nodes.push_back(std::move(node));
    }
    return out;
}

ObjectClusters cluster_objects(const std::vector<Triple>& triples, const VectorStore& store,
                               double eps_object, int min_pts, const std::string& corpus_id) {
    std::vector<std::string> raw;
    raw.reserve(triples.size());
    for (const Triple& t : triples) raw.push_back(t.object);
    EmbeddedPhrases ep = embed_distinct(raw, store, "object", true);
    if (ep.phrases.empty())
        throw std::runtime_error("corpus '" + corpus_id + "': no embeddable object phrases");

    ObjectClusters out;
    out.phrases = ep.phrases;
    out.assignment = dbscan(ep.vectors, eps_object, min_pts, Metric::COSINE);

    for (int c = 0; c < out.assignment.num_clusters; ++c) {
        std::vector<int> members = out.assignment.members_of(c);
        int rep = representative_index(members, ep.vectors);
        KGNode node;
        node.id = "object:" + corpus_id + ":" + std::to_string(c);
        node.kind = NodeKind::OBJECT;
        node.label = ep.phrases[rep];
        node.corpus_id = corpus_id;
        node.vector = ep.vectors[rep];
        for (int m : members) {
            node.members.push_back(ep.phrases[m]);
            out.phrase_to_node[ep.phrases[m]] = node.id;
        }
        out.nodes.push_back(std::move(node));
    }

    // noise objects stay in the graph as their own nodes
    int next = out.assignment.num_clusters;
    for (int i = 0; i < static_cast<int>(ep.phrases.size()); ++i) {
        if (out.assignment.labels[i] != kNoise) continue;
        KGNode node;
        node.id = "object:" + corpus_id + ":" + std::to_string(next++);
        node.kind = NodeKind::OBJECT;
        node.label = ep.phrases[i];
        node.members.push_back(ep.phrases[i]);
        node.corpus_id = corpus_id;
        node.vector = ep.vectors[i];
        out.phrase_to_node[ep.phrases[i]] = node.id;
        out.nodes.push_back(std::move(node));
    }
    return out;
}

std::vector<KGEdge> link_concepts(const std::unordered_map<std::string, std::string>& concept_map,
                                  const std::unordered_map<std::string, std::string>& object_map,
                                  const std::vector<Triple>& triples) {
    std::map<std::tuple<std::string, std::string, std::string>, int> counts;
    for (const Triple& t : triples) {
        auto s = concept_map.find(t.subject);
        if (s == concept_map.end()) continue;
        auto o = object_map.find(t.object);
        if (o == object_map.end()) continue;
        ++counts[{s->second, o->second, t.verb}];
    }
    std::vector<KGEdge> edges;
    edges.reserve(counts.size());
    for (const auto& [key, count] : counts) {
        KGEdge e;
        e.src = std::get<0>(key);
        e.dst = std::get<1>(key);
        e.kind = EdgeKind::VERB;
        e.label = std::get<2>(key);
        e.weight = count;
        edges.push_back(std::move(e));
    }
    return edges;
}

CodeCandidates code_candidates(const std::vector<KGNode>& object_nodes,
                               const std::vector<CodeEntity>& entities,
                               const VectorStore& store) {
    CodeCandidates out;
    std::set<std::string> seen;
    for (const CodeEntity& e : entities) {
        std::string id = "code:" + e.corpus_id + ":" +
                         (e.kind == EntityKind::FUNCTION ? "fn" : "var") + ":" + e.name;
        if (!seen.insert(id).second) continue;
        EmbeddingVector v = store.embed_tokens(e.tokens);
        if (is_zero_vector(v)) {
            std::cerr << "warning: skipping unembeddable code entity '" << e.name << "'\n";
            continue;
        }
        KGNode node;
        node.id = id;
        node.kind = NodeKind::CODE;
        node.label = e.name;
        node.members = e.tokens;
        node.corpus_id = e.corpus_id;
        node.vector = std::move(v);

        std::vector<std::pair<int, double>> links;
        for (int j = 0; j < static_cast<int>(object_nodes.size()); ++j) {
            if (object_nodes[j].kind != NodeKind::OBJECT) continue;
            links.emplace_back(j, cosine_similarity(node.vector, object_nodes[j].vector));
        }
        out.nodes.push_back(std::move(node));
        out.links.push_back(std::move(links));
    }
    return out;
}

CodeAttachment attach_code(const std::vector<KGNode>& object_nodes,
                           const std::vector<CodeEntity>& entities, const VectorStore& store,
                           double tau) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must be in [0, 1]");
    CodeCandidates cand = code_candidates(object_nodes, entities, store);
    CodeAttachment out;
    for (std::size_t i = 0; i < cand.nodes.size(); ++i) {
        std::vector<KGEdge> kept;
        for (const auto& [j, sim] : cand.links[i]) {
            if (sim < tau) continue;
            KGEdge e;
            e.src = cand.nodes[i].id;
            e.dst = object_nodes[j].id;
            e.kind = EdgeKind::SIMILARITY;
            e.weight = sim;
            kept.push_back(std::move(e));
        }
        if (kept.empty()) continue;  // unlinked code nodes stay out of the graph
        out.nodes.push_back(cand.nodes[i]);
        out.edges.insert(out.edges.end(), kept.begin(), kept.end());
    }
    return out;
}

namespace {

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

KnowledgeGraph prune(const KnowledgeGraph& graph, int min_component_size) {
    if (min_component_size < 0)
        throw std::invalid_argument("min_component_size must be non-negative");

    const int n = static_cast<int>(graph.nodes.size());
    std::unordered_map<std::string, int> index;
    index.reserve(graph.nodes.size());
    for (int i = 0; i < n; ++i) index[graph.nodes[i].id] = i;

    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    for (const KGEdge& e : graph.edges) {
        int a = find_root(parent, index.at(e.src));
        int b = find_root(parent, index.at(e.dst));
        if (a != b) parent[a] = b;
    }

    std::vector<int> component_size(n, 0);
    for (int i = 0; i < n; ++i) ++component_size[find_root(parent, i)];

    KnowledgeGraph out;
    out.params = graph.params;
    std::unordered_set<std::string> kept_ids;
    for (int i = 0; i < n; ++i) {
        if (component_size[find_root(parent, i)] <= min_component_size) continue;
        kept_ids.insert(graph.nodes[i].id);
        out.nodes.push_back(graph.nodes[i]);
    }
    for (const KGEdge& e : graph.edges)
        if (kept_ids.count(e.src) > 0 && kept_ids.count(e.dst) > 0) out.edges.push_back(e);
    return out;
}

GraphAssembler::GraphAssembler(const std::vector<CorpusInput>& corpora, const VectorStore& store,
                               const BuildParams& params)
    : params_(params) {
    validate_params(params_);
    if (corpora.empty()) throw std::runtime_error("no corpora to build from");

    std::unordered_set<std::string> ids;
    std::size_t total_triples = 0;
    for (const CorpusInput& c : corpora) {
        if (c.corpus_id.empty()) throw std::runtime_error("corpus with empty corpus_id");
        if (!ids.insert(c.corpus_id).second)
            throw std::runtime_error("duplicate corpus_id '" + c.corpus_id + "'");
        corpus_ids_.push_back(c.corpus_id);
        total_triples += c.triples.size();
    }
    if (total_triples == 0) throw std::runtime_error("no triples in any corpus");

    for (const CorpusInput& c : corpora) {
        if (c.triples.empty()) continue;  // code-only corpus: entities still attach below
        SubjectClusters sc = cluster_subjects(c.triples, store, params_.umap,
                                              params_.eps_subject, params_.min_pts, c.corpus_id);
        ObjectClusters oc =
            cluster_objects(c.triples, store, params_.eps_object, params_.min_pts, c.corpus_id);
        std::vector<KGEdge> edges = link_concepts(sc.phrase_to_node, oc.phrase_to_node, c.triples);
        verb_edges_.insert(verb_edges_.end(), edges.begin(), edges.end());

        for (const KGNode& node : sc.nodes) base_nodes_.push_back(node);
        for (const KGNode& node : oc.nodes) {
            object_node_index_.push_back(static_cast<int>(base_nodes_.size()));
            base_nodes_.push_back(node);
        }
        clustered_corpus_ids_.push_back(c.corpus_id);
        subjects_.push_back(std::move(sc));
        objects_.push_back(std::move(oc));
    }

    // code entities attach to object nodes across every corpus
    std::vector<KGNode> object_subset;
    object_subset.reserve(object_node_index_.size());
    for (int idx : object_node_index_) object_subset.push_back(base_nodes_[idx]);
    std::vector<CodeEntity> all_entities;
    for (const CorpusInput& c : corpora)
        all_entities.insert(all_entities.end(), c.entities.begin(), c.entities.end());
    code_ = code_candidates(object_subset, all_entities, store);
}

KnowledgeGraph GraphAssembler::assemble(double tau) const {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must be in [0, 1]");
    KnowledgeGraph g;
    g.params = params_;
    g.params.tau = tau;
    g.nodes = base_nodes_;
    g.edges = verb_edges_;
    for (std::size_t i = 0; i < code_.nodes.size(); ++i) {
        std::vector<KGEdge> kept;
        for (const auto& [j, sim] : code_.links[i]) {
            if (sim < tau) continue;
            KGEdge e;
            e.src = code_.nodes[i].id;
            e.dst = base_nodes_[object_node_index_[j]].id;
            e.kind = EdgeKind::SIMILARITY;
            e.weight = sim;
            kept.push_back(std::move(e));
        }
        if (kept.empty()) continue;
        g.nodes.push_back(code_.nodes[i]);
        g.edges.insert(g.edges.end(), kept.begin(), kept.end());
    }
    return prune(g, params_.min_component_size);
}

KnowledgeGraph build(const std::vector<CorpusInput>& corpora, const VectorStore& store,
                     const BuildParams& params) {
    return GraphAssembler(corpora, store, params).assemble(params.tau);
}

}  // namespace weaver
