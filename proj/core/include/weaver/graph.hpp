#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "weaver/code_entities.hpp"
#include "weaver/dbscan.hpp"
#include "weaver/embeddings.hpp"
#include "weaver/triples.hpp"
#include "weaver/umap.hpp"

namespace weaver {

enum class NodeKind { CONCEPT, OBJECT, CODE };
enum class EdgeKind { VERB, SIMILARITY };

const char* node_kind_name(NodeKind kind);
NodeKind node_kind_from_name(const std::string& name);
const char* edge_kind_name(EdgeKind kind);
EdgeKind edge_kind_from_name(const std::string& name);

struct KGNode {
    std::string id;
    NodeKind kind = NodeKind::OBJECT;
    std::string label;                 // representative phrase / identifier
    std::vector<std::string> members;  // merged phrases; token list for CODE
    std::string corpus_id;
    EmbeddingVector vector;            // label embedding (token mean for CODE)

    bool operator==(const KGNode&) const = default;
};

struct KGEdge {
    std::string src;
    std::string dst;
    EdgeKind kind = EdgeKind::VERB;
    std::string label;    // verb for VERB edges, empty for SIMILARITY
    double weight = 1.0;  // VERB: collapsed multiplicity; SIMILARITY: cosine

    bool operator==(const KGEdge&) const = default;
};

struct BuildParams {
    double eps_subject = 0.30;   // DBSCAN radius in UMAP space
    double eps_object = 0.10;    // DBSCAN radius in raw space (cosine distance)
    int min_pts = 3;
    double tau = 0.70;           // code-object similarity threshold
    UmapParams umap;
    int min_component_size = 5;  // components this small are pruned
};

// Throws std::invalid_argument on out-of-range parameters (tau outside
// [0,1], non-positive eps, min_pts < 1, negative min_component_size).
void validate_params(const BuildParams& params);

struct KnowledgeGraph {
    std::vector<KGNode> nodes;
    std::vector<KGEdge> edges;
    BuildParams params;

    const KGNode* find_node(const std::string& id) const;
};

// Subject clustering result: CONCEPT nodes plus the intermediates (UMAP
// layout, DBSCAN assignment) used to produce them.
struct SubjectClusters {
    std::vector<KGNode> nodes;
    std::unordered_map<std::string, std::string> phrase_to_node;
    std::vector<std::string> phrases;  // deduplicated embeddable subjects
    LowDimLayout layout;               // UMAP coordinates, one row per phrase
    ClusterAssignment assignment;      // noise-labeled phrases join no node
};

// Object clustering result: one OBJECT node per cluster plus one per noise
// point (noise is kept as singletons).
struct ObjectClusters {
    std::vector<KGNode> nodes;
    std::unordered_map<std::string, std::string> phrase_to_node;
    std::vector<std::string> phrases;
    ClusterAssignment assignment;
};

// Clusters distinct subject phrases: embed, reduce with UMAP, DBSCAN in the
// reduced space (Euclidean), drop noise, one CONCEPT node per cluster. The
// node label is the member closest (cosine, original space) to the cluster's
// original-space centroid. Throws when no subject phrase is embeddable.
SubjectClusters cluster_subjects(const std::vector<Triple>& triples, const VectorStore& store,
                                 const UmapParams& umap_params, double eps_subject, int min_pts,
                                 const std::string& corpus_id);

// Clusters distinct object phrases with DBSCAN in raw embedding space
// (cosine distance); noise points become singleton OBJECT nodes. Throws when
// no object phrase is embeddable.
ObjectClusters cluster_objects(const std::vector<Triple>& triples, const VectorStore& store,
                               double eps_object, int min_pts, const std::string& corpus_id);

// One VERB edge per distinct (concept, object, verb) with the number of
// collapsed duplicate triples recorded in the weight. Triples whose subject
// fell to noise or whose object has no node contribute nothing.
std::vector<KGEdge> link_concepts(const std::unordered_map<std::string, std::string>& concept_map,
                                  const std::unordered_map<std::string, std::string>& object_map,
                                  const std::vector<Triple>& triples);

// CODE nodes (one per distinct corpus/kind/name) with every object node they
// could link to, unthresholded, for threshold reuse across sweeps. links[i]
// holds (index into object_nodes, cosine similarity) pairs for nodes[i].
struct CodeCandidates {
    std::vector<KGNode> nodes;
    std::vector<std::vector<std::pair<int, double>>> links;
};
CodeCandidates code_candidates(const std::vector<KGNode>& object_nodes,
                               const std::vector<CodeEntity>& entities,
                               const VectorStore& store);

// CODE->OBJECT SIMILARITY edges with cosine similarity >= tau; code nodes
// with no surviving edge are omitted. Throws on tau outside [0,1].
struct CodeAttachment {
    std::vector<KGNode> nodes;
    std::vector<KGEdge> edges;
};
CodeAttachment attach_code(const std::vector<KGNode>& object_nodes,
                           const std::vector<CodeEntity>& entities, const VectorStore& store,
                           double tau);

// Removes every weakly connected component of min_component_size nodes or
// fewer (edge direction ignored).
KnowledgeGraph prune(const KnowledgeGraph& graph, int min_component_size);

// One corpus worth of extracted inputs.
struct CorpusInput {
    std::string corpus_id;
    std::vector<Triple> triples;
    std::vector<CodeEntity> entities;
};

// Runs clustering and the code-object similarity computation once, then
// assembles a graph at any threshold; sweeps reuse the cached state.
class GraphAssembler {
  public:
    GraphAssembler(const std::vector<CorpusInput>& corpora, const VectorStore& store,
                   const BuildParams& params);

    // Threshold-filtered, pruned graph; build_params records the tau used.
    KnowledgeGraph assemble(double tau) const;
    KnowledgeGraph assemble() const { return assemble(params_.tau); }

    const BuildParams& params() const { return params_; }
    const std::vector<std::string>& corpus_ids() const { return corpus_ids_; }
    // Per-corpus clustering detail, in corpus order; corpora without triples
    // are skipped (their ids are absent from clustered_corpus_ids).
    const std::vector<std::string>& clustered_corpus_ids() const { return clustered_corpus_ids_; }
    const std::vector<SubjectClusters>& subject_clusters() const { return subjects_; }
    const std::vector<ObjectClusters>& object_clusters() const { return objects_; }

  private:
    BuildParams params_;
    std::vector<std::string> corpus_ids_;
    std::vector<std::string> clustered_corpus_ids_;
    std::vector<SubjectClusters> subjects_;
    std::vector<ObjectClusters> objects_;
    std::vector<KGNode> base_nodes_;  // concepts then objects, corpus order
    std::vector<KGEdge> verb_edges_;
    CodeCandidates code_;             // links index into the object subset
    std::vector<int> object_node_index_;  // object subset -> base_nodes_ index
};

// cluster_subjects -> cluster_objects -> link_concepts -> attach_code ->
// prune, per corpus, stamped with corpus ids. Throws when corpora is empty
// or no corpus has triples.
KnowledgeGraph build(const std::vector<CorpusInput>& corpora, const VectorStore& store,
                     const BuildParams& params);

}  // namespace weaver
