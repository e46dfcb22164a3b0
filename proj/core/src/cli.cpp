#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"

#include "weaver/cli.hpp"
#include "weaver/corpus.hpp"
#include "weaver/evaluate.hpp"
#include "weaver/export.hpp"

namespace weaver {

namespace fs = std::filesystem;

namespace {

struct ExtractedCorpus {
    CorpusInput input;
    std::vector<CleanSentence> sentences;
    int documents = 0;
};

std::vector<ExtractedCorpus> extract_corpora(const PipelineConfig& config) {
    std::vector<ExtractedCorpus> out;
    for (const CorpusSpec& spec : config.corpora) {
        ExtractedCorpus ec;
        ec.input.corpus_id = spec.corpus_id;
        try {
            if (!spec.text_root.empty()) {
                auto docs = load_corpus(config.resolve(spec.text_root), spec.corpus_id);
                ec.documents = static_cast<int>(docs.size());
                for (const RawDocument& doc : docs) {
                    auto sentences = split_sentences(clean_text(doc.text), doc.doc_id,
                                                     spec.corpus_id);
                    ec.sentences.insert(ec.sentences.end(), sentences.begin(), sentences.end());
                }
                ec.input.triples = extract_triples(ec.sentences);
            }
            if (!spec.code_root.empty())
                ec.input.entities =
                    extract_directory(config.resolve(spec.code_root).generic_string(),
                                      spec.corpus_id, spec.code_glob);
        } catch (const std::exception& e) {
            throw std::runtime_error("corpus '" + spec.corpus_id + "': " + e.what());
        }
        out.push_back(std::move(ec));
    }
    return out;
}

std::vector<CorpusInput> corpus_inputs(std::vector<ExtractedCorpus> extracted) {
    std::vector<CorpusInput> inputs;
    inputs.reserve(extracted.size());
    for (ExtractedCorpus& ec : extracted) inputs.push_back(std::move(ec.input));
    return inputs;
}

// Binary mode keeps outputs byte-identical across platforms.
std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + dir.generic_string() + ": " +
                                 ec.message());
    fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.generic_string());
    return out;
}

OutputStamp make_stamp(const PipelineConfig& config) {
    return OutputStamp{config_hash(config), config.seed};
}

GraphAssembler make_assembler(const PipelineConfig& config, const VectorStore& store) {
    return GraphAssembler(corpus_inputs(extract_corpora(config)), store, config.build);
}

std::uint64_t parse_env_seed(const char* text) {
    errno = 0;
    char* end = nullptr;
    unsigned long long value = std::strtoull(text, &end, 10);
    if (errno != 0 || end == text || *end != '\0' || text[0] == '-')
        throw std::runtime_error(
            std::string("CONCEPT_WEAVER_SEED must be a non-negative integer, got '") + text + "'");
    return value;
}

std::vector<double> parse_thresholds(const std::string& arg) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= arg.size()) {
        std::size_t comma = arg.find(',', start);
        std::string piece = arg.substr(start, comma == std::string::npos ? std::string::npos
                                                                         : comma - start);
        std::size_t consumed = 0;
        double value = 0.0;
        try {
            value = std::stod(piece, &consumed);
        } catch (const std::exception&) {
            consumed = std::string::npos;  // flag as bad below
        }
        if (consumed != piece.size() || piece.empty())
            throw std::runtime_error("bad threshold '" + piece + "' in --thresholds");
        out.push_back(value);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::runtime_error("--thresholds must list at least one value");
    return out;
}

}  // namespace

PipelineConfig finalize(PipelineConfig config) {
    config.build.umap.seed = config.seed;
    return config;
}

std::vector<double> default_thresholds() {
    std::vector<double> out;
    for (int i = 0; i <= 10; ++i) out.push_back(i / 10.0);
    return out;
}

void cmd_extract(const PipelineConfig& config, std::ostream& out) {
    OutputStamp stamp = make_stamp(config);
    fs::path dir(config.output_dir);
    for (const ExtractedCorpus& ec : extract_corpora(config)) {
        const std::string& id = ec.input.corpus_id;
        auto sentences_file = open_output(dir, "sentences_" + id + ".jsonl");
        write_jsonl_meta(sentences_file, stamp);
        export_sentences(sentences_file, ec.sentences);

        auto triples_file = open_output(dir, "triples_" + id + ".jsonl");
        write_jsonl_meta(triples_file, stamp);
        export_triples(triples_file, ec.input.triples);

        auto entities_file = open_output(dir, "entities_" + id + ".jsonl");
        write_jsonl_meta(entities_file, stamp);
        export_entities(entities_file, ec.input.entities);

        out << "corpus " << id << ": " << ec.documents << " documents, " << ec.sentences.size()
            << " sentences, " << ec.input.triples.size() << " triples, "
            << ec.input.entities.size() << " entities\n";
    }
}

void cmd_build(const PipelineConfig& config, std::ostream& out) {
    OutputStamp stamp = make_stamp(config);
    fs::path dir(config.output_dir);
    VectorStore store = VectorStore::load(config.resolve(config.vectors_path));
    KnowledgeGraph graph = build(corpus_inputs(extract_corpora(config)), store, config.build);

    auto graphml = open_output(dir, "graph.graphml");
    write_graphml(graphml, graph, stamp);
    auto dot = open_output(dir, "graph.dot");
    write_dot(dot, graph, stamp);
    auto json_file = open_output(dir, "graph.json");
    write_graph_json(json_file, graph, stamp);

    int concepts = 0, objects = 0, code = 0, verb = 0, similarity = 0;
    for (const KGNode& n : graph.nodes) {
        if (n.kind == NodeKind::CONCEPT) ++concepts;
        if (n.kind == NodeKind::OBJECT) ++objects;
        if (n.kind == NodeKind::CODE) ++code;
    }
    for (const KGEdge& e : graph.edges) (e.kind == EdgeKind::VERB ? verb : similarity)++;
    out << "graph: " << graph.nodes.size() << " nodes (" << concepts << " concept, " << objects
        << " object, " << code << " code), " << graph.edges.size() << " edges (" << verb
        << " verb, " << similarity << " similarity)\n"
        << "wrote graph.graphml, graph.dot, graph.json under " << dir.generic_string() << '\n';
}

void cmd_sweep(const PipelineConfig& config, const std::vector<double>& thresholds,
               const std::string& labels_path, std::ostream& out) {
    OutputStamp stamp = make_stamp(config);
    fs::path dir(config.output_dir);
    LabeledEdgeSet labels = load_labels(labels_path);
    VectorStore store = VectorStore::load(config.resolve(config.vectors_path));
    GraphAssembler assembler = make_assembler(config, store);
    std::vector<PRPoint> points = sweep(assembler, labels, thresholds);

    auto csv = open_output(dir, "pr_sweep.csv");
    write_pr_csv(csv, points, stamp);
    out << "wrote pr_sweep.csv under " << dir.generic_string() << " (" << points.size()
        << " thresholds)\n";
    if (auto cross = crossing_interval(points))
        out << "precision meets recall within thresholds [" << format_double(cross->first) << ", "
            << format_double(cross->second) << "]\n";
    else
        out << "precision and recall do not cross in the swept range\n";
}

void cmd_conductance(const PipelineConfig& config, const std::vector<double>& thresholds,
                     std::ostream& out) {
    OutputStamp stamp = make_stamp(config);
    fs::path dir(config.output_dir);
    VectorStore store = VectorStore::load(config.resolve(config.vectors_path));
    GraphAssembler assembler = make_assembler(config, store);
    const std::string& side = config.corpora.front().corpus_id;
    auto reports = conductance_sweep(assembler, side, thresholds);

    auto csv = open_output(dir, "conductance_sweep.csv");
    write_conductance_csv(csv, reports, stamp);
    out << "wrote conductance_sweep.csv under " << dir.generic_string() << " ("
        << reports.size() << " thresholds, S = corpus '" << side << "')\n";
}

void cmd_export(const PipelineConfig& config, std::ostream& out) {
    OutputStamp stamp = make_stamp(config);
    fs::path dir(config.output_dir);
    VectorStore store = VectorStore::load(config.resolve(config.vectors_path));
    GraphAssembler assembler = make_assembler(config, store);

    const auto& ids = assembler.clustered_corpus_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const SubjectClusters& subjects = assembler.subject_clusters()[i];
        const ObjectClusters& objects = assembler.object_clusters()[i];

        auto layout_csv = open_output(dir, "subjects_layout_" + ids[i] + ".csv");
        write_layout_csv(layout_csv, subjects.phrases, subjects.layout, stamp);
        auto subject_csv = open_output(dir, "subjects_assignment_" + ids[i] + ".csv");
        write_assignment_csv(subject_csv, subjects.phrases, subjects.assignment, stamp);
        auto object_csv = open_output(dir, "objects_assignment_" + ids[i] + ".csv");
        write_assignment_csv(object_csv, objects.phrases, objects.assignment, stamp);

        out << "corpus " << ids[i] << ": " << subjects.phrases.size() << " subject points, "
            << objects.phrases.size() << " object points\n";
    }
    out << "wrote layout and assignment CSVs under " << dir.generic_string() << '\n';
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"builds a knowledge graph linking prose concepts to code identifiers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string labels_path;
    std::string thresholds_arg;
    double tau = 0.0, eps_subject = 0.0, eps_object = 0.0;
    int min_pts = 0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool tunable) {
        cmd->add_option("--config", config_path, "pipeline config JSON")->required();
        cmd->add_option("--out", out_dir, "output directory (overrides the config)");
        cmd->add_option("--seed", seed, "RNG seed (overrides config and CONCEPT_WEAVER_SEED)");
        if (tunable) {
            cmd->add_option("--tau", tau, "code-object similarity threshold");
            cmd->add_option("--eps-subject", eps_subject, "subject DBSCAN radius (UMAP space)");
            cmd->add_option("--eps-object", eps_object, "object DBSCAN radius (cosine distance)");
            cmd->add_option("--min-pts", min_pts, "DBSCAN core-point threshold");
        }
    };

    CLI::App* extract_cmd =
        app.add_subcommand("extract", "write sentence, triple, and code-entity JSONL per corpus");
    add_common(extract_cmd, false);
    CLI::App* build_cmd =
        app.add_subcommand("build", "build the graph; write GraphML, DOT, and JSON");
    add_common(build_cmd, true);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "precision/recall against labels across thresholds");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--labels", labels_path, "ground-truth JSONL {code_name, object_label}")
        ->required();
    sweep_cmd->add_option("--thresholds", thresholds_arg, "comma-separated ascending list");
    CLI::App* conductance_cmd = app.add_subcommand(
        "conductance", "cut quality between the first corpus and the rest, across thresholds");
    add_common(conductance_cmd, true);
    conductance_cmd->add_option("--thresholds", thresholds_arg, "comma-separated ascending list");
    CLI::App* export_cmd =
        app.add_subcommand("export", "write subject layout and cluster assignment CSVs");
    add_common(export_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        auto flag_given = [&](const std::string& name) {
            const CLI::Option* opt = cmd->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };

        LoadedConfig loaded = load_config(config_path);
        PipelineConfig config = loaded.config;
        if (flag_given("--seed"))
            config.seed = seed;
        else if (!loaded.has_seed)
            if (const char* env = std::getenv("CONCEPT_WEAVER_SEED")) config.seed = parse_env_seed(env);
        if (flag_given("--out")) config.output_dir = out_dir;
        if (flag_given("--tau")) config.build.tau = tau;
        if (flag_given("--eps-subject")) config.build.eps_subject = eps_subject;
        if (flag_given("--eps-object")) config.build.eps_object = eps_object;
        if (flag_given("--min-pts")) config.build.min_pts = min_pts;
        validate_params(config.build);
        config = finalize(config);

        std::vector<double> thresholds = default_thresholds();
        if (flag_given("--thresholds")) thresholds = parse_thresholds(thresholds_arg);

        if (cmd == extract_cmd)
            cmd_extract(config, std::cout);
        else if (cmd == build_cmd)
            cmd_build(config, std::cout);
        else if (cmd == sweep_cmd)
            cmd_sweep(config, thresholds, labels_path, std::cout);
        else if (cmd == conductance_cmd)
            cmd_conductance(config, thresholds, std::cout);
        else
            cmd_export(config, std::cout);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace weaver
