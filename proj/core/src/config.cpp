#include <cctype>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#include "weaver/config.hpp"

namespace weaver {

namespace fs = std::filesystem;

namespace {

using nlohmann::json;

bool valid_corpus_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known)
            if (key == k) found = true;
        if (!found) throw std::runtime_error(where + ": unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number())
        throw std::runtime_error(where + ": '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const char* key, int fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number_integer())
        throw std::runtime_error(where + ": '" + key + "' must be an integer");
    return obj.at(key).get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback,
                       const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string())
        throw std::runtime_error(where + ": '" + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

}  // namespace

fs::path PipelineConfig::resolve(const std::string& path) const {
    fs::path p(path);
    if (p.is_absolute()) return p;
    return base_dir / p;
}

LoadedConfig parse_config(std::istream& in, const std::string& origin,
                          const fs::path& base_dir) {
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw std::runtime_error(origin + ": malformed JSON");
    if (!doc.is_object()) throw std::runtime_error(origin + ": config must be a JSON object");
    reject_unknown_keys(doc, {"corpora", "vectors_path", "build", "seed", "output_dir"}, origin);

    LoadedConfig loaded;
    PipelineConfig& config = loaded.config;
    config.base_dir = base_dir;

    if (!doc.contains("corpora") || !doc.at("corpora").is_array() || doc.at("corpora").empty())
        throw std::runtime_error(origin + ": 'corpora' must be a non-empty array");
    std::unordered_set<std::string> seen_ids;
    for (std::size_t i = 0; i < doc.at("corpora").size(); ++i) {
        const json& entry = doc.at("corpora")[i];
        std::string where = origin + ": corpora[" + std::to_string(i) + "]";
        if (!entry.is_object()) throw std::runtime_error(where + ": must be an object");
        reject_unknown_keys(entry, {"corpus_id", "text_root", "code_root", "code_glob"}, where);
        CorpusSpec spec;
        spec.corpus_id = get_string(entry, "corpus_id", "", where);
        if (!valid_corpus_id(spec.corpus_id))
            throw std::runtime_error(where +
                                     ": 'corpus_id' must be non-empty [A-Za-z0-9_.-] characters");
        if (!seen_ids.insert(spec.corpus_id).second)
            throw std::runtime_error(where + ": duplicate corpus_id '" + spec.corpus_id + "'");
        spec.text_root = get_string(entry, "text_root", "", where);
        spec.code_root = get_string(entry, "code_root", "", where);
        spec.code_glob = get_string(entry, "code_glob", "*.jl", where);
        if (spec.text_root.empty() && spec.code_root.empty())
            throw std::runtime_error(where + ": corpus '" + spec.corpus_id +
                                     "' needs a text_root or a code_root");
        if (spec.code_glob.empty())
            throw std::runtime_error(where + ": 'code_glob' must be non-empty");
        config.corpora.push_back(std::move(spec));
    }

    config.vectors_path = get_string(doc, "vectors_path", "", origin);
    if (config.vectors_path.empty())
        throw std::runtime_error(origin + ": 'vectors_path' is required");

    if (doc.contains("build")) {
        const json& b = doc.at("build");
        std::string where = origin + ": build";
        if (!b.is_object()) throw std::runtime_error(where + ": must be an object");
        reject_unknown_keys(
            b, {"eps_subject", "eps_object", "min_pts", "tau", "min_component_size", "umap"},
            where);
        config.build.eps_subject = get_number(b, "eps_subject", config.build.eps_subject, where);
        config.build.eps_object = get_number(b, "eps_object", config.build.eps_object, where);
        config.build.min_pts = get_int(b, "min_pts", config.build.min_pts, where);
        config.build.tau = get_number(b, "tau", config.build.tau, where);
        config.build.min_component_size =
            get_int(b, "min_component_size", config.build.min_component_size, where);
        if (b.contains("umap")) {
            const json& u = b.at("umap");
            std::string uwhere = where + ".umap";
            if (!u.is_object()) throw std::runtime_error(uwhere + ": must be an object");
            reject_unknown_keys(u, {"k", "n_components", "min_dist", "n_epochs"}, uwhere);
            config.build.umap.k = get_int(u, "k", config.build.umap.k, uwhere);
            config.build.umap.n_components =
                get_int(u, "n_components", config.build.umap.n_components, uwhere);
            config.build.umap.min_dist =
                get_number(u, "min_dist", config.build.umap.min_dist, uwhere);
            config.build.umap.n_epochs = get_int(u, "n_epochs", config.build.umap.n_epochs, uwhere);
        }
    }

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned())
            throw std::runtime_error(origin + ": 'seed' must be a non-negative integer");
        config.seed = doc.at("seed").get<std::uint64_t>();
        loaded.has_seed = true;
    }
    config.output_dir = get_string(doc, "output_dir", config.output_dir, origin);

    try {
        validate_params(config.build);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(origin + ": " + e.what());
    }
    return loaded;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    fs::path dir = fs::path(path).parent_path();
    if (dir.empty()) dir = ".";
    LoadedConfig loaded = parse_config(in, path, dir);
    validate_config_paths(loaded.config);
    return loaded;
}

void validate_config_paths(const PipelineConfig& config) {
    for (const CorpusSpec& spec : config.corpora) {
        if (!spec.text_root.empty() && !fs::is_directory(config.resolve(spec.text_root)))
            throw std::runtime_error("corpus '" + spec.corpus_id + "': text_root is not a directory: " +
                                     config.resolve(spec.text_root).generic_string());
        if (!spec.code_root.empty() && !fs::is_directory(config.resolve(spec.code_root)))
            throw std::runtime_error("corpus '" + spec.corpus_id + "': code_root is not a directory: " +
                                     config.resolve(spec.code_root).generic_string());
    }
    if (!fs::is_regular_file(config.resolve(config.vectors_path)))
        throw std::runtime_error("vectors_path is not a file: " +
                                 config.resolve(config.vectors_path).generic_string());
}

std::string canonical_config_json(const PipelineConfig& config) {
    json doc;
    doc["corpora"] = json::array();
    for (const CorpusSpec& spec : config.corpora) {
        json entry;
        entry["corpus_id"] = spec.corpus_id;
        entry["text_root"] = spec.text_root;
        entry["code_root"] = spec.code_root;
        entry["code_glob"] = spec.code_glob;
        doc["corpora"].push_back(std::move(entry));
    }
    doc["vectors_path"] = config.vectors_path;
    json u;
    u["k"] = config.build.umap.k;
    u["n_components"] = config.build.umap.n_components;
    u["min_dist"] = config.build.umap.min_dist;
    u["n_epochs"] = config.build.umap.n_epochs;
    u["seed"] = config.build.umap.seed;
    u["metric"] = metric_name(config.build.umap.metric);
    json b;
    b["eps_subject"] = config.build.eps_subject;
    b["eps_object"] = config.build.eps_object;
    b["min_pts"] = config.build.min_pts;
    b["tau"] = config.build.tau;
    b["min_component_size"] = config.build.min_component_size;
    b["umap"] = std::move(u);
    doc["build"] = std::move(b);
    doc["seed"] = config.seed;
    return doc.dump();  // nlohmann objects iterate in sorted key order
}

std::string config_hash(const PipelineConfig& config) {
    std::string canonical = canonical_config_json(config);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char byte : canonical) {
        h ^= byte;
        h *= 1099511628211ULL;
    }
    static const char* kHex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = kHex[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace weaver
