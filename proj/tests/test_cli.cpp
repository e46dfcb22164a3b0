#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "weaver/cli.hpp"

using namespace weaver;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// Invokes the CLI in-process with stdout/stderr captured; checks run after
// the capture is restored so test diagnostics stay visible.
RunResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "weaver");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());

    std::ostringstream out_buf, err_buf;
    std::streambuf* old_out = std::cout.rdbuf(out_buf.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err_buf.rdbuf());
    RunResult result;
    result.exit_code = run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    result.out = out_buf.str();
    result.err = err_buf.str();
    return result;
}

std::string config_a() {
    return (support::fixture_dir() / "corpus_a" / "config.json").string();
}
std::string config_b() {
    return (support::fixture_dir() / "corpus_b" / "config.json").string();
}
std::string labels_a() {
    return (support::fixture_dir() / "corpus_a" / "labels.jsonl").string();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

// Restores (or re-clears) an environment variable on scope exit.
class EnvGuard {
  public:
    explicit EnvGuard(const char* name) : name_(name) {
        if (const char* v = std::getenv(name)) old_ = v;
    }
    ~EnvGuard() {
        if (old_)
            ::setenv(name_.c_str(), old_->c_str(), 1);
        else
            ::unsetenv(name_.c_str());
    }
    void set(const std::string& value) { ::setenv(name_.c_str(), value.c_str(), 1); }
    void clear() { ::unsetenv(name_.c_str()); }

  private:
    std::string name_;
    std::optional<std::string> old_;
};

// A copy of the reference corpus config with no "seed" key, pointing at the
// fixture tree through absolute paths so it can live anywhere.
std::string write_seedless_config(const support::TempDir& tmp) {
    auto fixture = support::fixture_dir() / "corpus_a";
    nlohmann::json corpus;
    corpus["corpus_id"] = "epi";
    corpus["text_root"] = (fixture / "docs").string();
    corpus["code_root"] = (fixture / "code").string();
    nlohmann::json doc;
    doc["corpora"] = nlohmann::json::array({corpus});
    doc["vectors_path"] = (fixture / "vectors.txt").string();
    doc["build"] = {{"eps_subject", 0.30},
                    {"eps_object", 0.10},
                    {"min_pts", 3},
                    {"tau", 0.70},
                    {"min_component_size", 5},
                    {"umap", {{"k", 2}, {"n_components", 2}, {"min_dist", 0.05}, {"n_epochs", 200}}}};
    auto path = tmp / "seedless.json";
    support::spit(path, doc.dump(2) + "\n");
    return path.string();
}

nlohmann::json read_graph_json(const fs::path& dir) {
    return nlohmann::json::parse(support::slurp(dir / "graph.json"));
}

}  // namespace

TEST_CASE("argument errors exit nonzero without running") {
    CHECK(run({}).exit_code != 0);
    CHECK(run({"frobnicate"}).exit_code != 0);
    CHECK(run({"build"}).exit_code != 0);  // --config is required
    CHECK(run({"sweep", "--config", config_a()}).exit_code != 0);  // --labels is required
    CHECK(run({"build", "--config", config_a(), "--seed", "banana"}).exit_code != 0);
    // extract takes no tuning flags
    CHECK(run({"extract", "--config", config_a(), "--tau", "0.5"}).exit_code != 0);
}

TEST_CASE("help exits zero") {
    auto r = run({"--help"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("extract") != std::string::npos);
}

TEST_CASE("a missing config file is a single diagnostic line") {
    auto r = run({"build", "--config", "/no/such/config.json"});
    CHECK(r.exit_code == 1);
    CHECK(r.err.substr(0, 7) == "error: ");
    CHECK(line_count(r.err) == 1);
}

TEST_CASE("a dangling corpus root is reported by corpus id") {
    support::TempDir tmp;
    support::spit(tmp / "vectors.txt", "w 1 0\n");
    nlohmann::json doc;
    doc["corpora"] = nlohmann::json::array(
        {{{"corpus_id", "ghost"}, {"text_root", (tmp / "absent").string()}}});
    doc["vectors_path"] = (tmp / "vectors.txt").string();
    support::spit(tmp / "config.json", doc.dump() + "\n");

    auto r = run({"extract", "--config", (tmp / "config.json").string()});
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("ghost") != std::string::npos);
}

TEST_CASE("extract writes stamped JSONL per corpus") {
    support::TempDir tmp;
    auto out_dir = tmp / "out";
    auto r = run({"extract", "--config", config_a(), "--out", out_dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "corpus epi: 3 documents, 24 sentences, 24 triples, 10 entities\n");

    for (const char* name : {"sentences_epi.jsonl", "triples_epi.jsonl", "entities_epi.jsonl"}) {
        CAPTURE(name);
        REQUIRE(fs::is_regular_file(out_dir / name));
        std::string text = support::slurp(out_dir / name);
        auto first = nlohmann::json::parse(text.substr(0, text.find('\n')));
        CHECK(first.at("config_hash") == "29cf92a381598a3d");
        CHECK(first.at("seed") == 42);
    }
    CHECK(line_count(support::slurp(out_dir / "sentences_epi.jsonl")) == 25);
    CHECK(line_count(support::slurp(out_dir / "triples_epi.jsonl")) == 25);
    CHECK(line_count(support::slurp(out_dir / "entities_epi.jsonl")) == 11);

    // Re-running into a fresh directory reproduces the bytes.
    auto again = tmp / "again";
    REQUIRE(run({"extract", "--config", config_a(), "--out", again.string()}).exit_code == 0);
    for (const char* name : {"sentences_epi.jsonl", "triples_epi.jsonl", "entities_epi.jsonl"})
        CHECK(support::slurp(out_dir / name) == support::slurp(again / name));
}

TEST_CASE("build reproduces the reference graph and its stamp") {
    support::TempDir tmp;
    auto out_dir = tmp / "out";
    auto r = run({"build", "--config", config_a(), "--out", out_dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("graph: 8 nodes (2 concept, 3 object, 3 code), "
                     "8 edges (5 verb, 3 similarity)\n") != std::string::npos);
    CHECK(r.out.find("wrote graph.graphml, graph.dot, graph.json under ") != std::string::npos);

    REQUIRE(fs::is_regular_file(out_dir / "graph.graphml"));
    REQUIRE(fs::is_regular_file(out_dir / "graph.dot"));
    auto doc = read_graph_json(out_dir);
    CHECK(doc.at("config_hash") == "29cf92a381598a3d");
    CHECK(doc.at("seed") == 42);
    CHECK(doc.at("nodes").size() == 8);
    CHECK(doc.at("edges").size() == 8);

    auto again = tmp / "again";
    REQUIRE(run({"build", "--config", config_a(), "--out", again.string()}).exit_code == 0);
    CHECK(support::slurp(out_dir / "graph.json") == support::slurp(again / "graph.json"));
    CHECK(support::slurp(out_dir / "graph.graphml") == support::slurp(again / "graph.graphml"));
    CHECK(support::slurp(out_dir / "graph.dot") == support::slurp(again / "graph.dot"));
}

TEST_CASE("the tau flag overrides the config and restamps the output") {
    support::TempDir tmp;
    auto out_dir = tmp / "out";
    auto r = run({"build", "--config", config_a(), "--tau", "0.9", "--out", out_dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("graph: 6 nodes (2 concept, 3 object, 1 code), "
                     "6 edges (5 verb, 1 similarity)\n") != std::string::npos);
    auto doc = read_graph_json(out_dir);
    CHECK(doc.at("build_params").at("tau") == 0.9);
    CHECK(doc.at("config_hash") != "29cf92a381598a3d");
}

TEST_CASE("seed resolution prefers flag, then config, then environment") {
    support::TempDir tmp;
    EnvGuard env("CONCEPT_WEAVER_SEED");
    std::string seedless = write_seedless_config(tmp);

    SUBCASE("flag beats an explicit config seed") {
        auto dir = tmp / "flag";
        REQUIRE(run({"build", "--config", config_a(), "--seed", "7", "--out", dir.string()})
                    .exit_code == 0);
        CHECK(read_graph_json(dir).at("seed") == 7);
    }
    SUBCASE("config seed beats the environment") {
        env.set("9");
        auto dir = tmp / "cfg";
        REQUIRE(run({"build", "--config", config_a(), "--out", dir.string()}).exit_code == 0);
        CHECK(read_graph_json(dir).at("seed") == 42);
    }
    SUBCASE("environment fills in when the config is silent") {
        env.set("9");
        auto dir = tmp / "env";
        REQUIRE(run({"build", "--config", seedless, "--out", dir.string()}).exit_code == 0);
        CHECK(read_graph_json(dir).at("seed") == 9);
    }
    SUBCASE("flag beats the environment") {
        env.set("9");
        auto dir = tmp / "flagenv";
        REQUIRE(run({"build", "--config", seedless, "--seed", "7", "--out", dir.string()})
                    .exit_code == 0);
        CHECK(read_graph_json(dir).at("seed") == 7);
    }
    SUBCASE("everything absent defaults to zero") {
        env.clear();
        auto dir = tmp / "zero";
        REQUIRE(run({"build", "--config", seedless, "--out", dir.string()}).exit_code == 0);
        CHECK(read_graph_json(dir).at("seed") == 0);
    }
    SUBCASE("a malformed environment seed fails cleanly") {
        env.set("abc");
        auto dir = tmp / "bad";
        auto r = run({"build", "--config", seedless, "--out", dir.string()});
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("CONCEPT_WEAVER_SEED") != std::string::npos);
    }
}

TEST_CASE("sweep writes the precision/recall grid and names the crossing") {
    support::TempDir tmp;
    auto out_dir = tmp / "out";
    auto r = run({"sweep", "--config", config_a(), "--labels", labels_a(), "--out",
                  out_dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("wrote pr_sweep.csv under ") != std::string::npos);
    CHECK(r.out.find("(11 thresholds)") != std::string::npos);
    CHECK(r.out.find("precision meets recall within thresholds [0.7, 0.7]\n") !=
          std::string::npos);

    std::string csv = support::slurp(out_dir / "pr_sweep.csv");
    CHECK(line_count(csv) == 13);  // stamp + header + 11 rows
    CHECK(csv.find("\n0.7,3,0,0,1,1\n") != std::string::npos);
    CHECK(csv.find("\n1,0,0,3,,0\n") != std::string::npos);
}

TEST_CASE("sweep rejects malformed or unsorted threshold lists") {
    support::TempDir tmp;
    auto base = std::vector<std::string>{"sweep",    "--config", config_a(),
                                         "--labels", labels_a(), "--out",
                                         (tmp / "out").string(), "--thresholds"};
    auto bad = base;
    bad.push_back("0.5,abc");
    auto r = run(bad);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("bad threshold") != std::string::npos);

    auto unsorted = base;
    unsorted.push_back("0.5,0.2");
    CHECK(run(unsorted).exit_code == 1);

    auto out_of_range = base;
    out_of_range.push_back("0.5,1.2");
    CHECK(run(out_of_range).exit_code == 1);
}

TEST_CASE("sweep surfaces label-file errors") {
    support::TempDir tmp;
    support::spit(tmp / "labels.jsonl", "{\"code_name\": \"x\"}\n");
    auto r = run({"sweep", "--config", config_a(), "--labels", (tmp / "labels.jsonl").string(),
                  "--out", (tmp / "out").string()});
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("row 1") != std::string::npos);
}

TEST_CASE("conductance profiles the first corpus against the rest") {
    support::TempDir tmp;
    auto out_dir = tmp / "out";
    auto r = run({"conductance", "--config", config_b(), "--thresholds", "0,0.7,1.0", "--out",
                  out_dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("(3 thresholds, S = corpus 'epi')") != std::string::npos);

    std::string csv = support::slurp(out_dir / "conductance_sweep.csv");
    CHECK(line_count(csv) == 5);  // stamp + header + 3 rows
    CHECK(csv.find("\n0,10,58,0.1724137931034483,0.7857142857142857\n") != std::string::npos);
    CHECK(csv.find("\n0.7,0,14,0,0.75\n") != std::string::npos);
    CHECK(csv.find("\n1,0,8,0,0.6666666666666666\n") != std::string::npos);
}

TEST_CASE("export writes layouts and cluster assignments") {
    support::TempDir tmp;
    auto out_dir = tmp / "out";
    auto r = run({"export", "--config", config_a(), "--out", out_dir.string()});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("corpus epi: 24 subject points, 6 object points\n") != std::string::npos);
    CHECK(r.out.find("wrote layout and assignment CSVs under ") != std::string::npos);

    std::string layout = support::slurp(out_dir / "subjects_layout_epi.csv");
    CHECK(layout.find("point_id,x1,x2\n") != std::string::npos);
    CHECK(line_count(layout) == 26);  // stamp + header + 24 points

    std::string subjects = support::slurp(out_dir / "subjects_assignment_epi.csv");
    CHECK(line_count(subjects) == 26);
    CHECK(subjects.find("\nThe infection model,0\n") != std::string::npos);
    CHECK(subjects.find("\nAn infection model,0\n") != std::string::npos);
    CHECK(subjects.find("\nThe recovery rate,1\n") != std::string::npos);
    CHECK(subjects.find("\nThe epidemic,-1\n") != std::string::npos);
    CHECK(subjects.find("\nSimulation,-1\n") != std::string::npos);

    std::string objects = support::slurp(out_dir / "objects_assignment_epi.csv");
    CHECK(line_count(objects) == 8);
    CHECK(objects.find("\nthe epidemic,0\n") != std::string::npos);
    CHECK(objects.find("\nevery epidemic,0\n") != std::string::npos);
    CHECK(objects.find("\ninfection,-1\n") != std::string::npos);
    CHECK(objects.find("\nimmunity,-1\n") != std::string::npos);
}
