#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "weaver/triples.hpp"

using namespace weaver;

namespace {

CleanSentence sentence(const std::string& text) { return {"doc", 0, text, "corp"}; }

}  // namespace

TEST_CASE("default_tagger covers closed classes and the lexicon") {
    CHECK(default_tagger("the").tag == Tag::DET);
    CHECK(default_tagger("a").tag == Tag::DET);
    CHECK(default_tagger("on").tag == Tag::ADP);
    CHECK(default_tagger("it").tag == Tag::PRON);
    CHECK(default_tagger("contains").tag == Tag::VERB);
    CHECK(default_tagger("infection").tag == Tag::NOUN);
}

TEST_CASE("default_tagger suffix fallbacks") {
    CHECK(default_tagger("measurement").tag == Tag::NOUN);
    CHECK(default_tagger("brightness").tag == Tag::NOUN);
    CHECK(default_tagger("normalize").tag == Tag::VERB);
    CHECK(default_tagger("integrate").tag == Tag::VERB);
    // -s over a known verb stem reads as an inflected verb.
    CHECK(default_tagger("wills").tag == Tag::VERB);
    // Unknown words default to nouns.
    CHECK(default_tagger("zorgon").tag == Tag::NOUN);
}

TEST_CASE("default_tagger is case insensitive") {
    CHECK(default_tagger("The").tag == Tag::DET);
    CHECK(default_tagger("Contains").tag == Tag::VERB);
}

TEST_CASE("tag names round-trip") {
    for (Tag tag : {Tag::NOUN, Tag::VERB, Tag::ADJ, Tag::DET, Tag::ADP, Tag::PRON, Tag::OTHER})
        CHECK(tag_from_name(tag_name(tag)) == tag);
    CHECK_THROWS_AS(tag_from_name("GERUND"), std::invalid_argument);
}

TEST_CASE("extract_triples pairs noun phrases around a verb") {
    auto triples = extract_triples(sentence("The susceptible population contains infection."));
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].subject == "The susceptible population");
    CHECK(triples[0].verb == "contains");
    CHECK(triples[0].object == "infection");
    CHECK(triples[0].doc_id == "doc");
    CHECK(triples[0].sentence_index == 0);
}

TEST_CASE("extract_triples keeps determiners in the subject phrase") {
    auto triples = extract_triples(sentence("The model tracks infection."));
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].subject == "The model");
}

TEST_CASE("extract_triples yields nothing without a complete pattern") {
    CHECK(extract_triples(sentence("Quickly afterwards.")).empty());
    CHECK(extract_triples(sentence("The model.")).empty());
    CHECK(extract_triples(sentence("")).empty());
}

TEST_CASE("extract_triples splits coordinated clauses") {
    auto on_and =
        extract_triples(sentence("The model tracks infection and the rate governs recovery."));
    REQUIRE(on_and.size() == 2);
    CHECK(on_and[0].subject == "The model");
    CHECK(on_and[0].object == "infection");
    CHECK(on_and[1].subject == "the rate");
    CHECK(on_and[1].verb == "governs");
    CHECK(on_and[1].object == "recovery");

    auto on_semi =
        extract_triples(sentence("The model tracks infection; the rate governs recovery."));
    CHECK(on_semi.size() == 2);
}

TEST_CASE("extract_triples skips one leading preposition before the object") {
    auto triples = extract_triples(sentence("The rate depends on infection."));
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].object == "infection");
}

TEST_CASE("verbs are stored surface-lowercased without lemmatization") {
    auto triples = extract_triples(sentence("The model TRACKS infection."));
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].verb == "tracks");
    auto past = extract_triples(sentence("The model tracked infection."));
    REQUIRE(past.size() == 1);
    CHECK(past[0].verb == "tracked");
}

TEST_CASE("extract_triples over a sentence list concatenates in order") {
    std::vector<CleanSentence> sentences = {
        {"doc", 0, "The model tracks infection.", "c"},
        {"doc", 1, "Nothing here.", "c"},
        {"doc", 2, "The rate governs recovery.", "c"},
    };
    auto triples = extract_triples(sentences);
    REQUIRE(triples.size() == 2);
    CHECK(triples[0].sentence_index == 0);
    CHECK(triples[1].sentence_index == 2);
}

TEST_CASE("triples round-trip through jsonl") {
    std::vector<Triple> triples = {
        {"The model", "tracks", "infection", "c/doc.md", 0},
        {"the rate", "governs", "recovery", "c/doc.md", 3},
    };
    std::ostringstream out;
    export_triples(out, triples);
    std::istringstream in(out.str());
    CHECK(import_triples(in, "buffer") == triples);
}

TEST_CASE("import_triples skips a leading metadata row") {
    std::istringstream in(
        "{\"config_hash\":\"00ff\",\"seed\":1}\n"
        "{\"subject\":\"s\",\"verb\":\"v\",\"object\":\"o\",\"doc_id\":\"d\","
        "\"sentence_index\":2}\n");
    auto triples = import_triples(in, "buffer");
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].subject == "s");
    CHECK(triples[0].sentence_index == 2);
}

TEST_CASE("import_triples names the offending row") {
    std::istringstream broken("{\"subject\":\"s\",\"verb\":\"v\",\"object\":\"o\","
                              "\"doc_id\":\"d\",\"sentence_index\":0}\nnot json\n");
    CHECK_THROWS_WITH_AS(import_triples(broken, "buffer"), doctest::Contains("row 2"),
                         std::runtime_error);

    std::istringstream missing("{\"subject\":\"s\",\"verb\":\"v\",\"doc_id\":\"d\","
                               "\"sentence_index\":0}\n");
    CHECK_THROWS_WITH_AS(import_triples(missing, "buffer"), doctest::Contains("object"),
                         std::runtime_error);

    std::istringstream mistyped("{\"subject\":\"s\",\"verb\":\"v\",\"object\":7,"
                                "\"doc_id\":\"d\",\"sentence_index\":0}\n");
    CHECK_THROWS_AS(import_triples(mistyped, "buffer"), std::runtime_error);
}

TEST_CASE("fixture docs extract the expected triple volume") {
    auto docs = load_corpus(support::fixture_dir() / "corpus_a" / "docs", "epi");
    std::vector<Triple> all;
    for (const auto& doc : docs) {
        auto sentences = split_sentences(clean_text(doc), doc.doc_id, "epi");
        auto triples = extract_triples(sentences);
        all.insert(all.end(), triples.begin(), triples.end());
    }
    // Every fixture sentence is a single clause built around one verb.
    CHECK(all.size() == 24);
    for (const auto& t : all) {
        CHECK(!t.subject.empty());
        CHECK(!t.verb.empty());
        CHECK(!t.object.empty());
    }
}
