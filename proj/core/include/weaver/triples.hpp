#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "weaver/corpus.hpp"

namespace weaver {

// Coarse part-of-speech tags used by the rule-based extractor.
enum class Tag { NOUN, VERB, ADJ, DET, ADP, PRON, OTHER };

const char* tag_name(Tag tag);
Tag tag_from_name(const std::string& name);

struct TaggedToken {
    std::string text;
    Tag tag = Tag::OTHER;
};

// A subject-verb-object relation extracted from one sentence. Phrases are
// whitespace-normalized and keep their original casing; the verb phrase is
// stored surface-lowercased (no lemmatization).
struct Triple {
    std::string subject;
    std::string verb;
    std::string object;
    std::string doc_id;
    int sentence_index = 0;

    bool operator==(const Triple&) const = default;
};

using Tagger = std::function<TaggedToken(const std::string&)>;

// Tags a single lowercased-on-lookup token. Closed-class word lists handle
// determiners, prepositions, pronouns, and function words; a bundled
// noun/verb/adjective lexicon covers open-class words; unknown tokens fall
// back to suffix rules (-tion/-ment/-ness -> NOUN, -ize/-ate -> VERB,
// -s after a known verb stem -> VERB, anything else -> NOUN).
TaggedToken default_tagger(const std::string& token);

// Extracts SVO triples from one cleaned sentence. The sentence is split into
// clauses on "and" and ";" first; within a clause each maximal run of verb
// tokens yields at most one triple, pairing the noun phrase immediately
// before it (DET? ADJ* NOUN+, or a lone pronoun) with the noun phrase after
// it (one leading preposition skipped). Sentences yielding no complete
// triple return an empty list.
std::vector<Triple> extract_triples(const CleanSentence& sentence,
                                    const Tagger& tagger = default_tagger);

// Runs extract_triples over every sentence, concatenating results in order.
std::vector<Triple> extract_triples(const std::vector<CleanSentence>& sentences,
                                    const Tagger& tagger = default_tagger);

// Reads triples from JSONL with fields {subject, verb, object, doc_id,
// sentence_index}. Throws std::runtime_error naming the offending row on
// malformed JSON or a missing/mistyped field.
std::vector<Triple> import_triples(const std::string& path);
std::vector<Triple> import_triples(std::istream& in, const std::string& origin);

// Writes triples as JSONL, one object per line, mirroring import_triples.
void export_triples(std::ostream& out, const std::vector<Triple>& triples);

}  // namespace weaver
