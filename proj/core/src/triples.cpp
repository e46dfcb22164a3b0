#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "weaver/triples.hpp"

namespace weaver {

namespace {

using nlohmann::json;

struct Word {
    std::string text;        // surface form, boundary punctuation stripped
    Tag tag = Tag::OTHER;
    bool breaks_after = false;  // trailing , ; : . ? ! blocks phrase growth
    bool clause_end = false;    // trailing ; ends the clause
};

bool is_boundary_punct(char c) {
    return c == '.' || c == ',' || c == ';' || c == ':' || c == '?' ||
           c == '!' || c == '\'' || c == '-';
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Splits the sentence on whitespace, strips boundary punctuation from each
// token, and records where trailing punctuation separates phrases.
std::vector<Word> tokenize(const std::string& text, const Tagger& tagger) {
    std::vector<Word> words;
    std::istringstream in(text);
    std::string raw;
    while (in >> raw) {
        size_t b = 0;
        size_t e = raw.size();
        while (b < e && is_boundary_punct(raw[b])) ++b;
        bool breaks = false;
        bool ends_clause = false;
        while (e > b && is_boundary_punct(raw[e - 1])) {
            char c = raw[e - 1];
            if (c == ';') ends_clause = true;
            if (c != '\'' && c != '-') breaks = true;
            --e;
        }
        std::string core = raw.substr(b, e - b);
        if (core.empty()) {
            // bare punctuation still separates the surrounding phrases
            if (!words.empty()) {
                words.back().breaks_after |= breaks;
                words.back().clause_end |= ends_clause;
            }
            continue;
        }
        Word w;
        w.text = core;
        w.tag = tagger(core).tag;
        w.breaks_after = breaks;
        w.clause_end = ends_clause;
        words.push_back(std::move(w));
    }
    return words;
}

// Coordinated clauses split on "and" and ";" before extraction.
std::vector<std::vector<Word>> split_clauses(const std::vector<Word>& words) {
    std::vector<std::vector<Word>> clauses(1);
    for (const Word& w : words) {
        if (to_lower(w.text) == "and") {
            if (!clauses.back().empty()) clauses.emplace_back();
            continue;
        }
        clauses.back().push_back(w);
        if (w.clause_end) clauses.emplace_back();
    }
    while (!clauses.empty() && clauses.back().empty()) clauses.pop_back();
    return clauses;
}

// Noun phrase (DET? ADJ* NOUN+, or a lone pronoun) ending at t, scanning
// backward. Returns an inclusive [first, last] range or {-1, -1}.
std::pair<int, int> noun_phrase_before(const std::vector<Word>& w, int t) {
    if (t < 0 || w[t].breaks_after) return {-1, -1};
    if (w[t].tag == Tag::PRON) return {t, t};
    if (w[t].tag != Tag::NOUN) return {-1, -1};
    int i = t;
    while (i > 0 && !w[i - 1].breaks_after && w[i - 1].tag == Tag::NOUN) --i;
    while (i > 0 && !w[i - 1].breaks_after && w[i - 1].tag == Tag::ADJ) --i;
    if (i > 0 && !w[i - 1].breaks_after && w[i - 1].tag == Tag::DET) --i;
    return {i, t};
}

// Noun phrase starting at or just after t (one leading preposition may be
// skipped), scanning forward.
std::pair<int, int> noun_phrase_after(const std::vector<Word>& w, int t) {
    int n = static_cast<int>(w.size());
    if (t >= n) return {-1, -1};
    if (w[t].tag == Tag::ADP) {
        if (w[t].breaks_after || t + 1 >= n) return {-1, -1};
        ++t;
    }
    if (w[t].tag == Tag::PRON) return {t, t};
    int first = t;
    int j = t;
    if (w[j].tag == Tag::DET) {
        if (w[j].breaks_after || j + 1 >= n) return {-1, -1};
        ++j;
    }
    while (w[j].tag == Tag::ADJ) {
        if (w[j].breaks_after || j + 1 >= n) return {-1, -1};
        ++j;
    }
    if (w[j].tag != Tag::NOUN) return {-1, -1};
    while (!w[j].breaks_after && j + 1 < n && w[j + 1].tag == Tag::NOUN) ++j;
    return {first, j};
}

std::string join_range(const std::vector<Word>& w, int first, int last, bool lower) {
    std::string out;
    for (int i = first; i <= last; ++i) {
        if (!out.empty()) out += ' ';
        out += lower ? to_lower(w[i].text) : w[i].text;
    }
    return out;
}

void extract_from_clause(const std::vector<Word>& clause, const CleanSentence& sentence,
                         std::vector<Triple>& out) {
    int n = static_cast<int>(clause.size());
    for (int v0 = 0; v0 < n; ++v0) {
        if (clause[v0].tag != Tag::VERB) continue;
        int v1 = v0;
        while (v1 + 1 < n && !clause[v1].breaks_after && clause[v1 + 1].tag == Tag::VERB) ++v1;
        auto [s0, s1] = noun_phrase_before(clause, v0 - 1);
        if (s0 >= 0 && !clause[v1].breaks_after) {
            auto [o0, o1] = noun_phrase_after(clause, v1 + 1);
            if (o0 >= 0) {
                Triple t;
                t.subject = join_range(clause, s0, s1, false);
                t.verb = join_range(clause, v0, v1, true);
                t.object = join_range(clause, o0, o1, false);
                t.doc_id = sentence.doc_id;
                t.sentence_index = sentence.index;
                out.push_back(std::move(t));
            }
        }
        v0 = v1;
    }
}

void require_string(const json& row, const char* field, const std::string& where) {
    if (!row.contains(field))
        throw std::runtime_error(where + ": missing field '" + field + "'");
    if (!row.at(field).is_string())
        throw std::runtime_error(where + ": field '" + field + "' must be a string");
}

}  // namespace

std::vector<Triple> extract_triples(const CleanSentence& sentence, const Tagger& tagger) {
    std::vector<Triple> out;
    std::vector<Word> words = tokenize(sentence.text, tagger);
    for (const auto& clause : split_clauses(words)) extract_from_clause(clause, sentence, out);
    return out;
}

std::vector<Triple> extract_triples(const std::vector<CleanSentence>& sentences,
                                    const Tagger& tagger) {
    std::vector<Triple> out;
    for (const auto& s : sentences) {
        auto triples = extract_triples(s, tagger);
        out.insert(out.end(), triples.begin(), triples.end());
    }
    return out;
}

std::vector<Triple> import_triples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triples file: " + path);
    return import_triples(in, path);
}

std::vector<Triple> import_triples(std::istream& in, const std::string& origin) {
    std::vector<Triple> out;
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
        require_string(parsed, "subject", where);
        require_string(parsed, "verb", where);
        require_string(parsed, "object", where);
        require_string(parsed, "doc_id", where);
        if (!parsed.contains("sentence_index"))
            throw std::runtime_error(where + ": missing field 'sentence_index'");
        if (!parsed.at("sentence_index").is_number_integer())
            throw std::runtime_error(where + ": field 'sentence_index' must be an integer");
        Triple t;
        t.subject = parsed.at("subject").get<std::string>();
        t.verb = parsed.at("verb").get<std::string>();
        t.object = parsed.at("object").get<std::string>();
        t.doc_id = parsed.at("doc_id").get<std::string>();
        t.sentence_index = parsed.at("sentence_index").get<int>();
        out.push_back(std::move(t));
    }
    return out;
}

void export_triples(std::ostream& out, const std::vector<Triple>& triples) {
    for (const Triple& t : triples) {
        json row;
        row["subject"] = t.subject;
        row["verb"] = t.verb;
        row["object"] = t.object;
        row["doc_id"] = t.doc_id;
        row["sentence_index"] = t.sentence_index;
        out << row.dump() << '\n';
    }
}

}  // namespace weaver
