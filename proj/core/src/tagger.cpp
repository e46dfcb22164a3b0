#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "weaver/triples.hpp"

namespace weaver {

namespace detail {
// Defined in the generated tagger_lexicon.cpp (embedded from
// data/tagger_lexicon.tsv at build time).
const char* tagger_lexicon_tsv();
}  // namespace detail

const char* tag_name(Tag tag) {
    switch (tag) {
        case Tag::NOUN: return "NOUN";
        case Tag::VERB: return "VERB";
        case Tag::ADJ: return "ADJ";
        case Tag::DET: return "DET";
        case Tag::ADP: return "ADP";
        case Tag::PRON: return "PRON";
        case Tag::OTHER: return "OTHER";
    }
    return "OTHER";
}

Tag tag_from_name(const std::string& name) {
    if (name == "NOUN") return Tag::NOUN;
    if (name == "VERB") return Tag::VERB;
    if (name == "ADJ") return Tag::ADJ;
    if (name == "DET") return Tag::DET;
    if (name == "ADP") return Tag::ADP;
    if (name == "PRON") return Tag::PRON;
    if (name == "OTHER") return Tag::OTHER;
    throw std::invalid_argument("unknown tag name '" + name + "'");
}

namespace {

std::string to_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

const std::unordered_map<std::string, Tag>& lexicon() {
    static const std::unordered_map<std::string, Tag> table = [] {
        std::unordered_map<std::string, Tag> t;
        std::istringstream in(detail::tagger_lexicon_tsv());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos) continue;
            t.emplace(line.substr(0, tab), tag_from_name(line.substr(tab + 1)));
        }
        return t;
    }();
    return table;
}

bool ends_with(const std::string& s, const char* suffix) {
    std::string_view sv(suffix);
    return s.size() >= sv.size() && s.compare(s.size() - sv.size(), sv.size(), sv) == 0;
}

// True when dropping a plural/3rd-person -s (or -es) leaves a known verb.
bool is_verb_stem_plus_s(const std::string& word) {
    const auto& lex = lexicon();
    if (!ends_with(word, "s")) return false;
    auto it = lex.find(word.substr(0, word.size() - 1));
    if (it != lex.end() && it->second == Tag::VERB) return true;
    if (ends_with(word, "es")) {
        it = lex.find(word.substr(0, word.size() - 2));
        if (it != lex.end() && it->second == Tag::VERB) return true;
    }
    return false;
}

}  // namespace

TaggedToken default_tagger(const std::string& token) {
    std::string word = to_lower(token);
    const auto& lex = lexicon();
    auto it = lex.find(word);
    if (it != lex.end()) return {token, it->second};
    if (ends_with(word, "tion") || ends_with(word, "ment") || ends_with(word, "ness"))
        return {token, Tag::NOUN};
    if (ends_with(word, "ize") || ends_with(word, "ate")) return {token, Tag::VERB};
    if (is_verb_stem_plus_s(word)) return {token, Tag::VERB};
    return {token, Tag::NOUN};
}

}  // namespace weaver
