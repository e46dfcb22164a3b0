#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

#include "weaver/code_entities.hpp"

namespace fs = std::filesystem;

namespace weaver {

namespace {

using nlohmann::json;

// Names indexed by offset within the Greek alphabet block; index 17 is the
// final-sigma slot (lowercase) / the unassigned 0x03A2 slot (uppercase).
const char* const kGreekNames[25] = {
    "alpha", "beta", "gamma",   "delta", "epsilon", "zeta",  "eta",   "theta", "iota",
    "kappa", "lambda", "mu",    "nu",    "xi",      "omicron", "pi",  "rho",   "sigma",
    "sigma", "tau",   "upsilon", "phi",  "chi",     "psi",   "omega"};

// Decodes one UTF-8 codepoint at i, advancing i; malformed input yields
// U+FFFD and advances one byte.
char32_t decode_utf8(const std::string& s, size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        ++i;
        return c;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
        extra = 1;
        cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
        extra = 2;
        cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
        extra = 3;
        cp = c & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + extra >= s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += extra + 1;
    return cp;
}

}  // namespace

const char* entity_kind_name(EntityKind kind) {
    return kind == EntityKind::FUNCTION ? "FUNCTION" : "VARIABLE";
}

EntityKind entity_kind_from_name(const std::string& name) {
    if (name == "FUNCTION") return EntityKind::FUNCTION;
    if (name == "VARIABLE") return EntityKind::VARIABLE;
    throw std::invalid_argument("unknown entity kind '" + name + "'");
}

const char* greek_letter_name(char32_t cp) {
    if (cp >= 0x03B1 && cp <= 0x03C9) return kGreekNames[cp - 0x03B1];
    if (cp >= 0x0391 && cp <= 0x03A9) {
        if (cp == 0x03A2) return nullptr;  // unassigned slot
        return kGreekNames[cp - 0x0391];
    }
    switch (cp) {
        case 0x00B5: return "mu";  // micro sign
        case 0x03D0: return "beta";
        case 0x03D1: return "theta";
        case 0x03D5: return "phi";
        case 0x03D6: return "pi";
        case 0x03F0: return "kappa";
        case 0x03F1: return "rho";
        case 0x03F5: return "epsilon";
        default: return nullptr;
    }
}

std::vector<std::string> normalize_identifier(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("empty identifier");

    // Pass 1: Greek letters become delimited names; anything that is not an
    // ASCII letter or digit becomes a delimiter.
    std::string flat;
    size_t i = 0;
    while (i < name.size()) {
        char32_t cp = decode_utf8(name, i);
        if (cp < 0x80 && std::isalnum(static_cast<int>(cp))) {
            flat += static_cast<char>(cp);
        } else if (const char* greek = greek_letter_name(cp)) {
            flat += '_';
            flat += greek;
            flat += '_';
        } else {
            flat += '_';
        }
    }

    // Pass 2: split on delimiters, lower->upper transitions, and
    // digit->letter boundaries; keep only parts containing a letter.
    std::vector<std::string> tokens;
    std::string part;
    auto flush = [&] {
        bool has_letter = false;
        for (char& c : part) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (std::isalpha(static_cast<unsigned char>(c))) has_letter = true;
        }
        if (!part.empty() && has_letter) tokens.push_back(part);
        part.clear();
    };
    char prev = 0;
    for (char c : flat) {
        if (c == '_') {
            flush();
            prev = 0;
            continue;
        }
        bool lower_upper = prev != 0 && std::islower(static_cast<unsigned char>(prev)) &&
                           std::isupper(static_cast<unsigned char>(c));
        bool digit_letter = prev != 0 && std::isdigit(static_cast<unsigned char>(prev)) &&
                            std::isalpha(static_cast<unsigned char>(c));
        if (lower_upper || digit_letter) flush();
        part += c;
        prev = c;
    }
    flush();

    if (tokens.empty())
        throw std::invalid_argument("identifier '" + name + "' has no letters to tokenize");
    return tokens;
}

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }

bool ident_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '!' || c >= 0x80;
}

// Reads an identifier at position i (no advance when none is found). A '!'
// directly before '=' stays out so `x != y` never scans as `x!`.
std::string scan_identifier(const std::string& line, size_t& i) {
    if (i >= line.size() || !ident_start(static_cast<unsigned char>(line[i]))) return "";
    size_t j = i;
    while (j < line.size() && ident_char(static_cast<unsigned char>(line[j]))) {
        if (line[j] == '!' && j + 1 < line.size() && line[j + 1] == '=') break;
        ++j;
    }
    std::string out = line.substr(i, j - i);
    i = j;
    return out;
}

// Replaces comment and string-literal contents with spaces, preserving line
// structure. Handles line comments, nested #= =# blocks, "..." and """..."""
// strings with escapes, backtick commands, and character literals (with the
// quote-after-value form left alone so transpose survives).
std::string strip_comments_and_strings(const std::string& src) {
    std::string out = src;
    size_t n = src.size();
    size_t i = 0;
    int block_comment = 0;
    char last_code = 0;  // last significant character kept in the output

    auto blank = [&](size_t from, size_t to) {
        for (size_t k = from; k < to && k < n; ++k)
            if (out[k] != '\n') out[k] = ' ';
    };

    while (i < n) {
        char c = src[i];
        if (block_comment > 0) {
            if (c == '#' && i + 1 < n && src[i + 1] == '=') {
                ++block_comment;
                blank(i, i + 2);
                i += 2;
            } else if (c == '=' && i + 1 < n && src[i + 1] == '#') {
                --block_comment;
                blank(i, i + 2);
                i += 2;
            } else {
                if (c != '\n') out[i] = ' ';
                ++i;
            }
            continue;
        }
        if (c == '#') {
            if (i + 1 < n && src[i + 1] == '=') {
                block_comment = 1;
                blank(i, i + 2);
                i += 2;
            } else {
                size_t j = i;
                while (j < n && src[j] != '\n') ++j;
                blank(i, j);
                i = j;
            }
            continue;
        }
        if (c == '"' || c == '`') {
            bool triple = c == '"' && i + 2 < n && src[i + 1] == '"' && src[i + 2] == '"';
            size_t j = i + (triple ? 3 : 1);
            while (j < n) {
                if (src[j] == '\\' && j + 1 < n) {
                    j += 2;
                    continue;
                }
                if (triple) {
                    if (src[j] == '"' && j + 2 < n && src[j + 1] == '"' && src[j + 2] == '"') {
                        j += 3;
                        break;
                    }
                } else if (src[j] == c) {
                    ++j;
                    break;
                } else if (src[j] == '\n') {
                    break;  // unterminated single-line literal
                }
                ++j;
            }
            blank(i, j);
            i = j;
            last_code = 0;
            continue;
        }
        if (c == '\'') {
            // A quote straight after a value is Julia's transpose operator.
            bool transpose = ident_char(static_cast<unsigned char>(last_code)) ||
                             last_code == ')' || last_code == ']' || last_code == '}';
            if (!transpose) {
                size_t j = i + 1;
                size_t limit = std::min(n, i + 16);
                size_t close = 0;
                while (j < limit && src[j] != '\n') {
                    if (src[j] == '\\' && j + 1 < n) {
                        j += 2;
                        continue;
                    }
                    if (src[j] == '\'') {
                        close = j;
                        break;
                    }
                    ++j;
                }
                if (close > i) {
                    blank(i, close + 1);
                    i = close + 1;
                    last_code = 0;
                    continue;
                }
            }
            ++i;
            continue;
        }
        if (!std::isspace(static_cast<unsigned char>(c))) last_code = c;
        ++i;
    }
    return out;
}

const std::set<std::string>& block_openers() {
    static const std::set<std::string> kw = {"function", "macro", "for",  "while",
                                             "if",       "begin", "let",  "try",
                                             "module",   "baremodule", "struct", "quote",
                                             "do"};
    return kw;
}

const std::set<std::string>& statement_keywords() {
    static const std::set<std::string> kw = {
        "function", "macro", "for", "while", "if", "begin", "let", "try", "module",
        "baremodule", "struct", "quote", "do", "end", "else", "elseif", "catch",
        "finally", "return", "using", "import", "export", "const", "global", "local",
        "mutable", "break", "continue", "where", "in", "isa", "abstract", "primitive"};
    return kw;
}

// Splits a same-line parameter list on commas and semicolons outside nested
// brackets; returns the raw pieces.
std::vector<std::string> split_params(const std::string& text) {
    std::vector<std::string> pieces;
    std::string cur;
    int depth = 0;
    for (char c : text) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (depth == 0 && (c == ',' || c == ';')) {
            pieces.push_back(cur);
            cur.clear();
            continue;
        }
        cur += c;
    }
    pieces.push_back(cur);
    return pieces;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Extracts the parameter name from one signature piece: drops a default
// value, a ::Type annotation, and a trailing splat; rejects anything that is
// not a bare identifier.
std::string param_name(const std::string& piece) {
    std::string p = trim(piece);
    if (auto eq = p.find('='); eq != std::string::npos) p = trim(p.substr(0, eq));
    if (auto ann = p.find("::"); ann != std::string::npos) p = trim(p.substr(0, ann));
    if (p.size() >= 3 && p.compare(p.size() - 3, 3, "...") == 0) p = trim(p.substr(0, p.size() - 3));
    if (p.empty() || !ident_start(static_cast<unsigned char>(p[0]))) return "";
    size_t i = 0;
    std::string name = scan_identifier(p, i);
    return i == p.size() ? name : "";
}

struct Collector {
    std::vector<CodeEntity>& out;
    std::set<std::tuple<std::string, int, std::string>> seen;
    const std::string& path;
    const std::string& corpus_id;

    void add(const std::string& name, EntityKind kind) {
        if (name.empty()) return;
        auto key = std::make_tuple(name, static_cast<int>(kind), path);
        if (!seen.insert(key).second) return;
        CodeEntity e;
        e.name = name;
        e.kind = kind;
        try {
            e.tokens = normalize_identifier(name);
        } catch (const std::invalid_argument&) {
            return;  // letterless identifier, nothing to index
        }
        e.path = path;
        e.corpus_id = corpus_id;
        out.push_back(std::move(e));
    }
};

// True when line[pos] starts a plain `=` (not ==, +=, <=, ...).
bool is_simple_assign(const std::string& line, size_t pos) {
    if (pos >= line.size() || line[pos] != '=') return false;
    if (pos + 1 < line.size() && line[pos + 1] == '=') return false;
    if (pos > 0) {
        char prev = line[pos - 1];
        static const std::string ops = "+-*/^%&|!<>~:";
        if (ops.find(prev) != std::string::npos) return false;
    }
    return true;
}

void mine_line(const std::string& line, int block_depth, Collector& coll) {
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) return;

    size_t at = i;
    std::string first = scan_identifier(line, at);

    // (a) long-form definition: function NAME(params)
    if (first == "function") {
        size_t j = line.find_first_not_of(" \t", at);
        if (j == std::string::npos) return;
        std::string name = scan_identifier(line, j);
        while (j < line.size() && line[j] == '.') {  // qualified name: keep last segment
            ++j;
            std::string seg = scan_identifier(line, j);
            if (seg.empty()) return;
            name = seg;
        }
        if (name.empty()) return;
        coll.add(name, EntityKind::FUNCTION);
        if (j < line.size() && line[j] == '(') {
            size_t close = line.find(')', j + 1);
            std::string inner = close == std::string::npos ? line.substr(j + 1)
                                                           : line.substr(j + 1, close - j - 1);
            for (const auto& piece : split_params(inner))
                coll.add(param_name(piece), EntityKind::VARIABLE);
        }
        return;
    }

    if (first.empty() || statement_keywords().count(first) > 0) {
        if (first == "const" || first == "global" || first == "local") {
            // fall through to assignment mining with the keyword stripped
            mine_line(line.substr(at), block_depth, coll);
        }
        return;
    }

    // (b) short-form definition: NAME(params) = body, at line start
    if (at < line.size() && line[at] == '(') {
        int depth = 1;
        size_t j = at + 1;
        while (j < line.size() && depth > 0) {
            if (line[j] == '(') ++depth;
            if (line[j] == ')') --depth;
            ++j;
        }
        if (depth == 0) {
            size_t after = line.find_first_not_of(" \t", j);
            if (after != std::string::npos && is_simple_assign(line, after)) {
                coll.add(first, EntityKind::FUNCTION);
                for (const auto& piece : split_params(line.substr(at + 1, j - at - 2)))
                    coll.add(param_name(piece), EntityKind::VARIABLE);
                return;
            }
        }
        return;
    }

    // (c) top-level assignment: NAME = ... or NAME1, NAME2 = ...
    if (block_depth > 0) return;
    int depth = 0;
    size_t eq = std::string::npos;
    for (size_t j = i; j < line.size(); ++j) {
        char c = line[j];
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (depth == 0 && c == '=') {
            if (is_simple_assign(line, j)) eq = j;
            break;  // any first '=' settles it: compound forms disqualify
        }
    }
    if (eq == std::string::npos) return;
    for (const auto& piece : split_params(line.substr(i, eq - i)))
        coll.add(param_name(piece), EntityKind::VARIABLE);
}

}  // namespace

std::vector<CodeEntity> extract_entities(const std::string& source, const std::string& path,
                                         const std::string& corpus_id) {
    std::vector<CodeEntity> out;
    Collector coll{out, {}, path, corpus_id};

    std::string clean = strip_comments_and_strings(source);
    std::istringstream lines(clean);
    std::string line;
    int block_depth = 0;
    int bracket_depth = 0;
    while (std::getline(lines, line)) {
        mine_line(line, block_depth, coll);
        // update block nesting after mining: openers and `end` outside brackets
        size_t j = 0;
        while (j < line.size()) {
            char c = line[j];
            if (ident_start(static_cast<unsigned char>(c))) {
                std::string word = scan_identifier(line, j);
                if (bracket_depth == 0) {
                    if (block_openers().count(word) > 0) ++block_depth;
                    if (word == "end" && block_depth > 0) --block_depth;
                }
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++bracket_depth;
            if ((c == ')' || c == ']' || c == '}') && bracket_depth > 0) --bracket_depth;
            ++j;
        }
    }
    return out;
}

namespace {

// Filename glob with `*` (any run) and `?` (any one char); matches whole name.
bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string::npos, backtrack = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            backtrack = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++backtrack;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

}  // namespace

std::vector<CodeEntity> extract_directory(const std::string& root, const std::string& corpus_id,
                                          const std::string& pattern) {
    fs::path base(root);
    if (!fs::exists(base)) throw std::runtime_error("source directory not found: " + root);

    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(base, ec), end; it != end; it.increment(ec)) {
        if (ec) throw std::runtime_error("cannot walk " + root + ": " + ec.message());
        if (it->is_regular_file() && glob_match(pattern, it->path().filename().generic_string()))
            files.push_back(it->path());
    }
    if (ec) throw std::runtime_error("cannot walk " + root + ": " + ec.message());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

    std::vector<CodeEntity> out;
    for (const fs::path& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + file.generic_string());
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string rel = fs::relative(file, base).generic_string();
        auto entities = extract_entities(buf.str(), rel, corpus_id);
        out.insert(out.end(), entities.begin(), entities.end());
    }
    return out;
}

std::vector<CodeEntity> import_entities(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open entities file: " + path);
    return import_entities(in, path);
}

std::vector<CodeEntity> import_entities(std::istream& in, const std::string& origin) {
    std::vector<CodeEntity> out;
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
        for (const char* field : {"name", "kind", "path", "corpus_id"}) {
            if (!parsed.contains(field))
                throw std::runtime_error(where + ": missing field '" + field + "'");
            if (!parsed.at(field).is_string())
                throw std::runtime_error(where + ": field '" + std::string(field) +
                                         "' must be a string");
        }
        if (!parsed.contains("tokens"))
            throw std::runtime_error(where + ": missing field 'tokens'");
        if (!parsed.at("tokens").is_array() || parsed.at("tokens").empty())
            throw std::runtime_error(where + ": field 'tokens' must be a non-empty array");

        CodeEntity e;
        e.name = parsed.at("name").get<std::string>();
        if (e.name.empty()) throw std::runtime_error(where + ": field 'name' must be non-empty");
        try {
            e.kind = entity_kind_from_name(parsed.at("kind").get<std::string>());
        } catch (const std::invalid_argument& err) {
            throw std::runtime_error(where + ": " + err.what());
        }
        for (const auto& tok : parsed.at("tokens")) {
            if (!tok.is_string())
                throw std::runtime_error(where + ": field 'tokens' must hold strings");
            std::string t = tok.get<std::string>();
            bool ok = !t.empty() && std::islower(static_cast<unsigned char>(t[0]));
            for (char c : t)
                ok = ok && ((std::islower(static_cast<unsigned char>(c)) != 0) ||
                            (std::isdigit(static_cast<unsigned char>(c)) != 0));
            if (!ok)
                throw std::runtime_error(where + ": token '" + t +
                                         "' is not a lowercase word token");
            e.tokens.push_back(t);
        }
        e.path = parsed.at("path").get<std::string>();
        e.corpus_id = parsed.at("corpus_id").get<std::string>();
        out.push_back(std::move(e));
    }
    return out;
}

void export_entities(std::ostream& out, const std::vector<CodeEntity>& entities) {
    for (const CodeEntity& e : entities) {
        json row;
        row["name"] = e.name;
        row["kind"] = entity_kind_name(e.kind);
        row["tokens"] = e.tokens;
        row["path"] = e.path;
        row["corpus_id"] = e.corpus_id;
        out << row.dump() << '\n';
    }
}

}  // namespace weaver
