#include "weaver/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace weaver {

namespace fs = std::filesystem;

namespace {

const std::array<const char*, 24> kGreekNames = {
    "alpha", "beta", "gamma",   "delta", "epsilon", "zeta",
    "eta",   "theta", "iota",   "kappa", "lambda",  "mu",
    "nu",    "xi",    "omicron", "pi",   "rho",     "sigma",
    "tau",   "upsilon", "phi",  "chi",   "psi",     "omega"};

bool is_greek_name(const std::string& lower) {
  return std::find(kGreekNames.begin(), kGreekNames.end(), lower) !=
         kGreekNames.end();
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }

bool is_kept_punct(char c) {
  switch (c) {
    case '.':
    case ',':
    case ';':
    case ':':
    case '?':
    case '!':
    case '\'':
    case '-':
      return true;
    default:
      return false;
  }
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool is_table_row(const std::string& line) {
  const std::string t = trim(line);
  return !t.empty() && t.front() == '|';
}

bool is_reference_definition(const std::string& line) {
  // "[id]: target" link/footnote definitions
  const std::string t = trim(line);
  if (t.size() < 3 || t.front() != '[') return false;
  const std::size_t close = t.find(']');
  return close != std::string::npos && close + 1 < t.size() &&
         t[close + 1] == ':';
}

// Strips fenced code blocks, table rows, and reference definitions;
// removes heading/blockquote/list markers from the lines that survive.
std::string line_pass(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  std::string line;
  bool in_fence = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.rfind("```", 0) == 0 || t.rfind("~~~", 0) == 0) {
      in_fence = !in_fence;
      continue;
    }
    if (in_fence) continue;
    if (is_table_row(line) || is_reference_definition(line)) continue;

    // Strip leading heading/blockquote/list markers to a fixpoint so a
    // second pass over cleaned text is a no-op.
    std::size_t pos = 0;
    for (bool advanced = true; advanced;) {
      advanced = false;
      while (pos < line.size() && is_space(line[pos])) ++pos;
      while (pos < line.size() && (line[pos] == '#' || line[pos] == '>')) {
        ++pos;
        advanced = true;
        while (pos < line.size() && is_space(line[pos])) ++pos;
      }
      if (pos < line.size()) {
        if ((line[pos] == '-' || line[pos] == '*' || line[pos] == '+') &&
            pos + 1 < line.size() && is_space(line[pos + 1])) {
          pos += 2;
          advanced = true;
        } else if (std::isdigit(static_cast<unsigned char>(line[pos]))) {
          std::size_t p = pos;
          while (p < line.size() &&
                 std::isdigit(static_cast<unsigned char>(line[p]))) {
            ++p;
          }
          if (p < line.size() && line[p] == '.' && p + 1 < line.size() &&
              is_space(line[p + 1])) {
            pos = p + 2;
            advanced = true;
          }
        }
      }
    }
    out.append(line, pos, std::string::npos);
    out.push_back('\n');
  }
  return out;
}

// Deletes [from, to) spans found by a matcher over single-line windows.
template <typename Fn>
std::string remove_spans(const std::string& text, Fn&& find_span) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto [from, to] = find_span(text, pos);
    if (from == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    out.append(text, pos, from - pos);
    pos = to;
  }
  return out;
}

std::string remove_display_math(const std::string& text) {
  return remove_spans(text, [](const std::string& s, std::size_t pos)
                                -> std::pair<std::size_t, std::size_t> {
    const std::size_t open = s.find("$$", pos);
    if (open == std::string::npos) return {std::string::npos, 0};
    const std::size_t close = s.find("$$", open + 2);
    if (close == std::string::npos) return {std::string::npos, 0};
    return {open, close + 2};
  });
}

// Paired single-character delimiters within one line; unpaired ones are
// left for the character filter.
std::string remove_inline_delimited(const std::string& text, char delim) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != delim) {
      out.push_back(text[pos++]);
      continue;
    }
    std::size_t close = pos + 1;
    while (close < text.size() && text[close] != delim &&
           text[close] != '\n') {
      ++close;
    }
    if (close < text.size() && text[close] == delim) {
      pos = close + 1;
    } else {
      out.push_back(text[pos++]);
    }
  }
  return out;
}

std::string remove_latex_tags(const std::string& text) {
  static const std::array<const char*, 4> kTags = {"\\cite", "\\ref",
                                                   "\\eqref", "\\label"};
  return remove_spans(text, [](const std::string& s, std::size_t pos)
                                -> std::pair<std::size_t, std::size_t> {
    std::size_t best = std::string::npos, best_end = 0;
    for (const char* tag : kTags) {
      const std::size_t at = s.find(tag, pos);
      if (at == std::string::npos || at > best) continue;
      std::size_t end = at + std::string(tag).size();
      if (end < s.size() && s[end] == '{') {
        const std::size_t close = s.find('}', end);
        if (close == std::string::npos) continue;
        end = close + 1;
      }
      best = at;
      best_end = end;
    }
    return {best, best == std::string::npos ? 0 : best_end};
  });
}

std::string remove_html_tags(const std::string& text) {
  return remove_spans(text, [](const std::string& s, std::size_t pos)
                                -> std::pair<std::size_t, std::size_t> {
    const std::size_t open = s.find('<', pos);
    if (open == std::string::npos) return {std::string::npos, 0};
    std::size_t close = open + 1;
    while (close < s.size() && s[close] != '>' && s[close] != '\n') ++close;
    if (close < s.size() && s[close] == '>') return {open, close + 1};
    return {std::string::npos, 0};
  });
}

std::string remove_bare_urls(const std::string& text) {
  return remove_spans(text, [](const std::string& s, std::size_t pos)
                                -> std::pair<std::size_t, std::size_t> {
    std::size_t http = s.find("http://", pos);
    const std::size_t https = s.find("https://", pos);
    if (https != std::string::npos && (http == std::string::npos || https < http)) {
      http = https;
    }
    if (http == std::string::npos) return {std::string::npos, 0};
    std::size_t end = http;
    while (end < s.size() && !is_space(s[end])) ++end;
    return {http, end};
  });
}

// Bracket constructs: ![alt](url) dropped, [text](url) and [text][ref]
// keep text, [@cite] / [^note] / [1] / [1,2] dropped.
std::string rewrite_brackets(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    const bool image = c == '!' && pos + 1 < text.size() && text[pos + 1] == '[';
    if (c != '[' && !image) {
      out.push_back(c);
      ++pos;
      continue;
    }
    const std::size_t open = image ? pos + 1 : pos;
    const std::size_t close = text.find(']', open + 1);
    if (close == std::string::npos || text.find('\n', open) < close) {
      out.push_back(c);
      ++pos;
      continue;
    }
    const std::string inner = text.substr(open + 1, close - open - 1);
    std::size_t after = close + 1;
    // swallow a (target) or [ref] suffix
    if (after < text.size() && (text[after] == '(' || text[after] == '[')) {
      const char shut = text[after] == '(' ? ')' : ']';
      const std::size_t target_close = text.find(shut, after + 1);
      if (target_close != std::string::npos &&
          text.find('\n', after) > target_close) {
        after = target_close + 1;
      }
    }
    const bool citation =
        !inner.empty() &&
        (inner.front() == '@' || inner.front() == '^' ||
         std::all_of(inner.begin(), inner.end(), [](char ch) {
           return std::isdigit(static_cast<unsigned char>(ch)) || ch == ',' ||
                  ch == '-' || ch == ' ';
         }));
    if (!image && !citation) out.append(inner);
    pos = after;
  }
  return out;
}

std::string filter_charset(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (is_alnum(c) || is_space(c) || is_kept_punct(c)) out.push_back(c);
  }
  return out;
}

// Single alphabetic characters and standalone Greek names are treated as
// math-variable residue and uppercased.
std::string capitalize_variables(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (is_space(text[pos])) {
      out.push_back(text[pos++]);
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !is_space(text[end])) ++end;
    std::string token = text.substr(pos, end - pos);

    std::size_t core_b = 0, core_e = token.size();
    while (core_b < core_e && !is_alnum(token[core_b])) ++core_b;
    while (core_e > core_b && !is_alnum(token[core_e - 1])) --core_e;
    const std::string core = token.substr(core_b, core_e - core_b);

    bool variable = false;
    if (core.size() == 1 && is_alpha(core[0])) {
      variable = true;
    } else if (!core.empty()) {
      std::string lower = core;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char ch) { return std::tolower(ch); });
      variable = is_greek_name(lower);
    }
    if (variable) {
      std::transform(token.begin() + core_b, token.begin() + core_e,
                     token.begin() + core_b,
                     [](unsigned char ch) { return std::toupper(ch); });
    }
    out.append(token);
    pos = end;
  }
  return out;
}

std::string collapse_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

const std::array<const char*, 16> kAbbreviations = {
    "e.g.", "i.e.", "al.",  "etc.", "cf.",  "vs.",  "eq.",  "fig.",
    "figs.", "sec.", "ca.",  "resp.", "dr.",  "mr.",  "mrs.", "ms."};

bool ends_with_abbreviation(const std::string& text, std::size_t dot) {
  // token ending at `dot` (inclusive), lowered
  std::size_t b = dot;
  while (b > 0 && !is_space(text[b - 1])) --b;
  std::string token = text.substr(b, dot - b + 1);
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), token) !=
         kAbbreviations.end();
}

}  // namespace

std::vector<RawDocument> load_corpus(const fs::path& root,
                                     const std::string& corpus_id) {
  std::error_code ec;
  if (!fs::exists(root, ec) || ec) {
    throw std::runtime_error("load_corpus: cannot read corpus root '" +
                             root.string() + "' for corpus '" + corpus_id +
                             "'");
  }
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      throw std::runtime_error("load_corpus: error walking '" +
                               root.string() + "': " + ec.message());
    }
    if (it->is_regular_file() && it->path().extension() == ".md") {
      files.push_back(it->path());
    }
  }
  if (ec) {
    throw std::runtime_error("load_corpus: cannot read corpus root '" +
                             root.string() + "': " + ec.message());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.generic_string() < b.generic_string();
            });

  std::vector<RawDocument> docs;
  docs.reserve(files.size());
  for (const fs::path& p : files) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      throw std::runtime_error("load_corpus: cannot open '" + p.string() +
                               "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string rel = fs::relative(p, root).generic_string();
    docs.push_back(
        {corpus_id, p, corpus_id + "/" + rel, buf.str()});
  }
  return docs;
}

std::string clean_text(const std::string& markdown) {
  std::string text = line_pass(markdown);
  text = remove_inline_delimited(text, '`');
  text = remove_display_math(text);
  text = remove_inline_delimited(text, '$');
  text = remove_latex_tags(text);
  text = rewrite_brackets(text);
  text = remove_html_tags(text);
  text = remove_bare_urls(text);
  text = filter_charset(text);
  text = capitalize_variables(text);
  return collapse_whitespace(text);
}

std::vector<CleanSentence> split_sentences(const std::string& text,
                                           const std::string& doc_id,
                                           const std::string& corpus_id) {
  std::vector<CleanSentence> out;
  std::size_t start = 0;
  int index = 0;
  auto emit = [&](std::size_t end) {
    const std::string sentence = trim(text.substr(start, end - start));
    if (std::any_of(sentence.begin(), sentence.end(), is_alnum)) {
      out.push_back({doc_id, index++, sentence, corpus_id});
    }
    start = end;
  };
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c != '.' && c != '?' && c != '!') continue;
    const bool at_end = pos + 1 >= text.size();
    if (!at_end && !is_space(text[pos + 1])) continue;
    if (c == '.' && ends_with_abbreviation(text, pos)) continue;
    emit(pos + 1);
  }
  if (start < text.size()) emit(text.size());
  return out;
}

void export_sentences(std::ostream& out,
                      const std::vector<CleanSentence>& sentences) {
  for (const CleanSentence& s : sentences) {
    nlohmann::json row = {{"doc_id", s.doc_id},
                          {"index", s.index},
                          {"text", s.text},
                          {"corpus_id", s.corpus_id}};
    out << row.dump() << "\n";
  }
}

}  // namespace weaver
