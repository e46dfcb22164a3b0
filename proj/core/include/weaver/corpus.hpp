#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace weaver {

struct RawDocument {
  std::string corpus_id;
  std::filesystem::path path;
  std::string doc_id;  // corpus_id + "/" + path relative to the corpus root
  std::string text;
};

struct CleanSentence {
  std::string doc_id;
  int index = 0;  // 0-based ordinal within the document
  std::string text;
  std::string corpus_id;
};

// One RawDocument per *.md file under root (recursive), in deterministic
// path-sorted order. Zero matches is an empty list, not an error; an
// unreadable root throws std::runtime_error.
std::vector<RawDocument> load_corpus(const std::filesystem::path& root,
                                     const std::string& corpus_id);

// Markdown to plain prose. In order: fenced code blocks, tables, inline
// code spans, display and inline math, citation and reference tags, link
// targets ([text](url) keeps text), heading/emphasis markers, characters
// outside alphanumeric + whitespace + sentence punctuation (.,;:?!'-),
// math-variable capitalization, whitespace collapse. Idempotent.
std::string clean_text(const std::string& markdown);

inline std::string clean_text(const RawDocument& doc) {
  return clean_text(doc.text);
}

// Splits cleaned text on ./?/! followed by whitespace or end of input,
// guarding common abbreviations (e.g., i.e., et al., ...). Fragments
// without an alphanumeric character are dropped; indices run from 0.
std::vector<CleanSentence> split_sentences(const std::string& text,
                                           const std::string& doc_id,
                                           const std::string& corpus_id = "");

// JSONL records {doc_id, index, text, corpus_id}, one per line.
void export_sentences(std::ostream& out,
                      const std::vector<CleanSentence>& sentences);

}  // namespace weaver
