#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weaver {

enum class EntityKind { FUNCTION, VARIABLE };

const char* entity_kind_name(EntityKind kind);
EntityKind entity_kind_from_name(const std::string& name);

// A function or variable identifier mined from source code, with its
// normalized lowercase word tokens.
struct CodeEntity {
    std::string name;                 // original identifier, Greek preserved
    EntityKind kind = EntityKind::VARIABLE;
    std::vector<std::string> tokens;  // each matches [a-z][a-z0-9]*
    std::string path;                 // source file, relative to corpus root
    std::string corpus_id;

    bool operator==(const CodeEntity&) const = default;
};

// English name for a Greek codepoint (lowercase or uppercase letters plus
// common variants like U+03F5 epsilon and U+00B5 micro). Returns nullptr for
// non-Greek codepoints.
const char* greek_letter_name(char32_t codepoint);

// Splits an identifier into lowercase word tokens: Greek letters become
// their English names, then the name is split on underscores, lower->upper
// case transitions, and digit->letter boundaries; parts without any letter
// are dropped. Throws std::invalid_argument when nothing with a letter
// remains. Idempotent on its own output joined by "_".
std::vector<std::string> normalize_identifier(const std::string& name);

// Mines identifiers from Julia source text: `function NAME(...)` long-form
// definitions, `NAME(args) = ...` short-form definitions at line start
// (both with their parameters as variables), and top-level `NAME = ...` /
// `NAME1, NAME2 = ...` assignments. Comments and string literals are
// ignored; lines that fit no pattern are skipped.
std::vector<CodeEntity> extract_entities(const std::string& source, const std::string& path,
                                         const std::string& corpus_id);

// Extracts entities from every file under root whose filename matches the
// glob pattern (`*` and `?` wildcards, default "*.jl"), in sorted path
// order. Paths are stored relative to root.
std::vector<CodeEntity> extract_directory(const std::string& root, const std::string& corpus_id,
                                          const std::string& pattern = "*.jl");

// JSONL I/O with fields {name, kind, tokens, path, corpus_id}; import
// rejects invalid rows with errors naming the row.
std::vector<CodeEntity> import_entities(const std::string& path);
std::vector<CodeEntity> import_entities(std::istream& in, const std::string& origin);
void export_entities(std::ostream& out, const std::vector<CodeEntity>& entities);

}  // namespace weaver
