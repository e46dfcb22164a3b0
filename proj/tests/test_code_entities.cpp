#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "weaver/code_entities.hpp"

using namespace weaver;

namespace {

bool has_entity(const std::vector<CodeEntity>& entities, const std::string& name,
                EntityKind kind) {
    return std::any_of(entities.begin(), entities.end(), [&](const CodeEntity& e) {
        return e.name == name && e.kind == kind;
    });
}

}  // namespace

TEST_CASE("greek letter names cover both cases") {
    std::set<std::string> names;
    int covered = 0;
    for (char32_t lower = U'α'; lower <= U'ω'; ++lower) {
        if (lower == U'ς') continue;  // final sigma is a variant form
        char32_t upper = U'Α' + (lower - U'α');
        const char* lower_name = greek_letter_name(lower);
        const char* upper_name = greek_letter_name(upper);
        REQUIRE(lower_name != nullptr);
        REQUIRE(upper_name != nullptr);
        CHECK(std::string(lower_name) == upper_name);
        for (const char* c = lower_name; *c; ++c) CHECK(std::islower(static_cast<unsigned char>(*c)));
        names.insert(lower_name);
        ++covered;
    }
    CHECK(covered == 24);
    CHECK(names.size() == 24);
}

TEST_CASE("greek letter variants map to base names") {
    CHECK(std::string(greek_letter_name(U'ς')) == "sigma");
    CHECK(std::string(greek_letter_name(U'ϵ')) == "epsilon");
    CHECK(std::string(greek_letter_name(U'µ')) == "mu");
    CHECK(greek_letter_name(U'x') == nullptr);
    CHECK(greek_letter_name(U'9') == nullptr);
}

TEST_CASE("normalize_identifier splits underscores, case, and digits") {
    CHECK(normalize_identifier("infected_individuals") ==
          std::vector<std::string>{"infected", "individuals"});
    CHECK(normalize_identifier("sirOdeModel") == std::vector<std::string>{"sir", "ode", "model"});
    CHECK(normalize_identifier("R0") == std::vector<std::string>{"r0"});
    CHECK(normalize_identifier("x2y") == std::vector<std::string>{"x2", "y"});
    CHECK(normalize_identifier("beta_2") == std::vector<std::string>{"beta"});
}

TEST_CASE("normalize_identifier translates greek letters") {
    CHECK(normalize_identifier("β") == std::vector<std::string>{"beta"});
    CHECK(normalize_identifier("Ω") == std::vector<std::string>{"omega"});
    CHECK(normalize_identifier("dβdt") == std::vector<std::string>{"d", "beta", "dt"});
}

TEST_CASE("normalize_identifier rejects letterless names") {
    CHECK_THROWS_AS(normalize_identifier("42"), std::invalid_argument);
    CHECK_THROWS_AS(normalize_identifier("__"), std::invalid_argument);
}

TEST_CASE("normalize_identifier is idempotent on its own joined output") {
    for (const char* name : {"infected_individuals", "sirOdeModel", "β", "R0", "x2y", "αBetaΓ"}) {
        auto once = normalize_identifier(name);
        std::string joined;
        for (std::size_t i = 0; i < once.size(); ++i) {
            if (i) joined += '_';
            joined += once[i];
        }
        CHECK(normalize_identifier(joined) == once);
    }
}

TEST_CASE("normalized tokens match the lowercase word shape") {
    for (const char* name : {"sirOdeModel", "HTTPServer", "R0", "βγ", "a_b_c9"}) {
        for (const auto& token : normalize_identifier(name)) {
            REQUIRE(!token.empty());
            CHECK(std::islower(static_cast<unsigned char>(token[0])));
            for (char c : token)
                CHECK((std::islower(static_cast<unsigned char>(c)) ||
                       std::isdigit(static_cast<unsigned char>(c))));
        }
    }
}

TEST_CASE("extract_entities mines long-form function definitions") {
    auto entities = extract_entities("function sir_ode(du,u,p,t)\n  du[1] = 0\nend\n", "m.jl", "c");
    CHECK(has_entity(entities, "sir_ode", EntityKind::FUNCTION));
    for (const char* param : {"du", "u", "p", "t"})
        CHECK(has_entity(entities, param, EntityKind::VARIABLE));
}

TEST_CASE("extract_entities mines short-form definitions and assignments") {
    auto entities = extract_entities("f(x) = x^2\nβ = 0.1\na, b = 1, 2\n", "m.jl", "c");
    CHECK(has_entity(entities, "f", EntityKind::FUNCTION));
    CHECK(has_entity(entities, "x", EntityKind::VARIABLE));
    CHECK(has_entity(entities, "β", EntityKind::VARIABLE));
    CHECK(has_entity(entities, "a", EntityKind::VARIABLE));
    CHECK(has_entity(entities, "b", EntityKind::VARIABLE));
    auto beta = std::find_if(entities.begin(), entities.end(),
                             [](const CodeEntity& e) { return e.name == "β"; });
    REQUIRE(beta != entities.end());
    CHECK(beta->tokens == std::vector<std::string>{"beta"});
    CHECK(beta->path == "m.jl");
    CHECK(beta->corpus_id == "c");
}

TEST_CASE("extract_entities ignores comments and strings") {
    CHECK(extract_entities("# x = 1\n", "m.jl", "c").empty());
    auto entities = extract_entities("s = \"function nope(q)\"\n", "m.jl", "c");
    REQUIRE(entities.size() == 1);
    CHECK(entities[0].name == "s");
    auto trailing = extract_entities("y = 2  # z = 3\n", "m.jl", "c");
    REQUIRE(trailing.size() == 1);
    CHECK(trailing[0].name == "y");
}

TEST_CASE("extract_entities deduplicates repeated definitions") {
    auto entities = extract_entities("x = 1\nx = 2\n", "m.jl", "c");
    CHECK(entities.size() == 1);
}

TEST_CASE("extract_entities never yields empty token lists") {
    auto entities =
        extract_entities("function sir_ode(u,p,t)\nend\nβ = 0.1\nγ = 0.05\n", "m.jl", "c");
    REQUIRE(!entities.empty());
    for (const auto& e : entities) CHECK(!e.tokens.empty());
}

TEST_CASE("extract_directory walks matching files in sorted order") {
    auto root = support::fixture_dir() / "corpus_a" / "code";
    auto entities = extract_directory(root.string(), "epi");
    REQUIRE(!entities.empty());
    CHECK(has_entity(entities, "sir_ode", EntityKind::FUNCTION));
    CHECK(has_entity(entities, "infected_individuals", EntityKind::VARIABLE));
    CHECK(std::is_sorted(entities.begin(), entities.end(),
                         [](const CodeEntity& a, const CodeEntity& b) { return a.path < b.path; }));
    CHECK(extract_directory(root.string(), "epi", "*.py").empty());
}

TEST_CASE("entities round-trip through jsonl") {
    std::vector<CodeEntity> entities = {
        {"sir_ode", EntityKind::FUNCTION, {"sir", "ode"}, "m.jl", "c"},
        {"β", EntityKind::VARIABLE, {"beta"}, "m.jl", "c"},
    };
    std::ostringstream out;
    export_entities(out, entities);
    std::istringstream in(out.str());
    CHECK(import_entities(in, "buffer") == entities);
}

TEST_CASE("import_entities rejects bad rows by number") {
    std::istringstream missing("{\"name\":\"x\",\"kind\":\"VARIABLE\",\"tokens\":[\"x\"],"
                               "\"path\":\"m.jl\",\"corpus_id\":\"c\"}\n{\"name\":\"y\"}\n");
    CHECK_THROWS_WITH_AS(import_entities(missing, "buffer"), doctest::Contains("row 2"),
                         std::runtime_error);
    std::istringstream badkind("{\"name\":\"x\",\"kind\":\"MACRO\",\"tokens\":[\"x\"],"
                               "\"path\":\"m.jl\",\"corpus_id\":\"c\"}\n");
    CHECK_THROWS_AS(import_entities(badkind, "buffer"), std::runtime_error);
}

TEST_CASE("entity kind names round-trip") {
    CHECK(entity_kind_from_name(entity_kind_name(EntityKind::FUNCTION)) == EntityKind::FUNCTION);
    CHECK(entity_kind_from_name(entity_kind_name(EntityKind::VARIABLE)) == EntityKind::VARIABLE);
    CHECK_THROWS_AS(entity_kind_from_name("MACRO"), std::invalid_argument);
}
