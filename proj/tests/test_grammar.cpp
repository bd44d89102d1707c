#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ast_gen.hpp"
#include "fixtures.hpp"
#include "formalizer/pddl/grammar.hpp"
#include "formalizer/pddl/parser.hpp"
#include "formalizer/pddl/printer.hpp"

using namespace formalizer::pddl;

TEST_CASE("grammar emission is deterministic") {
  CHECK(emit_grammar() == emit_grammar());
  CHECK(!emit_grammar().empty());
}

TEST_CASE("grammar accepts the reference files") {
  const std::string grammar = emit_grammar();
  CHECK(grammar_accepts(grammar, fixtures::kBlocksworldDomain));
  CHECK(grammar_accepts(grammar, fixtures::kBlocksworldP01));
}

TEST_CASE("grammar rejects truncated input") {
  const std::string grammar = emit_grammar();
  CHECK(!grammar_accepts(grammar, "(define (domain"));
  CHECK(!grammar_accepts(grammar, ""));
  CHECK(!grammar_accepts(grammar, "hello world"));
}

TEST_CASE("grammar accepts printed random ASTs") {
  const std::string grammar = emit_grammar();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto domain = ast_gen::random_domain(seed);
    CHECK(grammar_accepts(grammar, print_domain(domain)));
    auto problem = ast_gen::random_problem(domain, seed + 500);
    CHECK(grammar_accepts(grammar, print_problem(problem)));
  }
}

TEST_CASE("grammar rejects truncation mutants") {
  const std::string grammar = emit_grammar();
  ast_gen::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto domain = ast_gen::random_domain(i);
    std::string text = print_domain(domain);
    // cut somewhere strictly inside so at least one paren goes missing
    const size_t cut = 1 + rng.below(static_cast<int>(text.size()) - 2);
    text.resize(cut);
    CHECK(!grammar_accepts(grammar, text));
  }
}

TEST_CASE("grammar and parser agree on the supported subset") {
  const std::string grammar = emit_grammar();
  // Accept/reject probes around the subset boundary.
  const char* accepted[] = {
      "(define (domain d))",
      "(define (domain d) (:requirements :strips :typing))",
      "(define (domain d) (:action a :parameters ()))",
      "(define (problem p) (:domain d) (:init) (:goal (and)))",
  };
  for (const char* text : accepted) {
    CAPTURE(text);
    const bool parses = ok(parse_domain(text)) || ok(parse_problem(text));
    CHECK(parses);
    CHECK(grammar_accepts(grammar, text));
  }
  const char* rejected[] = {
      "(define (domain d) (:goal (and)))",   // problem section in a domain
      "(define (domain d) (:action))",       // action needs a name
      "(define (domain d) extra)",
  };
  for (const char* text : rejected) {
    CAPTURE(text);
    CHECK(!ok(parse_domain(text)));
    CHECK(!grammar_accepts(grammar, text));
  }
}

TEST_CASE("malformed grammar input raises GrammarError") {
  CHECK_THROWS_AS(grammar_accepts("start: ???", "(define (domain d))"),
                  GrammarError);
}
