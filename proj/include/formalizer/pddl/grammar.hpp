#ifndef FORMALIZER_PDDL_GRAMMAR_HPP
#define FORMALIZER_PDDL_GRAMMAR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace formalizer::pddl {

struct GrammarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic EBNF text for the supported PDDL subset
// (:strips/:typing requirements, typed lists, and/not formulas).
std::string emit_grammar();

// True iff text is derivable from the grammar's start symbol.
// The recognizer interprets the grammar text itself (Earley over the
// token stream); it shares no code with parse_domain/parse_problem.
// Throws GrammarError on malformed grammar input.
bool grammar_accepts(std::string_view grammar, std::string_view text);

}  // namespace formalizer::pddl

#endif
