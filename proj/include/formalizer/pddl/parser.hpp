#ifndef FORMALIZER_PDDL_PARSER_HPP
#define FORMALIZER_PDDL_PARSER_HPP

#include <string_view>

#include "formalizer/pddl/ast.hpp"

namespace formalizer::pddl {

// Total over arbitrary input: returns an AST or a positioned ParseError,
// never throws for bad input. Keywords and identifiers are lower-cased;
// untyped parameters default to type "object".
ParseResult<DomainAst> parse_domain(std::string_view text);
ParseResult<ProblemAst> parse_problem(std::string_view text);

}  // namespace formalizer::pddl

#endif
