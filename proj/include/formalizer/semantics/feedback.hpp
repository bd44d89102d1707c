#ifndef FORMALIZER_SEMANTICS_FEEDBACK_HPP
#define FORMALIZER_SEMANTICS_FEEDBACK_HPP

#include <string>
#include <variant>
#include <vector>

#include "formalizer/pddl/ast.hpp"
#include "formalizer/semantics/check.hpp"

namespace formalizer::semantics {

// A parse- or semantic-level finding attributed to one of the two files.
struct Diagnostic {
  PddlFile file = PddlFile::domain;
  std::variant<pddl::ParseError, SemanticError> payload;

  static Diagnostic parse(PddlFile file, pddl::ParseError error) {
    return {file, std::move(error)};
  }
  static Diagnostic semantic(SemanticError error) {
    PddlFile file = error.file;
    return {file, std::move(error)};
  }
};

// Deterministic, line-per-error text for revision prompts. Ordering is
// stable: file, parse errors before semantic ones, then context, then kind.
std::string format_feedback(std::vector<Diagnostic> diagnostics);

std::string format_diagnostic(const Diagnostic& diagnostic);

}  // namespace formalizer::semantics

#endif
