#ifndef FORMALIZER_SEMANTICS_CHECK_HPP
#define FORMALIZER_SEMANTICS_CHECK_HPP

#include <string>
#include <vector>

#include "formalizer/pddl/ast.hpp"

namespace formalizer::semantics {

enum class PddlFile { domain, problem };

struct SemanticError {
  enum class Kind {
    undefined_predicate,
    undefined_type,
    undefined_object,
    undefined_variable,
    arity_mismatch,
    type_mismatch,
    domain_name_mismatch,
    unsupported_requirement,
  };

  Kind kind;
  PddlFile file;
  std::string context;  // "action unstack", "init", "goal", ...
  std::string message;  // names the offending symbol verbatim

  bool operator==(const SemanticError&) const = default;
};

const char* to_string(SemanticError::Kind kind);

// Empty result iff the pair is well-formed: declared predicates with
// matching arity, compatible types (declared-subtype closure with
// "object" on top), action-body variables bound in :parameters, init/goal
// objects declared, and matching domain names. Findings are returned in a
// deterministic order (file, then context, then kind).
std::vector<SemanticError> check(const pddl::DomainAst& domain,
                                 const pddl::ProblemAst& problem);

// Domain-only subset of the checks, for sequential-stage diagnostics.
std::vector<SemanticError> check_domain(const pddl::DomainAst& domain);

}  // namespace formalizer::semantics

#endif
