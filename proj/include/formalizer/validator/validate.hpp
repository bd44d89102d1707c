#ifndef FORMALIZER_VALIDATOR_VALIDATE_HPP
#define FORMALIZER_VALIDATOR_VALIDATE_HPP

#include <optional>
#include <string>
#include <vector>

#include "formalizer/pddl/ast.hpp"
#include "formalizer/planner/search.hpp"

namespace formalizer::validator {

struct ValidationReport {
  enum class Verdict {
    valid,
    precondition_violation,
    goal_not_satisfied,
    unknown_action,
    arity_error,
  };

  struct FailingStep {
    int index = 0;  // 1-based
    std::string action;
  };

  Verdict verdict = Verdict::valid;
  std::optional<FailingStep> failing_step;
  std::string detail;
  std::vector<std::string> unmet_atoms;        // precondition atoms at fault
  std::vector<std::string> unsatisfied_goals;  // goal atoms still false
};

const char* to_string(ValidationReport::Verdict verdict);

// Replays the plan step by step from the truth init state. Action names
// are matched case-insensitively; argument counts must match exactly.
ValidationReport validate(const pddl::DomainAst& truth_domain,
                          const pddl::ProblemAst& truth_problem,
                          const planner::Plan& plan);

// Deterministic text for the solver+validator revision loop: the failing
// step, its unmet condition atoms, and the goal atoms still false.
std::string format_validator_feedback(const ValidationReport& report);

enum class Verdict {
  syntactically_incorrect,
  semantically_incorrect,
  semantically_correct,
};

const char* to_string(Verdict verdict);

// Instance-level outcome: syntactically incorrect when the predicted pair
// fails parse or check; semantically correct when the plan found from the
// predicted files validates against the truth files.
Verdict semantic_verdict(const pddl::DomainAst& truth_domain,
                         const pddl::ProblemAst& truth_problem,
                         const pddl::ParseResult<pddl::DomainAst>& predicted_domain,
                         const pddl::ParseResult<pddl::ProblemAst>& predicted_problem,
                         const planner::SolveOutcome& outcome);

}  // namespace formalizer::validator

#endif
