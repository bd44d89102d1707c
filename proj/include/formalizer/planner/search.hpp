#ifndef FORMALIZER_PLANNER_SEARCH_HPP
#define FORMALIZER_PLANNER_SEARCH_HPP

#include <string>
#include <variant>
#include <vector>

#include "formalizer/pddl/ast.hpp"
#include "formalizer/planner/ground.hpp"

namespace formalizer::planner {

struct PlanStep {
  std::string action;
  std::vector<std::string> args;

  bool operator==(const PlanStep&) const = default;
};

struct Plan {
  std::vector<PlanStep> steps;

  bool operator==(const Plan&) const = default;
};

// One step per line: (<name> <arg> ...). The validator-compatible format.
std::string print_plan(const Plan& plan);
std::variant<Plan, std::string> parse_plan(std::string_view text);

struct Solved {
  Plan plan;
};
struct Unsolvable {};
struct Timeout {};
struct IllFormed {
  std::vector<std::string> errors;
};

using SolveOutcome = std::variant<Solved, Unsolvable, Timeout, IllFormed>;

struct SolveLimits {
  long max_expansions = 1'000'000;
  double timeout_s = 60.0;
  long max_ground_actions = 1'000'000;
};

// Breadth-first search with visited-state deduplication; successors are
// tried in lexicographic (action-name, args) order, so the outcome is
// deterministic and any plan found is shortest. Runs check() internally
// and reports its findings as IllFormed.
SolveOutcome solve(const pddl::DomainAst& domain,
                   const pddl::ProblemAst& problem,
                   const SolveLimits& limits = {});

}  // namespace formalizer::planner

#endif
