#ifndef FORMALIZER_TESTS_AST_GEN_HPP
#define FORMALIZER_TESTS_AST_GEN_HPP

// Seeded random AST generator for round-trip and grammar-agreement tests.
// Generates ASTs already in the parser's canonical form (lowercase names,
// explicit types, unique declarations) so parse(print(ast)) == ast is the
// property under test, not an artifact of normalization.

#include <cstdint>
#include <string>
#include <vector>

#include "formalizer/pddl/ast.hpp"

namespace ast_gen {

namespace pddl = formalizer::pddl;

struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    // splitmix64
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  int below(int bound) { return static_cast<int>(next() % bound); }
  bool chance(int percent) { return below(100) < percent; }
};

inline std::string make_name(const std::string& prefix, int index) {
  return prefix + std::to_string(index);
}

inline std::string pick_type(Rng& rng,
                             const std::vector<std::string>& types) {
  if (types.empty() || rng.chance(30)) return "object";
  return types[rng.below(static_cast<int>(types.size()))];
}

inline pddl::Atom random_lifted_atom(
    Rng& rng, const std::vector<pddl::PredicateDecl>& predicates,
    const std::vector<pddl::TypedName>& params) {
  const auto& pred =
      predicates[rng.below(static_cast<int>(predicates.size()))];
  pddl::Atom atom;
  atom.predicate = pred.name;
  for (size_t i = 0; i < pred.params.size(); ++i) {
    if (params.empty()) break;
    atom.terms.push_back(
        params[rng.below(static_cast<int>(params.size()))].name);
  }
  return atom;
}

inline pddl::Formula random_formula(
    Rng& rng, const std::vector<pddl::PredicateDecl>& predicates,
    const std::vector<pddl::TypedName>& params) {
  const int roll = rng.below(100);
  if (roll < 25) {
    return pddl::Formula::make_atom(
        random_lifted_atom(rng, predicates, params));
  }
  if (roll < 40) {
    return pddl::Formula::make_not(
        random_lifted_atom(rng, predicates, params));
  }
  std::vector<pddl::Formula> conjuncts;
  const int count = rng.below(4);  // "(and)" is legal and worth covering
  for (int i = 0; i < count; ++i) {
    if (rng.chance(25)) {
      conjuncts.push_back(pddl::Formula::make_not(
          random_lifted_atom(rng, predicates, params)));
    } else {
      conjuncts.push_back(pddl::Formula::make_atom(
          random_lifted_atom(rng, predicates, params)));
    }
  }
  return pddl::Formula::make_and(std::move(conjuncts));
}

inline pddl::DomainAst random_domain(std::uint64_t seed) {
  Rng rng(seed);
  pddl::DomainAst domain;
  domain.name = make_name("dom", rng.below(1000));

  domain.requirements.push_back(":strips");
  const bool typed = rng.chance(60);
  if (typed) domain.requirements.push_back(":typing");

  std::vector<std::string> type_names;
  if (typed) {
    const int num_types = 1 + rng.below(3);
    for (int i = 0; i < num_types; ++i) {
      pddl::TypeDecl type;
      type.name = make_name("t", i);
      // parents reference only earlier declarations, so the printed file
      // needs no implicit insertions on re-parse
      type.parent = type_names.empty() || rng.chance(50)
                        ? "object"
                        : type_names[rng.below(
                              static_cast<int>(type_names.size()))];
      domain.types.push_back(type);
      type_names.push_back(type.name);
    }
  }

  const int num_predicates = 1 + rng.below(4);
  for (int i = 0; i < num_predicates; ++i) {
    pddl::PredicateDecl pred;
    pred.name = make_name("p", i);
    const int arity = rng.below(3);
    for (int j = 0; j < arity; ++j) {
      pred.params.push_back(
          {make_name("?x", j), pick_type(rng, type_names)});
    }
    domain.predicates.push_back(pred);
  }

  const int num_actions = 1 + rng.below(3);
  for (int i = 0; i < num_actions; ++i) {
    pddl::ActionDecl action;
    action.name = make_name("act", i);
    const int arity = rng.below(3);
    for (int j = 0; j < arity; ++j) {
      action.params.push_back(
          {make_name("?v", j), pick_type(rng, type_names)});
    }
    action.precondition =
        random_formula(rng, domain.predicates, action.params);
    action.effect = random_formula(rng, domain.predicates, action.params);
    domain.actions.push_back(action);
  }
  return domain;
}

inline pddl::Atom random_ground_atom(
    Rng& rng, const std::vector<pddl::PredicateDecl>& predicates,
    const std::vector<pddl::TypedName>& objects) {
  const auto& pred =
      predicates[rng.below(static_cast<int>(predicates.size()))];
  pddl::Atom atom;
  atom.predicate = pred.name;
  for (size_t i = 0; i < pred.params.size(); ++i) {
    if (objects.empty()) break;
    atom.terms.push_back(
        objects[rng.below(static_cast<int>(objects.size()))].name);
  }
  return atom;
}

inline pddl::ProblemAst random_problem(const pddl::DomainAst& domain,
                                       std::uint64_t seed) {
  Rng rng(seed);
  pddl::ProblemAst problem;
  problem.name = make_name("prob", rng.below(1000));
  problem.domain_name = domain.name;

  std::vector<std::string> type_names;
  for (const auto& type : domain.types) type_names.push_back(type.name);

  const int num_objects = 1 + rng.below(4);
  for (int i = 0; i < num_objects; ++i) {
    problem.objects.push_back(
        {make_name("obj", i), pick_type(rng, type_names)});
  }

  const int num_init = rng.below(5);
  for (int i = 0; i < num_init; ++i) {
    problem.init.push_back(
        random_ground_atom(rng, domain.predicates, problem.objects));
  }

  std::vector<pddl::Formula> goal_conjuncts;
  const int num_goals = rng.below(3);
  for (int i = 0; i < num_goals; ++i) {
    pddl::Atom atom =
        random_ground_atom(rng, domain.predicates, problem.objects);
    if (rng.chance(20)) {
      goal_conjuncts.push_back(pddl::Formula::make_not(std::move(atom)));
    } else {
      goal_conjuncts.push_back(pddl::Formula::make_atom(std::move(atom)));
    }
  }
  problem.goal = pddl::Formula::make_and(std::move(goal_conjuncts));
  return problem;
}

}  // namespace ast_gen

#endif
