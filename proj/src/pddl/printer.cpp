#include "formalizer/pddl/printer.hpp"

#include <sstream>

namespace formalizer::pddl {

namespace {

void print_typed_list(std::ostream& os, const std::vector<TypedName>& names) {
  for (size_t i = 0; i < names.size(); ++i) {
    if (i > 0) os << " ";
    os << names[i].name << " - " << names[i].type;
  }
}

void print_formula_rec(std::ostream& os, const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::atom:
      os << print_atom(f.atom);
      return;
    case Formula::Kind::negation:
      os << "(not " << print_atom(f.atom) << ")";
      return;
    case Formula::Kind::conjunction:
      os << "(and";
      for (const auto& child : f.children) {
        os << " ";
        print_formula_rec(os, child);
      }
      os << ")";
      return;
  }
}

}  // namespace

std::string print_atom(const Atom& atom) {
  std::ostringstream os;
  os << "(" << atom.predicate;
  for (const auto& term : atom.terms) os << " " << term;
  os << ")";
  return os.str();
}

std::string print_formula(const Formula& formula) {
  std::ostringstream os;
  print_formula_rec(os, formula);
  return os.str();
}

std::string print_domain(const DomainAst& domain) {
  std::ostringstream os;
  os << "(define (domain " << domain.name << ")\n";
  if (!domain.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& req : domain.requirements) os << " " << req;
    os << ")\n";
  }
  if (!domain.types.empty()) {
    os << "  (:types";
    for (const auto& type : domain.types) {
      os << " " << type.name << " - " << type.parent;
    }
    os << ")\n";
  }
  if (!domain.predicates.empty()) {
    os << "  (:predicates\n";
    for (const auto& pred : domain.predicates) {
      os << "    (" << pred.name;
      if (!pred.params.empty()) {
        os << " ";
        print_typed_list(os, pred.params);
      }
      os << ")\n";
    }
    os << "  )\n";
  }
  for (const auto& action : domain.actions) {
    os << "  (:action " << action.name << "\n";
    os << "    :parameters (";
    print_typed_list(os, action.params);
    os << ")\n";
    os << "    :precondition " << print_formula(action.precondition) << "\n";
    os << "    :effect " << print_formula(action.effect) << "\n";
    os << "  )\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const ProblemAst& problem) {
  std::ostringstream os;
  os << "(define (problem " << problem.name << ")\n";
  os << "  (:domain " << problem.domain_name << ")\n";
  if (!problem.objects.empty()) {
    os << "  (:objects ";
    print_typed_list(os, problem.objects);
    os << ")\n";
  }
  os << "  (:init\n";
  for (const auto& atom : problem.init) {
    os << "    " << print_atom(atom) << "\n";
  }
  os << "  )\n";
  os << "  (:goal " << print_formula(problem.goal) << ")\n";
  os << ")\n";
  return os.str();
}

}  // namespace formalizer::pddl
