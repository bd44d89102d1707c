#include "formalizer/validator/validate.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

#include "formalizer/pddl/printer.hpp"
#include "formalizer/semantics/check.hpp"

namespace formalizer::validator {

using pddl::Atom;
using pddl::DomainAst;
using pddl::Formula;
using pddl::ProblemAst;

const char* to_string(ValidationReport::Verdict verdict) {
  switch (verdict) {
    case ValidationReport::Verdict::valid:
      return "valid";
    case ValidationReport::Verdict::precondition_violation:
      return "precondition-violation";
    case ValidationReport::Verdict::goal_not_satisfied:
      return "goal-not-satisfied";
    case ValidationReport::Verdict::unknown_action:
      return "unknown-action";
    case ValidationReport::Verdict::arity_error:
      return "arity-error";
  }
  return "unknown";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::syntactically_incorrect:
      return "syntactically-incorrect";
    case Verdict::semantically_incorrect:
      return "semantically-incorrect";
    case Verdict::semantically_correct:
      return "semantically-correct";
  }
  return "unknown";
}

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

std::string step_text(const planner::PlanStep& step) {
  std::ostringstream os;
  os << "(" << step.action;
  for (const auto& arg : step.args) os << " " << arg;
  os << ")";
  return os.str();
}

using State = std::set<std::string>;

std::string atom_key(const Atom& atom,
                     const std::unordered_map<std::string, std::string>& binding) {
  Atom ground = atom;
  for (auto& term : ground.terms) {
    auto it = binding.find(term);
    if (it != binding.end()) term = it->second;
  }
  return pddl::print_atom(ground);
}

// Atoms of the precondition that fail against the state.
void collect_unmet(const Formula& f, const State& state,
                   const std::unordered_map<std::string, std::string>& binding,
                   std::vector<std::string>& unmet) {
  switch (f.kind) {
    case Formula::Kind::atom: {
      std::string key = atom_key(f.atom, binding);
      if (state.count(key) == 0) unmet.push_back(key);
      return;
    }
    case Formula::Kind::negation: {
      std::string key = atom_key(f.atom, binding);
      if (state.count(key) != 0) unmet.push_back("(not " + key + ")");
      return;
    }
    case Formula::Kind::conjunction:
      for (const auto& child : f.children) {
        collect_unmet(child, state, binding, unmet);
      }
      return;
  }
}

void apply_effect(const Formula& f, const std::unordered_map<std::string, std::string>& binding,
                  std::vector<std::string>& adds, std::vector<std::string>& dels) {
  switch (f.kind) {
    case Formula::Kind::atom:
      adds.push_back(atom_key(f.atom, binding));
      return;
    case Formula::Kind::negation:
      dels.push_back(atom_key(f.atom, binding));
      return;
    case Formula::Kind::conjunction:
      for (const auto& child : f.children) apply_effect(child, binding, adds, dels);
      return;
  }
}

}  // namespace

ValidationReport validate(const DomainAst& truth_domain,
                          const ProblemAst& truth_problem,
                          const planner::Plan& plan) {
  ValidationReport report;
  State state;
  for (const auto& atom : truth_problem.init) {
    state.insert(pddl::print_atom(atom));
  }

  for (size_t i = 0; i < plan.steps.size(); ++i) {
    const planner::PlanStep& step = plan.steps[i];
    const std::string wanted = to_lower(step.action);
    const pddl::ActionDecl* decl = nullptr;
    for (const auto& action : truth_domain.actions) {
      if (action.name == wanted) {
        decl = &action;
        break;
      }
    }
    if (decl == nullptr) {
      report.verdict = ValidationReport::Verdict::unknown_action;
      report.failing_step = {static_cast<int>(i) + 1, step_text(step)};
      report.detail = "action '" + step.action +
                      "' is not declared in the truth domain file";
      return report;
    }
    if (decl->params.size() != step.args.size()) {
      report.verdict = ValidationReport::Verdict::arity_error;
      report.failing_step = {static_cast<int>(i) + 1, step_text(step)};
      report.detail = "action '" + decl->name + "' expects " +
                      std::to_string(decl->params.size()) +
                      " arguments, got " + std::to_string(step.args.size());
      return report;
    }
    std::unordered_map<std::string, std::string> binding;
    for (size_t p = 0; p < decl->params.size(); ++p) {
      binding[decl->params[p].name] = to_lower(step.args[p]);
    }
    std::vector<std::string> unmet;
    collect_unmet(decl->precondition, state, binding, unmet);
    if (!unmet.empty()) {
      report.verdict = ValidationReport::Verdict::precondition_violation;
      report.failing_step = {static_cast<int>(i) + 1, step_text(step)};
      report.unmet_atoms = unmet;
      std::ostringstream os;
      os << "precondition not satisfied at step " << i + 1 << ":";
      for (const auto& atom : unmet) os << " " << atom;
      report.detail = os.str();
      return report;
    }
    std::vector<std::string> adds, dels;
    apply_effect(decl->effect, binding, adds, dels);
    for (const auto& key : dels) state.erase(key);
    for (const auto& key : adds) state.insert(key);
  }

  std::vector<std::string> unsatisfied;
  collect_unmet(truth_problem.goal, state, {}, unsatisfied);
  if (!unsatisfied.empty()) {
    report.verdict = ValidationReport::Verdict::goal_not_satisfied;
    report.unsatisfied_goals = unsatisfied;
    std::ostringstream os;
    os << "goal atoms not satisfied:";
    for (const auto& atom : unsatisfied) os << " " << atom;
    report.detail = os.str();
    return report;
  }
  report.verdict = ValidationReport::Verdict::valid;
  return report;
}

std::string format_validator_feedback(const ValidationReport& report) {
  if (report.verdict == ValidationReport::Verdict::valid) {
    return "plan validation succeeded";
  }
  std::ostringstream os;
  os << "plan validation failed (" << to_string(report.verdict) << ")";
  if (report.failing_step) {
    os << " at step " << report.failing_step->index << " "
       << report.failing_step->action;
  }
  if (!report.unmet_atoms.empty()) {
    os << "; unmet conditions:";
    for (const auto& atom : report.unmet_atoms) os << " " << atom;
  }
  if (!report.unsatisfied_goals.empty()) {
    os << "; goal atoms still false:";
    for (const auto& atom : report.unsatisfied_goals) os << " " << atom;
  }
  if (report.unmet_atoms.empty() && report.unsatisfied_goals.empty() &&
      !report.detail.empty()) {
    os << "; " << report.detail;
  }
  return os.str();
}

Verdict semantic_verdict(
    const DomainAst& truth_domain, const ProblemAst& truth_problem,
    const pddl::ParseResult<DomainAst>& predicted_domain,
    const pddl::ParseResult<ProblemAst>& predicted_problem,
    const planner::SolveOutcome& outcome) {
  if (!pddl::ok(predicted_domain) || !pddl::ok(predicted_problem)) {
    return Verdict::syntactically_incorrect;
  }
  const auto& domain = std::get<DomainAst>(predicted_domain);
  const auto& problem = std::get<ProblemAst>(predicted_problem);
  if (!semantics::check(domain, problem).empty()) {
    return Verdict::syntactically_incorrect;
  }
  if (const auto* solved = std::get_if<planner::Solved>(&outcome)) {
    if (validate(truth_domain, truth_problem, solved->plan).verdict ==
        ValidationReport::Verdict::valid) {
      return Verdict::semantically_correct;
    }
  }
  return Verdict::semantically_incorrect;
}

}  // namespace formalizer::validator
