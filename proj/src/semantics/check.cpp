#include "formalizer/semantics/check.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace formalizer::semantics {

using pddl::Atom;
using pddl::DomainAst;
using pddl::Formula;
using pddl::ProblemAst;

const char* to_string(SemanticError::Kind kind) {
  switch (kind) {
    case SemanticError::Kind::undefined_predicate:
      return "undefined-predicate";
    case SemanticError::Kind::undefined_type:
      return "undefined-type";
    case SemanticError::Kind::undefined_object:
      return "undefined-object";
    case SemanticError::Kind::undefined_variable:
      return "undefined-variable";
    case SemanticError::Kind::arity_mismatch:
      return "arity-mismatch";
    case SemanticError::Kind::type_mismatch:
      return "type-mismatch";
    case SemanticError::Kind::domain_name_mismatch:
      return "domain-name-mismatch";
    case SemanticError::Kind::unsupported_requirement:
      return "unsupported-requirement";
  }
  return "unknown";
}

namespace {

class Checker {
 public:
  explicit Checker(const DomainAst& domain) : domain_(domain) {
    for (const auto& type : domain.types) {
      parent_of_[type.name] = type.parent;
    }
    for (const auto& pred : domain.predicates) {
      predicates_[pred.name] = &pred;
    }
  }

  void run_domain_checks() {
    for (const auto& req : domain_.requirements) {
      if (req != ":strips" && req != ":typing") {
        add(SemanticError::Kind::unsupported_requirement, PddlFile::domain,
            "requirements", "unsupported requirement " + req);
      }
    }
    for (const auto& type : domain_.types) {
      check_type_declared(type.parent, PddlFile::domain, "types");
    }
    for (const auto& pred : domain_.predicates) {
      for (const auto& param : pred.params) {
        check_type_declared(param.type, PddlFile::domain,
                            "predicate " + pred.name);
      }
    }
    for (const auto& action : domain_.actions) {
      const std::string context = "action " + action.name;
      std::unordered_map<std::string, std::string> bound;
      for (const auto& param : action.params) {
        check_type_declared(param.type, PddlFile::domain, context);
        bound[param.name] = param.type;
      }
      check_action_formula(action.precondition, bound, context);
      check_action_formula(action.effect, bound, context);
    }
  }

  void run_problem_checks(const ProblemAst& problem) {
    if (problem.domain_name != domain_.name) {
      add(SemanticError::Kind::domain_name_mismatch, PddlFile::problem,
          "header",
          "problem declares domain '" + problem.domain_name +
              "' but the domain file defines '" + domain_.name + "'");
    }
    std::unordered_map<std::string, std::string> object_types;
    for (const auto& object : problem.objects) {
      check_type_declared(object.type, PddlFile::problem, "objects");
      object_types[object.name] = object.type;
    }
    for (const auto& atom : problem.init) {
      check_ground_atom(atom, object_types, "init");
    }
    check_ground_formula(problem.goal, object_types, "goal");
  }

  std::vector<SemanticError> take_errors() {
    std::stable_sort(errors_.begin(), errors_.end(),
                     [](const SemanticError& a, const SemanticError& b) {
                       if (a.file != b.file) return a.file < b.file;
                       if (a.context != b.context) return a.context < b.context;
                       return a.kind < b.kind;
                     });
    return std::move(errors_);
  }

 private:
  void add(SemanticError::Kind kind, PddlFile file, std::string context,
           std::string message) {
    SemanticError error{kind, file, std::move(context), std::move(message)};
    if (std::find(errors_.begin(), errors_.end(), error) == errors_.end()) {
      errors_.push_back(std::move(error));
    }
  }

  void check_type_declared(const std::string& type, PddlFile file,
                           const std::string& context) {
    if (type == "object") return;
    if (parent_of_.find(type) == parent_of_.end()) {
      add(SemanticError::Kind::undefined_type, file, context,
          "undefined type " + type);
    }
  }

  // t1 is compatible with t2 when t1 == t2 or t1 is a declared subtype
  // of t2; "object" is the universal supertype.
  bool type_compatible(const std::string& t1, const std::string& t2) const {
    if (t2 == "object") return true;
    std::string current = t1;
    std::unordered_set<std::string> visited;  // declared cycles terminate
    while (true) {
      if (current == t2) return true;
      if (current == "object" || !visited.insert(current).second) return false;
      auto it = parent_of_.find(current);
      if (it == parent_of_.end()) return false;
      current = it->second;
    }
  }

  void check_action_formula(
      const Formula& f, const std::unordered_map<std::string, std::string>& bound,
      const std::string& context) {
    if (f.kind == Formula::Kind::conjunction) {
      for (const auto& child : f.children) {
        check_action_formula(child, bound, context);
      }
      return;
    }
    check_lifted_atom(f.atom, bound, context);
  }

  void check_lifted_atom(
      const Atom& atom,
      const std::unordered_map<std::string, std::string>& bound,
      const std::string& context) {
    const pddl::PredicateDecl* decl = lookup_predicate(atom, PddlFile::domain,
                                                       context);
    for (size_t i = 0; i < atom.terms.size(); ++i) {
      const std::string& term = atom.terms[i];
      if (term.empty()) continue;
      if (term[0] == '?') {
        auto it = bound.find(term);
        if (it == bound.end()) {
          add(SemanticError::Kind::undefined_variable, PddlFile::domain,
              context,
              "undefined variable " + term + " (declare it in :parameters)");
          continue;
        }
        if (decl != nullptr && i < decl->params.size() &&
            !type_compatible(it->second, decl->params[i].type)) {
          add(SemanticError::Kind::type_mismatch, PddlFile::domain, context,
              "argument " + term + " of " + atom.predicate + " has type " +
                  it->second + ", expected " + decl->params[i].type);
        }
      } else {
        // Constants are not part of the supported subset.
        add(SemanticError::Kind::undefined_object, PddlFile::domain, context,
            "undefined object " + term);
      }
    }
  }

  void check_ground_atom(
      const Atom& atom,
      const std::unordered_map<std::string, std::string>& object_types,
      const std::string& context) {
    const pddl::PredicateDecl* decl = lookup_predicate(atom, PddlFile::problem,
                                                       context);
    for (size_t i = 0; i < atom.terms.size(); ++i) {
      const std::string& term = atom.terms[i];
      auto it = object_types.find(term);
      if (it == object_types.end()) {
        add(SemanticError::Kind::undefined_object, PddlFile::problem, context,
            "undefined object " + term);
        continue;
      }
      if (decl != nullptr && i < decl->params.size() &&
          !type_compatible(it->second, decl->params[i].type)) {
        add(SemanticError::Kind::type_mismatch, PddlFile::problem, context,
            "object " + term + " of " + atom.predicate + " has type " +
                it->second + ", expected " + decl->params[i].type);
      }
    }
  }

  void check_ground_formula(
      const Formula& f,
      const std::unordered_map<std::string, std::string>& object_types,
      const std::string& context) {
    if (f.kind == Formula::Kind::conjunction) {
      for (const auto& child : f.children) {
        check_ground_formula(child, object_types, context);
      }
      return;
    }
    check_ground_atom(f.atom, object_types, context);
  }

  const pddl::PredicateDecl* lookup_predicate(const Atom& atom, PddlFile file,
                                              const std::string& context) {
    auto it = predicates_.find(atom.predicate);
    if (it == predicates_.end()) {
      add(SemanticError::Kind::undefined_predicate, file, context,
          "undefined predicate " + atom.predicate);
      return nullptr;
    }
    if (atom.terms.size() != it->second->params.size()) {
      add(SemanticError::Kind::arity_mismatch, file, context,
          "predicate " + atom.predicate + " expects " +
              std::to_string(it->second->params.size()) + " arguments, got " +
              std::to_string(atom.terms.size()));
    }
    return it->second;
  }

  const DomainAst& domain_;
  std::unordered_map<std::string, std::string> parent_of_;
  std::unordered_map<std::string, const pddl::PredicateDecl*> predicates_;
  std::vector<SemanticError> errors_;
};

}  // namespace

std::vector<SemanticError> check(const DomainAst& domain,
                                 const ProblemAst& problem) {
  Checker checker(domain);
  checker.run_domain_checks();
  checker.run_problem_checks(problem);
  return checker.take_errors();
}

std::vector<SemanticError> check_domain(const DomainAst& domain) {
  Checker checker(domain);
  checker.run_domain_checks();
  return checker.take_errors();
}

}  // namespace formalizer::semantics
