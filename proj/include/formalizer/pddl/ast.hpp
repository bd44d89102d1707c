#ifndef FORMALIZER_PDDL_AST_HPP
#define FORMALIZER_PDDL_AST_HPP

#include <string>
#include <variant>
#include <vector>

namespace formalizer::pddl {

// Ground or lifted atom; terms are variable names (leading '?') or object names.
struct Atom {
  std::string predicate;
  std::vector<std::string> terms;

  bool operator==(const Atom&) const = default;
};

// STRIPS-normal formulas: negation only directly above an atom.
struct Formula {
  enum class Kind { atom, conjunction, negation };

  Kind kind = Kind::conjunction;
  Atom atom;                       // kind == atom or kind == negation
  std::vector<Formula> children;   // kind == conjunction

  static Formula make_atom(Atom a) {
    Formula f;
    f.kind = Kind::atom;
    f.atom = std::move(a);
    return f;
  }
  static Formula make_not(Atom a) {
    Formula f;
    f.kind = Kind::negation;
    f.atom = std::move(a);
    return f;
  }
  static Formula make_and(std::vector<Formula> conjuncts) {
    Formula f;
    f.kind = Kind::conjunction;
    f.children = std::move(conjuncts);
    return f;
  }

  bool operator==(const Formula&) const = default;
};

struct TypedName {
  std::string name;
  std::string type;  // "object" when the declaration is untyped

  bool operator==(const TypedName&) const = default;
};

struct TypeDecl {
  std::string name;
  std::string parent;  // "object" for top-level types

  bool operator==(const TypeDecl&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;

  bool operator==(const PredicateDecl&) const = default;
};

struct ActionDecl {
  std::string name;
  std::vector<TypedName> params;
  Formula precondition;  // empty conjunction when omitted
  Formula effect;        // empty conjunction when omitted

  bool operator==(const ActionDecl&) const = default;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionDecl> actions;

  bool operator==(const DomainAst&) const = default;
};

struct ProblemAst {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;  // ground
  Formula goal;            // ground conjunction of possibly-negated atoms

  bool operator==(const ProblemAst&) const = default;
};

struct ParseError {
  enum class Kind {
    unbalanced_parenthesis,
    unexpected_token,
    truncated_input,
    unknown_section,
  };

  Kind kind = Kind::unexpected_token;
  int line = 0;
  int column = 0;
  std::string message;

  bool operator==(const ParseError&) const = default;
};

const char* to_string(ParseError::Kind kind);

template <class T>
using ParseResult = std::variant<T, ParseError>;

template <class T>
bool ok(const ParseResult<T>& r) {
  return std::holds_alternative<T>(r);
}

}  // namespace formalizer::pddl

#endif
