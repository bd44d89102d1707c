#ifndef FORMALIZER_PDDL_PRINTER_HPP
#define FORMALIZER_PDDL_PRINTER_HPP

#include <string>

#include "formalizer/pddl/ast.hpp"

namespace formalizer::pddl {

// Canonical pretty-printers; parse(print(ast)) is structurally equal to ast.
std::string print_domain(const DomainAst& domain);
std::string print_problem(const ProblemAst& problem);
std::string print_formula(const Formula& formula);
std::string print_atom(const Atom& atom);

}  // namespace formalizer::pddl

#endif
