#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <variant>

#include "fixtures.hpp"
#include "formalizer/pddl/parser.hpp"
#include "formalizer/semantics/check.hpp"
#include "formalizer/semantics/feedback.hpp"

using namespace formalizer;
using namespace formalizer::semantics;

namespace {

pddl::DomainAst domain_of(const std::string& text) {
  auto result = pddl::parse_domain(text);
  REQUIRE(pddl::ok(result));
  return std::get<pddl::DomainAst>(result);
}

pddl::ProblemAst problem_of(const std::string& text) {
  auto result = pddl::parse_problem(text);
  REQUIRE(pddl::ok(result));
  return std::get<pddl::ProblemAst>(result);
}

}  // namespace

TEST_CASE("reference pair is clean") {
  auto domain = domain_of(fixtures::kBlocksworldDomain);
  auto problem = problem_of(fixtures::kBlocksworldP01);
  CHECK(check(domain, problem).empty());
}

TEST_CASE("unbound ?b2 in unstack is an undefined variable") {
  auto domain = domain_of(fixtures::kRevisionFaultyDomain);
  auto errors = check_domain(domain);
  REQUIRE(!errors.empty());
  bool found = false;
  for (const auto& error : errors) {
    if (error.kind == SemanticError::Kind::undefined_variable &&
        error.context == "action unstack" &&
        error.message.find("?b2") != std::string::npos) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("corrected unstack parameters make the domain clean") {
  auto domain = domain_of(fixtures::kRevisionCorrectedDomain);
  CHECK(check_domain(domain).empty());
}

TEST_CASE("goal referencing an undeclared object") {
  auto domain = domain_of(fixtures::kBlocksworldDomain);
  auto problem = problem_of(
      "(define (problem p) (:domain blocksworld)"
      " (:objects block1) (:init (on-table block1))"
      " (:goal (and (on-table block99))))");
  auto errors = check(domain, problem);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].kind == SemanticError::Kind::undefined_object);
  CHECK(errors[0].message.find("block99") != std::string::npos);
}

TEST_CASE("undefined predicate and arity mismatch are reported") {
  auto domain = domain_of(fixtures::kBlocksworldDomain);
  auto problem = problem_of(
      "(define (problem p) (:domain blocksworld)"
      " (:objects block1) (:init (flying block1) (clear block1 block1))"
      " (:goal (and)))");
  auto errors = check(domain, problem);
  REQUIRE(errors.size() == 2);
  CHECK(errors[0].kind == SemanticError::Kind::undefined_predicate);
  CHECK(errors[1].kind == SemanticError::Kind::arity_mismatch);
}

TEST_CASE("domain name mismatch is reported") {
  auto domain = domain_of(fixtures::kBlocksworldDomain);
  auto problem = problem_of(
      "(define (problem p) (:domain other) (:init) (:goal (and)))");
  auto errors = check(domain, problem);
  REQUIRE(!errors.empty());
  CHECK(errors[0].kind == SemanticError::Kind::domain_name_mismatch);
}

TEST_CASE("unsupported requirement flags are reported, not fatal") {
  auto domain = domain_of(
      "(define (domain d) (:requirements :strips :adl))");
  auto errors = check_domain(domain);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].kind == SemanticError::Kind::unsupported_requirement);
  CHECK(errors[0].message.find(":adl") != std::string::npos);
}

TEST_CASE("subtype closure is transitive with object on top") {
  auto domain = domain_of(
      "(define (domain d) (:requirements :strips :typing)"
      " (:types t2 - object t1 - t2)"
      " (:predicates (p ?x - t2) (q ?x - object))"
      " (:action a :parameters (?v - t1)"
      "  :precondition (and (p ?v) (q ?v)) :effect (and)))");
  CHECK(check_domain(domain).empty());

  auto problem = problem_of(
      "(define (problem p) (:domain d)"
      " (:objects o1 - t1 o2 - t2)"
      " (:init (p o1) (p o2) (q o2)) (:goal (and (p o1))))");
  CHECK(check(domain, problem).empty());
}

TEST_CASE("type mismatch is reported") {
  auto domain = domain_of(
      "(define (domain d) (:requirements :strips :typing)"
      " (:types t1 - object t2 - object)"
      " (:predicates (p ?x - t1)))");
  auto problem = problem_of(
      "(define (problem p) (:domain d) (:objects o2 - t2)"
      " (:init (p o2)) (:goal (and)))");
  auto errors = check(domain, problem);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].kind == SemanticError::Kind::type_mismatch);
}

TEST_CASE("check output order is deterministic") {
  auto domain = domain_of(fixtures::kRevisionFaultyDomain);
  auto problem = problem_of(
      "(define (problem p) (:domain blocks-world)"
      " (:objects b1 - block) (:init (missing b1))"
      " (:goal (and (on-table b99))))");
  auto a = check(domain, problem);
  auto b = check(domain, problem);
  CHECK(a == b);
  REQUIRE(a.size() >= 3);
  // domain-file findings sort before problem-file ones
  CHECK(a.front().file == PddlFile::domain);
  CHECK(a.back().file == PddlFile::problem);
}

TEST_CASE("feedback formatting matches the fixed templates") {
  SemanticError error;
  error.kind = SemanticError::Kind::undefined_variable;
  error.file = PddlFile::domain;
  error.context = "action unstack";
  error.message = "undefined variable ?b2 (declare it in :parameters)";
  CHECK(format_diagnostic(Diagnostic::semantic(error)) ==
        "domain file, action unstack: undefined variable ?b2 "
        "(declare it in :parameters)");

  pddl::ParseError parse_error;
  parse_error.kind = pddl::ParseError::Kind::unbalanced_parenthesis;
  parse_error.line = 3;
  parse_error.column = 7;
  parse_error.message = "unbalanced parenthesis";
  CHECK(format_diagnostic(
            Diagnostic::parse(PddlFile::problem, parse_error)) ==
        "problem file, line 3, column 7: unbalanced parenthesis");
}

TEST_CASE("empty feedback is the empty string") {
  CHECK(format_feedback({}).empty());
}

TEST_CASE("checker messages surface via real check output") {
  auto domain = domain_of(fixtures::kRevisionFaultyDomain);
  auto errors = check_domain(domain);
  REQUIRE(!errors.empty());
  std::vector<Diagnostic> diagnostics;
  for (auto& error : errors) {
    diagnostics.push_back(Diagnostic::semantic(error));
  }
  const std::string feedback = format_feedback(std::move(diagnostics));
  CHECK(feedback.find("domain file, action unstack: undefined variable "
                      "?b2") != std::string::npos);
}
