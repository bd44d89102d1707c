#include "formalizer/pipeline/prompts.hpp"

#include <sstream>
#include <stdexcept>

namespace formalizer::pipeline {

namespace {

// PDDL primer prepended under the knowledge prompt style: component
// walkthrough, abstract domain/problem examples, and generation notes.
const char kKnowledgePreamble[] =
    R"(PDDL domain file contains domain name, requirements, types of objects in the domain, predicates, and actions.
Based on the natural language domain description, identify the actions that are possible.
Identify action sematics i.e. understand the preconditions under which that action could be done and the effects of the action.
Then identify appropriate predicates that could enable action semantics i.e. preconditions and effects.
PDDL domain file has a definitive syntax that must be followed for any domain. An abstract example PDDL domain file is given below:

<domain_file>
(define
	(domain domain_name)
	(:requirements :strips :typing)
	(:types
		type1
		type2
	)
	(:predicates
		(predicate1 ?arg1 - type1 ?arg2 - type2)
		(predicate2 ?arg1 - type1 ?arg2 - type2)
	)
	(:action action1
		:parameters (?arg1 - type1 ?arg2 - type2 ?arg3 - type2)
		:precondition (predicate1 ?arg1 ?arg2)
		:effect (and (predicate1 ?arg1 ?arg2) (predicate2 ?arg1 ?arg3))
	)
	(:action action2
		:parameters (?arg1 - type1 ?arg2 - type2 ?arg3 - type2)
		:precondition (and (predicate1 ?arg1 ?arg2) (predicate2 ?arg1 ?arg3))
		:effect (predicate2 ?arg1 ?arg3)
	)
)
</domain_file>

Notes for generating domain file:
- type1 & type2 are only representative and should be replaced with appropriate types. There could be any number of types.
- predicate1 & predicate2 are only representative and should be replaced with appropriate predicates. There could be any number of predicates.
- action1 & action2 are only representative and should be replaced with appropriate actions. There could be any number of actions.
- arg1 & arg2 are only representative and should be replaced with appropriate arguments for predicates and in preconditions and effects.
- predicates with proper arguments could be combined to combine complex boolean expression to represent predicondition and effect
The braces should be balanced for each section of the PDDL program
- Use predicates with arguments of the right type as declared in domain file
- All the arguments to any :precondition or :effect of an action should be declared in :parameters as input arguments


PDDL problem file contains problem name, domain name, objects in this problem instance, init state of objects, and goal state of objects.
Based on the natural language problem description, identify the relevant objects for this problems with their names and types.
Represent the initial state with the appropriate predicates and object arguments. Represent the goal state with the appropriate predicates and object arguments.
PDDL problem file has a definitive syntax that must be followed for any problem. An abstract example PDDL problem file is given below.

<problem_file>
(define
	(problem problem_name)
	(:domain domain_name)
	(:objects
		obj1 obj2 - type1
		obj3, obj4 - type2
	)
	(:init (predicate1 obj1 obj3) (predicate2 obj2 obj3))
	(:goal (and (predicate1 obj1 obj4) (predicate2 obj2 obj3)))
)
</problem_file>

Notes for generating problem file:
- obj1, obj2, ... are only representative and should be replaced with appropriate objects. There could be any number of obects with their types.
- init state with predicate1 & predicate2 is only representative and should be replaced with appropriate predicates that define init state
- goal state with predicate1 & predicate2 is only representative and should be replaced with appropriate predicates that define goal state
- predicates with proper arguments could be combined to combine complex boolean expression to represent init and goal states
- The braces should be balanced for each section of the PDDL program
- Use predicates with arguments of the right type as declared in domain file
- All the objects that would be arguments of predicates in init and goal states should be declared in :objects

)";

std::string descriptions_block(const dataset::TaskInstance& instance,
                               bool include_problem) {
  std::ostringstream os;
  os << "Domain description:\n" << instance.domain_description << "\n\n";
  if (include_problem) {
    os << "Problem description:\n" << instance.problem_description << "\n\n";
  }
  return os.str();
}

}  // namespace

std::string PipelineConfig::display_name() const {
  if (!name.empty()) return name;
  std::ostringstream os;
  os << (prompt_style == PromptStyle::baseline ? "baseline" : "knowledge");
  switch (pre_inference) {
    case PreInference::none:
      break;
    case PreInference::summary:
      os << "+summary";
      break;
    case PreInference::sequential:
      os << "+sequential";
      break;
  }
  switch (inference) {
    case InferenceMode::single:
      break;
    case InferenceMode::pass_at_n:
      os << "+pass@" << n;
      break;
    case InferenceMode::revise_solver:
      os << "+revise-solver@" << rounds;
      break;
    case InferenceMode::revise_solver_validator:
      os << "+revise-solver-validator@" << rounds;
      break;
  }
  if (grammar_check) os << "+grammar";
  return os.str();
}

llm::GenerationRequest build_prompt(const PipelineConfig& config,
                                    const dataset::TaskInstance& instance,
                                    const std::string& stage,
                                    const StageContext& context) {
  std::ostringstream prompt;
  const bool knowledge = config.prompt_style == PromptStyle::knowledge;

  if (stage == "full") {
    if (knowledge) prompt << kKnowledgePreamble;
    prompt << descriptions_block(instance, /*include_problem=*/true);
    if (!context.summary.empty()) {
      prompt << "Summary of the planning task:\n" << context.summary
             << "\n\n";
    }
    prompt << "Write the domain and problem files in minimal PDDL.\n";
    if (knowledge) {
      prompt << "Wrap PDDL domain file inside <domain_file>...</domain_file> "
                "and PDDL problem file inside "
                "<problem_file>...</problem_file>.\n";
    } else {
      prompt << "Wrap PDDL domain file inside <domain file>...</domain file> "
                "and PDDL problem file inside "
                "<problem file>...</problem file>.\n";
    }
    prompt << "<think>\n";
  } else if (stage == "domain-only") {
    if (config.pre_inference != PreInference::sequential) {
      throw std::invalid_argument(
          "domain-only stage requires the sequential pipeline");
    }
    if (knowledge) prompt << kKnowledgePreamble;
    prompt << descriptions_block(instance, /*include_problem=*/false);
    prompt << "Write only the domain file in minimal PDDL.\n";
    prompt << "Wrap the PDDL domain file inside "
              "<domain_file>...</domain_file>.\n";
    prompt << "<think>\n";
  } else if (stage == "problem-only") {
    if (config.pre_inference != PreInference::sequential) {
      throw std::invalid_argument(
          "problem-only stage requires the sequential pipeline");
    }
    if (knowledge) prompt << kKnowledgePreamble;
    prompt << descriptions_block(instance, /*include_problem=*/true);
    prompt << "The PDDL domain file is:\n<domain_file>\n"
           << context.domain_text << "\n</domain_file>\n\n";
    prompt << "Write only the problem file in minimal PDDL, consistent with "
              "the domain file above.\n";
    prompt << "Wrap the PDDL problem file inside "
              "<problem_file>...</problem_file>.\n";
    prompt << "<think>\n";
  } else if (stage == "summary") {
    if (config.pre_inference != PreInference::summary) {
      throw std::invalid_argument(
          "summary stage requires the summary pipeline");
    }
    prompt << descriptions_block(instance, /*include_problem=*/true);
    prompt << "Write a textual summary with all necessary information to "
              "later write PDDL domain and problem files: the types of "
              "objects, the objects, the actions with their preconditions "
              "and effects, the initial state, and the goal state.\n";
    prompt << "Do not write any PDDL yet.\n";
    prompt << "<think>\n";
  } else {
    throw std::invalid_argument("unknown pipeline stage '" + stage + "'");
  }

  llm::GenerationRequest request;
  request.messages.push_back({"user", prompt.str()});
  request.temperature = config.temperature;
  return request;
}

}  // namespace formalizer::pipeline
