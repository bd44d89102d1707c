#include "formalizer/pipeline/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "formalizer/pddl/extract.hpp"
#include "formalizer/pddl/grammar.hpp"
#include "formalizer/pddl/parser.hpp"
#include "formalizer/semantics/feedback.hpp"

namespace formalizer::pipeline {

using semantics::Diagnostic;
using semantics::PddlFile;
using validator::Verdict;

int verdict_rank(Verdict verdict) {
  switch (verdict) {
    case Verdict::syntactically_incorrect:
      return 0;
    case Verdict::semantically_incorrect:
      return 1;
    case Verdict::semantically_correct:
      return 2;
  }
  return 0;
}

Verdict best_verdict(const std::vector<AttemptRecord>& attempts) {
  Verdict best = Verdict::syntactically_incorrect;
  for (const auto& attempt : attempts) {
    if (verdict_rank(attempt.verdict) > verdict_rank(best)) {
      best = attempt.verdict;
    }
  }
  return best;
}

namespace {

// Parse, check, solve, and validate the extracted texts into the record.
void evaluate_extracted(AttemptRecord& record,
                        const dataset::TaskInstance& instance,
                        const RunOptions& options) {
  if (!record.extracted_domain || !record.extracted_problem) {
    record.verdict = Verdict::syntactically_incorrect;
    record.solve_status = "skipped";
    return;
  }
  auto domain = pddl::parse_domain(*record.extracted_domain);
  auto problem = pddl::parse_problem(*record.extracted_problem);
  std::vector<Diagnostic> diagnostics;
  if (auto* error = std::get_if<pddl::ParseError>(&domain)) {
    diagnostics.push_back(Diagnostic::parse(PddlFile::domain, *error));
  }
  if (auto* error = std::get_if<pddl::ParseError>(&problem)) {
    diagnostics.push_back(Diagnostic::parse(PddlFile::problem, *error));
  }
  if (diagnostics.empty()) {
    for (auto& error : semantics::check(std::get<pddl::DomainAst>(domain),
                                        std::get<pddl::ProblemAst>(problem))) {
      diagnostics.push_back(Diagnostic::semantic(std::move(error)));
    }
  }
  for (const auto& diagnostic : diagnostics) {
    record.syntax_errors.push_back(semantics::format_diagnostic(diagnostic));
  }
  if (!diagnostics.empty()) {
    record.verdict = Verdict::syntactically_incorrect;
    record.solve_status = "skipped";
    return;
  }

  const auto& predicted_domain = std::get<pddl::DomainAst>(domain);
  const auto& predicted_problem = std::get<pddl::ProblemAst>(problem);
  planner::SolveOutcome outcome =
      planner::solve(predicted_domain, predicted_problem, options.limits);
  if (auto* solved = std::get_if<planner::Solved>(&outcome)) {
    record.solve_status = "solved";
    record.plan_text = planner::print_plan(solved->plan);
    auto report = validator::validate(instance.truth_domain,
                                      instance.truth_problem, solved->plan);
    record.validation_detail = validator::format_validator_feedback(report);
  } else if (std::holds_alternative<planner::Unsolvable>(outcome)) {
    record.solve_status = "unsolvable";
  } else if (std::holds_alternative<planner::Timeout>(outcome)) {
    record.solve_status = "timeout";
  } else {
    record.solve_status = "ill-formed";
    for (const auto& error : std::get<planner::IllFormed>(outcome).errors) {
      record.syntax_errors.push_back(error);
    }
  }
  record.verdict = validator::semantic_verdict(
      instance.truth_domain, instance.truth_problem, domain, problem, outcome);
}

void note_backend_error(AttemptRecord& record) {
  record.backend_error = true;
  record.verdict = Verdict::syntactically_incorrect;
  record.solve_status = "skipped";
  record.syntax_errors.push_back("backend-error");
}

}  // namespace

AttemptRecord run_single(const PipelineConfig& config,
                         const dataset::TaskInstance& instance,
                         llm::Backend& backend, const RunOptions& options,
                         int attempt_index,
                         llm::GenerationRequest* final_request) {
  AttemptRecord record;
  record.attempt_index = attempt_index;

  auto call = [&](const std::string& stage, const StageContext& context) {
    llm::GenerationRequest request =
        build_prompt(config, instance, stage, context);
    if (final_request != nullptr) *final_request = request;
    return backend.generate(request,
                            {instance.id, stage, attempt_index});
  };

  switch (config.pre_inference) {
    case PreInference::none: {
      auto response = call("full", {});
      record.raw_output = response.content;
      if (response.finish == llm::GenerationResponse::Finish::error) {
        note_backend_error(record);
        return record;
      }
      break;
    }
    case PreInference::summary: {
      auto summary = call("summary", {});
      if (summary.finish == llm::GenerationResponse::Finish::error) {
        note_backend_error(record);
        return record;
      }
      StageContext context;
      context.summary = summary.content;
      auto response = call("full", context);
      record.raw_output = response.content;
      if (response.finish == llm::GenerationResponse::Finish::error) {
        note_backend_error(record);
        return record;
      }
      break;
    }
    case PreInference::sequential: {
      auto domain_response = call("domain-only", {});
      if (domain_response.finish == llm::GenerationResponse::Finish::error) {
        note_backend_error(record);
        return record;
      }
      auto domain_text = pddl::extract_domain_block(domain_response.content);
      if (!domain_text) {
        // A domain stage without usable PDDL short-circuits the problem
        // stage; the attempt counts as syntactically incorrect.
        record.raw_output = domain_response.content;
        record.syntax_errors.push_back(
            "no PDDL domain block found in the domain-stage output");
        record.verdict = Verdict::syntactically_incorrect;
        record.solve_status = "skipped";
        return record;
      }
      auto parsed = pddl::parse_domain(*domain_text);
      if (auto* error = std::get_if<pddl::ParseError>(&parsed)) {
        record.raw_output = domain_response.content;
        record.extracted_domain = domain_text;
        record.syntax_errors.push_back(semantics::format_diagnostic(
            Diagnostic::parse(PddlFile::domain, *error)));
        record.verdict = Verdict::syntactically_incorrect;
        record.solve_status = "skipped";
        return record;
      }
      StageContext context;
      context.domain_text = *domain_text;
      auto problem_response = call("problem-only", context);
      record.raw_output = problem_response.content;
      if (problem_response.finish == llm::GenerationResponse::Finish::error) {
        note_backend_error(record);
        return record;
      }
      record.extracted_domain = domain_text;
      record.extracted_problem =
          pddl::extract_problem_block(problem_response.content);
      if (!record.extracted_problem) {
        record.syntax_errors.push_back(
            "no PDDL problem block found in the problem-stage output");
      }
      evaluate_extracted(record, instance, options);
      if (!options.grammar.empty()) grammar_gate(record, options.grammar);
      return record;
    }
  }

  auto extracted = pddl::extract_pddl_blocks(record.raw_output);
  if (auto* error = std::get_if<pddl::ExtractionError>(&extracted)) {
    record.syntax_errors.push_back(error->message);
  } else {
    auto& blocks = std::get<pddl::ExtractedPddl>(extracted);
    record.extracted_domain = std::move(blocks.domain_text);
    record.extracted_problem = std::move(blocks.problem_text);
  }
  evaluate_extracted(record, instance, options);
  if (!options.grammar.empty()) grammar_gate(record, options.grammar);
  return record;
}

std::vector<AttemptRecord> run_pass_at_n(const PipelineConfig& config,
                                         const dataset::TaskInstance& instance,
                                         llm::Backend& backend,
                                         const RunOptions& options) {
  std::vector<AttemptRecord> attempts;
  for (int i = 0; i < std::max(1, config.n); ++i) {
    attempts.push_back(run_single(config, instance, backend, options, i));
  }
  return attempts;
}

std::vector<AttemptRecord> run_revision(const PipelineConfig& config,
                                        const dataset::TaskInstance& instance,
                                        llm::Backend& backend,
                                        const RunOptions& options) {
  const bool with_validator =
      config.inference == InferenceMode::revise_solver_validator;
  std::vector<AttemptRecord> attempts;

  llm::GenerationRequest conversation;
  AttemptRecord record =
      run_single(config, instance, backend, options, 0, &conversation);
  record.round = 0;
  attempts.push_back(record);
  conversation.messages.push_back({"assistant", record.raw_output});

  for (int round = 1; round < std::max(1, config.rounds); ++round) {
    const AttemptRecord& last = attempts.back();
    if (last.backend_error) break;
    // Early stop: the solver variant cannot see validation results, so it
    // stops as soon as a plan is found; the validator variant stops only
    // on semantic success.
    if (with_validator) {
      if (last.verdict == Verdict::semantically_correct) break;
    } else {
      if (last.solve_status == "solved") break;
    }

    std::ostringstream feedback;
    if (!last.syntax_errors.empty()) {
      feedback << "The PDDL files you generated have the following errors:\n";
      for (const auto& error : last.syntax_errors) {
        feedback << error << "\n";
      }
    } else if (last.solve_status == "unsolvable") {
      feedback << "The planning solver completed its search and found no "
                  "plan: the goal is unreachable from the initial state in "
                  "your files.\n";
    } else if (last.solve_status == "timeout") {
      feedback << "The planning solver exceeded its resource limits before "
                  "finding a plan.\n";
    } else if (last.solve_status == "solved") {
      // Reached only in the validator variant.
      feedback << "The planning solver found a plan, but it is not correct "
                  "for the task:\n"
               << last.validation_detail << "\n";
    }
    feedback << "Please revise the PDDL files.\n"
             << "Wrap PDDL domain file inside <domain_file>...</domain_file> "
                "and PDDL problem file inside "
                "<problem_file>...</problem_file>.\n";
    const std::string feedback_text = feedback.str();
    attempts.back().feedback_sent = feedback_text;

    conversation.messages.push_back({"user", feedback_text});
    llm::GenerationRequest request = conversation;
    request.temperature = config.temperature;
    auto response =
        backend.generate(request, {instance.id, "full", round});

    AttemptRecord revised;
    revised.attempt_index = round;
    revised.round = round;
    revised.raw_output = response.content;
    if (response.finish == llm::GenerationResponse::Finish::error) {
      note_backend_error(revised);
      attempts.push_back(std::move(revised));
      break;
    }
    auto extracted = pddl::extract_pddl_blocks(revised.raw_output);
    if (auto* error = std::get_if<pddl::ExtractionError>(&extracted)) {
      revised.syntax_errors.push_back(error->message);
    } else {
      auto& blocks = std::get<pddl::ExtractedPddl>(extracted);
      revised.extracted_domain = std::move(blocks.domain_text);
      revised.extracted_problem = std::move(blocks.problem_text);
    }
    evaluate_extracted(revised, instance, options);
    if (!options.grammar.empty()) grammar_gate(revised, options.grammar);
    conversation.messages.push_back({"assistant", revised.raw_output});
    attempts.push_back(std::move(revised));
  }
  return attempts;
}

std::vector<AttemptRecord> run_pipeline(const PipelineConfig& config,
                                        const dataset::TaskInstance& instance,
                                        llm::Backend& backend,
                                        const RunOptions& options) {
  switch (config.inference) {
    case InferenceMode::single:
      return {run_single(config, instance, backend, options)};
    case InferenceMode::pass_at_n:
      return run_pass_at_n(config, instance, backend, options);
    case InferenceMode::revise_solver:
    case InferenceMode::revise_solver_validator:
      return run_revision(config, instance, backend, options);
  }
  return {};
}

void grammar_gate(AttemptRecord& record, const std::string& grammar) {
  auto gate = [&](const std::optional<std::string>& text, const char* which,
                  bool parser_ok) {
    if (!text) return;
    bool accepted = pddl::grammar_accepts(grammar, *text);
    if (accepted != parser_ok) {
      std::ostringstream os;
      os << "grammar/parser disagreement on the " << which
         << " file: recognizer says " << (accepted ? "accept" : "reject")
         << ", parser says " << (parser_ok ? "accept" : "reject");
      record.toolchain_warnings.push_back(os.str());
    }
  };
  bool domain_ok = false;
  bool problem_ok = false;
  if (record.extracted_domain) {
    domain_ok = pddl::ok(pddl::parse_domain(*record.extracted_domain));
  }
  if (record.extracted_problem) {
    problem_ok = pddl::ok(pddl::parse_problem(*record.extracted_problem));
  }
  gate(record.extracted_domain, "domain", domain_ok);
  gate(record.extracted_problem, "problem", problem_ok);
}

}  // namespace formalizer::pipeline
