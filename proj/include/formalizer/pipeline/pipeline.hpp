#ifndef FORMALIZER_PIPELINE_PIPELINE_HPP
#define FORMALIZER_PIPELINE_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "formalizer/pipeline/prompts.hpp"
#include "formalizer/planner/search.hpp"
#include "formalizer/validator/validate.hpp"

namespace formalizer::pipeline {

struct AttemptRecord {
  int attempt_index = 0;
  int round = 0;
  std::string raw_output;  // final-stage model output
  std::optional<std::string> extracted_domain;
  std::optional<std::string> extracted_problem;
  std::vector<std::string> syntax_errors;  // extraction/parse/check findings
  validator::Verdict verdict = validator::Verdict::syntactically_incorrect;
  std::optional<std::string> feedback_sent;  // only when a next round ran
  std::string solve_status;                  // solved|unsolvable|timeout|ill-formed|skipped
  std::string plan_text;
  std::string validation_detail;
  std::vector<std::string> toolchain_warnings;
  bool backend_error = false;
};

int verdict_rank(validator::Verdict verdict);
validator::Verdict best_verdict(const std::vector<AttemptRecord>& attempts);

struct RunOptions {
  planner::SolveLimits limits;
  std::string grammar;  // enables the post-hoc recognizer gate when set
};

AttemptRecord run_single(const PipelineConfig& config,
                         const dataset::TaskInstance& instance,
                         llm::Backend& backend, const RunOptions& options,
                         int attempt_index = 0,
                         llm::GenerationRequest* final_request = nullptr);

std::vector<AttemptRecord> run_pass_at_n(const PipelineConfig& config,
                                         const dataset::TaskInstance& instance,
                                         llm::Backend& backend,
                                         const RunOptions& options);

std::vector<AttemptRecord> run_revision(const PipelineConfig& config,
                                        const dataset::TaskInstance& instance,
                                        llm::Backend& backend,
                                        const RunOptions& options);

// Dispatch on config.inference.
std::vector<AttemptRecord> run_pipeline(const PipelineConfig& config,
                                        const dataset::TaskInstance& instance,
                                        llm::Backend& backend,
                                        const RunOptions& options);

// Cross-checks the extracted texts against the emitted grammar; a
// disagreement between recognizer and parser is logged, not fatal.
void grammar_gate(AttemptRecord& record, const std::string& grammar);

}  // namespace formalizer::pipeline

#endif
