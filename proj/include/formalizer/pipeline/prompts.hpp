#ifndef FORMALIZER_PIPELINE_PROMPTS_HPP
#define FORMALIZER_PIPELINE_PROMPTS_HPP

#include <string>

#include "formalizer/dataset/dataset.hpp"
#include "formalizer/llm/client.hpp"

namespace formalizer::pipeline {

enum class PromptStyle { baseline, knowledge };
enum class PreInference { none, summary, sequential };
enum class InferenceMode {
  single,
  pass_at_n,
  revise_solver,
  revise_solver_validator,
};

struct PipelineConfig {
  std::string name;  // derived from the axes when empty
  PromptStyle prompt_style = PromptStyle::baseline;
  PreInference pre_inference = PreInference::none;
  InferenceMode inference = InferenceMode::single;
  int n = 1;       // pass_at_n
  int rounds = 1;  // revision modes
  bool grammar_check = false;
  double temperature = 0.4;

  std::string display_name() const;
};

// Extra inputs for staged prompts: the generated domain file for the
// problem-only stage, the generated summary for the post-summary stage.
struct StageContext {
  std::string domain_text;
  std::string summary;
};

// Stage is one of "full", "domain-only", "problem-only", "summary".
llm::GenerationRequest build_prompt(const PipelineConfig& config,
                                    const dataset::TaskInstance& instance,
                                    const std::string& stage,
                                    const StageContext& context = {});

}  // namespace formalizer::pipeline

#endif
