#ifndef FORMALIZER_PDDL_EXTRACT_HPP
#define FORMALIZER_PDDL_EXTRACT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace formalizer::pddl {

struct ExtractionError {
  std::string message;

  bool operator==(const ExtractionError&) const = default;
};

struct ExtractedPddl {
  std::string domain_text;
  std::string problem_text;
};

// Pulls the PDDL blocks out of raw model output. Recognizes
// <domain_file>/<domain file> tag pairs (and the problem equivalents),
// falls back to ```pddl fenced blocks, and ignores <think>...</think>
// reasoning spans.
std::variant<ExtractedPddl, ExtractionError> extract_pddl_blocks(
    std::string_view llm_output);

// Single-block variants used by the sequential pipeline stages.
std::optional<std::string> extract_domain_block(std::string_view llm_output);
std::optional<std::string> extract_problem_block(std::string_view llm_output);

}  // namespace formalizer::pddl

#endif
