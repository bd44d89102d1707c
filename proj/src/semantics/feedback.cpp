#include "formalizer/semantics/feedback.hpp"

#include <algorithm>
#include <sstream>

namespace formalizer::semantics {

namespace {

const char* file_name(PddlFile file) {
  return file == PddlFile::domain ? "domain file" : "problem file";
}

}  // namespace

std::string format_diagnostic(const Diagnostic& diagnostic) {
  std::ostringstream os;
  if (const auto* parse = std::get_if<pddl::ParseError>(&diagnostic.payload)) {
    os << file_name(diagnostic.file) << ", line " << parse->line << ", column "
       << parse->column << ": " << parse->message;
  } else {
    const auto& semantic = std::get<SemanticError>(diagnostic.payload);
    os << file_name(diagnostic.file) << ", " << semantic.context << ": "
       << semantic.message;
  }
  return os.str();
}

std::string format_feedback(std::vector<Diagnostic> diagnostics) {
  auto sort_key = [](const Diagnostic& d) {
    int is_semantic = std::holds_alternative<SemanticError>(d.payload) ? 1 : 0;
    std::string context;
    int kind = 0;
    if (is_semantic) {
      const auto& e = std::get<SemanticError>(d.payload);
      context = e.context;
      kind = static_cast<int>(e.kind);
    } else {
      const auto& e = std::get<pddl::ParseError>(d.payload);
      context = "";
      kind = static_cast<int>(e.kind);
    }
    return std::make_tuple(static_cast<int>(d.file), is_semantic,
                           std::move(context), kind);
  };
  std::stable_sort(diagnostics.begin(), diagnostics.end(),
                   [&](const Diagnostic& a, const Diagnostic& b) {
                     return sort_key(a) < sort_key(b);
                   });
  std::ostringstream os;
  for (size_t i = 0; i < diagnostics.size(); ++i) {
    if (i > 0) os << "\n";
    os << format_diagnostic(diagnostics[i]);
  }
  return os.str();
}

}  // namespace formalizer::semantics
