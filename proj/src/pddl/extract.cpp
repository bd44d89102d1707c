#include "formalizer/pddl/extract.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace formalizer::pddl {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

size_t find_ci(const std::string& haystack_lower, std::string_view needle,
               size_t from = 0) {
  return haystack_lower.find(to_lower(needle), from);
}

std::string trim(std::string_view s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return std::string(s.substr(begin, end - begin));
}

std::string strip_think_spans(std::string_view text) {
  std::string out(text);
  std::string lower = to_lower(out);
  while (true) {
    size_t open = lower.find("<think>");
    size_t close = lower.find("</think>");
    if (close == std::string::npos) break;
    size_t begin = (open != std::string::npos && open < close) ? open : 0;
    out.erase(begin, close + 8 - begin);
    lower.erase(begin, close + 8 - begin);
  }
  return out;
}

// Content between <tag>...</tag>, trying each tag spelling in order.
std::optional<std::string> find_tagged(
    const std::string& text, const std::vector<std::string>& open_tags,
    const std::vector<std::string>& close_tags) {
  std::string lower = to_lower(text);
  for (size_t variant = 0; variant < open_tags.size(); ++variant) {
    size_t open = find_ci(lower, open_tags[variant]);
    if (open == std::string::npos) continue;
    size_t content = open + open_tags[variant].size();
    size_t close = find_ci(lower, close_tags[variant], content);
    if (close == std::string::npos) continue;
    return trim(std::string_view(text).substr(content, close - content));
  }
  return std::nullopt;
}

std::optional<std::string> tagged_domain(const std::string& text) {
  return find_tagged(text, {"<domain_file>", "<domain file>"},
                     {"</domain_file>", "</domain file>"});
}

std::optional<std::string> tagged_problem(const std::string& text) {
  return find_tagged(text, {"<problem_file>", "<problem file>"},
                     {"</problem_file>", "</problem file>"});
}

// ```pddl fenced blocks, in order of appearance.
std::vector<std::string> pddl_fences(const std::string& text) {
  std::vector<std::string> blocks;
  std::string lower = to_lower(text);
  size_t pos = 0;
  while (true) {
    size_t fence = lower.find("```pddl", pos);
    if (fence == std::string::npos) break;
    size_t content = fence + 7;
    size_t close = lower.find("```", content);
    if (close == std::string::npos) break;
    blocks.push_back(
        trim(std::string_view(text).substr(content, close - content)));
    pos = close + 3;
  }
  return blocks;
}

}  // namespace

std::variant<ExtractedPddl, ExtractionError> extract_pddl_blocks(
    std::string_view llm_output) {
  std::string text = strip_think_spans(llm_output);
  auto domain = tagged_domain(text);
  auto problem = tagged_problem(text);
  if (domain && problem) {
    return ExtractedPddl{std::move(*domain), std::move(*problem)};
  }
  auto fences = pddl_fences(text);
  if (fences.size() >= 2) {
    return ExtractedPddl{std::move(fences[0]), std::move(fences[1])};
  }
  if (domain && fences.size() == 1) {
    return ExtractedPddl{std::move(*domain), std::move(fences[0])};
  }
  if (problem && fences.size() == 1) {
    return ExtractedPddl{std::move(fences[0]), std::move(*problem)};
  }
  return ExtractionError{"no PDDL domain/problem blocks found in output"};
}

std::optional<std::string> extract_domain_block(std::string_view llm_output) {
  std::string text = strip_think_spans(llm_output);
  if (auto block = tagged_domain(text)) return block;
  auto fences = pddl_fences(text);
  if (!fences.empty()) return fences.front();
  return std::nullopt;
}

std::optional<std::string> extract_problem_block(std::string_view llm_output) {
  std::string text = strip_think_spans(llm_output);
  if (auto block = tagged_problem(text)) return block;
  auto fences = pddl_fences(text);
  if (!fences.empty()) return fences.front();
  return std::nullopt;
}

}  // namespace formalizer::pddl
