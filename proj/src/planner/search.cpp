#include "formalizer/planner/search.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "formalizer/semantics/check.hpp"
#include "formalizer/semantics/feedback.hpp"

namespace formalizer::planner {

std::string print_plan(const Plan& plan) {
  std::ostringstream os;
  for (const auto& step : plan.steps) {
    os << "(" << step.action;
    for (const auto& arg : step.args) os << " " << arg;
    os << ")\n";
  }
  return os.str();
}

std::variant<Plan, std::string> parse_plan(std::string_view text) {
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t comment = line.find(';');
    if (comment != std::string::npos) line.resize(comment);
    std::string cleaned;
    for (char c : line) {
      if (c == '(' || c == ')') {
        cleaned.push_back(' ');
      } else {
        cleaned.push_back(c);
      }
    }
    std::istringstream words(cleaned);
    PlanStep step;
    std::string word;
    while (words >> word) {
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char c) {
                       return static_cast<char>(std::tolower(c));
                     });
      if (step.action.empty()) {
        step.action = word;
      } else {
        step.args.push_back(word);
      }
    }
    if (step.action.empty()) continue;
    size_t open = std::count(line.begin(), line.end(), '(');
    size_t close = std::count(line.begin(), line.end(), ')');
    if (open != 1 || close != 1) {
      return "malformed plan step at line " + std::to_string(line_no);
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

namespace {

struct StateHash {
  size_t operator()(const std::vector<uint64_t>& words) const {
    size_t h = 0xcbf29ce484222325ULL;
    for (uint64_t w : words) {
      h ^= w;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

}  // namespace

SolveOutcome solve(const pddl::DomainAst& domain,
                   const pddl::ProblemAst& problem,
                   const SolveLimits& limits) {
  auto semantic_errors = semantics::check(domain, problem);
  if (!semantic_errors.empty()) {
    IllFormed ill;
    for (auto& error : semantic_errors) {
      ill.errors.push_back(semantics::format_diagnostic(
          semantics::Diagnostic::semantic(std::move(error))));
    }
    return ill;
  }

  auto grounded = ground(domain, problem, {limits.max_ground_actions});
  if (auto* error = std::get_if<GroundError>(&grounded)) {
    return IllFormed{{error->message}};
  }
  GroundTask& task = std::get<GroundTask>(grounded);

  if (goal_satisfied(task.init, task.goal)) {
    return Solved{Plan{}};
  }

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<
                            std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(limits.timeout_s));

  std::vector<std::vector<uint64_t>> states;
  std::vector<int> parent_state;
  std::vector<int> parent_action;
  std::unordered_map<std::vector<uint64_t>, int, StateHash> visited;

  states.push_back(task.init.words);
  parent_state.push_back(-1);
  parent_action.push_back(-1);
  visited.emplace(task.init.words, 0);

  std::deque<int> frontier{0};
  long expansions = 0;
  WorldState scratch(task.atoms.size());

  while (!frontier.empty()) {
    if (++expansions > limits.max_expansions) return Timeout{};
    if ((expansions & 1023) == 0 &&
        std::chrono::steady_clock::now() > deadline) {
      return Timeout{};
    }
    int current = frontier.front();
    frontier.pop_front();
    scratch.words = states[current];

    for (size_t a = 0; a < task.actions.size(); ++a) {
      const GroundAction& action = task.actions[a];
      if (!applicable(scratch, action)) continue;
      WorldState next = scratch;
      for (int atom : action.del) next.reset(atom);
      for (int atom : action.add) next.set(atom);
      auto [it, inserted] =
          visited.emplace(next.words, static_cast<int>(states.size()));
      if (!inserted) continue;
      states.push_back(next.words);
      parent_state.push_back(current);
      parent_action.push_back(static_cast<int>(a));
      if (goal_satisfied(next, task.goal)) {
        Plan plan;
        int node = static_cast<int>(states.size()) - 1;
        while (parent_action[node] >= 0) {
          const GroundAction& step = task.actions[parent_action[node]];
          plan.steps.push_back({step.name, step.args});
          node = parent_state[node];
        }
        std::reverse(plan.steps.begin(), plan.steps.end());
        return Solved{std::move(plan)};
      }
      frontier.push_back(static_cast<int>(states.size()) - 1);
    }
  }
  return Unsolvable{};
}

}  // namespace formalizer::planner
