#ifndef FORMALIZER_PLANNER_GROUND_HPP
#define FORMALIZER_PLANNER_GROUND_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "formalizer/pddl/ast.hpp"

namespace formalizer::planner {

// Fixed table of ground atoms; ids index every state bitset.
struct AtomTable {
  std::vector<pddl::Atom> atoms;
  std::unordered_map<std::string, int> ids;

  int intern(const pddl::Atom& atom);
  int lookup(const pddl::Atom& atom) const;  // -1 when absent
  size_t size() const { return atoms.size(); }
};

// Closed-world state over the atom table, packed into 64-bit words.
struct WorldState {
  std::vector<uint64_t> words;

  explicit WorldState(size_t atom_count = 0)
      : words((atom_count + 63) / 64, 0) {}

  bool test(int atom) const {
    return (words[atom >> 6] >> (atom & 63)) & 1;
  }
  void set(int atom) { words[atom >> 6] |= uint64_t{1} << (atom & 63); }
  void reset(int atom) { words[atom >> 6] &= ~(uint64_t{1} << (atom & 63)); }
  std::vector<int> atom_ids() const;

  bool operator==(const WorldState&) const = default;
};

struct GroundAction {
  std::string name;
  std::vector<std::string> args;
  std::vector<int> pre_pos;
  std::vector<int> pre_neg;
  std::vector<int> add;
  std::vector<int> del;  // add and del are disjoint after normalization
};

struct GoalCondition {
  std::vector<int> pos;
  std::vector<int> neg;
};

struct GroundTask {
  AtomTable atoms;
  std::vector<GroundAction> actions;  // sorted by (name, args)
  WorldState init;
  GoalCondition goal;
};

struct GroundError {
  std::string message;
};

struct GroundLimits {
  long max_ground_actions = 1'000'000;
};

// Enumerates ground actions over type-compatible object tuples.
// Expects check() to have passed; unknown symbols are undefined behavior
// at this layer.
std::variant<GroundTask, GroundError> ground(const pddl::DomainAst& domain,
                                             const pddl::ProblemAst& problem,
                                             const GroundLimits& limits = {});

// STRIPS transition: (state \ del) + add when preconditions hold.
bool applicable(const WorldState& state, const GroundAction& action);
std::optional<WorldState> apply(const WorldState& state,
                                const GroundAction& action);

bool goal_satisfied(const WorldState& state, const GoalCondition& goal);

}  // namespace formalizer::planner

#endif
