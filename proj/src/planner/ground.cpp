#include "formalizer/planner/ground.hpp"

#include <algorithm>
#include <bit>

#include "formalizer/pddl/printer.hpp"

namespace formalizer::planner {

using pddl::Atom;
using pddl::DomainAst;
using pddl::Formula;
using pddl::ProblemAst;

int AtomTable::intern(const Atom& atom) {
  std::string key = pddl::print_atom(atom);
  auto it = ids.find(key);
  if (it != ids.end()) return it->second;
  int id = static_cast<int>(atoms.size());
  atoms.push_back(atom);
  ids.emplace(std::move(key), id);
  return id;
}

int AtomTable::lookup(const Atom& atom) const {
  auto it = ids.find(pddl::print_atom(atom));
  return it == ids.end() ? -1 : it->second;
}

std::vector<int> WorldState::atom_ids() const {
  std::vector<int> out;
  for (size_t w = 0; w < words.size(); ++w) {
    uint64_t word = words[w];
    while (word != 0) {
      int bit = std::countr_zero(word);
      out.push_back(static_cast<int>(w * 64) + bit);
      word &= word - 1;
    }
  }
  return out;
}

namespace {

struct TypeHierarchy {
  std::unordered_map<std::string, std::string> parent_of;

  explicit TypeHierarchy(const DomainAst& domain) {
    for (const auto& type : domain.types) {
      parent_of.emplace(type.name, type.parent);
    }
  }

  bool compatible(const std::string& type, const std::string& required) const {
    if (required == "object") return true;
    std::string current = type;
    size_t hops = 0;
    while (true) {
      if (current == required) return true;
      if (current == "object" || hops++ > parent_of.size()) return false;
      auto it = parent_of.find(current);
      if (it == parent_of.end()) return false;
      current = it->second;
    }
  }
};

void flatten_literals(const Formula& f, std::vector<Atom>& pos,
                      std::vector<Atom>& neg) {
  switch (f.kind) {
    case Formula::Kind::atom:
      pos.push_back(f.atom);
      return;
    case Formula::Kind::negation:
      neg.push_back(f.atom);
      return;
    case Formula::Kind::conjunction:
      for (const auto& child : f.children) flatten_literals(child, pos, neg);
      return;
  }
}

Atom substitute(const Atom& atom,
                const std::unordered_map<std::string, std::string>& binding) {
  Atom ground = atom;
  for (auto& term : ground.terms) {
    auto it = binding.find(term);
    if (it != binding.end()) term = it->second;
  }
  return ground;
}

void intern_sorted_unique(AtomTable& table, const std::vector<Atom>& atoms,
                          std::vector<int>& out) {
  for (const auto& atom : atoms) out.push_back(table.intern(atom));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace

std::variant<GroundTask, GroundError> ground(const DomainAst& domain,
                                             const ProblemAst& problem,
                                             const GroundLimits& limits) {
  GroundTask task;
  TypeHierarchy hierarchy(domain);

  std::vector<pddl::TypedName> objects;
  for (const auto& object : problem.objects) {
    bool seen = std::any_of(objects.begin(), objects.end(),
                            [&](const pddl::TypedName& o) {
                              return o.name == object.name;
                            });
    if (!seen) objects.push_back(object);
  }

  for (const auto& action : domain.actions) {
    std::vector<Atom> pre_pos_lifted, pre_neg_lifted;
    std::vector<Atom> add_lifted, del_lifted;
    flatten_literals(action.precondition, pre_pos_lifted, pre_neg_lifted);
    flatten_literals(action.effect, add_lifted, del_lifted);

    // Candidate objects per parameter, filtered by type compatibility.
    std::vector<std::vector<const pddl::TypedName*>> candidates;
    for (const auto& param : action.params) {
      std::vector<const pddl::TypedName*> slot;
      for (const auto& object : objects) {
        if (hierarchy.compatible(object.type, param.type)) {
          slot.push_back(&object);
        }
      }
      candidates.push_back(std::move(slot));
    }
    bool empty_slot = std::any_of(candidates.begin(), candidates.end(),
                                  [](const auto& c) { return c.empty(); });
    if (empty_slot && !action.params.empty()) continue;

    std::vector<size_t> odometer(action.params.size(), 0);
    while (true) {
      if (static_cast<long>(task.actions.size()) >=
          limits.max_ground_actions) {
        return GroundError{
            "ground action count exceeds limit of " +
            std::to_string(limits.max_ground_actions)};
      }
      GroundAction ground_action;
      ground_action.name = action.name;
      std::unordered_map<std::string, std::string> binding;
      for (size_t i = 0; i < action.params.size(); ++i) {
        const std::string& value = candidates[i][odometer[i]]->name;
        binding[action.params[i].name] = value;
        ground_action.args.push_back(value);
      }
      auto instantiate = [&](const std::vector<Atom>& lifted,
                             std::vector<int>& out) {
        std::vector<Atom> ground_atoms;
        ground_atoms.reserve(lifted.size());
        for (const auto& atom : lifted) {
          ground_atoms.push_back(substitute(atom, binding));
        }
        intern_sorted_unique(task.atoms, ground_atoms, out);
      };
      instantiate(pre_pos_lifted, ground_action.pre_pos);
      instantiate(pre_neg_lifted, ground_action.pre_neg);
      instantiate(add_lifted, ground_action.add);
      instantiate(del_lifted, ground_action.del);
      // Deletes apply before adds: an atom in both ends up true.
      std::vector<int> del_only;
      std::set_difference(ground_action.del.begin(), ground_action.del.end(),
                          ground_action.add.begin(), ground_action.add.end(),
                          std::back_inserter(del_only));
      ground_action.del = std::move(del_only);
      task.actions.push_back(std::move(ground_action));

      // Advance odometer.
      size_t i = 0;
      for (; i < odometer.size(); ++i) {
        if (++odometer[i] < candidates[i].size()) break;
        odometer[i] = 0;
      }
      if (i == odometer.size()) break;
      if (odometer.empty()) break;  // zero-parameter action grounds once
    }
  }

  std::sort(task.actions.begin(), task.actions.end(),
            [](const GroundAction& a, const GroundAction& b) {
              if (a.name != b.name) return a.name < b.name;
              return a.args < b.args;
            });

  std::vector<int> init_ids;
  intern_sorted_unique(task.atoms, problem.init, init_ids);
  std::vector<Atom> goal_pos, goal_neg;
  flatten_literals(problem.goal, goal_pos, goal_neg);
  intern_sorted_unique(task.atoms, goal_pos, task.goal.pos);
  intern_sorted_unique(task.atoms, goal_neg, task.goal.neg);

  task.init = WorldState(task.atoms.size());
  for (int id : init_ids) task.init.set(id);
  return task;
}

bool applicable(const WorldState& state, const GroundAction& action) {
  for (int atom : action.pre_pos) {
    if (!state.test(atom)) return false;
  }
  for (int atom : action.pre_neg) {
    if (state.test(atom)) return false;
  }
  return true;
}

std::optional<WorldState> apply(const WorldState& state,
                                const GroundAction& action) {
  if (!applicable(state, action)) return std::nullopt;
  WorldState next = state;
  for (int atom : action.del) next.reset(atom);
  for (int atom : action.add) next.set(atom);
  return next;
}

bool goal_satisfied(const WorldState& state, const GoalCondition& goal) {
  for (int atom : goal.pos) {
    if (!state.test(atom)) return false;
  }
  for (int atom : goal.neg) {
    if (state.test(atom)) return false;
  }
  return true;
}

}  // namespace formalizer::planner
