#include "formalizer/dataset/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "formalizer/pddl/parser.hpp"
#include "formalizer/pddl/printer.hpp"
#include "formalizer/semantics/check.hpp"
#include "formalizer/semantics/feedback.hpp"

namespace formalizer::dataset {

namespace fs = std::filesystem;

const std::string& blocksworld_domain_pddl() {
  static const std::string text = R"((define (domain blocksworld)
  (:requirements :strips)
(:predicates (clear ?x)
             (on-table ?x)
             (arm-empty)
             (holding ?x)
             (on ?x ?y))

(:action pickup
  :parameters (?ob)
  :precondition (and (clear ?ob) (on-table ?ob) (arm-empty))
  :effect (and (holding ?ob) (not (clear ?ob)) (not (on-table ?ob))
               (not (arm-empty))))

(:action putdown
  :parameters  (?ob)
  :precondition (holding ?ob)
  :effect (and (clear ?ob) (arm-empty) (on-table ?ob)
               (not (holding ?ob))))

(:action stack
  :parameters  (?ob ?underob)
  :precondition (and (clear ?underob) (holding ?ob))
  :effect (and (arm-empty) (clear ?ob) (on ?ob ?underob)
               (not (clear ?underob)) (not (holding ?ob))))

(:action unstack
  :parameters  (?ob ?underob)
  :precondition (and (on ?ob ?underob) (clear ?ob) (arm-empty))
  :effect (and (holding ?ob) (clear ?underob)
               (not (on ?ob ?underob)) (not (clear ?ob)) (not (arm-empty)))))
)";
  return text;
}

const std::string& blocksworld_domain_description() {
  static const std::string text =
      R"(I am playing with a set of blocks where I need to arrange the blocks into stacks. Here are the actions I can do

   Pick up a block
   Unstack a block from on top of another block
   Put down a block
   Stack a block on top of another block

   I have the following restrictions on my actions:
   I can only pick up or unstack one block at a time.
   I can only pick up or unstack a block if my hand is empty.
   I can only pick up a block if the block is on the table and the block is clear. A block is clear if the block has no other blocks on top of it and if the block is not picked up.
   I can only unstack a block from on top of another block if the block I am unstacking was really on top of the other block.
   I can only unstack a block from on top of another block if the block I am unstacking is clear.
   Once I pick up or unstack a block, I am holding the block.
   I can only put down a block that I am holding.
   I can only stack a block on top of another block if I am holding the block being stacked.
   I can only stack a block on top of another block if the block onto which I am stacking the block is clear.
   Once I put down or stack a block, my hand becomes empty.
   Once you stack a block on top of a second block, the second block is no longer clear.
)";
  return text;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string block_name(int index) { return "block" + std::to_string(index); }

std::vector<bool> clear_flags(const BlocksConfig& config) {
  const int n = static_cast<int>(config.under.size());
  std::vector<bool> clear(static_cast<size_t>(n) + 1, true);
  for (int b = 1; b <= n; ++b) {
    int under = config.under[b - 1];
    if (under != 0) clear[under] = false;
  }
  return clear;
}

pddl::Atom atom(std::string pred, std::vector<std::string> terms = {}) {
  return pddl::Atom{std::move(pred), std::move(terms)};
}

}  // namespace

BlocksConfig all_on_table(int num_blocks) {
  return BlocksConfig{std::vector<int>(static_cast<size_t>(num_blocks), 0)};
}

BlocksConfig random_config(int num_blocks, std::uint64_t& rng_state) {
  BlocksConfig config{std::vector<int>(static_cast<size_t>(num_blocks), 0)};
  std::vector<int> clear;
  for (int b = 1; b <= num_blocks; ++b) {
    // Place on the table or on any currently clear block.
    std::uint64_t choice = splitmix64(rng_state) % (clear.size() + 1);
    if (choice == 0) {
      config.under[b - 1] = 0;
    } else {
      int target = clear[choice - 1];
      config.under[b - 1] = target;
      clear.erase(clear.begin() + static_cast<long>(choice) - 1);
    }
    clear.push_back(b);
  }
  return config;
}

TaskInstance make_blocksworld_instance(const std::string& id,
                                       const BlocksConfig& init,
                                       const BlocksConfig& goal) {
  const int n = static_cast<int>(init.under.size());
  TaskInstance instance;
  instance.id = id;
  instance.domain_description = blocksworld_domain_description();

  auto domain = pddl::parse_domain(blocksworld_domain_pddl());
  instance.truth_domain = std::get<pddl::DomainAst>(domain);

  pddl::ProblemAst problem;
  problem.name = "blocksworld-" + id;
  problem.domain_name = "blocksworld";
  for (int b = 1; b <= n; ++b) {
    problem.objects.push_back({block_name(b), "object"});
  }
  auto init_clear = clear_flags(init);
  for (int b = 1; b <= n; ++b) {
    int under = init.under[b - 1];
    if (under == 0) {
      problem.init.push_back(atom("on-table", {block_name(b)}));
    } else {
      problem.init.push_back(atom("on", {block_name(b), block_name(under)}));
    }
    if (init_clear[b]) {
      problem.init.push_back(atom("clear", {block_name(b)}));
    }
  }
  problem.init.push_back(atom("arm-empty"));

  std::vector<pddl::Formula> goal_atoms;
  for (int b = 1; b <= n; ++b) {
    int under = goal.under[b - 1];
    if (under == 0) {
      goal_atoms.push_back(
          pddl::Formula::make_atom(atom("on-table", {block_name(b)})));
    } else {
      goal_atoms.push_back(pddl::Formula::make_atom(
          atom("on", {block_name(b), block_name(under)})));
    }
  }
  problem.goal = pddl::Formula::make_and(std::move(goal_atoms));
  instance.truth_problem = std::move(problem);

  auto rendered = render_problem_description(instance.truth_problem);
  instance.problem_description = std::get<std::string>(rendered);
  return instance;
}

TaskInstance generate_blocksworld(int num_blocks, std::uint64_t seed) {
  std::uint64_t rng = seed * 0x9e3779b97f4a7c15ULL +
                      static_cast<std::uint64_t>(num_blocks);
  BlocksConfig init = random_config(num_blocks, rng);
  BlocksConfig goal = random_config(num_blocks, rng);
  std::string id = "blocksworld-n" + std::to_string(num_blocks) + "-s" +
                   std::to_string(seed);
  return make_blocksworld_instance(id, init, goal);
}

TaskInstance canonical_blocksworld_p01() {
  return make_blocksworld_instance("p01", all_on_table(4), all_on_table(4));
}

namespace {

struct Fact {
  int category;  // 0 clear, 1 on, 2 hand-empty, 3 on-table
  int primary;   // block number for ordering
  std::string text;
};

std::string block_phrase(const std::string& object) {
  if (object.rfind("block", 0) == 0 && object.size() > 5 &&
      std::all_of(object.begin() + 5, object.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      })) {
    return "block " + object.substr(5);
  }
  return object;
}

int block_number(const std::string& object) {
  if (object.rfind("block", 0) == 0) {
    try {
      return std::stoi(object.substr(5));
    } catch (...) {
    }
  }
  return 0;
}

std::variant<std::vector<Fact>, RenderError> facts_of(
    const std::vector<pddl::Atom>& atoms) {
  std::vector<Fact> facts;
  for (const auto& a : atoms) {
    if (a.predicate == "clear" && a.terms.size() == 1) {
      facts.push_back({0, block_number(a.terms[0]),
                       block_phrase(a.terms[0]) + " is clear"});
    } else if (a.predicate == "on" && a.terms.size() == 2) {
      facts.push_back({1, block_number(a.terms[0]),
                       block_phrase(a.terms[0]) + " is on top of " +
                           block_phrase(a.terms[1])});
    } else if (a.predicate == "arm-empty" && a.terms.empty()) {
      facts.push_back({2, 0, "the hand is empty"});
    } else if (a.predicate == "on-table" && a.terms.size() == 1) {
      facts.push_back({3, block_number(a.terms[0]),
                       block_phrase(a.terms[0]) + " is on the table"});
    } else {
      return RenderError{"unsupported predicate '" + a.predicate +
                         "' in BlocksWorld description"};
    }
  }
  std::stable_sort(facts.begin(), facts.end(),
                   [](const Fact& x, const Fact& y) {
                     if (x.category != y.category) {
                       return x.category < y.category;
                     }
                     return x.primary < y.primary;
                   });
  return facts;
}

std::string join_clauses(const std::vector<Fact>& facts) {
  std::ostringstream os;
  for (size_t i = 0; i < facts.size(); ++i) {
    if (i > 0) os << ", ";
    if (i + 1 == facts.size() && facts.size() > 1) os << "and ";
    os << facts[i].text;
  }
  return os.str();
}

}  // namespace

std::variant<std::string, RenderError> render_problem_description(
    const pddl::ProblemAst& truth_problem) {
  auto init_facts = facts_of(truth_problem.init);
  if (auto* error = std::get_if<RenderError>(&init_facts)) return *error;

  std::vector<pddl::Atom> goal_atoms;
  if (truth_problem.goal.kind == pddl::Formula::Kind::conjunction) {
    for (const auto& child : truth_problem.goal.children) {
      if (child.kind != pddl::Formula::Kind::atom) {
        return RenderError{"negated or nested goal is not renderable"};
      }
      goal_atoms.push_back(child.atom);
    }
  } else if (truth_problem.goal.kind == pddl::Formula::Kind::atom) {
    goal_atoms.push_back(truth_problem.goal.atom);
  } else {
    return RenderError{"negated goal is not renderable"};
  }
  if (goal_atoms.empty()) {
    return RenderError{"empty goal is not renderable"};
  }
  auto goal_facts = facts_of(goal_atoms);
  if (auto* error = std::get_if<RenderError>(&goal_facts)) return *error;

  std::ostringstream os;
  os << "As initial conditions I have that, "
     << join_clauses(std::get<std::vector<Fact>>(init_facts)) << ".\n";
  os << "My goal is to have that "
     << join_clauses(std::get<std::vector<Fact>>(goal_facts)) << ".";
  return os.str();
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DatasetError("cannot write " + path.string());
  }
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DatasetError("cannot read " + path.string());
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string instance_file_id(int index) {
  std::ostringstream os;
  os << "p";
  if (index < 10) os << "0";
  os << index;
  return os.str();
}

}  // namespace

DatasetManifest generate_blocksworld_dataset(const fs::path& root,
                                             const GenerateOptions& options) {
  if (options.count < 1 || options.min_blocks < 1 ||
      options.max_blocks < options.min_blocks) {
    throw DatasetError("invalid generation options");
  }
  fs::path dir = root / "blocksworld";
  fs::create_directories(dir);

  DatasetManifest manifest;
  manifest.domain_name = "blocksworld";
  write_file(dir / "domain.nl", blocksworld_domain_description());
  write_file(dir / "domain.pddl", blocksworld_domain_pddl());

  std::uint64_t rng = options.seed;
  for (int i = 1; i <= options.count; ++i) {
    std::string id = instance_file_id(i);
    TaskInstance instance;
    if (i == 1) {
      instance = canonical_blocksworld_p01();
    } else {
      int span = options.max_blocks - options.min_blocks + 1;
      int num_blocks = options.min_blocks +
                       static_cast<int>(splitmix64(rng) %
                                        static_cast<std::uint64_t>(span));
      std::uint64_t instance_seed = splitmix64(rng);
      std::uint64_t instance_rng = instance_seed;
      BlocksConfig init = random_config(num_blocks, instance_rng);
      BlocksConfig goal = random_config(num_blocks, instance_rng);
      instance = make_blocksworld_instance(id, init, goal);
    }
    instance.id = id;
    instance.truth_problem.name = "blocksworld-" + id;
    write_file(dir / (id + ".nl"), instance.problem_description);
    write_file(dir / (id + ".pddl"),
               pddl::print_problem(instance.truth_problem));
    manifest.instances.push_back(std::move(instance));
  }
  return manifest;
}

DatasetManifest load_domain_dir(const fs::path& dir) {
  DatasetManifest manifest;
  manifest.domain_name = dir.filename().string();

  std::string domain_text = read_file(dir / "domain.pddl");
  std::string domain_description = read_file(dir / "domain.nl");
  auto domain = pddl::parse_domain(domain_text);
  if (!pddl::ok(domain)) {
    throw DatasetError("truth domain file fails to parse: " +
                       std::get<pddl::ParseError>(domain).message);
  }

  std::map<std::string, fs::path> problems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string stem = entry.path().stem().string();
    if (entry.path().extension() == ".pddl" && stem != "domain") {
      problems.emplace(stem, entry.path());
    }
  }
  for (const auto& [id, path] : problems) {
    fs::path nl_path = dir / (id + ".nl");
    if (!fs::exists(nl_path)) {
      manifest.warnings.push_back({id, "missing " + nl_path.string()});
      continue;
    }
    auto problem = pddl::parse_problem(read_file(path));
    if (!pddl::ok(problem)) {
      manifest.warnings.push_back(
          {id, "truth problem file fails to parse: " +
                   std::get<pddl::ParseError>(problem).message});
      continue;
    }
    auto errors = semantics::check(std::get<pddl::DomainAst>(domain),
                                   std::get<pddl::ProblemAst>(problem));
    if (!errors.empty()) {
      std::vector<semantics::Diagnostic> diagnostics;
      for (auto& error : errors) {
        diagnostics.push_back(semantics::Diagnostic::semantic(error));
      }
      manifest.warnings.push_back(
          {id, "truth files fail semantic check: " +
                   semantics::format_feedback(std::move(diagnostics))});
      continue;
    }
    TaskInstance instance;
    instance.id = id;
    instance.domain_description = domain_description;
    instance.problem_description = read_file(nl_path);
    instance.truth_domain = std::get<pddl::DomainAst>(domain);
    instance.truth_problem = std::get<pddl::ProblemAst>(problem);
    manifest.instances.push_back(std::move(instance));
  }
  return manifest;
}

std::vector<DatasetManifest> load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw DatasetError("dataset root is not a directory: " + root.string());
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<DatasetManifest> manifests;
  for (const auto& dir : dirs) {
    manifests.push_back(load_domain_dir(dir));
  }
  return manifests;
}

}  // namespace formalizer::dataset
