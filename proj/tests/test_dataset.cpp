#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <variant>

#include "fixtures.hpp"
#include "formalizer/dataset/dataset.hpp"
#include "formalizer/pddl/parser.hpp"
#include "formalizer/planner/search.hpp"
#include "formalizer/semantics/check.hpp"

using namespace formalizer;
using namespace formalizer::dataset;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() /
                   ("formalizer-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("fixed domain artifacts parse and match the reference AST") {
  CHECK(blocksworld_domain_description() ==
        fixtures::kBlocksworldDomainDescription);
  auto ours = pddl::parse_domain(blocksworld_domain_pddl());
  auto reference = pddl::parse_domain(fixtures::kBlocksworldDomain);
  REQUIRE(pddl::ok(ours));
  REQUIRE(pddl::ok(reference));
  CHECK(std::get<pddl::DomainAst>(ours) ==
        std::get<pddl::DomainAst>(reference));
}

TEST_CASE("canonical 4-block instance reproduces the reference texts") {
  auto instance = canonical_blocksworld_p01();
  auto rendered = render_problem_description(instance.truth_problem);
  REQUIRE(std::holds_alternative<std::string>(rendered));
  CHECK(std::get<std::string>(rendered) ==
        fixtures::kBlocksworldP01Description);

  // same state as the reference PF: atoms as sets, modulo ordering
  auto reference = pddl::parse_problem(fixtures::kBlocksworldP01);
  REQUIRE(pddl::ok(reference));
  const auto& ref = std::get<pddl::ProblemAst>(reference);
  auto atom_set = [](const std::vector<pddl::Atom>& atoms) {
    std::set<std::string> keys;
    for (const auto& atom : atoms) {
      std::string key = atom.predicate;
      for (const auto& term : atom.terms) key += " " + term;
      keys.insert(key);
    }
    return keys;
  };
  CHECK(atom_set(instance.truth_problem.init) == atom_set(ref.init));
  CHECK(instance.truth_problem.goal.children.size() ==
        ref.goal.children.size());
}

TEST_CASE("single-block instance is all-on-table by construction") {
  auto instance = make_blocksworld_instance("p00", all_on_table(1),
                                            all_on_table(1));
  REQUIRE(instance.truth_problem.objects.size() == 1);
  CHECK(instance.truth_problem.init.size() == 3);  // on-table, clear, arm
  CHECK(semantics::check(instance.truth_domain, instance.truth_problem)
            .empty());
}

TEST_CASE("generation is deterministic per (num_blocks, seed)") {
  auto a = generate_blocksworld(5, 123);
  auto b = generate_blocksworld(5, 123);
  CHECK(a.truth_problem == b.truth_problem);
  CHECK(a.problem_description == b.problem_description);
  auto c = generate_blocksworld(5, 124);
  CHECK(a.truth_problem != c.truth_problem);
}

TEST_CASE("generated instances are well-formed and solvable") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto instance = generate_blocksworld(4, seed);
    CHECK(semantics::check(instance.truth_domain, instance.truth_problem)
              .empty());
    auto outcome =
        planner::solve(instance.truth_domain, instance.truth_problem);
    CHECK(std::holds_alternative<planner::Solved>(outcome));
  }
}

TEST_CASE("goal clause template for stacked blocks") {
  auto result = pddl::parse_problem(
      "(define (problem p) (:domain blocksworld)"
      " (:objects block1 block2)"
      " (:init (on block1 block2) (clear block1) (on-table block2)"
      "        (arm-empty))"
      " (:goal (and (on block1 block2))))");
  REQUIRE(pddl::ok(result));
  auto rendered =
      render_problem_description(std::get<pddl::ProblemAst>(result));
  REQUIRE(std::holds_alternative<std::string>(rendered));
  const auto& text = std::get<std::string>(rendered);
  CHECK(text.find("block 1 is on top of block 2") != std::string::npos);
  CHECK(text.find("My goal is to have that block 1 is on top of block 2") !=
        std::string::npos);
}

TEST_CASE("rendering rejects unsupported content") {
  auto empty_goal = pddl::parse_problem(
      "(define (problem p) (:domain blocksworld)"
      " (:objects block1)"
      " (:init (on-table block1) (clear block1) (arm-empty))"
      " (:goal (and)))");
  REQUIRE(pddl::ok(empty_goal));
  CHECK(std::holds_alternative<RenderError>(
      render_problem_description(std::get<pddl::ProblemAst>(empty_goal))));

  auto alien = pddl::parse_problem(
      "(define (problem p) (:domain blocksworld)"
      " (:objects block1)"
      " (:init (levitating block1))"
      " (:goal (and (on-table block1))))");
  REQUIRE(pddl::ok(alien));
  CHECK(std::holds_alternative<RenderError>(
      render_problem_description(std::get<pddl::ProblemAst>(alien))));
}

TEST_CASE("dataset writing is byte-deterministic and loads back") {
  TempDir dir_a, dir_b;
  GenerateOptions options;
  options.count = 6;
  options.seed = 3;
  auto manifest_a = generate_blocksworld_dataset(dir_a.path, options);
  auto manifest_b = generate_blocksworld_dataset(dir_b.path, options);
  REQUIRE(manifest_a.instances.size() == 6);
  CHECK(manifest_a.domain_name == "blocksworld");

  for (const auto& entry :
       fs::directory_iterator(dir_a.path / "blocksworld")) {
    const auto name = entry.path().filename();
    CHECK(slurp(entry.path()) == slurp(dir_b.path / "blocksworld" / name));
  }

  // p01 is the canonical 4-block all-on-table instance
  CHECK(slurp(dir_a.path / "blocksworld" / "p01.nl") ==
        fixtures::kBlocksworldP01Description);

  auto loaded = load_dataset(dir_a.path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].instances.size() == 6);
  CHECK(loaded[0].warnings.empty());
  std::set<std::string> ids;
  for (const auto& instance : loaded[0].instances) {
    ids.insert(instance.id);
  }
  CHECK(ids.size() == 6);  // unique ids
}

TEST_CASE("malformed instances are skipped with a warning") {
  TempDir dir;
  GenerateOptions options;
  options.count = 3;
  options.seed = 1;
  generate_blocksworld_dataset(dir.path, options);
  {
    std::ofstream out(dir.path / "blocksworld" / "p02.pddl");
    out << "(define (problem p02";  // truncated on purpose
  }
  auto manifest = load_domain_dir(dir.path / "blocksworld");
  CHECK(manifest.instances.size() == 2);
  REQUIRE(manifest.warnings.size() == 1);
  CHECK(manifest.warnings[0].instance_id == "p02");
}

TEST_CASE("missing layout raises DatasetError") {
  TempDir dir;
  CHECK_THROWS_AS(load_domain_dir(dir.path / "nope"), DatasetError);
}
