#ifndef FORMALIZER_DATASET_DATASET_HPP
#define FORMALIZER_DATASET_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "formalizer/pddl/ast.hpp"

namespace formalizer::dataset {

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskInstance {
  std::string id;
  std::string domain_description;   // DD, natural language
  std::string problem_description;  // PD, natural language
  pddl::DomainAst truth_domain;
  pddl::ProblemAst truth_problem;
};

struct DatasetWarning {
  std::string instance_id;
  std::string message;
};

struct DatasetManifest {
  std::string domain_name;
  std::vector<TaskInstance> instances;
  std::vector<DatasetWarning> warnings;
};

// The fixed BlocksWorld domain artifacts.
const std::string& blocksworld_domain_pddl();
const std::string& blocksworld_domain_description();

// A tower configuration: under[i] is the 1-based block beneath block i+1,
// or 0 when block i+1 sits on the table.
struct BlocksConfig {
  std::vector<int> under;

  bool operator==(const BlocksConfig&) const = default;
};

BlocksConfig all_on_table(int num_blocks);
BlocksConfig random_config(int num_blocks, std::uint64_t& rng_state);

TaskInstance make_blocksworld_instance(const std::string& id,
                                       const BlocksConfig& init,
                                       const BlocksConfig& goal);

// Random init and goal configurations over the same blocks; deterministic
// per (num_blocks, seed).
TaskInstance generate_blocksworld(int num_blocks, std::uint64_t seed);

// The 4-block all-on-table instance whose PD matches the reference text.
TaskInstance canonical_blocksworld_p01();

struct RenderError {
  std::string message;
};

// Deterministic English rendering of a BlocksWorld truth problem:
// clear facts, on facts, hand-empty, on-table facts, then the goal.
std::variant<std::string, RenderError> render_problem_description(
    const pddl::ProblemAst& truth_problem);

struct GenerateOptions {
  int count = 100;
  std::uint64_t seed = 0;
  int min_blocks = 3;
  int max_blocks = 8;
};

// Writes <root>/blocksworld/{domain.nl,domain.pddl,pNN.nl,pNN.pddl}.
// Instance p01 is the canonical 4-block all-on-table problem; the rest are
// random. Byte-deterministic per options.
DatasetManifest generate_blocksworld_dataset(
    const std::filesystem::path& root, const GenerateOptions& options);

// Loads every domain directory under root; malformed instances are
// skipped and reported in the manifest's warnings.
DatasetManifest load_domain_dir(const std::filesystem::path& dir);
std::vector<DatasetManifest> load_dataset(const std::filesystem::path& root);

}  // namespace formalizer::dataset

#endif
