#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "formalizer/dataset/dataset.hpp"
#include "formalizer/harness/harness.hpp"

using namespace formalizer;
using namespace formalizer::harness;
using validator::Verdict;

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() /
                   ("formalizer-harness-" + std::to_string(::getpid()) +
                    "-" + std::to_string(counter++))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

EvalRecord make_record(const std::string& id, Verdict verdict,
                       const std::string& pipeline = "baseline") {
  EvalRecord record;
  record.instance_id = id;
  record.pipeline_name = pipeline;
  record.backend = "mock";
  record.final_verdict = verdict;
  record.best_verdict = verdict;
  pipeline::AttemptRecord attempt;
  attempt.verdict = verdict;
  record.attempts.push_back(attempt);
  return record;
}

std::string correct_output() {
  return "<domain_file>\n" + std::string(fixtures::kBlocksworldDomain) +
         "\n</domain_file>\n<problem_file>\n(define (problem p)\n"
         " (:domain blocksworld)\n (:objects block1)\n"
         " (:init (on-table block1) (clear block1) (arm-empty))\n"
         " (:goal (and (on-table block1))))\n</problem_file>";
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("eval records round-trip through json lines") {
  EvalRecord record = make_record("blocksworld/p01",
                                  Verdict::semantically_correct);
  record.attempts[0].extracted_domain = "(define (domain d))";
  record.attempts[0].syntax_errors = {"some finding"};
  record.attempts[0].feedback_sent = "fix it";
  record.attempts[0].round = 1;
  record.seed = 42;
  record.wall_time_s = 1.5;
  auto reparsed = eval_record_from_json(to_json_line(record));
  CHECK(reparsed.instance_id == record.instance_id);
  CHECK(reparsed.final_verdict == record.final_verdict);
  CHECK(reparsed.seed == 42);
  REQUIRE(reparsed.attempts.size() == 1);
  CHECK(reparsed.attempts[0].extracted_domain ==
        record.attempts[0].extracted_domain);
  CHECK(reparsed.attempts[0].feedback_sent == "fix it");
  CHECK(reparsed.attempts[0].round == 1);
  CHECK(!reparsed.attempts[0].extracted_problem.has_value());
}

TEST_CASE("summarize computes the metric definitions") {
  // 10 records: 9 parse-clean, 3 of those plan-valid
  std::vector<EvalRecord> records;
  for (int i = 0; i < 3; ++i) {
    records.push_back(make_record("blocksworld/p0" + std::to_string(i),
                                  Verdict::semantically_correct));
  }
  for (int i = 3; i < 9; ++i) {
    records.push_back(make_record("blocksworld/p0" + std::to_string(i),
                                  Verdict::semantically_incorrect));
  }
  records.push_back(
      make_record("blocksworld/p09", Verdict::syntactically_incorrect));

  auto summary = summarize(records);
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.rows[0].instance_count == 10);
  CHECK(summary.rows[0].syntactic_accuracy == doctest::Approx(90.0));
  CHECK(summary.rows[0].semantic_accuracy == doctest::Approx(30.0));
}

TEST_CASE("summarize deduplicates repeated instance ids") {
  std::vector<EvalRecord> records;
  records.push_back(make_record("d/p01", Verdict::semantically_correct));
  records.push_back(make_record("d/p01", Verdict::syntactically_incorrect));
  auto summary = summarize(records);
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.rows[0].instance_count == 1);
  CHECK(summary.rows[0].semantic_accuracy == doctest::Approx(100.0));
}

TEST_CASE("empty records produce an empty summary") {
  auto summary = summarize({});
  CHECK(summary.rows.empty());
  CHECK(summary.round_rows.empty());
}

TEST_CASE("semantic accuracy never exceeds syntactic accuracy") {
  std::uint64_t state = 99;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EvalRecord> records;
    const int count = 1 + next() % 20;
    for (int i = 0; i < count; ++i) {
      const auto verdict = static_cast<Verdict>(next() % 3);
      records.push_back(
          make_record("d/p" + std::to_string(i), verdict));
    }
    auto summary = summarize(records);
    REQUIRE(summary.rows.size() == 1);
    CHECK(summary.rows[0].semantic_accuracy <=
          summary.rows[0].syntactic_accuracy);
  }
}

TEST_CASE("per-round breakdown appears for revision pipelines") {
  std::vector<EvalRecord> records;
  EvalRecord revised = make_record("d/p01", Verdict::semantically_correct,
                                   "baseline+revise-solver@2");
  pipeline::AttemptRecord round1;
  round1.round = 1;
  round1.verdict = Verdict::semantically_correct;
  revised.attempts[0].verdict = Verdict::syntactically_incorrect;
  revised.attempts.push_back(round1);
  records.push_back(revised);
  records.push_back(make_record("d/p02", Verdict::syntactically_incorrect,
                                "baseline+revise-solver@2"));

  auto summary = summarize(records);
  REQUIRE(summary.round_rows.size() == 2);
  CHECK(summary.round_rows[0].round == 0);
  CHECK(summary.round_rows[0].semantic_accuracy == doctest::Approx(0.0));
  CHECK(summary.round_rows[1].round == 1);
  CHECK(summary.round_rows[1].semantic_accuracy == doctest::Approx(50.0));
  CHECK(summary.rows[0].mean_rounds_used == doctest::Approx(1.5));
}

TEST_CASE("csv export is byte-deterministic") {
  std::vector<EvalRecord> records = {
      make_record("d/p01", Verdict::semantically_correct),
      make_record("d/p02", Verdict::semantically_incorrect),
  };
  TempDir dir_a, dir_b;
  export_summary(summarize(records), dir_a.path);
  export_summary(summarize(records), dir_b.path);
  CHECK(slurp(dir_a.path / "summary.csv") ==
        slurp(dir_b.path / "summary.csv"));
  CHECK(slurp(dir_a.path / "summary.csv")
            .find("baseline,2,100.0,50.0") != std::string::npos);
}

TEST_CASE("evaluate runs, streams records, and resumes") {
  TempDir dataset_dir, out_a, out_b;
  dataset::GenerateOptions gen;
  gen.count = 4;
  gen.seed = 5;
  gen.max_blocks = 4;
  dataset::generate_blocksworld_dataset(dataset_dir.path, gen);
  auto manifests = dataset::load_dataset(dataset_dir.path);
  REQUIRE(manifests.size() == 1);

  llm::MockBackend backend;
  for (const auto& instance : manifests[0].instances) {
    backend.script(instance.id, "full", 0, correct_output());
  }
  // the scripted prediction solves a 1-block task; it can only be fully
  // correct where the truth goal already holds, which varies by instance

  std::vector<pipeline::PipelineConfig> configs(1);

  EvaluateOptions options;
  options.out_dir = out_a.path;
  options.workers = 2;
  auto records = evaluate(manifests, configs, backend, options);
  CHECK(records.size() == 4);
  CHECK(fs::exists(out_a.path / "records.jsonl"));
  auto loaded = load_records(out_a.path / "records.jsonl");
  CHECK(loaded.size() == 4);

  // interrupted run: stop after 2 records, then resume
  EvaluateOptions interrupted;
  interrupted.out_dir = out_b.path;
  interrupted.workers = 1;
  interrupted.max_records = 2;
  auto partial = evaluate(manifests, configs, backend, interrupted);
  CHECK(partial.size() == 2);

  EvaluateOptions resumed = interrupted;
  resumed.max_records = 0;
  auto full = evaluate(manifests, configs, backend, resumed);
  CHECK(full.size() == 4);
  CHECK(summary_csv(summarize(full)) == summary_csv(summarize(records)));
}

TEST_CASE("backend script gaps abort evaluation") {
  TempDir dataset_dir, out;
  dataset::GenerateOptions gen;
  gen.count = 2;
  gen.seed = 5;
  gen.max_blocks = 4;
  dataset::generate_blocksworld_dataset(dataset_dir.path, gen);
  auto manifests = dataset::load_dataset(dataset_dir.path);

  llm::MockBackend backend;  // deliberately empty
  std::vector<pipeline::PipelineConfig> configs(1);
  EvaluateOptions options;
  options.out_dir = out.path;
  CHECK_THROWS_AS(evaluate(manifests, configs, backend, options),
                  llm::MockScriptError);
}
