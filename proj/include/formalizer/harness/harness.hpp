#ifndef FORMALIZER_HARNESS_HARNESS_HPP
#define FORMALIZER_HARNESS_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "formalizer/dataset/dataset.hpp"
#include "formalizer/pipeline/pipeline.hpp"

namespace formalizer::harness {

struct EvalRecord {
  std::string instance_id;  // "<domain>/<problem-id>"
  std::string pipeline_name;
  std::string backend;
  std::vector<pipeline::AttemptRecord> attempts;
  validator::Verdict final_verdict =
      validator::Verdict::syntactically_incorrect;
  validator::Verdict best_verdict =
      validator::Verdict::syntactically_incorrect;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
};

std::string to_json_line(const EvalRecord& record);
EvalRecord eval_record_from_json(const std::string& line);

struct SummaryRow {
  std::string pipeline_name;
  double syntactic_accuracy = 0.0;  // percent
  double semantic_accuracy = 0.0;   // percent
  int instance_count = 0;
  double mean_rounds_used = 0.0;
};

struct RoundRow {
  std::string pipeline_name;
  int round = 0;
  double semantic_accuracy = 0.0;  // cumulative best-by-round, percent
};

struct Summary {
  std::vector<SummaryRow> rows;
  std::vector<RoundRow> round_rows;  // revision pipelines only
};

// Accuracies over distinct (pipeline, instance) pairs; duplicate records
// (e.g. from a resumed run) keep the first occurrence.
Summary summarize(const std::vector<EvalRecord>& records);

struct EvaluateOptions {
  std::filesystem::path out_dir;
  int workers = 1;
  std::uint64_t seed = 0;
  planner::SolveLimits limits;
  long max_records = 0;  // 0 = unlimited; used to simulate an abort
};

// One EvalRecord per (instance, pipeline config). Records are appended to
// <out>/records.jsonl as they complete; pairs already present there are
// not recomputed, which makes an interrupted run resumable.
std::vector<EvalRecord> evaluate(
    const std::vector<dataset::DatasetManifest>& manifests,
    const std::vector<pipeline::PipelineConfig>& configs,
    llm::Backend& backend, const EvaluateOptions& options);

// summary.csv and rounds.csv; byte-deterministic for identical records.
void export_summary(const Summary& summary,
                    const std::filesystem::path& out_dir);

std::vector<EvalRecord> load_records(const std::filesystem::path& jsonl_path);

std::string summary_csv(const Summary& summary);
std::string rounds_csv(const Summary& summary);

}  // namespace formalizer::harness

#endif
