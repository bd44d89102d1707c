#include "formalizer/harness/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "formalizer/pddl/grammar.hpp"

namespace formalizer::harness {

using nlohmann::json;

namespace {

validator::Verdict verdict_from_string(const std::string& text) {
  if (text == "semantically-correct") {
    return validator::Verdict::semantically_correct;
  }
  if (text == "semantically-incorrect") {
    return validator::Verdict::semantically_incorrect;
  }
  return validator::Verdict::syntactically_incorrect;
}

json attempt_to_json(const pipeline::AttemptRecord& attempt) {
  json j;
  j["attempt_index"] = attempt.attempt_index;
  j["round"] = attempt.round;
  j["raw_output"] = attempt.raw_output;
  j["extracted_domain"] = attempt.extracted_domain
                              ? json(*attempt.extracted_domain)
                              : json(nullptr);
  j["extracted_problem"] = attempt.extracted_problem
                               ? json(*attempt.extracted_problem)
                               : json(nullptr);
  j["syntax_errors"] = attempt.syntax_errors;
  j["verdict"] = validator::to_string(attempt.verdict);
  j["feedback_sent"] =
      attempt.feedback_sent ? json(*attempt.feedback_sent) : json(nullptr);
  j["solve_status"] = attempt.solve_status;
  j["plan_text"] = attempt.plan_text;
  j["validation_detail"] = attempt.validation_detail;
  j["toolchain_warnings"] = attempt.toolchain_warnings;
  j["backend_error"] = attempt.backend_error;
  return j;
}

pipeline::AttemptRecord attempt_from_json(const json& j) {
  pipeline::AttemptRecord attempt;
  attempt.attempt_index = j.value("attempt_index", 0);
  attempt.round = j.value("round", 0);
  attempt.raw_output = j.value("raw_output", "");
  if (j.contains("extracted_domain") && !j["extracted_domain"].is_null()) {
    attempt.extracted_domain = j["extracted_domain"].get<std::string>();
  }
  if (j.contains("extracted_problem") && !j["extracted_problem"].is_null()) {
    attempt.extracted_problem = j["extracted_problem"].get<std::string>();
  }
  attempt.syntax_errors =
      j.value("syntax_errors", std::vector<std::string>{});
  attempt.verdict = verdict_from_string(j.value("verdict", ""));
  if (j.contains("feedback_sent") && !j["feedback_sent"].is_null()) {
    attempt.feedback_sent = j["feedback_sent"].get<std::string>();
  }
  attempt.solve_status = j.value("solve_status", "");
  attempt.plan_text = j.value("plan_text", "");
  attempt.validation_detail = j.value("validation_detail", "");
  attempt.toolchain_warnings =
      j.value("toolchain_warnings", std::vector<std::string>{});
  attempt.backend_error = j.value("backend_error", false);
  return attempt;
}

std::string percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

std::string fixed2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

int rounds_used(const EvalRecord& record) {
  int max_round = 0;
  for (const auto& attempt : record.attempts) {
    max_round = std::max(max_round, attempt.round);
  }
  return max_round + 1;
}

}  // namespace

std::string to_json_line(const EvalRecord& record) {
  json j;
  j["instance_id"] = record.instance_id;
  j["pipeline"] = record.pipeline_name;
  j["backend"] = record.backend;
  j["attempts"] = json::array();
  for (const auto& attempt : record.attempts) {
    j["attempts"].push_back(attempt_to_json(attempt));
  }
  j["final_verdict"] = validator::to_string(record.final_verdict);
  j["best_verdict"] = validator::to_string(record.best_verdict);
  j["wall_time_s"] = record.wall_time_s;
  j["seed"] = record.seed;
  return j.dump();
}

EvalRecord eval_record_from_json(const std::string& line) {
  json j = json::parse(line);
  EvalRecord record;
  record.instance_id = j.value("instance_id", "");
  record.pipeline_name = j.value("pipeline", "");
  record.backend = j.value("backend", "");
  for (const auto& attempt : j.value("attempts", json::array())) {
    record.attempts.push_back(attempt_from_json(attempt));
  }
  record.final_verdict = verdict_from_string(j.value("final_verdict", ""));
  record.best_verdict = verdict_from_string(j.value("best_verdict", ""));
  record.wall_time_s = j.value("wall_time_s", 0.0);
  record.seed = j.value("seed", std::uint64_t{0});
  return record;
}

std::vector<EvalRecord> load_records(
    const std::filesystem::path& jsonl_path) {
  std::vector<EvalRecord> records;
  std::ifstream in(jsonl_path);
  if (!in) return records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(eval_record_from_json(line));
  }
  return records;
}

Summary summarize(const std::vector<EvalRecord>& records) {
  // First record wins for each (pipeline, instance) pair.
  std::map<std::string, std::map<std::string, const EvalRecord*>> by_pipeline;
  for (const auto& record : records) {
    auto& instances = by_pipeline[record.pipeline_name];
    instances.emplace(record.instance_id, &record);
  }

  Summary summary;
  for (const auto& [pipeline_name, instances] : by_pipeline) {
    SummaryRow row;
    row.pipeline_name = pipeline_name;
    row.instance_count = static_cast<int>(instances.size());
    int syntactic = 0;
    int semantic = 0;
    double total_rounds = 0.0;
    int max_round = 0;
    for (const auto& [id, record] : instances) {
      if (record->final_verdict != validator::Verdict::syntactically_incorrect) {
        ++syntactic;
      }
      if (record->final_verdict == validator::Verdict::semantically_correct) {
        ++semantic;
      }
      total_rounds += rounds_used(*record);
      for (const auto& attempt : record->attempts) {
        max_round = std::max(max_round, attempt.round);
      }
    }
    const double count = static_cast<double>(instances.size());
    row.syntactic_accuracy = count > 0 ? 100.0 * syntactic / count : 0.0;
    row.semantic_accuracy = count > 0 ? 100.0 * semantic / count : 0.0;
    row.mean_rounds_used = count > 0 ? total_rounds / count : 0.0;
    summary.rows.push_back(row);

    if (max_round == 0) continue;  // not a revision pipeline
    for (int round = 0; round <= max_round; ++round) {
      int correct = 0;
      for (const auto& [id, record] : instances) {
        for (const auto& attempt : record->attempts) {
          if (attempt.round <= round &&
              attempt.verdict == validator::Verdict::semantically_correct) {
            ++correct;
            break;
          }
        }
      }
      RoundRow round_row;
      round_row.pipeline_name = pipeline_name;
      round_row.round = round;
      round_row.semantic_accuracy =
          count > 0 ? 100.0 * correct / count : 0.0;
      summary.round_rows.push_back(round_row);
    }
  }
  return summary;
}

std::string summary_csv(const Summary& summary) {
  std::ostringstream os;
  os << "pipeline,instances,syntactic_accuracy,semantic_accuracy,"
        "mean_rounds\n";
  for (const auto& row : summary.rows) {
    os << row.pipeline_name << ',' << row.instance_count << ','
       << percent(row.syntactic_accuracy) << ','
       << percent(row.semantic_accuracy) << ','
       << fixed2(row.mean_rounds_used) << '\n';
  }
  return os.str();
}

std::string rounds_csv(const Summary& summary) {
  std::ostringstream os;
  os << "pipeline,round,semantic_accuracy\n";
  for (const auto& row : summary.round_rows) {
    os << row.pipeline_name << ',' << row.round << ','
       << percent(row.semantic_accuracy) << '\n';
  }
  return os.str();
}

void export_summary(const Summary& summary,
                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "summary.csv", std::ios::binary);
    out << summary_csv(summary);
  }
  {
    std::ofstream out(out_dir / "rounds.csv", std::ios::binary);
    out << rounds_csv(summary);
  }
}

std::vector<EvalRecord> evaluate(
    const std::vector<dataset::DatasetManifest>& manifests,
    const std::vector<pipeline::PipelineConfig>& configs,
    llm::Backend& backend, const EvaluateOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  const auto records_path = options.out_dir / "records.jsonl";

  std::vector<EvalRecord> done = load_records(records_path);
  std::set<std::pair<std::string, std::string>> done_keys;
  for (const auto& record : done) {
    done_keys.emplace(record.pipeline_name, record.instance_id);
  }

  struct Job {
    const pipeline::PipelineConfig* config;
    const dataset::DatasetManifest* manifest;
    const dataset::TaskInstance* instance;
    std::string instance_id;
  };
  std::vector<Job> jobs;
  for (const auto& config : configs) {
    const std::string pipeline_name = config.display_name();
    for (const auto& manifest : manifests) {
      for (const auto& instance : manifest.instances) {
        Job job{&config, &manifest, &instance,
                manifest.domain_name + "/" + instance.id};
        if (done_keys.count({pipeline_name, job.instance_id})) continue;
        jobs.push_back(job);
      }
    }
  }

  std::ofstream out(records_path, std::ios::app | std::ios::binary);
  if (!out) {
    throw dataset::DatasetError("cannot open " + records_path.string() +
                                " for append");
  }

  std::mutex out_mutex;
  std::atomic<std::size_t> next_job{0};
  std::atomic<long> written{0};
  std::vector<EvalRecord> fresh;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  pipeline::RunOptions run_options;
  run_options.limits = options.limits;

  auto worker = [&]() {
    for (;;) {
      if (options.max_records > 0 &&
          written.load() >= options.max_records) {
        return;
      }
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      const std::size_t index = next_job.fetch_add(1);
      if (index >= jobs.size()) return;
      const Job& job = jobs[index];
      try {
        pipeline::RunOptions job_options = run_options;
        if (job.config->grammar_check) {
          job_options.grammar = pddl::emit_grammar();
        }
        const auto start = std::chrono::steady_clock::now();
        EvalRecord record;
        record.instance_id = job.instance_id;
        record.pipeline_name = job.config->display_name();
        record.backend = backend.name();
        record.seed = options.seed;
        record.attempts =
            pipeline::run_pipeline(*job.config, *job.instance, backend,
                                   job_options);
        record.best_verdict = pipeline::best_verdict(record.attempts);
        // pass@N scores its best sample; the revision loops and the single
        // shot are judged by their last attempt.
        if (job.config->inference == pipeline::InferenceMode::pass_at_n) {
          record.final_verdict = record.best_verdict;
        } else if (!record.attempts.empty()) {
          record.final_verdict = record.attempts.back().verdict;
        }
        record.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        {
          std::lock_guard<std::mutex> lock(out_mutex);
          out << to_json_line(record) << '\n';
          out.flush();
          fresh.push_back(std::move(record));
          written.fetch_add(1);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<EvalRecord> all = std::move(done);
  all.insert(all.end(), std::make_move_iterator(fresh.begin()),
             std::make_move_iterator(fresh.end()));
  return all;
}

}  // namespace formalizer::harness
