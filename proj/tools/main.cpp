#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "formalizer/dataset/dataset.hpp"
#include "formalizer/harness/harness.hpp"
#include "formalizer/llm/client.hpp"
#include "formalizer/pddl/grammar.hpp"
#include "formalizer/pddl/parser.hpp"
#include "formalizer/pddl/printer.hpp"
#include "formalizer/pipeline/pipeline.hpp"
#include "formalizer/planner/search.hpp"
#include "formalizer/semantics/check.hpp"
#include "formalizer/semantics/feedback.hpp"
#include "formalizer/validator/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataset = 2;
constexpr int kExitBackend = 3;

using formalizer::dataset::DatasetError;
using nlohmann::json;
namespace pddl = formalizer::pddl;
namespace pipeline = formalizer::pipeline;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write file: " + path);
  out << content;
}

// Reports parse and semantic findings for the pair; empty result means
// the files are well-formed.
std::vector<formalizer::semantics::Diagnostic> diagnose_pair(
    const pddl::ParseResult<pddl::DomainAst>& domain,
    const pddl::ParseResult<pddl::ProblemAst>& problem) {
  using formalizer::semantics::Diagnostic;
  using formalizer::semantics::PddlFile;
  std::vector<Diagnostic> diagnostics;
  if (const auto* error = std::get_if<pddl::ParseError>(&domain)) {
    diagnostics.push_back(Diagnostic::parse(PddlFile::domain, *error));
  }
  if (const auto* error = std::get_if<pddl::ParseError>(&problem)) {
    diagnostics.push_back(Diagnostic::parse(PddlFile::problem, *error));
  }
  if (diagnostics.empty()) {
    for (auto& finding : formalizer::semantics::check(
             std::get<pddl::DomainAst>(domain),
             std::get<pddl::ProblemAst>(problem))) {
      diagnostics.push_back(Diagnostic::semantic(finding));
    }
  }
  return diagnostics;
}

pipeline::PipelineConfig pipeline_config_from_json(const json& j) {
  pipeline::PipelineConfig config;
  config.name = j.value("name", "");
  const std::string style = j.value("prompt_style", "baseline");
  if (style == "baseline") {
    config.prompt_style = pipeline::PromptStyle::baseline;
  } else if (style == "knowledge") {
    config.prompt_style = pipeline::PromptStyle::knowledge;
  } else {
    throw DatasetError("unknown prompt_style: " + style);
  }
  const std::string pre = j.value("pre_inference", "none");
  if (pre == "none") {
    config.pre_inference = pipeline::PreInference::none;
  } else if (pre == "summary") {
    config.pre_inference = pipeline::PreInference::summary;
  } else if (pre == "sequential") {
    config.pre_inference = pipeline::PreInference::sequential;
  } else {
    throw DatasetError("unknown pre_inference: " + pre);
  }
  const std::string inference = j.value("inference", "single");
  if (inference == "single") {
    config.inference = pipeline::InferenceMode::single;
  } else if (inference == "pass@n" || inference == "pass_at_n") {
    config.inference = pipeline::InferenceMode::pass_at_n;
  } else if (inference == "revise-solver") {
    config.inference = pipeline::InferenceMode::revise_solver;
  } else if (inference == "revise-solver-validator") {
    config.inference = pipeline::InferenceMode::revise_solver_validator;
  } else {
    throw DatasetError("unknown inference mode: " + inference);
  }
  config.n = j.value("n", 1);
  config.rounds = j.value("rounds", 1);
  config.grammar_check = j.value("grammar_check", false);
  config.temperature = j.value("temperature", 0.4);
  return config;
}

struct RunConfig {
  std::vector<pipeline::PipelineConfig> pipelines;
  int workers = 1;
  std::uint64_t seed = 0;
  formalizer::planner::SolveLimits limits;
  std::string backend_type;  // mock | http
  std::string mock_script;
  formalizer::llm::HttpBackendConfig http;
};

RunConfig run_config_from_file(const std::string& path) {
  json j = json::parse(read_file(path), nullptr,
                       /*allow_exceptions=*/false);
  if (j.is_discarded()) throw DatasetError("malformed run config: " + path);

  RunConfig config;
  if (!j.contains("pipelines") || !j["pipelines"].is_array() ||
      j["pipelines"].empty()) {
    throw DatasetError("run config needs a non-empty 'pipelines' array");
  }
  for (const auto& entry : j["pipelines"]) {
    config.pipelines.push_back(pipeline_config_from_json(entry));
  }
  config.workers = j.value("workers", 1);
  config.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("limits")) {
    const auto& limits = j["limits"];
    config.limits.max_expansions =
        limits.value("max_expansions", config.limits.max_expansions);
    config.limits.timeout_s =
        limits.value("timeout_s", config.limits.timeout_s);
    config.limits.max_ground_actions = limits.value(
        "max_ground_actions", config.limits.max_ground_actions);
  }
  if (j.contains("backend")) {
    const auto& backend = j["backend"];
    config.backend_type = backend.value("type", "");
    config.mock_script = backend.value("script", "");
    config.http.base_url = backend.value("base_url", "");
    config.http.api_key = backend.value("api_key", "");
    config.http.model = backend.value("model", config.http.model);
    config.http.max_inflight =
        backend.value("max_inflight", config.http.max_inflight);
    config.http.retries = backend.value("retries", config.http.retries);
  }
  return config;
}

int cmd_gen_dataset(const std::string& domain, int count,
                    std::uint64_t seed, const std::string& out,
                    int min_blocks, int max_blocks) {
  if (domain != "blocksworld") {
    std::cerr << "unsupported domain for generation: " << domain << "\n";
    return kExitUsage;
  }
  formalizer::dataset::GenerateOptions options;
  options.count = count;
  options.seed = seed;
  options.min_blocks = min_blocks;
  options.max_blocks = max_blocks;
  const auto manifest =
      formalizer::dataset::generate_blocksworld_dataset(out, options);
  std::cout << "wrote " << manifest.instances.size() << " instances to "
            << out << "/" << manifest.domain_name << "\n";
  return kExitOk;
}

int cmd_parse(const std::string& domain_path,
              const std::string& problem_path) {
  bool failed = false;
  if (!domain_path.empty()) {
    auto result = pddl::parse_domain(read_file(domain_path));
    if (const auto* error = std::get_if<pddl::ParseError>(&result)) {
      std::cerr << "domain file, line " << error->line << ", column "
                << error->column << ": " << error->message << "\n";
      failed = true;
    } else {
      std::cout << pddl::print_domain(std::get<pddl::DomainAst>(result));
    }
  }
  if (!problem_path.empty()) {
    auto result = pddl::parse_problem(read_file(problem_path));
    if (const auto* error = std::get_if<pddl::ParseError>(&result)) {
      std::cerr << "problem file, line " << error->line << ", column "
                << error->column << ": " << error->message << "\n";
      failed = true;
    } else {
      std::cout << pddl::print_problem(std::get<pddl::ProblemAst>(result));
    }
  }
  return failed ? kExitDataset : kExitOk;
}

int cmd_check(const std::string& domain_path,
              const std::string& problem_path) {
  auto domain = pddl::parse_domain(read_file(domain_path));
  auto problem = pddl::parse_problem(read_file(problem_path));
  auto diagnostics = diagnose_pair(domain, problem);
  if (diagnostics.empty()) {
    std::cout << "ok\n";
    return kExitOk;
  }
  std::cerr << formalizer::semantics::format_feedback(std::move(diagnostics))
            << "\n";
  return kExitDataset;
}

int cmd_plan(const std::string& domain_path, const std::string& problem_path,
             long max_expansions, double timeout_s,
             const std::string& out_path) {
  auto domain = pddl::parse_domain(read_file(domain_path));
  auto problem = pddl::parse_problem(read_file(problem_path));
  auto diagnostics = diagnose_pair(domain, problem);
  if (!diagnostics.empty()) {
    std::cerr << formalizer::semantics::format_feedback(std::move(diagnostics))
              << "\n";
    return kExitDataset;
  }
  formalizer::planner::SolveLimits limits;
  limits.max_expansions = max_expansions;
  limits.timeout_s = timeout_s;
  auto outcome = formalizer::planner::solve(
      std::get<pddl::DomainAst>(domain), std::get<pddl::ProblemAst>(problem),
      limits);
  if (const auto* solved = std::get_if<formalizer::planner::Solved>(&outcome)) {
    const std::string text = formalizer::planner::print_plan(solved->plan);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_file(out_path, text);
    }
    return kExitOk;
  }
  if (std::holds_alternative<formalizer::planner::Unsolvable>(outcome)) {
    std::cerr << "unsolvable\n";
  } else if (std::holds_alternative<formalizer::planner::Timeout>(outcome)) {
    std::cerr << "timeout\n";
  } else {
    std::cerr << "ill-formed task\n";
    for (const auto& error :
         std::get<formalizer::planner::IllFormed>(outcome).errors) {
      std::cerr << error << "\n";
    }
  }
  return kExitDataset;
}

int cmd_validate(const std::string& domain_path,
                 const std::string& problem_path,
                 const std::string& plan_path) {
  auto domain = pddl::parse_domain(read_file(domain_path));
  auto problem = pddl::parse_problem(read_file(problem_path));
  auto diagnostics = diagnose_pair(domain, problem);
  if (!diagnostics.empty()) {
    std::cerr << formalizer::semantics::format_feedback(std::move(diagnostics))
              << "\n";
    return kExitDataset;
  }
  auto plan = formalizer::planner::parse_plan(read_file(plan_path));
  if (const auto* error = std::get_if<std::string>(&plan)) {
    std::cerr << "malformed plan: " << *error << "\n";
    return kExitDataset;
  }
  const auto report = formalizer::validator::validate(
      std::get<pddl::DomainAst>(domain), std::get<pddl::ProblemAst>(problem),
      std::get<formalizer::planner::Plan>(plan));
  std::cout << formalizer::validator::format_validator_feedback(report)
            << "\n";
  return report.verdict ==
                 formalizer::validator::ValidationReport::Verdict::valid
             ? kExitOk
             : kExitDataset;
}

int cmd_grammar_emit(const std::string& out_path) {
  const std::string grammar = pddl::emit_grammar();
  if (out_path.empty()) {
    std::cout << grammar;
  } else {
    write_file(out_path, grammar);
  }
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& dataset_root,
            const std::string& backend_name, const std::string& out_dir,
            const std::string& script_path, int workers_override,
            long max_records) {
  RunConfig config = run_config_from_file(config_path);
  if (!backend_name.empty()) config.backend_type = backend_name;
  if (!script_path.empty()) config.mock_script = script_path;
  if (workers_override > 0) config.workers = workers_override;

  std::unique_ptr<formalizer::llm::Backend> backend;
  if (config.backend_type == "mock") {
    if (config.mock_script.empty()) {
      std::cerr << "mock backend needs --script or backend.script\n";
      return kExitUsage;
    }
    backend = std::make_unique<formalizer::llm::MockBackend>(
        formalizer::llm::MockBackend::from_json_file(config.mock_script));
  } else if (config.backend_type == "http") {
    backend = std::make_unique<formalizer::llm::HttpBackend>(config.http);
  } else {
    std::cerr << "unknown backend: " << config.backend_type << "\n";
    return kExitUsage;
  }

  const auto manifests = formalizer::dataset::load_dataset(dataset_root);
  for (const auto& manifest : manifests) {
    for (const auto& warning : manifest.warnings) {
      std::cerr << "warning: " << warning.instance_id << ": "
                << warning.message << "\n";
    }
  }

  formalizer::harness::EvaluateOptions options;
  options.out_dir = out_dir;
  options.workers = config.workers;
  options.seed = config.seed;
  options.limits = config.limits;
  options.max_records = max_records;

  const auto records = formalizer::harness::evaluate(
      manifests, config.pipelines, *backend, options);
  const auto summary = formalizer::harness::summarize(records);
  formalizer::harness::export_summary(summary, out_dir);
  std::cout << formalizer::harness::summary_csv(summary);
  return kExitOk;
}

int cmd_summarize(const std::string& records_path,
                  const std::string& out_dir) {
  if (!std::filesystem::exists(records_path)) {
    throw DatasetError("no such records file: " + records_path);
  }
  const auto records = formalizer::harness::load_records(records_path);
  const auto summary = formalizer::harness::summarize(records);
  if (!out_dir.empty()) {
    formalizer::harness::export_summary(summary, out_dir);
  }
  std::cout << formalizer::harness::summary_csv(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PDDL toolchain and LLM formalization evaluation harness"};
  app.require_subcommand(1);

  // gen-dataset
  std::string gen_domain = "blocksworld";
  int gen_count = 100;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "dataset";
  int gen_min_blocks = 3;
  int gen_max_blocks = 8;
  auto* gen = app.add_subcommand("gen-dataset",
                                 "Generate a benchmark dataset");
  gen->add_option("--domain", gen_domain, "Domain to generate");
  gen->add_option("--count", gen_count, "Number of instances");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output root directory");
  gen->add_option("--min-blocks", gen_min_blocks, "Minimum block count");
  gen->add_option("--max-blocks", gen_max_blocks, "Maximum block count");

  // parse
  std::string parse_domain_path, parse_problem_path;
  auto* parse = app.add_subcommand(
      "parse", "Parse PDDL files and print their canonical form");
  parse->add_option("--domain", parse_domain_path, "Domain file");
  parse->add_option("--problem", parse_problem_path, "Problem file");

  // check
  std::string check_domain_path, check_problem_path;
  auto* check =
      app.add_subcommand("check", "Semantic cross-checks on a file pair");
  check->add_option("--domain", check_domain_path, "Domain file")
      ->required();
  check->add_option("--problem", check_problem_path, "Problem file")
      ->required();

  // plan
  std::string plan_domain_path, plan_problem_path, plan_out;
  long plan_max_expansions = 1'000'000;
  double plan_timeout = 60.0;
  auto* plan = app.add_subcommand("plan", "Find a shortest plan via BFS");
  plan->add_option("--domain", plan_domain_path, "Domain file")->required();
  plan->add_option("--problem", plan_problem_path, "Problem file")
      ->required();
  plan->add_option("--max-expansions", plan_max_expansions,
                   "Expansion budget");
  plan->add_option("--timeout", plan_timeout, "Timeout in seconds");
  plan->add_option("--out", plan_out, "Write the plan here (else stdout)");

  // validate
  std::string val_domain_path, val_problem_path, val_plan_path;
  auto* validate =
      app.add_subcommand("validate", "Replay a plan against truth files");
  validate->add_option("--domain", val_domain_path, "Truth domain file")
      ->required();
  validate->add_option("--problem", val_problem_path, "Truth problem file")
      ->required();
  validate->add_option("--plan", val_plan_path, "Plan file")->required();

  // grammar emit
  std::string grammar_out;
  auto* grammar = app.add_subcommand("grammar", "Grammar utilities");
  grammar->require_subcommand(1);
  auto* grammar_emit =
      grammar->add_subcommand("emit", "Emit the EBNF grammar");
  grammar_emit->add_option("--out", grammar_out,
                           "Write the grammar here (else stdout)");

  // run
  std::string run_config_path, run_dataset, run_backend, run_out, run_script;
  int run_workers = 0;
  long run_max_records = 0;
  auto* run = app.add_subcommand("run", "Evaluate pipelines over a dataset");
  run->add_option("--config", run_config_path, "Run config JSON")
      ->required();
  run->add_option("--dataset", run_dataset, "Dataset root")->required();
  run->add_option("--backend", run_backend, "Backend: mock | http");
  run->add_option("--out", run_out, "Output directory")->required();
  run->add_option("--script", run_script, "Mock backend script JSON");
  run->add_option("--workers", run_workers, "Worker threads");
  run->add_option("--max-records", run_max_records,
                  "Stop after writing this many records (abort simulation)");

  // summarize
  std::string sum_records, sum_out;
  auto* summarize =
      app.add_subcommand("summarize", "Summarize a records file");
  summarize->add_option("--records", sum_records, "records.jsonl path")
      ->required();
  summarize->add_option("--out", sum_out, "Directory for CSV outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_dataset(gen_domain, gen_count, gen_seed, gen_out,
                             gen_min_blocks, gen_max_blocks);
    }
    if (parse->parsed()) {
      if (parse_domain_path.empty() && parse_problem_path.empty()) {
        std::cerr << "parse needs --domain and/or --problem\n";
        return kExitUsage;
      }
      return cmd_parse(parse_domain_path, parse_problem_path);
    }
    if (check->parsed()) {
      return cmd_check(check_domain_path, check_problem_path);
    }
    if (plan->parsed()) {
      return cmd_plan(plan_domain_path, plan_problem_path,
                      plan_max_expansions, plan_timeout, plan_out);
    }
    if (validate->parsed()) {
      return cmd_validate(val_domain_path, val_problem_path, val_plan_path);
    }
    if (grammar->parsed()) {
      return cmd_grammar_emit(grammar_out);
    }
    if (run->parsed()) {
      return cmd_run(run_config_path, run_dataset, run_backend, run_out,
                     run_script, run_workers, run_max_records);
    }
    if (summarize->parsed()) {
      return cmd_summarize(sum_records, sum_out);
    }
  } catch (const formalizer::llm::MockScriptError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const DatasetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataset;
  }
  return kExitUsage;
}
