#ifndef FORMALIZER_LLM_CLIENT_HPP
#define FORMALIZER_LLM_CLIENT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace formalizer::llm {

struct Message {
  std::string role;  // system | user | assistant
  std::string content;
};

struct GenerationRequest {
  std::vector<Message> messages;
  double temperature = 0.4;
  int max_tokens = 8192;
  std::optional<std::uint64_t> seed;
};

struct GenerationResponse {
  enum class Finish { stop, length, error };

  std::string content;
  Finish finish = Finish::stop;
  double latency_s = 0.0;
};

// Identifies the call for scripted backends; remote backends ignore it.
struct CallContext {
  std::string problem_id;
  std::string stage;  // full | domain-only | problem-only | summary
  int attempt = 0;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual GenerationResponse generate(const GenerationRequest& request,
                                      const CallContext& context) = 0;
  virtual std::string name() const = 0;
};

// Missing mock entries abort the run: a silent fallback would corrupt
// fixture-driven results.
struct MockScriptError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic scripted backend keyed by (problem-id, stage, attempt).
class MockBackend : public Backend {
 public:
  static std::string key(const std::string& problem_id,
                         const std::string& stage, int attempt);

  void script(const std::string& problem_id, const std::string& stage,
              int attempt, std::string response);

  static MockBackend from_json_file(const std::string& path);

  GenerationResponse generate(const GenerationRequest& request,
                              const CallContext& context) override;
  std::string name() const override { return "mock"; }

 private:
  std::unordered_map<std::string, std::string> entries_;
};

struct HttpBackendConfig {
  std::string base_url;  // overridden by FORMALIZER_API_BASE
  std::string api_key;   // overridden by FORMALIZER_API_KEY
  std::string model = "default";
  int max_inflight = 4;
  int retries = 3;
  double initial_backoff_s = 0.5;
  double timeout_s = 120.0;
};

// Chat-completion-style HTTP JSON backend with bounded concurrency and
// exponential backoff on transient transport failures.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  ~HttpBackend() override;

  GenerationResponse generate(const GenerationRequest& request,
                              const CallContext& context) override;
  std::string name() const override { return "http:" + config_.model; }

  // Request payload serialization, exposed for tests.
  static std::string serialize_payload(const std::string& model,
                                       const GenerationRequest& request);

 private:
  HttpBackendConfig config_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace formalizer::llm

#endif
