#include "formalizer/llm/client.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace formalizer::llm {

using nlohmann::json;

std::string MockBackend::key(const std::string& problem_id,
                             const std::string& stage, int attempt) {
  return problem_id + "|" + stage + "|" + std::to_string(attempt);
}

void MockBackend::script(const std::string& problem_id,
                         const std::string& stage, int attempt,
                         std::string response) {
  entries_[key(problem_id, stage, attempt)] = std::move(response);
}

MockBackend MockBackend::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw MockScriptError("cannot read mock script " + path);
  }
  json script = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (script.is_discarded() || !script.is_object() ||
      !script.contains("entries") || !script["entries"].is_object()) {
    throw MockScriptError("mock script " + path +
                          " must be {\"entries\": {\"id|stage|attempt\": text}}");
  }
  MockBackend backend;
  for (const auto& [entry_key, value] : script["entries"].items()) {
    if (!value.is_string()) {
      throw MockScriptError("mock entry '" + entry_key + "' is not a string");
    }
    backend.entries_[entry_key] = value.get<std::string>();
  }
  return backend;
}

GenerationResponse MockBackend::generate(const GenerationRequest&,
                                         const CallContext& context) {
  auto it = entries_.find(key(context.problem_id, context.stage,
                              context.attempt));
  if (it == entries_.end()) {
    throw MockScriptError("mock script has no entry for " +
                          key(context.problem_id, context.stage,
                              context.attempt));
  }
  return {it->second, GenerationResponse::Finish::stop, 0.0};
}

// ---------------------------------------------------------------------------

struct HttpBackend::Impl {
  explicit Impl(int max_inflight) : slots(max_inflight) {}

  // Counting semaphore bounding in-flight requests.
  struct Slots {
    explicit Slots(int count) : available(count) {}
    std::mutex mutex;
    std::condition_variable cv;
    int available;

    void acquire() {
      std::unique_lock lock(mutex);
      cv.wait(lock, [&] { return available > 0; });
      --available;
    }
    void release() {
      {
        std::lock_guard lock(mutex);
        ++available;
      }
      cv.notify_one();
    }
  } slots;
};

HttpBackend::HttpBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
  if (const char* base = std::getenv("FORMALIZER_API_BASE")) {
    config_.base_url = base;
  }
  if (const char* key = std::getenv("FORMALIZER_API_KEY")) {
    config_.api_key = key;
  }
  impl_ = std::make_unique<Impl>(std::max(1, config_.max_inflight));
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::serialize_payload(const std::string& model,
                                           const GenerationRequest& request) {
  json payload;
  payload["model"] = model;
  payload["messages"] = json::array();
  for (const auto& message : request.messages) {
    payload["messages"].push_back(
        {{"role", message.role}, {"content", message.content}});
  }
  payload["temperature"] = request.temperature;
  payload["max_tokens"] = request.max_tokens;
  if (request.seed) {
    payload["seed"] = *request.seed;
  }
  return payload.dump();
}

GenerationResponse HttpBackend::generate(const GenerationRequest& request,
                                         const CallContext&) {
  impl_->slots.acquire();
  struct Release {
    Impl::Slots& slots;
    ~Release() { slots.release(); }
  } release{impl_->slots};

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  httplib::Client client(config_.base_url);
  client.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
  client.set_connection_timeout(std::chrono::seconds(10));
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  const std::string body = serialize_payload(config_.model, request);

  double backoff = config_.initial_backoff_s;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2.0;
    }
    auto result = client.Post("/chat/completions", headers, body,
                              "application/json");
    if (!result) continue;                       // transport failure
    if (result->status >= 500) continue;         // transient server error
    if (result->status != 200) {
      return {"", GenerationResponse::Finish::error, elapsed()};
    }
    json response = json::parse(result->body, nullptr,
                                /*allow_exceptions=*/false);
    if (response.is_discarded() || !response.contains("choices") ||
        response["choices"].empty()) {
      return {"", GenerationResponse::Finish::error, elapsed()};
    }
    const auto& choice = response["choices"][0];
    GenerationResponse out;
    out.content = choice.value("message", json::object())
                      .value("content", std::string{});
    out.finish = choice.value("finish_reason", "stop") == "length"
                     ? GenerationResponse::Finish::length
                     : GenerationResponse::Finish::stop;
    out.latency_s = elapsed();
    return out;
  }
  return {"", GenerationResponse::Finish::error, elapsed()};
}

}  // namespace formalizer::llm
