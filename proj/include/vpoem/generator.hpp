#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>

#include "vpoem/corpus.hpp"
#include "vpoem/error.hpp"

namespace vpoem {

class GeneratorError : public Error {
 public:
  using Error::Error;
};

/// No response arrived: connection refused, unreachable host or timed out.
class Timeout : public GeneratorError {
 public:
  using GeneratorError::GeneratorError;
};

class BackendError : public GeneratorError {
 public:
  BackendError(int status, const std::string& what)
      : GeneratorError("backend returned HTTP " + std::to_string(status) + ": " + what),
        status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

class ExhaustedRetries : public GeneratorError {
 public:
  ExhaustedRetries(int attempts, const std::string& last)
      : GeneratorError("gave up after " + std::to_string(attempts) + " attempts: " + last),
        attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

enum class GeneratorKind { stub, replay, http };

std::string_view to_string(GeneratorKind kind) noexcept;
/// Throws InvalidConfig.
GeneratorKind parse_generator_kind(std::string_view text);

struct RetryPolicy {
  int max_attempts = 3;  // total attempts, not retries
  std::chrono::milliseconds base_delay{250};
  std::chrono::milliseconds max_delay{8000};
  double jitter = 0.5;  // fraction of each delay that is randomized away

  /// Delay before attempt `attempt + 1`, given a uniform draw u in [0, 1).
  std::chrono::milliseconds delay(int attempt, double u) const;
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::stub;
  std::string endpoint;  // http only
  std::string model;
  std::string auth_env;  // name of the variable holding the bearer token
  int max_tokens = 256;
  double temperature = 0.7;
  std::chrono::milliseconds timeout{30000};
  RetryPolicy retry;
  std::string response_path = "choices.0.text";
  std::string canned;  // stub output; a built-in couplet when empty

  /// Throws InvalidConfig.
  void validate() const;
  /// Reads the keys written by to_json; absent keys keep their defaults.
  static GeneratorSpec from_json(const Json& j);
  Json to_json() const;
};

struct GenerationRequest {
  std::string prompt;
  std::string record_id;
};

/// Text generator backend. Implementations must be safe to call from
/// several threads at once.
class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string generate(const GenerationRequest& request) = 0;
};

class StubGenerator : public Generator {
 public:
  explicit StubGenerator(std::string canned = {});
  std::string generate(const GenerationRequest& request) override;

 private:
  std::string canned_;
};

/// Returns the gold completion stored for a record id, falling back to an
/// exact prompt match.
class ReplayGenerator : public Generator {
 public:
  void add(const std::string& id, const std::string& prompt, const std::string& completion);
  std::string generate(const GenerationRequest& request) override;

 private:
  std::unordered_map<std::string, std::string> by_id_;
  std::unordered_map<std::string, std::string> by_prompt_;
};

/// Posts {model, prompt, max_tokens, temperature} as JSON and reads the
/// generated text at spec.response_path. Retries transport failures and
/// HTTP 408, 429 and 5xx with exponential backoff.
class HttpGenerator : public Generator {
 public:
  using RetryHook = std::function<void(int attempt, const std::string& reason,
                                       std::chrono::milliseconds delay)>;
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit HttpGenerator(GeneratorSpec spec);

  void on_retry(RetryHook hook) { on_retry_ = std::move(hook); }
  void set_sleeper(Sleeper sleeper) { sleep_ = std::move(sleeper); }

  std::string generate(const GenerationRequest& request) override;

 private:
  std::string attempt(const std::string& body) const;

  GeneratorSpec spec_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  RetryHook on_retry_;
  Sleeper sleep_;
};

/// Follows a dotted path ("choices.0.text") or a JSON pointer ("/choices/0/text").
/// Throws GeneratorError when the path is absent or not a string.
std::string extract_text(const Json& response, std::string_view path);

/// The stub's default output: a luc bat couplet scoring 1.0.
std::string_view default_canned_poem() noexcept;

}  // namespace vpoem
