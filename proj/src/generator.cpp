#include "vpoem/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <regex>
#include <thread>

#include "httplib.h"

namespace vpoem {

namespace {

constexpr std::string_view kCanned =
    "Trăm năm trong cõi người ta,\n"
    "Chữ tài chữ mệnh khéo là ghét nhau.";

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

// Retryable BackendError; anything else escapes the retry loop unchanged.
class TransientBackendError : public BackendError {
 public:
  using BackendError::BackendError;
};

double jitter_draw() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

std::string_view to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::stub: return "stub";
    case GeneratorKind::replay: return "replay";
    case GeneratorKind::http: return "http";
  }
  return "stub";
}

GeneratorKind parse_generator_kind(std::string_view text) {
  if (text == "stub") return GeneratorKind::stub;
  if (text == "replay") return GeneratorKind::replay;
  if (text == "http") return GeneratorKind::http;
  throw InvalidConfig("unknown generator \"" + std::string(text) + "\"");
}

std::chrono::milliseconds RetryPolicy::delay(int attempt, double u) const {
  const double base = static_cast<double>(base_delay.count());
  const double grown = base * std::pow(2.0, std::max(0, attempt - 1));
  const double capped = std::min(grown, static_cast<double>(max_delay.count()));
  const double j = std::clamp(jitter, 0.0, 1.0);
  return std::chrono::milliseconds(static_cast<long long>(capped * (1.0 - j * u)));
}

void GeneratorSpec::validate() const {
  if (kind == GeneratorKind::http) {
    if (endpoint.empty()) throw InvalidConfig("http generator needs an endpoint");
    static const std::regex url(R"(^https?://[^/\s]+(/\S*)?$)");
    if (!std::regex_match(endpoint, url)) {
      throw InvalidConfig("endpoint must be an http(s) URL: " + endpoint);
    }
  }
  if (retry.max_attempts < 1) throw InvalidConfig("max_attempts must be at least 1");
  if (retry.base_delay.count() < 0 || retry.max_delay.count() < 0) {
    throw InvalidConfig("retry delays must be non-negative");
  }
  if (timeout.count() <= 0) throw InvalidConfig("timeout must be positive");
  if (max_tokens < 1) throw InvalidConfig("max_tokens must be positive");
}

GeneratorSpec GeneratorSpec::from_json(const Json& j) {
  GeneratorSpec s;
  try {
    if (j.contains("kind")) s.kind = parse_generator_kind(j["kind"].get<std::string>());
    s.endpoint = j.value("endpoint", s.endpoint);
    s.model = j.value("model", s.model);
    s.auth_env = j.value("auth_env", s.auth_env);
    s.max_tokens = j.value("max_tokens", s.max_tokens);
    s.temperature = j.value("temperature", s.temperature);
    s.timeout = std::chrono::milliseconds(j.value("timeout_ms", s.timeout.count()));
    s.response_path = j.value("response_path", s.response_path);
    s.canned = j.value("canned", s.canned);
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      s.retry.max_attempts = r.value("max_attempts", s.retry.max_attempts);
      s.retry.base_delay = std::chrono::milliseconds(r.value("base_delay_ms", s.retry.base_delay.count()));
      s.retry.max_delay = std::chrono::milliseconds(r.value("max_delay_ms", s.retry.max_delay.count()));
      s.retry.jitter = r.value("jitter", s.retry.jitter);
    }
  } catch (const Json::exception& e) {
    throw InvalidConfig(std::string("generator config: ") + e.what());
  }
  s.validate();
  return s;
}

Json GeneratorSpec::to_json() const {
  Json j = Json::object();
  j["kind"] = std::string(vpoem::to_string(kind));
  j["endpoint"] = endpoint;
  j["model"] = model;
  j["auth_env"] = auth_env;
  j["max_tokens"] = max_tokens;
  j["temperature"] = temperature;
  j["timeout_ms"] = timeout.count();
  j["response_path"] = response_path;
  j["retry"] = {{"max_attempts", retry.max_attempts},
                {"base_delay_ms", retry.base_delay.count()},
                {"max_delay_ms", retry.max_delay.count()},
                {"jitter", retry.jitter}};
  if (!canned.empty()) j["canned"] = canned;
  return j;
}

std::string_view default_canned_poem() noexcept { return kCanned; }

StubGenerator::StubGenerator(std::string canned)
    : canned_(canned.empty() ? std::string(kCanned) : std::move(canned)) {}

std::string StubGenerator::generate(const GenerationRequest&) { return canned_; }

void ReplayGenerator::add(const std::string& id, const std::string& prompt,
                          const std::string& completion) {
  if (!id.empty()) by_id_[id] = completion;
  if (!prompt.empty()) by_prompt_.emplace(prompt, completion);
}

std::string ReplayGenerator::generate(const GenerationRequest& request) {
  if (auto it = by_id_.find(request.record_id); it != by_id_.end()) return it->second;
  if (auto it = by_prompt_.find(request.prompt); it != by_prompt_.end()) return it->second;
  throw GeneratorError("no gold completion for record \"" + request.record_id + "\"");
}

std::string extract_text(const Json& response, std::string_view path) {
  const Json* node = &response;
  std::string p(path);
  if (!p.empty() && p.front() == '/') {
    try {
      node = &response.at(nlohmann::json_pointer<std::string>(p));
    } catch (const Json::exception&) {
      throw GeneratorError("response has no field at " + p);
    }
  } else {
    std::size_t start = 0;
    while (start <= p.size() && !p.empty()) {
      const std::size_t dot = p.find('.', start);
      const std::string key = p.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (node->is_array()) {
        const bool numeric = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) {
          return c >= '0' && c <= '9';
        });
        const std::size_t index = numeric ? std::stoul(key) : node->size();
        if (index >= node->size()) throw GeneratorError("response has no field at " + p);
        node = &(*node)[index];
      } else if (node->is_object() && node->contains(key)) {
        node = &(*node)[key];
      } else {
        throw GeneratorError("response has no field at " + p);
      }
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
  }
  if (!node->is_string()) throw GeneratorError("response field at " + p + " is not text");
  return node->get<std::string>();
}

HttpGenerator::HttpGenerator(GeneratorSpec spec) : spec_(std::move(spec)) {
  spec_.kind = GeneratorKind::http;
  spec_.validate();
  static const std::regex url(R"(^(https?://[^/\s]+)(/\S*)?$)");
  std::smatch m;
  std::regex_match(spec_.endpoint, m, url);
  origin_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
  sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string HttpGenerator::attempt(const std::string& body) const {
  httplib::Client client(origin_);
  client.set_connection_timeout(spec_.timeout);
  client.set_read_timeout(spec_.timeout);
  client.set_write_timeout(spec_.timeout);
  if (!spec_.auth_env.empty()) {
    const char* token = std::getenv(spec_.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw GeneratorError("environment variable " + spec_.auth_env + " is not set");
    }
    client.set_bearer_token_auth(token);
  }
  auto res = client.Post(path_, body, "application/json");
  if (!res) throw Timeout("no response from " + origin_ + ": " + httplib::to_string(res.error()));
  const int status = res->status;
  if (status < 200 || status >= 300) {
    const std::string snippet = res->body.substr(0, 200);
    if (retryable_status(status)) throw TransientBackendError(status, snippet);
    throw BackendError(status, snippet);
  }
  Json doc;
  try {
    doc = Json::parse(res->body);
  } catch (const Json::parse_error&) {
    throw BackendError(status, "response is not JSON");
  }
  return extract_text(doc, spec_.response_path);
}

std::string HttpGenerator::generate(const GenerationRequest& request) {
  Json payload = Json::object();
  payload["model"] = spec_.model;
  payload["prompt"] = request.prompt;
  payload["max_tokens"] = spec_.max_tokens;
  payload["temperature"] = spec_.temperature;
  const std::string body = payload.dump();

  std::string last;
  for (int n = 1; n <= spec_.retry.max_attempts; ++n) {
    try {
      return attempt(body);
    } catch (const Timeout& e) {
      last = e.what();
    } catch (const TransientBackendError& e) {
      last = e.what();
    }
    if (n == spec_.retry.max_attempts) break;
    const auto wait = spec_.retry.delay(n, jitter_draw());
    if (on_retry_) on_retry_(n, last, wait);
    sleep_(wait);
  }
  throw ExhaustedRetries(spec_.retry.max_attempts, last);
}

}  // namespace vpoem
