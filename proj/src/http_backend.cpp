#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <semaphore>
#include <thread>

#include "nsvif/error.hpp"
#include "nsvif/gateway.hpp"
#include "nsvif/json_io.hpp"

namespace nsvif {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error("base URL needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  out.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

struct HttpChatBackend::Impl {
  explicit Impl(HttpBackendOptions o)
      : options(std::move(o)), slots(std::max(1, options.max_in_flight)) {}

  HttpBackendOptions options;
  std::counting_semaphore<> slots;
};

HttpChatBackend::HttpChatBackend(HttpBackendOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  if (impl_->options.base_url.empty()) throw Error("live backend needs a base URL (NSVIF_BASE_URL)");
}

HttpChatBackend::~HttpChatBackend() = default;

HttpBackendOptions HttpChatBackend::options_from_env() {
  HttpBackendOptions o;
  if (const char* url = std::getenv("NSVIF_BASE_URL")) o.base_url = url;
  if (const char* key = std::getenv("NSVIF_API_KEY")) o.api_key = key;
  return o;
}

ChatResponse HttpChatBackend::complete(const ChatRequest& request) {
  const auto& opt = impl_->options;
  const SplitUrl url = split_url(opt.base_url);

  json messages = json::array();
  if (!request.system.empty()) messages.push_back({{"role", "system"}, {"content", request.system}});
  messages.push_back({{"role", "user"}, {"content", request.user}});
  json body{{"model", request.model}, {"messages", std::move(messages)}, {"temperature", request.temperature}};
  if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!opt.api_key.empty()) headers.emplace("Authorization", "Bearer " + opt.api_key);

  impl_->slots.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{impl_->slots};

  int last_status = 0;
  std::string last_error = "no attempt made";
  auto backoff = opt.initial_backoff;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(url.origin);
    client.set_read_timeout(opt.timeout);
    client.set_write_timeout(opt.timeout);
    auto res = client.Post(url.prefix + "/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_status = 0;
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500);
      if (retryable(res->status)) continue;
      throw TransportError(last_error, last_status);
    }
    try {
      json reply = json::parse(res->body);
      ChatResponse out;
      out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      if (reply.contains("usage")) {
        const auto& u = reply["usage"];
        out.usage.input_tokens = u.value("prompt_tokens", std::int64_t{0});
        out.usage.output_tokens = u.value("completion_tokens", std::int64_t{0});
      }
      out.backend = BackendKind::live;
      return out;
    } catch (const json::exception& e) {
      throw TransportError(std::string("malformed completion payload: ") + e.what(), last_status);
    }
  }
  throw TransportError("giving up after " + std::to_string(opt.max_retries + 1) + " attempts; " + last_error,
                       last_status);
}

}  // namespace nsvif
