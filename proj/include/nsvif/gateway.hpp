#pragma once

// Chat-completion gateway with a live OpenAI-style HTTP backend and
// deterministic record/replay cassettes.

#include <chrono>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsvif/model.hpp"

namespace nsvif {

inline constexpr double kDefaultTemperature = 0.2;

struct ChatRequest {
  std::string model;
  std::string system;
  std::string user;
  double temperature = kDefaultTemperature;
  std::optional<int> max_tokens;
};

enum class BackendKind { live, replay };

struct ChatResponse {
  std::string text;
  TokenUsage usage;
  BackendKind backend = BackendKind::live;
};

/// Hex SHA-256 over model, system, user and temperature. max_tokens is
/// deliberately not part of the key.
std::string request_fingerprint(const ChatRequest& request);

TokenUsage usage_totals(std::span<const ChatResponse> responses);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

struct HttpBackendOptions {
  std::string base_url;  // e.g. https://api.openai.com/v1
  std::string api_key;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  int max_in_flight = 4;
  std::chrono::seconds timeout{120};
};

/// POSTs {base_url}/chat/completions. Transport failures, 429 and 5xx are
/// retried with exponential backoff; other statuses fail immediately.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendOptions options);
  ~HttpChatBackend() override;

  ChatResponse complete(const ChatRequest& request) override;

  /// Options from NSVIF_BASE_URL / NSVIF_API_KEY.
  static HttpBackendOptions options_from_env();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Backend driven by a callable; used for scripted generators and tests.
class CallbackBackend : public ChatBackend {
 public:
  using Handler = std::function<ChatResponse(const ChatRequest&)>;

  explicit CallbackBackend(Handler handler) : handler_(std::move(handler)) {}

  ChatResponse complete(const ChatRequest& request) override;
  std::size_t calls() const;

 private:
  Handler handler_;
  mutable std::mutex mutex_;
  std::size_t calls_ = 0;
};

struct CassetteEntry {
  std::string fingerprint;
  ChatRequest request;
  std::string response;
  TokenUsage usage;
};

/// Recorded exchanges in order of first use; fingerprints are unique.
class Cassette {
 public:
  static Cassette load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  const CassetteEntry* find(const std::string& fingerprint) const;
  /// Returns false (and keeps the first entry) on a duplicate fingerprint.
  bool append(CassetteEntry entry);

  const std::vector<CassetteEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<CassetteEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

enum class GatewayMode {
  live,    // every request goes to the backend
  record,  // cassette first, otherwise the backend, and the answer is recorded
  replay,  // cassette only; a miss is an error
};

/// Thread-safe front door for every LLM call.
class Gateway {
 public:
  /// `cassette_path` is required for record and replay modes. In record mode
  /// the cassette is rewritten after every new entry.
  Gateway(GatewayMode mode, std::shared_ptr<ChatBackend> backend,
          std::optional<std::filesystem::path> cassette_path = std::nullopt);

  ChatResponse complete(const ChatRequest& request);

  GatewayMode mode() const { return mode_; }
  std::size_t backend_calls() const;
  Cassette cassette() const;

 private:
  ChatResponse call_backend(const ChatRequest& request);

  GatewayMode mode_;
  std::shared_ptr<ChatBackend> backend_;
  std::optional<std::filesystem::path> cassette_path_;
  mutable std::mutex mutex_;
  Cassette cassette_;
  std::map<std::string, std::shared_future<ChatResponse>> in_flight_;
  std::size_t backend_calls_ = 0;
};

}  // namespace nsvif
