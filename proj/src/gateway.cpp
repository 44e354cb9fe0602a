#include "nsvif/gateway.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "nsvif/error.hpp"
#include "nsvif/json_io.hpp"

namespace nsvif {

namespace {

json request_to_json(const ChatRequest& r) {
  json j{{"model", r.model}, {"system", r.system}, {"user", r.user}, {"temperature", r.temperature}};
  if (r.max_tokens) j["max_tokens"] = *r.max_tokens;
  return j;
}

ChatRequest request_from_json(const json& j) {
  ChatRequest r;
  r.model = j.at("model").get<std::string>();
  r.system = j.at("system").get<std::string>();
  r.user = j.at("user").get<std::string>();
  r.temperature = j.at("temperature").get<double>();
  if (j.contains("max_tokens")) r.max_tokens = j.at("max_tokens").get<int>();
  return r;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    std::array<char, 3> buf{};
    std::snprintf(buf.data(), buf.size(), "%02x", digest[i]);
    hex += buf.data();
  }
  return hex;
}

}  // namespace

std::string request_fingerprint(const ChatRequest& request) {
  json key{{"model", request.model},
           {"system", request.system},
           {"user", request.user},
           {"temperature", request.temperature}};
  return sha256_hex(key.dump());
}

TokenUsage usage_totals(std::span<const ChatResponse> responses) {
  TokenUsage total;
  for (const auto& r : responses) total += r.usage;
  return total;
}

ChatResponse CallbackBackend::complete(const ChatRequest& request) {
  {
    std::lock_guard lock(mutex_);
    ++calls_;
  }
  ChatResponse r = handler_(request);
  r.backend = BackendKind::live;
  return r;
}

std::size_t CallbackBackend::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

// ---------------------------------------------------------------------------

Cassette Cassette::load(const std::filesystem::path& path) {
  Cassette c;
  if (!std::filesystem::exists(path)) return c;
  json j = json::parse(read_text_file(path));
  if (!j.is_array()) throw ValidationError(path.string() + ": cassette must be a JSON array");
  for (const auto& e : j) {
    CassetteEntry entry;
    entry.fingerprint = e.at("fingerprint").get<std::string>();
    entry.request = request_from_json(e.at("request"));
    entry.response = e.at("response").get<std::string>();
    entry.usage = e.value("usage", TokenUsage{});
    if (!c.append(std::move(entry))) {
      throw ValidationError(path.string() + ": duplicate fingerprint " + e.at("fingerprint").get<std::string>());
    }
  }
  return c;
}

void Cassette::save(const std::filesystem::path& path) const {
  json j = json::array();
  for (const auto& e : entries_) {
    j.push_back(json{{"fingerprint", e.fingerprint},
                     {"request", request_to_json(e.request)},
                     {"response", e.response},
                     {"usage", e.usage}});
  }
  write_text_file(path, dump_pretty(j));
}

const CassetteEntry* Cassette::find(const std::string& fingerprint) const {
  auto it = index_.find(fingerprint);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

bool Cassette::append(CassetteEntry entry) {
  if (index_.contains(entry.fingerprint)) return false;
  index_.emplace(entry.fingerprint, entries_.size());
  entries_.push_back(std::move(entry));
  return true;
}

// ---------------------------------------------------------------------------

Gateway::Gateway(GatewayMode mode, std::shared_ptr<ChatBackend> backend,
                 std::optional<std::filesystem::path> cassette_path)
    : mode_(mode), backend_(std::move(backend)), cassette_path_(std::move(cassette_path)) {
  if (mode_ != GatewayMode::live && !cassette_path_) {
    throw Error("record and replay modes need a cassette path");
  }
  if (mode_ != GatewayMode::replay && !backend_) throw Error("live and record modes need a backend");
  if (cassette_path_) cassette_ = Cassette::load(*cassette_path_);
}

std::size_t Gateway::backend_calls() const {
  std::lock_guard lock(mutex_);
  return backend_calls_;
}

Cassette Gateway::cassette() const {
  std::lock_guard lock(mutex_);
  return cassette_;
}

ChatResponse Gateway::call_backend(const ChatRequest& request) {
  {
    std::lock_guard lock(mutex_);
    ++backend_calls_;
  }
  ChatResponse r = backend_->complete(request);
  r.backend = BackendKind::live;
  return r;
}

ChatResponse Gateway::complete(const ChatRequest& request) {
  if (mode_ == GatewayMode::live) return call_backend(request);

  const std::string fp = request_fingerprint(request);
  std::unique_lock lock(mutex_);
  if (const CassetteEntry* hit = cassette_.find(fp)) {
    return ChatResponse{hit->response, hit->usage, BackendKind::replay};
  }
  if (mode_ == GatewayMode::replay) throw ReplayMissError(fp);

  if (auto it = in_flight_.find(fp); it != in_flight_.end()) {
    auto pending = it->second;
    lock.unlock();
    ChatResponse r = pending.get();
    r.backend = BackendKind::replay;
    return r;
  }
  std::promise<ChatResponse> promise;
  in_flight_.emplace(fp, promise.get_future().share());
  lock.unlock();

  ChatResponse response;
  try {
    response = call_backend(request);
  } catch (...) {
    lock.lock();
    in_flight_.erase(fp);
    promise.set_exception(std::current_exception());
    throw;
  }

  lock.lock();
  cassette_.append(CassetteEntry{fp, request, response.text, response.usage});
  cassette_.save(*cassette_path_);
  in_flight_.erase(fp);
  promise.set_value(response);
  return response;
}

}  // namespace nsvif
