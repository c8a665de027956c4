#include <httplib.h>
#include <json.hpp>

#include "newsreuse/embedding.hpp"
#include "newsreuse/error.hpp"

namespace newsreuse {
namespace {

httplib::Client make_client(const std::string& url, std::chrono::seconds timeout) {
  httplib::Client client(url);
  client.set_connection_timeout(std::chrono::seconds(5));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

nlohmann::json parse_body(const std::string& url, const std::string& body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ProviderUnavailable, url + ": malformed JSON response: " + e.what());
  }
}

}  // namespace

SidecarProvider::SidecarProvider(std::string url, std::size_t expected_dim, std::chrono::seconds timeout)
    : url_(std::move(url)), expected_dim_(expected_dim), timeout_(timeout) {
  if (!url_.starts_with("http://") && !url_.starts_with("https://")) {
    throw Error(ErrorCode::BadConfig, "sidecar URL must start with http:// or https://: " + url_);
  }
}

EmbeddingMeta SidecarProvider::meta() const {
  std::lock_guard lock(mutex_);
  if (!model_id_) {
    auto client = make_client(url_, timeout_);
    const auto res = client.Get("/info");
    if (!res) throw Error(ErrorCode::ProviderUnavailable, url_ + "/info: " + httplib::to_string(res.error()));
    if (res->status != 200) {
      throw Error(ErrorCode::ProviderUnavailable, url_ + "/info returned HTTP " + std::to_string(res->status));
    }
    const nlohmann::json info = parse_body(url_, res->body);
    const std::size_t dim = info.value("dim", std::size_t{0});
    if (dim != expected_dim_) {
      throw Error(ErrorCode::DimMismatch,
                  "sidecar dim " + std::to_string(dim) + ", configured " + std::to_string(expected_dim_));
    }
    model_id_ = info.value("model_id", std::string("unknown"));
  }
  return {"sidecar", *model_id_, expected_dim_};
}

std::vector<Vector> SidecarProvider::embed(std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  const nlohmann::json request{{"texts", std::vector<std::string>(texts.begin(), texts.end())}, {"normalize", true}};
  auto client = make_client(url_, timeout_);
  const auto res = client.Post("/embed", request.dump(), "application/json");
  if (!res) throw Error(ErrorCode::ProviderUnavailable, url_ + "/embed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw Error(ErrorCode::ProviderUnavailable, url_ + "/embed returned HTTP " + std::to_string(res->status));
  }
  const nlohmann::json body = parse_body(url_, res->body);
  if (!body.contains("vectors") || !body["vectors"].is_array() || !body.contains("dim")) {
    throw Error(ErrorCode::ProviderUnavailable, url_ + "/embed: response lacks dim or vectors");
  }
  const std::size_t dim = body["dim"].get<std::size_t>();
  if (dim != expected_dim_) {
    throw Error(ErrorCode::DimMismatch, "sidecar dim " + std::to_string(dim) + ", configured " + std::to_string(expected_dim_));
  }
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& row : body["vectors"]) {
    Vector v;
    v.values = row.get<std::vector<float>>();
    if (v.dim() != expected_dim_) {
      throw Error(ErrorCode::DimMismatch, "sidecar vector of length " + std::to_string(v.dim()));
    }
    l2_normalize(v);
    out.push_back(std::move(v));
  }
  if (out.size() != texts.size()) {
    throw Error(ErrorCode::ProviderUnavailable, "sidecar returned " + std::to_string(out.size()) + " vectors for " +
                                                    std::to_string(texts.size()) + " texts");
  }
  {
    std::lock_guard lock(mutex_);
    if (!model_id_ && body.contains("model_id") && body["model_id"].is_string()) model_id_ = body["model_id"].get<std::string>();
  }
  return out;
}

}  // namespace newsreuse
