#include "newsreuse/config.hpp"

#include <fstream>
#include <set>

#include "newsreuse/error.hpp"

namespace newsreuse {
namespace {

template <typename T>
T get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadConfig, std::string(key) + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

void Config::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::BadConfig, "threshold must lie in (0, 1)");
  if (parallelism < 1) throw Error(ErrorCode::BadConfig, "parallelism must be at least 1");
  if (max_batch < 1) throw Error(ErrorCode::BadConfig, "max_batch must be at least 1");
  if (embed_dim < 1) throw Error(ErrorCode::BadConfig, "embed_dim must be positive");
  if (!(heatmap_max > 0.0)) throw Error(ErrorCode::BadConfig, "heatmap_max must be positive");
  if (top_k_sentences < 1) throw Error(ErrorCode::BadConfig, "top_k_sentences must be at least 1");
  if (language_set.empty()) throw Error(ErrorCode::BadConfig, "language_set is empty");
}

Config config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::BadConfig, "config must be a JSON object");
  static const std::set<std::string> kKnown{
      "threshold",       "embed_dim",       "provider",    "sidecar_url",  "language_set",    "heatmap_max",
      "heatmap_divider", "parallelism",     "max_batch",   "top_k_sentences", "filter_sources", "group_by",
      "target_path",     "source_path",     "annotations_path", "stopwords_path", "pairs_path", "matches_path",
      "out_dir"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) throw Error(ErrorCode::BadConfig, "unknown config key '" + key + "'");
  }

  Config c;
  if (j.contains("threshold")) c.threshold = get<double>(j, "threshold");
  if (j.contains("embed_dim")) c.embed_dim = get<std::size_t>(j, "embed_dim");
  if (j.contains("provider")) {
    const auto p = get<std::string>(j, "provider");
    if (p == "builtin") {
      c.provider = ProviderKind::Builtin;
    } else if (p == "sidecar") {
      c.provider = ProviderKind::Sidecar;
    } else {
      throw Error(ErrorCode::BadConfig, "provider must be 'builtin' or 'sidecar'");
    }
  }
  if (j.contains("sidecar_url")) c.sidecar_url = get<std::string>(j, "sidecar_url");
  if (j.contains("language_set")) {
    c.language_set.clear();
    for (auto& code : get<std::vector<std::string>>(j, "language_set")) c.language_set.insert(std::move(code));
  }
  if (j.contains("heatmap_max")) c.heatmap_max = get<double>(j, "heatmap_max");
  if (j.contains("heatmap_divider")) {
    try {
      c.heatmap_divider = parse_rfc3339(get<std::string>(j, "heatmap_divider"));
    } catch (const Error& e) {
      throw Error(ErrorCode::BadConfig, std::string("heatmap_divider: ") + e.message());
    }
  }
  if (j.contains("parallelism")) c.parallelism = get<std::size_t>(j, "parallelism");
  if (j.contains("max_batch")) c.max_batch = get<std::size_t>(j, "max_batch");
  if (j.contains("top_k_sentences")) c.top_k_sentences = get<std::size_t>(j, "top_k_sentences");
  if (j.contains("filter_sources")) c.filter_sources = get<bool>(j, "filter_sources");
  if (j.contains("group_by")) c.group_by = get<std::string>(j, "group_by");
  for (const auto& [key, field] : {std::pair{"target_path", &c.target_path},
                                   std::pair{"source_path", &c.source_path},
                                   std::pair{"annotations_path", &c.annotations_path},
                                   std::pair{"stopwords_path", &c.stopwords_path},
                                   std::pair{"pairs_path", &c.pairs_path},
                                   std::pair{"matches_path", &c.matches_path},
                                   std::pair{"out_dir", &c.out_dir}}) {
    if (j.contains(key)) *field = resolve(base_dir, get<std::string>(j, key));
  }
  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::BadConfig, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

}  // namespace newsreuse
