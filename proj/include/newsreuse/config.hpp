#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "newsreuse/corpus.hpp"
#include "newsreuse/timestamp.hpp"

namespace newsreuse {

enum class ProviderKind { Builtin, Sidecar };

struct Config {
  double threshold = 0.60;
  std::size_t embed_dim = 384;
  ProviderKind provider = ProviderKind::Builtin;
  std::string sidecar_url = "http://127.0.0.1:8080";
  LanguageSet language_set = default_language_set();
  double heatmap_max = 10.0;
  std::optional<Timestamp> heatmap_divider;
  std::size_t parallelism = 1;
  std::size_t max_batch = 64;
  std::size_t top_k_sentences = 20;
  bool filter_sources = false;
  std::string group_by = "language";

  std::filesystem::path target_path;
  std::filesystem::path source_path;
  std::filesystem::path annotations_path;
  std::filesystem::path stopwords_path;
  std::filesystem::path pairs_path;
  std::filesystem::path matches_path;
  std::filesystem::path out_dir = "out";

  /// Throws BadConfig: threshold outside (0, 1), parallelism or batch of 0, ...
  void validate() const;
};

/// Keys mirror the field names; unknown keys are rejected. Relative paths are
/// resolved against the config file's directory.
Config load_config(const std::filesystem::path& path);
Config config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

}  // namespace newsreuse
