#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "newsreuse/analysis.hpp"
#include "newsreuse/matcher.hpp"

namespace newsreuse {

void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Rows: True matches, The earliest matches, False positives. Columns:
/// articles and sentences for target and source. Earliest-stage target cells
/// are left empty because that filter only applies to sources.
std::string accounting_csv(const MatchSet& set);
void emit_accounting(const MatchSet& set, const std::filesystem::path& path);

std::string position_csv(const ContingencyTable& table);

struct HeatmapStyle {
  double scale_max = 10.0;
  /// Dashed divider before the first column at or after this instant.
  std::optional<Timestamp> divider;
};

/// Diverging scale: 0 is blue, scale_max / 2 white, scale_max and above red.
std::string heatmap_color(double value, double scale_max);

/// Throws EmptyMatrix when the heatmap has no columns.
std::string heatmap_svg(const Heatmap& heatmap, const HeatmapStyle& style = {});
void emit_heatmap_svg(const Heatmap& heatmap, const std::filesystem::path& path, const HeatmapStyle& style = {});

struct TermFrequency {
  std::string term;
  std::uint64_t count = 0;

  bool operator==(const TermFrequency&) const = default;
};

using Stopwords = std::set<std::string, std::less<>>;

const Stopwords& default_stopwords();
/// One term per line, folded to lowercase; lines starting with '#' are comments.
Stopwords load_stopwords(const std::filesystem::path& path);

/// Terms of the `top_k_sentences` target sentences with the most attributed
/// pairs (ties by key), lowercased, without stopwords, punctuation, pure
/// numbers or single characters. Sorted by count descending, then term.
std::vector<TermFrequency> term_frequencies(std::span<const MatchRecord> attributed, const Segmentation& target,
                                            std::size_t top_k_sentences, const Stopwords& stopwords);

/// Counts terms of the given sentences directly.
std::vector<TermFrequency> count_terms(std::span<const std::string> sentences, const Stopwords& stopwords);

nlohmann::json to_json(std::span<const TermFrequency> terms);

}  // namespace newsreuse
