#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newsreuse/corpus.hpp"
#include "newsreuse/linguistic.hpp"
#include "newsreuse/matcher.hpp"

namespace newsreuse {

enum class PositionBin { Beginning = 0, Middle = 1, End = 2 };

inline constexpr std::size_t kPositionBins = 3;

std::string_view to_string(PositionBin bin);

/// Tercile by index: min(floor(3 * idx / n), 2). Throws IndexOutOfRange.
PositionBin position_bin(std::size_t idx, std::size_t n);

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::uint64_t>> counts;  // [row][col]

  /// Zero-filled table with the given labels.
  static ContingencyTable zeros(std::vector<std::string> rows, std::vector<std::string> cols);
  /// Throws BadRecord if the shape disagrees with the labels.
  static ContingencyTable from_counts(std::vector<std::string> rows, std::vector<std::string> cols,
                                     std::vector<std::vector<std::uint64_t>> counts);

  std::uint64_t total() const;
  bool operator==(const ContingencyTable&) const = default;
};

/// Rows: source-article bin, columns: target-article bin. Bin sizes use each
/// article's full sentence list. Throws UnknownArticle or IndexOutOfRange.
ContingencyTable build_position_table(std::span<const MatchRecord> attributed, const Segmentation& target,
                                      const Segmentation& source);

enum class PrType { OneToOne, OneToMany, ManyToOne, ManyToMany };

std::string_view to_string(PrType type);

struct PrClassification {
  /// Same order as the input records.
  std::vector<PrType> types;
  std::map<PrType, std::size_t> counts;
  std::map<PrType, double> percentages;  // every type present, summing to 100 unless empty
};

/// k(t) = pairs containing target sentence t, m(s) = pairs containing source
/// sentence s, both counted over the whole record set. 1:many means one
/// target sentence with several source sentences.
PrClassification classify_pr(std::span<const MatchRecord> attributed);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
};

/// Regularized upper incomplete gamma Q(a, x) via series / continued fraction.
double regularized_gamma_q(double a, double x);

/// Pearson's test of independence. Throws DegenerateTable when a row or
/// column sums to zero, or the table is smaller than 2x2.
ChiSquareResult chi_square_independence(const ContingencyTable& table);

struct ReuseRates {
  std::size_t target_matched = 0;
  std::size_t target_total = 0;
  std::size_t source_matched = 0;
  std::size_t source_total = 0;
  double target_rate = 0.0;
  double source_rate = 0.0;
};

/// Share of articles with at least one pair that survived false-positive removal.
ReuseRates reuse_rates(const MatchSet& set, const Corpus& target, const Corpus& source);

struct Heatmap {
  Role axis = Role::Target;
  std::vector<std::string> article_ids;  // chronological, ties by id
  std::vector<Timestamp> timestamps;
  std::array<std::vector<std::uint64_t>, kPositionBins> counts;  // [bin][article]

  std::size_t columns() const { return article_ids.size(); }
};

/// Pair counts per position bin and article for one side of the attributed
/// pairs. Every article of the corpus gets a column. Throws RoleMismatch when
/// the corpus role differs from `axis`.
Heatmap heatmap_matrix(std::span<const MatchRecord> attributed, const Corpus& corpus, const Segmentation& segmentation,
                       Role axis);

nlohmann::json to_json(const ChiSquareResult& result);
nlohmann::json to_json(const PrClassification& pr);
nlohmann::json to_json(const Heatmap& heatmap);
nlohmann::json to_json(const ReuseRates& rates);

}  // namespace newsreuse
