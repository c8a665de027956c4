#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsreuse/embedding.hpp"
#include "newsreuse/linguistic.hpp"

namespace newsreuse {

/// A text and its known reused counterpart.
struct PairRecord {
  std::string pair_id;
  std::string language;
  std::string source_text;
  std::string target_text;
  std::optional<bool> paraphrase_label;
};

/// JSONL of {pair_id, language, source_text, target_text, paraphrase_label?}.
std::vector<PairRecord> load_pairs(const std::filesystem::path& path);

struct CalibrationScores {
  std::string pair_id;
  std::string language;
  std::optional<bool> paraphrase_label;
  double full_text = 0.0;
  std::optional<double> aligned_mean;     // i == j
  std::optional<double> nonaligned_mean;  // i != j
};

/// Sentences are assumed to correspond in order. Only the first
/// min(Ls, Lt) sentences of each side take part in the sentence-level means;
/// the document score embeds each side's sentences re-joined by single spaces.
CalibrationScores score_pair(const PairRecord& pair, const EmbeddingProvider& provider,
                             const SentenceSplitter& splitter = default_splitter(),
                             std::size_t max_batch = kDefaultMaxBatch);

std::vector<CalibrationScores> score_pairs(std::span<const PairRecord> pairs, const EmbeddingProvider& provider,
                                           std::size_t parallelism = 1,
                                           const SentenceSplitter& splitter = default_splitter(),
                                           std::size_t max_batch = kDefaultMaxBatch);

enum class GroupBy { Language, ParaphraseLabel };

GroupBy parse_group_by(std::string_view text);

struct CalibrationRow {
  std::string group;
  double full_text = 0.0;
  std::optional<double> nonaligned_mean;
  std::optional<double> aligned_mean;
  std::size_t support = 0;
};

/// Per-group means, groups in ascending key order; missing scores are left
/// out of their mean. Paraphrase labels group as "no" / "yes". Throws
/// EmptyGroup on empty input, MissingField when a pair lacks the attribute.
std::vector<CalibrationRow> aggregate(std::span<const CalibrationScores> scores, GroupBy group_by);

/// Midpoint between the largest non-aligned mean and the smallest aligned
/// mean, rounded up to a multiple of 0.05. Throws NoSeparation when the
/// interval is empty or no group carries both means.
double derive_threshold(std::span<const CalibrationRow> report);

/// Columns: group, full text, different sentences, similar sentences, support.
std::string calibration_csv(std::span<const CalibrationRow> report);

}  // namespace newsreuse
