#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsreuse/corpus.hpp"
#include "newsreuse/embedding.hpp"
#include "newsreuse/linguistic.hpp"
#include "newsreuse/timestamp.hpp"

namespace newsreuse {

inline constexpr double kDefaultThreshold = 0.60;

/// A sentence key with its article's reference time (created_at for
/// targets, received_at for sources).
struct DatedKey {
  std::string key;
  Timestamp at;

  bool operator==(const DatedKey&) const = default;
};

/// Target and source sentences whose articles fall on the same UTC day.
struct DateBlock {
  CivilDay date;
  std::vector<DatedKey> targets;  // sorted by key
  std::vector<DatedKey> sources;  // sorted by key

  std::size_t comparisons() const { return targets.size() * sources.size(); }
};

/// One block per day that has both target and source sentences, ordered by day.
std::vector<DateBlock> build_date_blocks(std::span<const DatedKey> targets, std::span<const DatedKey> sources);

enum class MatchStatus { True, FalsePositive, EarliestAttributed };

std::string_view to_string(MatchStatus status);
MatchStatus parse_match_status(std::string_view text);

struct MatchRecord {
  std::string target_key;
  std::string source_key;
  float similarity = 0.0f;
  Timestamp target_created_at;
  Timestamp source_received_at;
  MatchStatus status = MatchStatus::True;

  bool operator==(const MatchRecord&) const = default;
};

/// Orders by (target_key, source_key).
void sort_canonical(std::vector<MatchRecord>& records);

/// Every target x source pair of the block whose similarity, as a float, is
/// strictly greater than float(threshold). Output is in canonical order.
/// Throws MissingVector.
std::vector<MatchRecord> match_block(const DateBlock& block, const VectorStore& store, double threshold);

/// match_block over all blocks on `parallelism` threads, canonically sorted.
std::vector<MatchRecord> match_blocks(std::span<const DateBlock> blocks, const VectorStore& store, double threshold,
                                      std::size_t parallelism = 1);

/// A target created strictly before its source was received cannot have
/// reused it: such records become FalsePositive, all others True.
std::vector<MatchRecord> flag_false_positives(std::vector<MatchRecord> records);

/// Per target sentence keeps only the records pointing at the source article
/// received first (ties: smallest article id), marked EarliestAttributed.
/// Throws Internal when handed FalsePositive records.
std::vector<MatchRecord> select_earliest_source(std::span<const MatchRecord> records);

struct StageCounts {
  std::size_t target_articles = 0;
  std::size_t source_articles = 0;
  std::size_t target_sentences = 0;
  std::size_t source_sentences = 0;
  std::size_t pairs = 0;

  bool operator==(const StageCounts&) const = default;
};

StageCounts count_stage(std::span<const MatchRecord> records);

struct MatchAccounting {
  StageCounts raw;              // every pair above the threshold
  StageCounts true_matches;     // after removing false positives
  StageCounts earliest;         // after earliest-source attribution
  StageCounts false_positives;

  bool operator==(const MatchAccounting&) const = default;
};

/// Records carry their final status, so every stage is recoverable:
/// raw = all, true = not FalsePositive, earliest = EarliestAttributed.
struct MatchSet {
  double threshold = kDefaultThreshold;
  std::vector<MatchRecord> records;
  MatchAccounting accounting;

  std::vector<MatchRecord> raw() const { return records; }
  std::vector<MatchRecord> true_matches() const;
  std::vector<MatchRecord> attributed() const;
};

MatchAccounting compute_accounting(std::span<const MatchRecord> records);

/// Assembles a MatchSet from raw pairs: flags, attributes, sorts, counts.
MatchSet assemble_match_set(std::vector<MatchRecord> raw, double threshold);

nlohmann::json to_json(const MatchRecord& record);
MatchRecord match_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StageCounts& counts);
nlohmann::json summary_json(const MatchSet& set);

void write_match_jsonl(const MatchSet& set, const std::filesystem::path& path);
/// Reloads records written by write_match_jsonl and recomputes accounting.
MatchSet read_match_jsonl(const std::filesystem::path& path, double threshold);

struct PipelineOptions {
  double threshold = kDefaultThreshold;
  std::size_t parallelism = 1;
  std::size_t max_batch = kDefaultMaxBatch;
  bool filter_sources = false;
};

struct PipelineResult {
  MatchSet matches;
  Segmentation target_sentences;  // every sentence, before eligibility filtering
  Segmentation source_sentences;
  std::size_t eligible_target_sentences = 0;
  std::size_t blocks = 0;
  std::size_t comparisons = 0;
  VectorStore vectors;
};

/// Segmentation, eligibility filtering, embedding, date blocking, matching,
/// false-positive flagging and earliest-source attribution. Article ids must
/// be unique across both corpora (DuplicateId otherwise).
PipelineResult match_pipeline(const Corpus& target, const Corpus& source, const EmbeddingProvider& provider,
                              const Annotator& annotator, const PipelineOptions& options = {},
                              const SentenceSplitter& splitter = default_splitter());

}  // namespace newsreuse
