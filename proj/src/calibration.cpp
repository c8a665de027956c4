#include "newsreuse/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "newsreuse/csv.hpp"
#include "newsreuse/error.hpp"
#include "newsreuse/parallel.hpp"

namespace newsreuse {
namespace {

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

std::string join(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const Sentence& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

struct Mean {
  double sum = 0.0;
  std::size_t n = 0;

  void add(double v) {
    sum += v;
    ++n;
  }
  std::optional<double> value() const { return n == 0 ? std::nullopt : std::optional(sum / static_cast<double>(n)); }
};

}  // namespace

std::vector<PairRecord> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::vector<PairRecord> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::BadRecord, where + e.what());
    }
    PairRecord p;
    for (const char* field : {"pair_id", "language", "source_text", "target_text"}) {
      if (!j.contains(field) || !j[field].is_string()) throw Error(ErrorCode::MissingField, where + field);
    }
    p.pair_id = j["pair_id"].get<std::string>();
    p.language = j["language"].get<std::string>();
    p.source_text = j["source_text"].get<std::string>();
    p.target_text = j["target_text"].get<std::string>();
    if (blank(p.source_text) || blank(p.target_text)) throw Error(ErrorCode::EmptyText, where + "pair " + p.pair_id);
    if (const auto it = j.find("paraphrase_label"); it != j.end() && !it->is_null()) {
      if (!it->is_boolean()) throw Error(ErrorCode::BadRecord, where + "paraphrase_label must be a boolean");
      p.paraphrase_label = it->get<bool>();
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

CalibrationScores score_pair(const PairRecord& pair, const EmbeddingProvider& provider,
                             const SentenceSplitter& splitter, std::size_t max_batch) {
  const std::vector<Sentence> source = splitter.split(pair.source_text, pair.language);
  const std::vector<Sentence> target = splitter.split(pair.target_text, pair.language);
  if (source.empty() || target.empty()) throw Error(ErrorCode::EmptyText, "pair " + pair.pair_id);

  const std::size_t aligned = std::min(source.size(), target.size());
  std::vector<std::string> texts{join(source), join(target)};
  for (std::size_t i = 0; i < aligned; ++i) texts.push_back(source[i].text);
  for (std::size_t i = 0; i < aligned; ++i) texts.push_back(target[i].text);
  const std::vector<Vector> v = embed_batch(texts, provider, max_batch);

  CalibrationScores scores;
  scores.pair_id = pair.pair_id;
  scores.language = pair.language;
  scores.paraphrase_label = pair.paraphrase_label;
  scores.full_text = cosine_similarity(v[0], v[1]);

  Mean same, different;
  for (std::size_t i = 0; i < aligned; ++i) {
    for (std::size_t j = 0; j < aligned; ++j) {
      const double sim = cosine_similarity(v[2 + i], v[2 + aligned + j]);
      (i == j ? same : different).add(sim);
    }
  }
  scores.aligned_mean = same.value();
  scores.nonaligned_mean = different.value();
  return scores;
}

std::vector<CalibrationScores> score_pairs(std::span<const PairRecord> pairs, const EmbeddingProvider& provider,
                                           std::size_t parallelism, const SentenceSplitter& splitter,
                                           std::size_t max_batch) {
  std::vector<CalibrationScores> out(pairs.size());
  parallel_for(pairs.size(), parallelism,
               [&](std::size_t i) { out[i] = score_pair(pairs[i], provider, splitter, max_batch); });
  return out;
}

GroupBy parse_group_by(std::string_view text) {
  if (text == "language") return GroupBy::Language;
  if (text == "paraphrase" || text == "paraphrase_label") return GroupBy::ParaphraseLabel;
  throw Error(ErrorCode::BadConfig, "group-by must be 'language' or 'paraphrase', got '" + std::string(text) + "'");
}

std::vector<CalibrationRow> aggregate(std::span<const CalibrationScores> scores, GroupBy group_by) {
  if (scores.empty()) throw Error(ErrorCode::EmptyGroup, "no calibration scores to aggregate");
  struct Acc {
    Mean full, different, same;
  };
  std::map<std::string, Acc> groups;
  for (const CalibrationScores& s : scores) {
    std::string key;
    if (group_by == GroupBy::Language) {
      key = s.language;
    } else {
      if (!s.paraphrase_label) throw Error(ErrorCode::MissingField, "paraphrase_label of pair " + s.pair_id);
      key = *s.paraphrase_label ? "yes" : "no";
    }
    Acc& acc = groups[key];
    acc.full.add(s.full_text);
    if (s.nonaligned_mean) acc.different.add(*s.nonaligned_mean);
    if (s.aligned_mean) acc.same.add(*s.aligned_mean);
  }
  std::vector<CalibrationRow> rows;
  for (const auto& [key, acc] : groups) {
    rows.push_back(CalibrationRow{key, *acc.full.value(), acc.different.value(), acc.same.value(), acc.full.n});
  }
  return rows;
}

double derive_threshold(std::span<const CalibrationRow> report) {
  std::optional<double> max_different, min_same;
  for (const CalibrationRow& row : report) {
    if (row.nonaligned_mean) max_different = std::max(max_different.value_or(*row.nonaligned_mean), *row.nonaligned_mean);
    if (row.aligned_mean) min_same = std::min(min_same.value_or(*row.aligned_mean), *row.aligned_mean);
  }
  if (!max_different || !min_same) throw Error(ErrorCode::NoSeparation, "report lacks aligned or non-aligned means");
  if (*max_different >= *min_same) {
    throw Error(ErrorCode::NoSeparation, "non-aligned mean " + csv::number(*max_different) +
                                             " is not below aligned mean " + csv::number(*min_same));
  }
  const double midpoint = (*max_different + *min_same) / 2.0;
  // The tolerance keeps exact multiples of 0.05 (0.5 -> 0.50) from rounding up a step.
  return std::ceil(midpoint * 20.0 - 1e-9) / 20.0;
}

std::string calibration_csv(std::span<const CalibrationRow> report) {
  std::vector<csv::Row> rows{{"group", "full text", "different sentences", "similar sentences", "support"}};
  const auto cell = [](const std::optional<double>& v) { return v ? csv::number(*v) : std::string(); };
  for (const CalibrationRow& r : report) {
    rows.push_back({r.group, csv::number(r.full_text), cell(r.nonaligned_mean), cell(r.aligned_mean),
                    std::to_string(r.support)});
  }
  return csv::format(rows);
}

}  // namespace newsreuse
