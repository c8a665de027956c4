#include "newsreuse/matcher.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "newsreuse/error.hpp"
#include "newsreuse/parallel.hpp"

namespace newsreuse {
namespace {

constexpr std::size_t kTargetTile = 32;
constexpr std::size_t kSourceTile = 256;
constexpr std::size_t kLanes = 4;

bool canonical_less(const MatchRecord& a, const MatchRecord& b) {
  return std::tie(a.target_key, a.source_key) < std::tie(b.target_key, b.source_key);
}

// Row-major copy of the vectors behind `keys`.
std::vector<float> pack(std::span<const DatedKey> keys, const VectorStore& store) {
  const std::size_t dim = store.meta().dim;
  std::vector<float> rows(keys.size() * dim);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const Vector* v = store.find(keys[i].key);
    if (v == nullptr) throw Error(ErrorCode::MissingVector, keys[i].key);
    if (v->dim() != dim) throw Error(ErrorCode::DimMismatch, keys[i].key);
    std::copy(v->values.begin(), v->values.end(), rows.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  return rows;
}

float finish(double sum) { return std::clamp(static_cast<float>(sum), -1.0f, 1.0f); }

}  // namespace

std::vector<DateBlock> build_date_blocks(std::span<const DatedKey> targets, std::span<const DatedKey> sources) {
  std::map<CivilDay, DateBlock> by_day;
  for (const DatedKey& t : targets) {
    DateBlock& block = by_day[utc_day(t.at)];
    block.targets.push_back(t);
  }
  for (const DatedKey& s : sources) {
    const auto it = by_day.find(utc_day(s.at));
    if (it != by_day.end()) it->second.sources.push_back(s);
  }
  std::vector<DateBlock> out;
  for (auto& [day, block] : by_day) {
    if (block.targets.empty() || block.sources.empty()) continue;
    block.date = day;
    const auto by_key = [](const DatedKey& a, const DatedKey& b) { return a.key < b.key; };
    std::sort(block.targets.begin(), block.targets.end(), by_key);
    std::sort(block.sources.begin(), block.sources.end(), by_key);
    out.push_back(std::move(block));
  }
  return out;
}

std::string_view to_string(MatchStatus status) {
  switch (status) {
    case MatchStatus::True: return "True";
    case MatchStatus::FalsePositive: return "FalsePositive";
    case MatchStatus::EarliestAttributed: return "EarliestAttributed";
  }
  return "True";
}

MatchStatus parse_match_status(std::string_view text) {
  if (text == "True") return MatchStatus::True;
  if (text == "FalsePositive") return MatchStatus::FalsePositive;
  if (text == "EarliestAttributed") return MatchStatus::EarliestAttributed;
  throw Error(ErrorCode::BadRecord, "unknown match status '" + std::string(text) + "'");
}

void sort_canonical(std::vector<MatchRecord>& records) { std::sort(records.begin(), records.end(), canonical_less); }

std::vector<MatchRecord> match_block(const DateBlock& block, const VectorStore& store, double threshold) {
  const std::size_t dim = store.meta().dim;
  const std::vector<float> targets = pack(block.targets, store);
  const std::vector<float> sources = pack(block.sources, store);
  const auto tau = static_cast<float>(threshold);
  const std::size_t nt = block.targets.size();
  const std::size_t ns = block.sources.size();

  std::vector<MatchRecord> out;
  auto emit = [&](std::size_t t, std::size_t s, float similarity) {
    if (!(similarity > tau)) return;
    out.push_back(MatchRecord{block.targets[t].key, block.sources[s].key, similarity, block.targets[t].at,
                              block.sources[s].at, MatchStatus::True});
  };

  // Each pair is a sequential double-precision dot product, so results are
  // bit-identical to dot_unit regardless of tiling.
  for (std::size_t t0 = 0; t0 < nt; t0 += kTargetTile) {
    const std::size_t t1 = std::min(nt, t0 + kTargetTile);
    for (std::size_t s0 = 0; s0 < ns; s0 += kSourceTile) {
      const std::size_t s1 = std::min(ns, s0 + kSourceTile);
      for (std::size_t t = t0; t < t1; ++t) {
        const float* a = targets.data() + t * dim;
        std::size_t s = s0;
        for (; s + kLanes <= s1; s += kLanes) {
          const float* b0 = sources.data() + s * dim;
          const float* b1 = b0 + dim;
          const float* b2 = b1 + dim;
          const float* b3 = b2 + dim;
          double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
          for (std::size_t d = 0; d < dim; ++d) {
            const double x = a[d];
            acc0 += x * static_cast<double>(b0[d]);
            acc1 += x * static_cast<double>(b1[d]);
            acc2 += x * static_cast<double>(b2[d]);
            acc3 += x * static_cast<double>(b3[d]);
          }
          emit(t, s, finish(acc0));
          emit(t, s + 1, finish(acc1));
          emit(t, s + 2, finish(acc2));
          emit(t, s + 3, finish(acc3));
        }
        for (; s < s1; ++s) {
          emit(t, s, dot_unit({a, dim}, {sources.data() + s * dim, dim}));
        }
      }
    }
  }
  sort_canonical(out);
  return out;
}

std::vector<MatchRecord> match_blocks(std::span<const DateBlock> blocks, const VectorStore& store, double threshold,
                                      std::size_t parallelism) {
  std::vector<std::vector<MatchRecord>> per_block(blocks.size());
  parallel_for(blocks.size(), parallelism,
               [&](std::size_t i) { per_block[i] = match_block(blocks[i], store, threshold); });
  std::vector<MatchRecord> out;
  for (auto& records : per_block) {
    out.insert(out.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
  }
  sort_canonical(out);
  return out;
}

std::vector<MatchRecord> flag_false_positives(std::vector<MatchRecord> records) {
  for (MatchRecord& r : records) {
    r.status = r.target_created_at < r.source_received_at ? MatchStatus::FalsePositive : MatchStatus::True;
  }
  return records;
}

std::vector<MatchRecord> select_earliest_source(std::span<const MatchRecord> records) {
  std::map<std::string_view, std::vector<const MatchRecord*>> by_target;
  for (const MatchRecord& r : records) {
    if (r.status == MatchStatus::FalsePositive) {
      throw Error(ErrorCode::Internal, "earliest-source attribution received a false positive: " + r.target_key);
    }
    by_target[r.target_key].push_back(&r);
  }
  std::vector<MatchRecord> out;
  for (const auto& [target, group] : by_target) {
    std::optional<std::pair<Timestamp, std::string_view>> best;
    for (const MatchRecord* r : group) {
      const std::pair<Timestamp, std::string_view> candidate{r->source_received_at,
                                                              parse_sentence_key(r->source_key).article_id};
      if (!best || candidate < *best) best = candidate;
    }
    for (const MatchRecord* r : group) {
      if (parse_sentence_key(r->source_key).article_id != best->second) continue;
      MatchRecord kept = *r;
      kept.status = MatchStatus::EarliestAttributed;
      out.push_back(std::move(kept));
    }
  }
  sort_canonical(out);
  return out;
}

StageCounts count_stage(std::span<const MatchRecord> records) {
  std::set<std::string_view> target_articles, source_articles, target_sentences, source_sentences;
  for (const MatchRecord& r : records) {
    target_sentences.insert(r.target_key);
    source_sentences.insert(r.source_key);
    target_articles.insert(parse_sentence_key(r.target_key).article_id);
    source_articles.insert(parse_sentence_key(r.source_key).article_id);
  }
  return {target_articles.size(), source_articles.size(), target_sentences.size(), source_sentences.size(),
          records.size()};
}

std::vector<MatchRecord> MatchSet::true_matches() const {
  std::vector<MatchRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const MatchRecord& r) { return r.status != MatchStatus::FalsePositive; });
  return out;
}

std::vector<MatchRecord> MatchSet::attributed() const {
  std::vector<MatchRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const MatchRecord& r) { return r.status == MatchStatus::EarliestAttributed; });
  return out;
}

MatchAccounting compute_accounting(std::span<const MatchRecord> records) {
  std::vector<MatchRecord> trues, earliest, false_positives;
  for (const MatchRecord& r : records) {
    if (r.status == MatchStatus::FalsePositive) {
      false_positives.push_back(r);
    } else {
      trues.push_back(r);
      if (r.status == MatchStatus::EarliestAttributed) earliest.push_back(r);
    }
  }
  return {count_stage(records), count_stage(trues), count_stage(earliest), count_stage(false_positives)};
}

MatchSet assemble_match_set(std::vector<MatchRecord> raw, double threshold) {
  MatchSet set;
  set.threshold = threshold;
  set.records = flag_false_positives(std::move(raw));
  std::vector<MatchRecord> trues;
  std::copy_if(set.records.begin(), set.records.end(), std::back_inserter(trues),
               [](const MatchRecord& r) { return r.status == MatchStatus::True; });
  std::set<std::pair<std::string_view, std::string_view>> kept;
  const std::vector<MatchRecord> earliest = select_earliest_source(trues);
  for (const MatchRecord& r : earliest) kept.emplace(r.target_key, r.source_key);
  for (MatchRecord& r : set.records) {
    if (kept.contains({r.target_key, r.source_key})) r.status = MatchStatus::EarliestAttributed;
  }
  sort_canonical(set.records);
  set.accounting = compute_accounting(set.records);
  return set;
}

nlohmann::json to_json(const MatchRecord& r) {
  return nlohmann::json{{"target_key", r.target_key},
                        {"source_key", r.source_key},
                        {"similarity", r.similarity},
                        {"target_created_at", format_rfc3339(r.target_created_at)},
                        {"source_received_at", format_rfc3339(r.source_received_at)},
                        {"status", to_string(r.status)}};
}

MatchRecord match_record_from_json(const nlohmann::json& j) {
  try {
    MatchRecord r;
    r.target_key = j.at("target_key").get<std::string>();
    r.source_key = j.at("source_key").get<std::string>();
    r.similarity = static_cast<float>(j.at("similarity").get<double>());
    r.target_created_at = parse_rfc3339(j.at("target_created_at").get<std::string>());
    r.source_received_at = parse_rfc3339(j.at("source_received_at").get<std::string>());
    r.status = parse_match_status(j.at("status").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadRecord, e.what());
  }
}

nlohmann::json to_json(const StageCounts& c) {
  return nlohmann::json{{"target_articles", c.target_articles},
                        {"source_articles", c.source_articles},
                        {"target_sentences", c.target_sentences},
                        {"source_sentences", c.source_sentences},
                        {"pairs", c.pairs}};
}

nlohmann::json summary_json(const MatchSet& set) {
  return nlohmann::json{{"threshold", set.threshold},
                        {"accounting",
                         {{"raw", to_json(set.accounting.raw)},
                          {"true_matches", to_json(set.accounting.true_matches)},
                          {"earliest_matches", to_json(set.accounting.earliest)},
                          {"false_positives", to_json(set.accounting.false_positives)}}}};
}

void write_match_jsonl(const MatchSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (const MatchRecord& r : set.records) out << to_json(r).dump() << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

MatchSet read_match_jsonl(const std::filesystem::path& path, double threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  MatchSet set;
  set.threshold = threshold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      set.records.push_back(match_record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::BadRecord, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.message());
    }
  }
  sort_canonical(set.records);
  set.accounting = compute_accounting(set.records);
  return set;
}

PipelineResult match_pipeline(const Corpus& target, const Corpus& source, const EmbeddingProvider& provider,
                              const Annotator& annotator, const PipelineOptions& options,
                              const SentenceSplitter& splitter) {
  if (target.role() != Role::Target || source.role() != Role::Source) {
    throw Error(ErrorCode::RoleMismatch, "match_pipeline expects (target, source) corpora");
  }
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) throw Error(ErrorCode::BadConfig, "threshold must lie in (0, 1)");
  for (const Article& a : source.articles()) {
    if (target.find(a.id) != nullptr) throw Error(ErrorCode::DuplicateId, "'" + a.id + "' appears in both corpora");
  }

  PipelineResult result;
  result.target_sentences = segment_corpus(target, splitter);
  result.source_sentences = segment_corpus(source, splitter);

  std::unordered_map<std::string, std::string> texts;
  std::vector<DatedKey> target_keys;
  for (const AnnotatedSentence& s : filter_sentences(target, result.target_sentences, annotator)) {
    std::string key = sentence_key(s.sentence);
    target_keys.push_back({key, target.at(s.sentence.article_id).reference_time()});
    texts.emplace(std::move(key), s.sentence.text);
  }
  result.eligible_target_sentences = target_keys.size();

  std::vector<DatedKey> source_keys;
  if (options.filter_sources) {
    for (const AnnotatedSentence& s : filter_sentences(source, result.source_sentences, annotator)) {
      std::string key = sentence_key(s.sentence);
      source_keys.push_back({key, source.at(s.sentence.article_id).reference_time()});
      texts.emplace(std::move(key), s.sentence.text);
    }
  } else {
    for (const Article& a : source.articles()) {
      for (const Sentence& s : result.source_sentences.at(a.id)) {
        std::string key = sentence_key(s);
        source_keys.push_back({key, a.reference_time()});
        texts.emplace(std::move(key), s.text);
      }
    }
  }

  const std::vector<DateBlock> blocks = build_date_blocks(target_keys, source_keys);
  result.blocks = blocks.size();

  // Only sentences inside a block need vectors.
  std::vector<std::string> keys;
  for (const DateBlock& b : blocks) {
    result.comparisons += b.comparisons();
    for (const DatedKey& k : b.targets) keys.push_back(k.key);
    for (const DatedKey& k : b.sources) keys.push_back(k.key);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> batch_texts;
  batch_texts.reserve(keys.size());
  for (const std::string& k : keys) batch_texts.push_back(texts.at(k));

  const std::size_t max_batch = std::max<std::size_t>(1, options.max_batch);
  const std::size_t n_batches = (keys.size() + max_batch - 1) / max_batch;
  std::vector<std::vector<Vector>> batches(n_batches);
  const std::span<const std::string> all_texts(batch_texts);
  parallel_for(n_batches, options.parallelism, [&](std::size_t b) {
    const std::size_t begin = b * max_batch;
    batches[b] = embed_batch(all_texts.subspan(begin, std::min(max_batch, keys.size() - begin)), provider, max_batch);
  });

  result.vectors = VectorStore(provider.meta());
  std::size_t k = 0;
  for (auto& batch : batches) {
    for (Vector& v : batch) result.vectors.insert(keys[k++], std::move(v));
  }

  result.matches =
      assemble_match_set(match_blocks(blocks, result.vectors, options.threshold, options.parallelism), options.threshold);
  return result;
}

}  // namespace newsreuse
