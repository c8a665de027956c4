#include "newsreuse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

#include "newsreuse/error.hpp"

namespace newsreuse {
namespace {

constexpr double kEpsilon = 1e-16;
constexpr int kMaxIterations = 10000;

// Lower regularized gamma P(a, x) by its power series; converges for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a, x) by its continued fraction (modified Lentz);
// converges for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double kTiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

std::vector<std::string> bin_labels() { return {"beginning", "middle", "end"}; }

PositionBin bin_of(std::string_view key, const Segmentation& segmentation) {
  const SentenceKeyParts parts = parse_sentence_key(key);
  const auto it = segmentation.find(parts.article_id);
  if (it == segmentation.end()) throw Error(ErrorCode::UnknownArticle, std::string(parts.article_id));
  return position_bin(parts.idx, it->second.size());
}

}  // namespace

std::string_view to_string(PositionBin bin) {
  switch (bin) {
    case PositionBin::Beginning: return "beginning";
    case PositionBin::Middle: return "middle";
    case PositionBin::End: return "end";
  }
  return "beginning";
}

PositionBin position_bin(std::size_t idx, std::size_t n) {
  if (n == 0 || idx >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "sentence " + std::to_string(idx) + " of " + std::to_string(n));
  }
  return static_cast<PositionBin>(std::min<std::size_t>(3 * idx / n, 2));
}

ContingencyTable ContingencyTable::zeros(std::vector<std::string> rows, std::vector<std::string> cols) {
  std::vector<std::vector<std::uint64_t>> counts(rows.size(), std::vector<std::uint64_t>(cols.size(), 0));
  return {std::move(rows), std::move(cols), std::move(counts)};
}

ContingencyTable ContingencyTable::from_counts(std::vector<std::string> rows, std::vector<std::string> cols,
                                               std::vector<std::vector<std::uint64_t>> counts) {
  if (counts.size() != rows.size()) throw Error(ErrorCode::BadRecord, "row count does not match row labels");
  for (const auto& row : counts) {
    if (row.size() != cols.size()) throw Error(ErrorCode::BadRecord, "column count does not match column labels");
  }
  return {std::move(rows), std::move(cols), std::move(counts)};
}

std::uint64_t ContingencyTable::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : counts) sum = std::accumulate(row.begin(), row.end(), sum);
  return sum;
}

ContingencyTable build_position_table(std::span<const MatchRecord> attributed, const Segmentation& target,
                                      const Segmentation& source) {
  ContingencyTable table = ContingencyTable::zeros(bin_labels(), bin_labels());
  for (const MatchRecord& r : attributed) {
    const auto row = static_cast<std::size_t>(bin_of(r.source_key, source));
    const auto col = static_cast<std::size_t>(bin_of(r.target_key, target));
    ++table.counts[row][col];
  }
  return table;
}

std::string_view to_string(PrType type) {
  switch (type) {
    case PrType::OneToOne: return "1:1";
    case PrType::OneToMany: return "1:many";
    case PrType::ManyToOne: return "many:1";
    case PrType::ManyToMany: return "many:many";
  }
  return "1:1";
}

PrClassification classify_pr(std::span<const MatchRecord> attributed) {
  std::unordered_map<std::string_view, std::size_t> per_target, per_source;
  for (const MatchRecord& r : attributed) {
    ++per_target[r.target_key];
    ++per_source[r.source_key];
  }
  PrClassification out;
  for (PrType t : {PrType::OneToOne, PrType::OneToMany, PrType::ManyToOne, PrType::ManyToMany}) {
    out.counts[t] = 0;
    out.percentages[t] = 0.0;
  }
  out.types.reserve(attributed.size());
  for (const MatchRecord& r : attributed) {
    const bool many_sources = per_target[r.target_key] > 1;
    const bool many_targets = per_source[r.source_key] > 1;
    const PrType type = many_sources ? (many_targets ? PrType::ManyToMany : PrType::OneToMany)
                                     : (many_targets ? PrType::ManyToOne : PrType::OneToOne);
    out.types.push_back(type);
    ++out.counts[type];
  }
  if (!attributed.empty()) {
    for (auto& [type, pct] : out.percentages) {
      pct = 100.0 * static_cast<double>(out.counts[type]) / static_cast<double>(attributed.size());
    }
  }
  return out;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw Error(ErrorCode::Internal, "regularized_gamma_q domain error");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_continued_fraction(a, x), 0.0, 1.0);
}

ChiSquareResult chi_square_independence(const ContingencyTable& table) {
  const std::size_t rows = table.counts.size();
  const std::size_t cols = rows == 0 ? 0 : table.counts.front().size();
  if (rows < 2 || cols < 2) throw Error(ErrorCode::DegenerateTable, "need at least a 2x2 table");

  std::vector<double> row_totals(rows, 0.0), col_totals(cols, 0.0);
  double n = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<double>(table.counts[r][c]);
      row_totals[r] += v;
      col_totals[c] += v;
      n += v;
    }
  }
  if (n == 0.0) throw Error(ErrorCode::DegenerateTable, "empty table");
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_totals[r] == 0.0) throw Error(ErrorCode::DegenerateTable, "row '" + table.row_labels[r] + "' is all zero");
  }
  for (std::size_t c = 0; c < cols; ++c) {
    if (col_totals[c] == 0.0) throw Error(ErrorCode::DegenerateTable, "column '" + table.col_labels[c] + "' is all zero");
  }

  ChiSquareResult result;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double expected = row_totals[r] * col_totals[c] / n;
      const double diff = static_cast<double>(table.counts[r][c]) - expected;
      result.statistic += diff * diff / expected;
    }
  }
  result.df = (rows - 1) * (cols - 1);
  result.p_value = regularized_gamma_q(static_cast<double>(result.df) / 2.0, result.statistic / 2.0);
  return result;
}

ReuseRates reuse_rates(const MatchSet& set, const Corpus& target, const Corpus& source) {
  std::set<std::string_view> targets, sources;
  for (const MatchRecord& r : set.records) {
    if (r.status == MatchStatus::FalsePositive) continue;
    targets.insert(parse_sentence_key(r.target_key).article_id);
    sources.insert(parse_sentence_key(r.source_key).article_id);
  }
  ReuseRates rates;
  rates.target_matched = targets.size();
  rates.source_matched = sources.size();
  rates.target_total = target.size();
  rates.source_total = source.size();
  if (rates.target_total > 0) rates.target_rate = static_cast<double>(rates.target_matched) / static_cast<double>(rates.target_total);
  if (rates.source_total > 0) rates.source_rate = static_cast<double>(rates.source_matched) / static_cast<double>(rates.source_total);
  return rates;
}

Heatmap heatmap_matrix(std::span<const MatchRecord> attributed, const Corpus& corpus, const Segmentation& segmentation,
                       Role axis) {
  if (corpus.role() != axis) throw Error(ErrorCode::RoleMismatch, "heatmap axis does not match corpus role");
  std::vector<const Article*> order;
  order.reserve(corpus.size());
  for (const Article& a : corpus.articles()) order.push_back(&a);
  std::sort(order.begin(), order.end(), [](const Article* a, const Article* b) {
    return std::pair(a->reference_time(), std::string_view(a->id)) < std::pair(b->reference_time(), std::string_view(b->id));
  });

  Heatmap h;
  h.axis = axis;
  std::unordered_map<std::string_view, std::size_t> column;
  for (const Article* a : order) {
    column.emplace(a->id, h.article_ids.size());
    h.article_ids.push_back(a->id);
    h.timestamps.push_back(a->reference_time());
  }
  for (auto& row : h.counts) row.assign(h.article_ids.size(), 0);

  for (const MatchRecord& r : attributed) {
    const std::string& key = axis == Role::Target ? r.target_key : r.source_key;
    const SentenceKeyParts parts = parse_sentence_key(key);
    const auto col = column.find(parts.article_id);
    if (col == column.end()) throw Error(ErrorCode::UnknownArticle, std::string(parts.article_id));
    ++h.counts[static_cast<std::size_t>(bin_of(key, segmentation))][col->second];
  }
  return h;
}

nlohmann::json to_json(const ChiSquareResult& r) {
  return nlohmann::json{{"statistic", r.statistic}, {"df", r.df}, {"p_value", r.p_value}};
}

nlohmann::json to_json(const PrClassification& pr) {
  nlohmann::json counts = nlohmann::json::object();
  nlohmann::json pct = nlohmann::json::object();
  std::size_t total = 0;
  for (const auto& [type, n] : pr.counts) {
    counts[std::string(to_string(type))] = n;
    total += n;
  }
  for (const auto& [type, p] : pr.percentages) pct[std::string(to_string(type))] = p;
  return nlohmann::json{{"pairs", total}, {"counts", counts}, {"percentages", pct}};
}

nlohmann::json to_json(const Heatmap& h) {
  nlohmann::json timestamps = nlohmann::json::array();
  for (Timestamp t : h.timestamps) timestamps.push_back(format_rfc3339(t));
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& row : h.counts) counts.push_back(row);
  return nlohmann::json{{"axis", to_string(h.axis)},
                        {"bins", bin_labels()},
                        {"article_ids", h.article_ids},
                        {"timestamps", timestamps},
                        {"counts", counts}};
}

nlohmann::json to_json(const ReuseRates& r) {
  return nlohmann::json{{"target_matched", r.target_matched}, {"target_total", r.target_total},
                        {"target_rate", r.target_rate},       {"source_matched", r.source_matched},
                        {"source_total", r.source_total},     {"source_rate", r.source_rate}};
}

}  // namespace newsreuse
