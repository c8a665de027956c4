#include "newsreuse/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "newsreuse/csv.hpp"
#include "newsreuse/error.hpp"
#include "newsreuse/unicode.hpp"

namespace newsreuse {
namespace {

constexpr int kCellWidth = 6;
constexpr int kCellHeight = 24;
constexpr int kLeftMargin = 80;
constexpr int kTopMargin = 20;
constexpr int kLegendWidth = 70;

std::string count_cell(std::size_t n) { return std::to_string(n); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

bool is_number(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string accounting_csv(const MatchSet& set) {
  const MatchAccounting& a = set.accounting;
  std::vector<csv::Row> rows{{"stage", "Articles:target", "Articles:source", "Sentences:target", "Sentences:source"}};
  rows.push_back({"True matches", count_cell(a.true_matches.target_articles),
                  count_cell(a.true_matches.source_articles), count_cell(a.true_matches.target_sentences),
                  count_cell(a.true_matches.source_sentences)});
  rows.push_back({"The earliest matches", "", count_cell(a.earliest.source_articles), "",
                  count_cell(a.earliest.source_sentences)});
  rows.push_back({"False positives", count_cell(a.false_positives.target_articles),
                  count_cell(a.false_positives.source_articles), count_cell(a.false_positives.target_sentences),
                  count_cell(a.false_positives.source_sentences)});
  return csv::format(rows);
}

void emit_accounting(const MatchSet& set, const std::filesystem::path& path) {
  write_text_file(path, accounting_csv(set));
}

std::string position_csv(const ContingencyTable& table) {
  csv::Row header{"source\\target"};
  header.insert(header.end(), table.col_labels.begin(), table.col_labels.end());
  std::vector<csv::Row> rows{header};
  for (std::size_t r = 0; r < table.counts.size(); ++r) {
    csv::Row row{table.row_labels[r]};
    for (std::uint64_t v : table.counts[r]) row.push_back(std::to_string(v));
    rows.push_back(std::move(row));
  }
  return csv::format(rows);
}

std::string heatmap_color(double value, double scale_max) {
  if (!(scale_max > 0.0)) throw Error(ErrorCode::BadConfig, "heatmap scale maximum must be positive");
  const double v = std::clamp(value, 0.0, scale_max);
  const double mid = scale_max / 2.0;
  int r = 255, g = 255, b = 255;
  if (v <= mid) {
    const double t = v / mid;  // blue -> white
    r = g = static_cast<int>(std::lround(255.0 * t));
  } else {
    const double t = (v - mid) / (scale_max - mid);  // white -> red
    g = b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", r, g, b);
  return buf;
}

std::string heatmap_svg(const Heatmap& h, const HeatmapStyle& style) {
  if (h.columns() == 0) throw Error(ErrorCode::EmptyMatrix, "heatmap has no articles");
  const int grid_width = static_cast<int>(h.columns()) * kCellWidth;
  const int grid_height = static_cast<int>(kPositionBins) * kCellHeight;
  const int width = kLeftMargin + grid_width + kLegendWidth;
  const int height = kTopMargin + grid_height + 30;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<title>Reused sentences per position: " << to_string(h.axis) << " articles</title>\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"#FFFFFF\"/>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t bin = 0; bin < kPositionBins; ++bin) {
    svg << "<text x=\"" << kLeftMargin - 6 << "\" y=\"" << kTopMargin + static_cast<int>(bin) * kCellHeight + 16
        << "\" text-anchor=\"end\">" << to_string(static_cast<PositionBin>(bin)) << "</text>\n";
  }
  svg << "</g>\n<g class=\"cells\">\n";
  for (std::size_t bin = 0; bin < kPositionBins; ++bin) {
    for (std::size_t col = 0; col < h.columns(); ++col) {
      const std::uint64_t v = h.counts[bin][col];
      svg << "<rect class=\"cell\" x=\"" << kLeftMargin + static_cast<int>(col) * kCellWidth << "\" y=\""
          << kTopMargin + static_cast<int>(bin) * kCellHeight << "\" width=\"" << kCellWidth << "\" height=\""
          << kCellHeight << "\" fill=\"" << heatmap_color(static_cast<double>(v), style.scale_max) << "\"><title>"
          << xml_escape(h.article_ids[col]) << ": " << v << "</title></rect>\n";
    }
  }
  svg << "</g>\n";

  if (style.divider) {
    const auto it = std::lower_bound(h.timestamps.begin(), h.timestamps.end(), *style.divider);
    const int x = kLeftMargin + static_cast<int>(it - h.timestamps.begin()) * kCellWidth;
    svg << "<line class=\"divider\" x1=\"" << x << "\" y1=\"" << kTopMargin - 4 << "\" x2=\"" << x << "\" y2=\""
        << kTopMargin + grid_height + 4 << "\" stroke=\"#000000\" stroke-width=\"1.5\" stroke-dasharray=\"4,3\"/>\n";
  }

  // Colour legend.
  const int lx = kLeftMargin + grid_width + 20;
  constexpr int kSteps = 10;
  const int step_height = grid_height / kSteps;
  svg << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int i = 0; i < kSteps; ++i) {
    const double value = style.scale_max * (kSteps - 1 - i) / (kSteps - 1);
    svg << "<rect x=\"" << lx << "\" y=\"" << kTopMargin + i * step_height << "\" width=\"12\" height=\""
        << step_height << "\" fill=\"" << heatmap_color(value, style.scale_max) << "\"/>\n";
  }
  svg << "<text x=\"" << lx + 16 << "\" y=\"" << kTopMargin + 8 << "\">" << csv::number(style.scale_max) << "</text>\n"
      << "<text x=\"" << lx + 16 << "\" y=\"" << kTopMargin + grid_height << "\">0</text>\n"
      << "</g>\n</svg>\n";
  return svg.str();
}

void emit_heatmap_svg(const Heatmap& heatmap, const std::filesystem::path& path, const HeatmapStyle& style) {
  write_text_file(path, heatmap_svg(heatmap, style));
}

const Stopwords& default_stopwords() {
  static const Stopwords kWords{"a",    "about", "after", "all",  "also", "an",    "and",  "are",   "as",   "at",
                                "be",   "been",  "but",   "by",   "for",  "from",  "had",  "has",   "have", "he",
                                "her",  "his",   "in",    "into", "is",   "it",    "its",  "not",   "of",   "on",
                                "or",   "said",  "she",   "that", "the",  "their", "they", "this",  "to",   "was",
                                "we",   "were",  "which", "who",  "will", "with",  "would"};
  return kWords;
}

Stopwords load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  Stopwords words;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.emplace(unicode::lower_nfc(line.substr(first, last - first + 1)));
  }
  return words;
}

std::vector<TermFrequency> count_terms(std::span<const std::string> sentences, const Stopwords& stopwords) {
  std::map<std::string, std::uint64_t> counts;
  for (const std::string& sentence : sentences) {
    for (const std::string& token : tokenize(sentence)) {
      if (is_punctuation_token(token) || is_number(token)) continue;
      std::string term = unicode::lower_nfc(token);
      if (unicode::decode(term).size() < 2 || stopwords.contains(term)) continue;
      ++counts[std::move(term)];
    }
  }
  std::vector<TermFrequency> out;
  out.reserve(counts.size());
  for (auto& [term, n] : counts) out.push_back({term, n});
  std::stable_sort(out.begin(), out.end(),
                   [](const TermFrequency& a, const TermFrequency& b) { return a.count > b.count; });
  return out;
}

std::vector<TermFrequency> term_frequencies(std::span<const MatchRecord> attributed, const Segmentation& target,
                                            std::size_t top_k_sentences, const Stopwords& stopwords) {
  if (top_k_sentences == 0) throw Error(ErrorCode::BadConfig, "top_k_sentences must be at least 1");
  std::map<std::string_view, std::size_t> multiplicity;
  for (const MatchRecord& r : attributed) ++multiplicity[r.target_key];
  std::vector<std::pair<std::string_view, std::size_t>> ranked(multiplicity.begin(), multiplicity.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_k_sentences) ranked.resize(top_k_sentences);

  std::vector<std::string> sentences;
  for (const auto& [key, n] : ranked) {
    const SentenceKeyParts parts = parse_sentence_key(key);
    const auto it = target.find(parts.article_id);
    if (it == target.end()) throw Error(ErrorCode::UnknownArticle, std::string(parts.article_id));
    if (parts.idx >= it->second.size()) throw Error(ErrorCode::IndexOutOfRange, std::string(key));
    sentences.push_back(it->second[parts.idx].text);
  }
  return count_terms(sentences, stopwords);
}

nlohmann::json to_json(std::span<const TermFrequency> terms) {
  nlohmann::json out = nlohmann::json::array();
  for (const TermFrequency& t : terms) out.push_back({{"term", t.term}, {"count", t.count}});
  return out;
}

}  // namespace newsreuse
