#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <random>

#include "newsreuse/analysis.hpp"
#include "newsreuse/error.hpp"
#include "support/chi_oracle.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace newsreuse;
using testing::thrown;

namespace {

using Counts = std::vector<std::vector<std::uint64_t>>;

ContingencyTable table(Counts counts) {
  std::vector<std::string> rows, cols;
  for (std::size_t i = 0; i < counts.size(); ++i) rows.push_back("r" + std::to_string(i));
  for (std::size_t j = 0; j < counts[0].size(); ++j) cols.push_back("c" + std::to_string(j));
  return ContingencyTable::from_counts(rows, cols, std::move(counts));
}

MatchRecord pair(std::string t, std::string s) {
  return {std::move(t), std::move(s), 0.9f, Timestamp{10}, Timestamp{0}, MatchStatus::EarliestAttributed};
}

Segmentation segmentation(const std::vector<std::pair<std::string, std::size_t>>& sizes) {
  Segmentation seg;
  for (const auto& [id, n] : sizes) {
    auto& v = seg[id];
    for (std::size_t i = 0; i < n; ++i) v.push_back(Sentence{id, i, "s", 1});
  }
  return seg;
}

}  // namespace

TEST_CASE("position_bin") {
  CHECK(position_bin(0, 9) == PositionBin::Beginning);
  CHECK(position_bin(4, 9) == PositionBin::Middle);
  CHECK(position_bin(8, 9) == PositionBin::End);
  CHECK(position_bin(0, 1) == PositionBin::Beginning);
  CHECK(position_bin(2, 5) == PositionBin::Middle);
  CHECK(position_bin(1, 2) == PositionBin::Middle);
  CHECK(thrown([] { position_bin(3, 3); }) == ErrorCode::IndexOutOfRange);
  CHECK(thrown([] { position_bin(0, 0); }) == ErrorCode::IndexOutOfRange);
  for (std::size_t n = 1; n < 200; ++n)
    for (std::size_t i = 0; i < n; ++i) CHECK(static_cast<std::size_t>(position_bin(i, n)) == std::min<std::size_t>(3 * i / n, 2));
}

TEST_CASE("build_position_table") {
  const auto tseg = segmentation({{"t", 3}});
  const auto sseg = segmentation({{"s", 3}});
  SUBCASE("empty") {
    const auto t = build_position_table({}, tseg, sseg);
    CHECK(t.total() == 0);
    CHECK(t.row_labels == std::vector<std::string>{"beginning", "middle", "end"});
    CHECK(t.counts.size() == 3);
  }
  SUBCASE("source beginning, target end") {
    const std::vector<MatchRecord> one{pair("t#2", "s#0")};
    const auto t = build_position_table(one, tseg, sseg);
    CHECK(t.counts[0][2] == 1);
    CHECK(t.total() == 1);
  }
  SUBCASE("unknown article and out-of-range index") {
    const std::vector<MatchRecord> ghost{pair("x#0", "s#0")};
    CHECK(thrown([&] { build_position_table(ghost, tseg, sseg); }) == ErrorCode::UnknownArticle);
    const std::vector<MatchRecord> far{pair("t#7", "s#0")};
    CHECK(thrown([&] { build_position_table(far, tseg, sseg); }) == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("chi-square reference tables") {
  SUBCASE("independent") {
    const auto r = chi_square_independence(table({{10, 10}, {10, 10}}));
    CHECK(r.statistic == 0.0);
    CHECK(r.df == 1);
    CHECK(r.p_value == 1.0);
  }
  SUBCASE("2x2") {
    const auto r = chi_square_independence(table({{20, 10}, {10, 20}}));
    const auto o = oracle::chi_square({{20, 10}, {10, 20}});
    CHECK(r.statistic == doctest::Approx(6.6667).epsilon(1e-4));
    CHECK(r.statistic == doctest::Approx(o.statistic).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(o.p).epsilon(1e-9));
    CHECK(std::abs(r.p_value - 0.00982) < 1e-4);
  }
  SUBCASE("3x3 positional counts") {
    const Counts counts{{31, 217, 135}, {130, 204, 144}, {42, 72, 112}};
    const auto r = chi_square_independence(table(counts));
    const auto o = oracle::chi_square(counts);
    CHECK(r.df == 4);
    CHECK(r.statistic == doctest::Approx(o.statistic).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(o.p).epsilon(1e-9));
    CHECK(r.p_value < 0.05);
  }
}

TEST_CASE("chi-square agrees with the oracle on random tables") {
  std::mt19937 rng(3);
  for (int round = 0; round < 500; ++round) {
    const std::size_t r = 2 + rng() % 4, c = 2 + rng() % 4;
    Counts counts(r, std::vector<std::uint64_t>(c));
    for (auto& row : counts)
      for (auto& x : row) x = 1 + rng() % (round % 2 ? 5 : 400);
    const auto got = chi_square_independence(table(counts));
    const auto o = oracle::chi_square(counts);
    CAPTURE(round);
    CHECK(got.statistic == doctest::Approx(o.statistic).epsilon(1e-9));
    CHECK(got.p_value == doctest::Approx(o.p).epsilon(1e-8));
  }
}

TEST_CASE("regularized_gamma_q against Boost") {
  for (double a : {0.5, 1.0, 1.5, 2.0, 4.5, 10.0, 50.0})
    for (double x : {1e-6, 0.1, 0.5, 1.0, 2.0, 5.0, 11.0, 30.0, 80.0}) {
      CAPTURE(a);
      CAPTURE(x);
      CHECK(regularized_gamma_q(a, x) == doctest::Approx(boost::math::gamma_q(a, x)).epsilon(1e-10));
    }
  CHECK(regularized_gamma_q(3.0, 0.0) == 1.0);
}

TEST_CASE("degenerate tables") {
  CHECK(thrown([] { chi_square_independence(table({{1, 2}})); }) == ErrorCode::DegenerateTable);
  CHECK(thrown([] { chi_square_independence(table({{0, 0}, {3, 4}})); }) == ErrorCode::DegenerateTable);
  CHECK(thrown([] { chi_square_independence(table({{0, 1}, {0, 4}})); }) == ErrorCode::DegenerateTable);
  CHECK(thrown([] { ContingencyTable::from_counts({"a"}, {"b", "c"}, {{1}}); }) == ErrorCode::BadRecord);
}

TEST_CASE("classify_pr hand examples") {
  SUBCASE("single pair") {
    const std::vector<MatchRecord> p{pair("s1", "f1")};
    const auto r = classify_pr(p);
    CHECK(r.types == std::vector<PrType>{PrType::OneToOne});
    CHECK(r.percentages.at(PrType::OneToOne) == 100.0);
  }
  SUBCASE("one target, two sources") {
    const std::vector<MatchRecord> p{pair("s1", "f1"), pair("s1", "f2")};
    CHECK(classify_pr(p).types == std::vector<PrType>{PrType::OneToMany, PrType::OneToMany});
  }
  SUBCASE("mixed") {
    const std::vector<MatchRecord> p{pair("s1", "f1"), pair("s2", "f1"), pair("s1", "f2")};
    const auto r = classify_pr(p);
    CHECK(r.types == std::vector<PrType>{PrType::ManyToMany, PrType::ManyToOne, PrType::OneToMany});
    CHECK(r.counts.at(PrType::OneToOne) == 0);
    CHECK(r.percentages.at(PrType::ManyToMany) == doctest::Approx(100.0 / 3));
  }
  SUBCASE("empty") {
    const auto r = classify_pr({});
    CHECK(r.types.empty());
    CHECK(r.percentages.at(PrType::OneToOne) == 0.0);
  }
}

TEST_CASE("classify_pr agrees with the counting oracle") {
  std::mt19937 rng(17);
  for (int round = 0; round < 1000; ++round) {
    const int n = rng() % 51;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<MatchRecord> records;
    for (int i = 0; i < n; ++i) {
      std::string t = "t#" + std::to_string(rng() % 12), s = "s#" + std::to_string(rng() % 12);
      if (std::find(pairs.begin(), pairs.end(), std::pair{t, s}) != pairs.end()) continue;
      pairs.emplace_back(t, s);
      records.push_back(pair(t, s));
    }
    const auto got = classify_pr(records);
    CHECK(got.types == oracle::classify(pairs));
    double total = 0;
    for (const auto& [type, pct] : got.percentages) total += pct;
    if (!pairs.empty()) CHECK(total == doctest::Approx(100.0));
  }
}

TEST_CASE("reuse_rates") {
  std::vector<Article> ts, ss;
  for (int i = 0; i < 10; ++i) ts.push_back(testing::target_article("t" + std::to_string(i), "2024-01-01T12:00:00Z", "x"));
  for (int i = 0; i < 4; ++i) ss.push_back(testing::source_article("s" + std::to_string(i), "2024-01-01T08:00:00Z", "y"));
  const Corpus target(Role::Target, ts), source(Role::Source, ss);

  auto raw = [](std::string t, std::string s) {
    return MatchRecord{std::move(t), std::move(s), 0.9f, parse_rfc3339("2024-01-01T12:00:00Z"),
                       parse_rfc3339("2024-01-01T08:00:00Z"), MatchStatus::True};
  };
  std::vector<MatchRecord> planted;
  for (int i = 0; i < 5; ++i) planted.push_back(raw("t" + std::to_string(i) + "#0", "s0#0"));
  const auto half = reuse_rates(assemble_match_set(planted, 0.6), target, source);
  CHECK(half.target_matched == 5);
  CHECK(half.target_rate == 0.5);
  CHECK(half.source_rate == 0.25);

  const auto none = reuse_rates(assemble_match_set({}, 0.6), target, source);
  CHECK(none.target_rate == 0.0);
  CHECK(none.source_rate == 0.0);

  std::vector<MatchRecord> all;
  for (int i = 0; i < 10; ++i) all.push_back(raw("t" + std::to_string(i) + "#0", "s" + std::to_string(i % 4) + "#0"));
  const auto full = reuse_rates(assemble_match_set(all, 0.6), target, source);
  CHECK(full.target_rate == 1.0);
  CHECK(full.source_rate == 1.0);
}

TEST_CASE("heatmap_matrix") {
  const Corpus target(Role::Target, {testing::target_article("b", "2024-01-02T00:00:00Z", "x"),
                                     testing::target_article("a", "2024-01-03T00:00:00Z", "x"),
                                     testing::target_article("c", "2024-01-02T00:00:00Z", "x")});
  const auto seg = segmentation({{"a", 9}, {"b", 9}, {"c", 3}});
  SUBCASE("no matches") {
    const auto h = heatmap_matrix({}, target, seg, Role::Target);
    CHECK(h.article_ids == std::vector<std::string>{"b", "c", "a"});
    for (const auto& row : h.counts) CHECK(row == std::vector<std::uint64_t>{0, 0, 0});
  }
  SUBCASE("single middle pair") {
    const std::vector<MatchRecord> p{pair("a#4", "s#0")};
    const auto h = heatmap_matrix(p, target, seg, Role::Target);
    CHECK(h.counts[1] == std::vector<std::uint64_t>{0, 0, 1});
    CHECK(h.counts[0] == std::vector<std::uint64_t>{0, 0, 0});
  }
  SUBCASE("random tally") {
    std::mt19937 rng(2);
    std::vector<MatchRecord> p;
    std::map<std::pair<int, std::string>, std::uint64_t> expected;
    for (int i = 0; i < 200; ++i) {
      const std::string id = std::string(1, "abc"[rng() % 3]);
      const std::size_t n = seg.at(id).size();
      const std::size_t idx = rng() % n;
      p.push_back(pair(id + "#" + std::to_string(idx), "s#" + std::to_string(i)));
      ++expected[{static_cast<int>(std::min<std::size_t>(3 * idx / n, 2)), id}];
    }
    const auto h = heatmap_matrix(p, target, seg, Role::Target);
    for (int bin = 0; bin < 3; ++bin)
      for (std::size_t col = 0; col < h.columns(); ++col)
        CHECK(h.counts[bin][col] == expected[{bin, h.article_ids[col]}]);
  }
  SUBCASE("axis must match the corpus role") {
    CHECK(thrown([&] { heatmap_matrix({}, target, seg, Role::Source); }) == ErrorCode::RoleMismatch);
  }
}
