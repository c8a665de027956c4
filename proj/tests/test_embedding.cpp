#include <doctest.h>

#include <cmath>
#include <random>

#include "newsreuse/embedding.hpp"
#include "newsreuse/error.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace newsreuse;
using testing::thrown;

namespace {

double norm(const Vector& v) {
  double s = 0;
  for (float x : v.values) s += double(x) * x;
  return std::sqrt(s);
}

VectorStore sample_store(std::size_t dim, std::size_t n, unsigned seed) {
  VectorStore store({"builtin-hash", "test", dim});
  std::mt19937 rng(seed);
  std::normal_distribution<float> gauss;
  for (std::size_t i = 0; i < n; ++i) {
    Vector v;
    v.values.resize(dim);
    for (float& x : v.values) x = gauss(rng);
    store.insert("art" + std::to_string(i % 7) + "#" + std::to_string(i), std::move(v));
  }
  return store;
}

}  // namespace

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("hash_embed matches the reference construction") {
  for (const char* text : {"the minister said on Monday", "Rainfall totals for October", "ab", "x",
                           "The Quick Brown Fox jumps over 13 lazy dogs!"}) {
    CAPTURE(text);
    const auto v = hash_embed(text);
    const auto ref = oracle::hash_embed_ascii(text, kDefaultEmbeddingDim);
    REQUIRE(v.dim() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(v.values[i] == doctest::Approx(ref[i]).epsilon(1e-6));
  }
}

TEST_CASE("hash_embed frozen fixture") {
  const float cos = cosine_similarity(hash_embed("the minister said on Monday"), hash_embed("rainfall totals for October"));
  CHECK(cos < 0.6f);
  CHECK(cos == doctest::Approx(0.013334518676566627).epsilon(1e-5));
  const float near = cosine_similarity(hash_embed("the minister said on Monday"), hash_embed("The minister said on Monday."));
  CHECK(near == doctest::Approx(0.9405830025555331).epsilon(1e-5));
}

TEST_CASE("hash_embed basics") {
  const auto a = hash_embed("same text");
  CHECK(a == hash_embed("same text"));
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(thrown([] { hash_embed(""); }) == ErrorCode::EmptyText);
  CHECK(thrown([] { hash_embed(" \t\n"); }) == ErrorCode::EmptyText);
  CHECK(hash_embed("text", 16).dim() == 16);
  // NFC and case folding: composed and decomposed forms embed identically
  CHECK(hash_embed("Cafe\xcc\x81") == hash_embed("caf\xc3\xa9"));
}

TEST_CASE("cosine_similarity") {
  const Vector e1{{1.0f, 0.0f}};
  const Vector e2{{0.0f, 1.0f}};
  const float h = static_cast<float>(std::sqrt(2.0) / 2.0);
  CHECK(cosine_similarity(e1, e1) == 1.0f);
  CHECK(cosine_similarity(e1, e2) == 0.0f);
  CHECK(cosine_similarity(e1, Vector{{h, h}}) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(thrown([&] { cosine_similarity(e1, Vector{{1.0f, 0.0f, 0.0f}}); }) == ErrorCode::DimMismatch);
}

TEST_CASE("l2_normalize") {
  Vector v{{3.0f, 4.0f}};
  l2_normalize(v);
  CHECK(v.values[0] == doctest::Approx(0.6));
  CHECK(v.values[1] == doctest::Approx(0.8));
  Vector zero{{0.0f, 0.0f}};
  CHECK(thrown([&] { l2_normalize(zero); }) == ErrorCode::ProviderUnavailable);
}

TEST_CASE("embed_batch with the builtin provider") {
  HashEmbeddingProvider provider(64);
  CHECK(provider.meta().dim == 64);
  CHECK(provider.meta().provider_id == "builtin-hash");
  const std::vector<std::string> texts{"one", "two words", "three little words"};
  const auto vs = embed_batch(texts, provider, 2);
  REQUIRE(vs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(norm(vs[i]) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(vs[i] == hash_embed(texts[i], 64));
  }
  CHECK(embed_batch(std::vector<std::string>{}, provider).empty());
  CHECK(thrown([&] { embed_batch(texts, provider, 0); }) == ErrorCode::BadConfig);
}

TEST_CASE("VectorStore insert contract") {
  VectorStore store({"p", "m", 2});
  store.insert("a#0", Vector{{1.0f, 0.0f}});
  CHECK(thrown([&] { store.insert("a#0", Vector{{0.0f, 1.0f}}); }) == ErrorCode::DuplicateKey);
  CHECK(thrown([&] { store.insert("a#1", Vector{{0.0f, 1.0f, 0.0f}}); }) == ErrorCode::DimMismatch);
  CHECK(thrown([&] { store.insert(std::string(70000, 'k'), Vector{{0.0f, 1.0f}}); }) == ErrorCode::BadRecord);
  CHECK(store.find("a#0") != nullptr);
  CHECK(store.find("a#9") == nullptr);
}

TEST_CASE("EMB1 layout") {
  VectorStore store({"p", "m", 2});
  store.insert("k", Vector{{1.0f, -2.0f}});
  const auto bytes = encode_emb1(store);
  const std::vector<std::uint8_t> expected{
      'E', 'M', 'B', '1',                      // magic
      2, 0, 0, 0,                              // dim
      1, 0, 0, 0, 0, 0, 0, 0,                  // count
      1, 0, 'k',                               // key
      0x00, 0x00, 0x80, 0x3f,                  // 1.0f
      0x00, 0x00, 0x00, 0xc0,                  // -2.0f
  };
  CHECK(bytes == expected);
}

TEST_CASE("EMB1 round-trip is byte-exact") {
  testing::TempDir dir;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto store = sample_store(1 + seed * 5, seed * 3, seed);
    const auto path = dir / ("s" + std::to_string(seed) + ".emb1");
    store_write(store, path);
    const auto back = store_read(path);
    CHECK(back == store);
    store_write(back, dir / "again.emb1");
    CHECK(testing::read_file(path) == testing::read_file(dir / "again.emb1"));
    CHECK(encode_emb1(decode_emb1(encode_emb1(store))) == encode_emb1(store));
  }
}

TEST_CASE("EMB1 failure modes") {
  const auto store = sample_store(4, 3, 1);
  auto bytes = encode_emb1(store);

  SUBCASE("bad magic") {
    bytes[0] = 'X';
    bytes[1] = 'X';
    bytes[2] = 'X';
    bytes[3] = 'X';
    CHECK(thrown([&] { decode_emb1(bytes); }) == ErrorCode::BadMagic);
  }
  SUBCASE("truncated at every offset") {
    for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
      CAPTURE(cut);
      const std::span<const std::uint8_t> prefix(bytes.data(), cut);
      const auto code = thrown([&] { decode_emb1(prefix); });
      CHECK((code == ErrorCode::TruncatedFile || (cut < 4 && code == ErrorCode::BadMagic)));
    }
  }
  SUBCASE("trailing bytes") {
    bytes.push_back(0);
    CHECK(thrown([&] { decode_emb1(bytes); }) == ErrorCode::TrailingData);
  }
  SUBCASE("duplicate key") {
    VectorStore one({"p", "m", 1});
    one.insert("k", Vector{{1.0f}});
    auto b = encode_emb1(one);
    b[8] = 2;  // claim two entries
    const std::vector<std::uint8_t> entry(b.begin() + 16, b.end());
    b.insert(b.end(), entry.begin(), entry.end());
    CHECK(thrown([&] { decode_emb1(b); }) == ErrorCode::DuplicateKey);
  }
  SUBCASE("files") {
    testing::TempDir dir;
    CHECK(thrown([&] { store_read(dir / "missing.emb1"); }) == ErrorCode::FileNotFound);
    store_write(store, dir / "v.emb1");
    CHECK(thrown([&] { store_read(dir / "v.emb1", 8); }) == ErrorCode::DimMismatch);
    CHECK(store_read(dir / "v.emb1", 4).meta() == store.meta());
  }
}
