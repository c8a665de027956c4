#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newsreuse {

/// Dense sentence embedding. Every provider emits unit-length vectors.
struct Vector {
  std::vector<float> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const Vector&) const = default;
};

inline constexpr std::size_t kDefaultEmbeddingDim = 384;
inline constexpr std::size_t kDefaultMaxBatch = 64;

struct EmbeddingMeta {
  std::string provider_id;
  std::string model_id;
  std::size_t dim = 0;

  bool operator==(const EmbeddingMeta&) const = default;
};

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes);

/// Deterministic signed feature hashing of character 3/4/5-grams over the
/// lowercased, NFC-normalised text padded with '^' and '$'. Throws EmptyText.
Vector hash_embed(std::string_view text, std::size_t dim = kDefaultEmbeddingDim);

/// Dot product of two unit vectors accumulated in double, rounded to float
/// and clamped to [-1, 1]. Throws DimMismatch.
float cosine_similarity(const Vector& a, const Vector& b);
float dot_unit(std::span<const float> a, std::span<const float> b);

void l2_normalize(Vector& v);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual EmbeddingMeta meta() const = 0;
  /// One vector per text, in input order. Implementations must be safe to
  /// call concurrently.
  virtual std::vector<Vector> embed(std::span<const std::string> texts) const = 0;
};

class HashEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dim = kDefaultEmbeddingDim) : dim_(dim) {}

  EmbeddingMeta meta() const override { return {"builtin-hash", "char-ngram-3-5-fnv1a64", dim_}; }
  std::vector<Vector> embed(std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
};

/// Client for the embedding sidecar's HTTP interface (POST /embed, GET /info).
class SidecarProvider final : public EmbeddingProvider {
 public:
  /// `url` is "http://host:port". `expected_dim` is checked on every response.
  SidecarProvider(std::string url, std::size_t expected_dim, std::chrono::seconds timeout = std::chrono::seconds(120));

  /// Queries GET /info on first use. Throws ProviderUnavailable.
  EmbeddingMeta meta() const override;
  /// Throws ProviderUnavailable or DimMismatch.
  std::vector<Vector> embed(std::span<const std::string> texts) const override;

 private:
  std::string url_;
  std::size_t expected_dim_;
  std::chrono::seconds timeout_;
  mutable std::mutex mutex_;
  mutable std::optional<std::string> model_id_;
};

/// Splits `texts` into batches of at most `max_batch` and checks that each
/// returned vector has the provider's dimension.
std::vector<Vector> embed_batch(std::span<const std::string> texts, const EmbeddingProvider& provider,
                                std::size_t max_batch = kDefaultMaxBatch);

/// Vectors keyed by "article_id#idx", all sharing one EmbeddingMeta.
class VectorStore {
 public:
  VectorStore() = default;
  explicit VectorStore(EmbeddingMeta meta) : meta_(std::move(meta)) {}

  const EmbeddingMeta& meta() const { return meta_; }
  void set_meta(EmbeddingMeta meta) { meta_ = std::move(meta); }
  const std::map<std::string, Vector, std::less<>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Throws DuplicateKey or DimMismatch.
  void insert(std::string key, Vector vector);
  const Vector* find(std::string_view key) const;

  bool operator==(const VectorStore&) const = default;

 private:
  EmbeddingMeta meta_;
  std::map<std::string, Vector, std::less<>> entries_;
};

/// EMB1: "EMB1", u32 dim, u64 count, then per entry u16 key length, key
/// bytes and dim float32 values, all little-endian. Entries are written in
/// key order. Provider and model ids go to "<path>.meta.json" next to it.
void store_write(const VectorStore& store, const std::filesystem::path& path);

/// Throws FileNotFound, BadMagic, TruncatedFile, TrailingData, DuplicateKey,
/// or DimMismatch when `expected_dim` is given and differs.
VectorStore store_read(const std::filesystem::path& path, std::optional<std::size_t> expected_dim = std::nullopt);

std::vector<std::uint8_t> encode_emb1(const VectorStore& store);
VectorStore decode_emb1(std::span<const std::uint8_t> bytes);

}  // namespace newsreuse
