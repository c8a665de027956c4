#include "newsreuse/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "newsreuse/error.hpp"
#include "newsreuse/unicode.hpp"

namespace newsreuse {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
constexpr std::uint8_t kMagic[4] = {'E', 'M', 'B', '1'};

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }
  template <typename T>
  void le(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::span<const std::uint8_t> bytes(std::size_t n) {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::TruncatedFile, "need " + std::to_string(n) + " bytes at offset " + std::to_string(pos_));
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  template <typename T>
  T le() {
    const auto b = bytes(sizeof(T));
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(b[i]) << (8 * i));
    return value;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::filesystem::path meta_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".meta.json";
  return p;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

Vector hash_embed(std::string_view text, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::DimMismatch, "embedding dimension must be positive");
  std::vector<char32_t> cps = unicode::decode(unicode::lower_nfc(text));
  if (std::all_of(cps.begin(), cps.end(), unicode::is_space)) throw Error(ErrorCode::EmptyText, "cannot embed blank text");

  cps.insert(cps.begin(), U'^');
  cps.push_back(U'$');
  std::vector<std::int64_t> acc(dim, 0);
  std::string gram;
  for (std::size_t n = 3; n <= 5; ++n) {
    for (std::size_t i = 0; i + n <= cps.size(); ++i) {
      gram.clear();
      for (std::size_t k = i; k < i + n; ++k) unicode::append_utf8(gram, cps[k]);
      const std::uint64_t h = fnv1a64(gram);
      acc[h % dim] += (h >> 63) == 0 ? 1 : -1;
    }
  }

  double norm = 0.0;
  for (std::int64_t v : acc) norm += static_cast<double>(v) * static_cast<double>(v);
  Vector out;
  out.values.resize(dim, 0.0f);
  if (norm == 0.0) {
    // Every bucket cancelled out; fall back to a basis vector picked by the whole padded text.
    out.values[fnv1a64(unicode::encode(cps)) % dim] = 1.0f;
    return out;
  }
  norm = std::sqrt(norm);
  for (std::size_t i = 0; i < dim; ++i) out.values[i] = static_cast<float>(static_cast<double>(acc[i]) / norm);
  return out;
}

float dot_unit(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return std::clamp(static_cast<float>(sum), -1.0f, 1.0f);
}

float cosine_similarity(const Vector& a, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  return dot_unit(a.values, b.values);
}

void l2_normalize(Vector& v) {
  double norm = 0.0;
  for (float x : v.values) norm += static_cast<double>(x) * static_cast<double>(x);
  if (norm == 0.0) throw Error(ErrorCode::ProviderUnavailable, "provider returned a zero vector");
  norm = std::sqrt(norm);
  for (float& x : v.values) x = static_cast<float>(static_cast<double>(x) / norm);
}

std::vector<Vector> HashEmbeddingProvider::embed(std::span<const std::string> texts) const {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) out.push_back(hash_embed(t, dim_));
  return out;
}

std::vector<Vector> embed_batch(std::span<const std::string> texts, const EmbeddingProvider& provider,
                                std::size_t max_batch) {
  if (max_batch == 0) throw Error(ErrorCode::BadConfig, "max batch size must be positive");
  const std::size_t dim = provider.meta().dim;
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += max_batch) {
    const auto batch = texts.subspan(begin, std::min(max_batch, texts.size() - begin));
    std::vector<Vector> vectors = provider.embed(batch);
    if (vectors.size() != batch.size()) {
      throw Error(ErrorCode::ProviderUnavailable, "provider returned " + std::to_string(vectors.size()) +
                                                      " vectors for " + std::to_string(batch.size()) + " texts");
    }
    for (Vector& v : vectors) {
      if (v.dim() != dim) {
        throw Error(ErrorCode::DimMismatch, "provider returned dim " + std::to_string(v.dim()) + ", expected " +
                                                std::to_string(dim));
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

void VectorStore::insert(std::string key, Vector vector) {
  if (vector.dim() != meta_.dim) {
    throw Error(ErrorCode::DimMismatch, key + ": dim " + std::to_string(vector.dim()) + ", store dim " +
                                            std::to_string(meta_.dim));
  }
  if (key.size() > 0xFFFF) throw Error(ErrorCode::BadRecord, "sentence key longer than 65535 bytes");
  const auto [it, inserted] = entries_.emplace(std::move(key), std::move(vector));
  if (!inserted) throw Error(ErrorCode::DuplicateKey, it->first);
}

const Vector* VectorStore::find(std::string_view key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::uint8_t> encode_emb1(const VectorStore& store) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(store.meta().dim));
  w.le<std::uint64_t>(store.size());
  for (const auto& [key, vector] : store.entries()) {
    w.le<std::uint16_t>(static_cast<std::uint16_t>(key.size()));
    w.bytes(key.data(), key.size());
    for (float f : vector.values) w.le<std::uint32_t>(std::bit_cast<std::uint32_t>(f));
  }
  return w.take();
}

VectorStore decode_emb1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic) throw Error(ErrorCode::TruncatedFile, "missing magic");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) throw Error(ErrorCode::BadMagic, "not an EMB1 file");
  Reader r(bytes.subspan(sizeof kMagic));
  const auto dim = r.le<std::uint32_t>();
  const auto count = r.le<std::uint64_t>();
  if (dim == 0 && count > 0) throw Error(ErrorCode::DimMismatch, "zero dimension");
  VectorStore store(EmbeddingMeta{"", "", dim});
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto key_len = r.le<std::uint16_t>();
    const auto key_bytes = r.bytes(key_len);
    std::string key(key_bytes.begin(), key_bytes.end());
    Vector v;
    v.values.resize(dim);
    for (std::uint32_t d = 0; d < dim; ++d) v.values[d] = std::bit_cast<float>(r.le<std::uint32_t>());
    store.insert(std::move(key), std::move(v));
  }
  if (r.remaining() != 0) throw Error(ErrorCode::TrailingData, std::to_string(r.remaining()) + " bytes after last entry");
  return store;
}

void store_write(const VectorStore& store, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_emb1(store);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
  }
  const nlohmann::json meta{{"provider_id", store.meta().provider_id},
                            {"model_id", store.meta().model_id},
                            {"dim", store.meta().dim}};
  std::ofstream out(meta_path(path), std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + meta_path(path).string());
  out << meta.dump(2) << '\n';
}

VectorStore store_read(const std::filesystem::path& path, std::optional<std::size_t> expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  VectorStore store = decode_emb1(bytes);
  if (expected_dim && store.meta().dim != *expected_dim) {
    throw Error(ErrorCode::DimMismatch, path.string() + " has dim " + std::to_string(store.meta().dim) +
                                            ", expected " + std::to_string(*expected_dim));
  }
  if (std::ifstream meta_in(meta_path(path)); meta_in) {
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(meta_in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::BadRecord, meta_path(path).string() + ": " + e.what());
    }
    if (meta.value("dim", store.meta().dim) != store.meta().dim) {
      throw Error(ErrorCode::DimMismatch, meta_path(path).string() + " disagrees with the EMB1 header");
    }
    store.set_meta({meta.value("provider_id", ""), meta.value("model_id", ""), store.meta().dim});
  }
  return store;
}

}  // namespace newsreuse
