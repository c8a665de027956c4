#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "newsreuse/corpus.hpp"
#include "newsreuse/error.hpp"
#include "newsreuse/timestamp.hpp"

namespace testing {

/// Code of the newsreuse::Error thrown by `fn`, if any.
template <typename Fn>
std::optional<newsreuse::ErrorCode> thrown(Fn&& fn) {
  try {
    fn();
  } catch (const newsreuse::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(NEWSREUSE_FIXTURES) / name; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("newsreuse-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline newsreuse::Article target_article(std::string id, std::string when, std::string body,
                                         std::string language = "en") {
  newsreuse::Article a;
  a.id = std::move(id);
  a.role = newsreuse::Role::Target;
  a.agency = "T";
  a.language = std::move(language);
  a.created_at = newsreuse::parse_rfc3339(when);
  a.headline = "H";
  a.body = std::move(body);
  return a;
}

inline newsreuse::Article source_article(std::string id, std::string when, std::string body,
                                         std::string language = "en") {
  newsreuse::Article a;
  a.id = std::move(id);
  a.role = newsreuse::Role::Source;
  a.agency = "S";
  a.language = std::move(language);
  a.received_at = newsreuse::parse_rfc3339(when);
  a.headline = "H";
  a.body = std::move(body);
  return a;
}

}  // namespace testing
