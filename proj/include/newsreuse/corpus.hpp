#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "newsreuse/timestamp.hpp"

namespace newsreuse {

/// Target articles are the ones whose origins are traced; source
/// articles are the candidate origins delivered by other agencies.
enum class Role { Target, Source };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

using LanguageSet = std::set<std::string, std::less<>>;

/// en, it, pl, fr, de, sr, hr
const LanguageSet& default_language_set();

struct Article {
  std::string id;
  Role role = Role::Target;
  std::string agency;
  std::string language;
  std::optional<Timestamp> created_at;   // required for Role::Target
  std::optional<Timestamp> received_at;  // required for Role::Source
  std::string headline;
  std::string body;
  std::optional<std::string> category;

  /// created_at for targets, received_at for sources.
  Timestamp reference_time() const;

  bool operator==(const Article&) const = default;
};

struct CorpusStats {
  std::map<std::string, std::size_t> per_language;
  std::map<std::string, std::size_t> per_agency;

  bool operator==(const CorpusStats&) const = default;
};

/// Immutable collection of articles sharing one role.
class Corpus {
 public:
  /// Throws DuplicateId or RoleMismatch.
  Corpus(Role role, std::vector<Article> articles);

  Role role() const { return role_; }
  const std::vector<Article>& articles() const { return articles_; }
  const CorpusStats& stats() const { return stats_; }
  std::size_t size() const { return articles_.size(); }

  const Article* find(std::string_view id) const;
  /// Throws UnknownArticle.
  const Article& at(std::string_view id) const;

  bool operator==(const Corpus& other) const {
    return role_ == other.role_ && articles_ == other.articles_ && stats_ == other.stats_;
  }

 private:
  Role role_;
  std::vector<Article> articles_;
  CorpusStats stats_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Strips markup tags, e-mail addresses and phone numbers, then collapses
/// whitespace. Rules are reapplied until the text no longer changes, which
/// makes the function idempotent.
std::string clean_text(std::string_view raw);

/// Single-pass building blocks of clean_text, exposed for testing.
namespace cleaning {
std::string replace_tags(std::string_view text);
std::string remove_emails(std::string_view text);
std::string remove_phone_numbers(std::string_view text);
std::string collapse_whitespace(std::string_view text);
}  // namespace cleaning

Article parse_article_record(const nlohmann::json& record, const LanguageSet& languages = default_language_set());
Article parse_article_record(std::string_view line, const LanguageSet& languages = default_language_set());

nlohmann::json to_json(const Article& article);

/// One article per non-empty line. Errors carry the 1-based line number.
Corpus load_corpus(const std::filesystem::path& path, Role role,
                   const LanguageSet& languages = default_language_set());

void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace newsreuse
