#include "newsreuse/corpus.hpp"

#include <fstream>
#include <sstream>

#include "newsreuse/error.hpp"
#include "newsreuse/log.hpp"
#include "newsreuse/unicode.hpp"

namespace newsreuse {
namespace {

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_email_local(char c) {
  return is_alpha(c) || is_digit(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}
bool is_email_domain(char c) { return is_alpha(c) || is_digit(c) || c == '.' || c == '-'; }
bool is_phone_separator(char c) { return c == ' ' || c == '.' || c == '-' || c == '(' || c == ')'; }

// Length of an e-mail match starting at `start`, or 0. Mirrors the leftmost
// greedy semantics of [A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}.
std::size_t match_email(std::string_view s, std::size_t start) {
  std::size_t at = start;
  while (at < s.size() && is_email_local(s[at])) ++at;
  if (at == start || at >= s.size() || s[at] != '@') return 0;
  const std::size_t domain = at + 1;
  std::size_t domain_end = domain;
  while (domain_end < s.size() && is_email_domain(s[domain_end])) ++domain_end;
  // The last dot that leaves a non-empty host part and is followed by two letters.
  for (std::size_t dot = domain_end; dot-- > domain + 1;) {
    if (s[dot] != '.') continue;
    if (dot + 2 < domain_end && is_alpha(s[dot + 1]) && is_alpha(s[dot + 2])) {
      std::size_t end = dot + 1;
      while (end < s.size() && is_alpha(s[end])) ++end;
      return end - start;
    }
  }
  return 0;
}

// Length of a phone-number match starting at `start`, or 0: an optional '+',
// an optional '(', then at least seven digits where consecutive digits may be
// separated by one of " .-()" or by ") " / " (".
std::size_t match_phone(std::string_view s, std::size_t start) {
  std::size_t i = start;
  if (i < s.size() && s[i] == '+') ++i;
  if (i < s.size() && s[i] == '(') ++i;
  if (i >= s.size() || !is_digit(s[i])) return 0;
  std::size_t digits = 1;
  std::size_t end = i + 1;
  for (;;) {
    const std::size_t p = end;
    if (p + 1 < s.size() && is_phone_separator(s[p]) && is_digit(s[p + 1])) {
      end = p + 2;
    } else if (p + 2 < s.size() && ((s[p] == ')' && s[p + 1] == ' ') || (s[p] == ' ' && s[p + 1] == '(')) &&
               is_digit(s[p + 2])) {
      end = p + 3;
    } else if (p < s.size() && is_digit(s[p])) {
      end = p + 1;
    } else {
      break;
    }
    ++digits;
  }
  return digits >= 7 ? end - start : 0;
}

template <typename Matcher>
std::string remove_matches(std::string_view text, Matcher match) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t n = match(text, i);
    if (n > 0) {
      i += n;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

const std::string& require_string(const nlohmann::json& record, const char* field) {
  const auto it = record.find(field);
  if (it == record.end() || it->is_null()) throw Error(ErrorCode::MissingField, field);
  if (!it->is_string()) throw Error(ErrorCode::BadRecord, std::string(field) + " must be a string");
  return it->get_ref<const std::string&>();
}

std::optional<std::string> optional_string(const nlohmann::json& record, const char* field) {
  const auto it = record.find(field);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::BadRecord, std::string(field) + " must be a string");
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Role role) { return role == Role::Target ? "target" : "source"; }

Role parse_role(std::string_view text) {
  if (text == "target") return Role::Target;
  if (text == "source") return Role::Source;
  throw Error(ErrorCode::BadRecord, "unknown role '" + std::string(text) + "'");
}

const LanguageSet& default_language_set() {
  static const LanguageSet kLanguages{"en", "it", "pl", "fr", "de", "sr", "hr"};
  return kLanguages;
}

Timestamp Article::reference_time() const {
  const auto& ts = role == Role::Target ? created_at : received_at;
  if (!ts) throw Error(ErrorCode::MissingField, role == Role::Target ? "created_at" : "received_at");
  return *ts;
}

Corpus::Corpus(Role role, std::vector<Article> articles) : role_(role), articles_(std::move(articles)) {
  index_.reserve(articles_.size());
  for (std::size_t i = 0; i < articles_.size(); ++i) {
    const Article& a = articles_[i];
    if (a.role != role_) throw Error(ErrorCode::RoleMismatch, "article " + a.id + " is not a " + std::string(to_string(role_)));
    if (!index_.emplace(a.id, i).second) throw Error(ErrorCode::DuplicateId, a.id);
    ++stats_.per_language[a.language];
    ++stats_.per_agency[a.agency];
  }
}

const Article* Corpus::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &articles_[it->second];
}

const Article& Corpus::at(std::string_view id) const {
  const Article* a = find(id);
  if (a == nullptr) throw Error(ErrorCode::UnknownArticle, std::string(id));
  return *a;
}

namespace cleaning {

std::string replace_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<') {
      const std::size_t close = text.find('>', i + 1);
      if (close == std::string_view::npos) {
        out.append(text.substr(i));
        break;
      }
      out.push_back(' ');
      i = close + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string remove_emails(std::string_view text) { return remove_matches(text, match_email); }

std::string remove_phone_numbers(std::string_view text) { return remove_matches(text, match_phone); }

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_ascii_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace cleaning

std::string clean_text(std::string_view raw) {
  std::string current(raw);
  for (;;) {
    std::string next = cleaning::collapse_whitespace(
        cleaning::remove_phone_numbers(cleaning::remove_emails(cleaning::replace_tags(current))));
    // Every rewrite strictly shortens the text, so this terminates.
    if (next == current) return next;
    current = std::move(next);
  }
}

Article parse_article_record(const nlohmann::json& record, const LanguageSet& languages) {
  if (!record.is_object()) throw Error(ErrorCode::BadRecord, "record is not a JSON object");
  Article a;
  a.id = require_string(record, "id");
  if (a.id.empty()) throw Error(ErrorCode::BadRecord, "id is empty");
  a.role = parse_role(require_string(record, "role"));
  a.agency = require_string(record, "agency");
  a.language = require_string(record, "language");
  if (!languages.contains(a.language)) throw Error(ErrorCode::BadLanguage, "'" + a.language + "' in article " + a.id);

  const auto created = optional_string(record, "created_at");
  const auto received = optional_string(record, "received_at");
  if (a.role == Role::Target && !created) throw Error(ErrorCode::MissingField, "created_at");
  if (a.role == Role::Source && !received) throw Error(ErrorCode::MissingField, "received_at");
  if (created) a.created_at = parse_rfc3339(*created);
  if (received) a.received_at = parse_rfc3339(*received);

  const std::string& body = require_string(record, "body");
  if (!unicode::is_valid_utf8(body)) throw Error(ErrorCode::BadRecord, "body of " + a.id + " is not valid UTF-8");
  a.body = clean_text(body);
  a.headline = clean_text(optional_string(record, "headline").value_or(""));
  a.category = optional_string(record, "category");
  return a;
}

Article parse_article_record(std::string_view line, const LanguageSet& languages) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::BadRecord, e.what());
  }
  return parse_article_record(record, languages);
}

nlohmann::json to_json(const Article& a) {
  nlohmann::json j;
  j["id"] = a.id;
  j["role"] = to_string(a.role);
  j["agency"] = a.agency;
  j["language"] = a.language;
  if (a.created_at) j["created_at"] = format_rfc3339(*a.created_at);
  if (a.received_at) j["received_at"] = format_rfc3339(*a.received_at);
  j["headline"] = a.headline;
  j["body"] = a.body;
  if (a.category) j["category"] = *a.category;
  return j;
}

Corpus load_corpus(const std::filesystem::path& path, Role role, const LanguageSet& languages) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());

  std::vector<Article> articles;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Article a;
    try {
      a = parse_article_record(std::string_view(line), languages);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.message());
    }
    if (a.role != role) {
      throw Error(ErrorCode::RoleMismatch, path.string() + ":" + std::to_string(line_no) + ": article " + a.id +
                                               " has role " + std::string(to_string(a.role)));
    }
    if (!first_line.emplace(a.id, line_no).second) {
      throw Error(ErrorCode::DuplicateId, path.string() + ":" + std::to_string(line_no) + ": duplicate id '" + a.id +
                                              "' (first seen on line " + std::to_string(first_line[a.id]) + ")");
    }
    articles.push_back(std::move(a));
  }
  if (articles.empty()) log::warn("corpus " + path.string() + " contains no articles");
  return Corpus(role, std::move(articles));
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (const Article& a : corpus.articles()) out << to_json(a).dump() << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace newsreuse
