#include "newsreuse/linguistic.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unicode/uchar.h>

#include "english_lexicon.hpp"
#include "newsreuse/error.hpp"
#include "newsreuse/unicode.hpp"
#include "prefix_data.hpp"

namespace newsreuse {
namespace {

constexpr std::string_view kNumericOnly = "#NUMERIC_ONLY#";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_terminal(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

bool is_closing(char32_t cp) {
  switch (cp) {
    case U'"':
    case U'\'':
    case U')':
    case U']':
    case U'’':
    case U'”':
    case U'»':
    case U'«':
      return true;
    default:
      return false;
  }
}

bool has_letter(const std::vector<char32_t>& cps) {
  return std::any_of(cps.begin(), cps.end(), [](char32_t c) { return u_isalpha(static_cast<UChar32>(c)); });
}

// The word ending right before position `dot`, minus leading opening quotes.
std::vector<char32_t> word_before(const std::vector<char32_t>& cps, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !unicode::is_space(cps[begin - 1])) --begin;
  while (begin < dot && unicode::is_opening_quote(cps[begin])) ++begin;
  return {cps.begin() + static_cast<std::ptrdiff_t>(begin), cps.begin() + static_cast<std::ptrdiff_t>(dot)};
}

bool non_breaking(const std::vector<char32_t>& word, const NonBreakingPrefixes* prefixes, bool next_is_digit) {
  if (word.empty()) return false;
  // Initials: "J. Smith".
  if (word.size() == 1 && unicode::is_upper(word[0])) return true;
  // Dotted acronyms: "U.S.", "z.B.", "m.in.".
  if (std::find(word.begin(), word.end(), U'.') != word.end() && has_letter(word)) return true;
  return prefixes != nullptr && prefixes->protects(unicode::encode(word), next_is_digit);
}

bool starts_with_digit(std::string_view token) {
  const auto cps = unicode::decode(token.substr(0, std::min<std::size_t>(token.size(), 4)));
  return !cps.empty() && u_isdigit(static_cast<UChar32>(cps.front()));
}

bool starts_upper(std::string_view token) {
  const auto cps = unicode::decode(token.substr(0, std::min<std::size_t>(token.size(), 4)));
  return !cps.empty() && unicode::is_upper(cps.front());
}

Pos symbol_or_punct(std::string_view token) {
  const auto cps = unicode::decode(token);
  if (cps.empty()) return Pos::X;
  const int8_t type = u_charType(static_cast<UChar32>(cps.front()));
  if (type == U_MATH_SYMBOL || type == U_CURRENCY_SYMBOL || type == U_OTHER_SYMBOL || type == U_MODIFIER_SYMBOL ||
      cps.front() == U'%' || cps.front() == U'&' || cps.front() == U'@' || cps.front() == U'#') {
    return Pos::SYM;
  }
  return Pos::PUNCT;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 2 && s.substr(s.size() - suffix.size()) == suffix;
}

std::string ascii_apostrophes(std::string s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 3, "\xE2\x80\x99") == 0) {
      out.push_back('\'');
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace

std::string sentence_key(std::string_view article_id, std::size_t idx) {
  std::string key(article_id);
  key.push_back('#');
  key += std::to_string(idx);
  return key;
}

SentenceKeyParts parse_sentence_key(std::string_view key) {
  const auto hash = key.rfind('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 == key.size()) {
    throw Error(ErrorCode::BadRecord, "malformed sentence key '" + std::string(key) + "'");
  }
  std::size_t idx = 0;
  for (char c : key.substr(hash + 1)) {
    if (c < '0' || c > '9') throw Error(ErrorCode::BadRecord, "malformed sentence key '" + std::string(key) + "'");
    idx = idx * 10 + static_cast<std::size_t>(c - '0');
  }
  return {key.substr(0, hash), idx};
}

// ---------------------------------------------------------------------------
// NonBreakingPrefixes

NonBreakingPrefixes NonBreakingPrefixes::parse(std::string_view contents) {
  NonBreakingPrefixes out;
  std::istringstream in{std::string(contents)};
  std::string raw;
  while (std::getline(in, raw)) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    bool numeric_only = false;
    if (const auto marker = line.find(kNumericOnly); marker != std::string_view::npos) {
      numeric_only = true;
      line = trim(line.substr(0, marker));
    }
    if (line.size() > 1 && line.back() == '.') line.remove_suffix(1);
    if (line.empty()) continue;
    (numeric_only ? out.numeric_only_ : out.plain_).emplace(line);
  }
  return out;
}

NonBreakingPrefixes NonBreakingPrefixes::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool NonBreakingPrefixes::protects(std::string_view word, bool next_is_digit) const {
  if (plain_.contains(word)) return true;
  return next_is_digit && numeric_only_.contains(word);
}

// ---------------------------------------------------------------------------
// SentenceSplitter

SentenceSplitter::SentenceSplitter() {
  for (const detail::PrefixResource& r : detail::shipped_prefix_lists()) {
    by_language_.emplace(std::string(r.language), NonBreakingPrefixes::parse(r.contents));
  }
}

void SentenceSplitter::set_prefixes(std::string language, NonBreakingPrefixes prefixes) {
  by_language_.insert_or_assign(std::move(language), std::move(prefixes));
}

const NonBreakingPrefixes* SentenceSplitter::prefixes(std::string_view language) const {
  const auto it = by_language_.find(language);
  return it == by_language_.end() ? nullptr : &it->second;
}

std::vector<Sentence> SentenceSplitter::split(std::string_view text, std::string_view language) const {
  const std::vector<char32_t> cps = unicode::decode(text);
  const NonBreakingPrefixes* prefixes = this->prefixes(language);
  std::vector<Sentence> out;

  auto emit = [&](std::size_t begin, std::size_t end) {
    std::string piece = unicode::encode({cps.begin() + static_cast<std::ptrdiff_t>(begin),
                                         cps.begin() + static_cast<std::ptrdiff_t>(end)});
    const std::string_view trimmed = trim(piece);
    if (trimmed.empty()) return;
    Sentence s;
    s.idx = out.size();
    s.text = std::string(trimmed);
    s.n_tokens = count_word_tokens(tokenize(s.text));
    out.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (!is_terminal(cps[i])) {
      ++i;
      continue;
    }
    const std::size_t terminal = i;
    std::size_t end = i + 1;
    while (end < n && (is_terminal(cps[end]) || is_closing(cps[end]))) ++end;
    std::size_t next = end;
    while (next < n && unicode::is_space(cps[next])) ++next;
    const bool spaced = next > end && next < n;
    const bool opener = spaced && (unicode::is_upper(cps[next]) || unicode::is_opening_quote(cps[next]) ||
                                   is_ascii_digit(cps[next]));
    bool boundary = opener;
    if (boundary && cps[terminal] == U'.' && end == terminal + 1) {
      boundary = !non_breaking(word_before(cps, terminal), prefixes, is_ascii_digit(cps[next]));
    }
    if (boundary) {
      emit(start, end);
      start = next;
      i = next;
    } else {
      i = end;
    }
  }
  if (start < n) emit(start, n);
  return out;
}

const SentenceSplitter& default_splitter() {
  static const SentenceSplitter kSplitter;
  return kSplitter;
}

std::vector<Sentence> split_sentences(std::string_view text, std::string_view language) {
  return default_splitter().split(text, language);
}

Segmentation segment_corpus(const Corpus& corpus, const SentenceSplitter& splitter) {
  Segmentation out;
  for (const Article& a : corpus.articles()) {
    std::vector<Sentence> sentences = splitter.split(a.body, a.language);
    for (Sentence& s : sentences) s.article_id = a.id;
    out.emplace(a.id, std::move(sentences));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tokens

std::vector<std::string> tokenize(std::string_view sentence_text) {
  const std::vector<char32_t> cps = unicode::decode(sentence_text);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i];
    if (unicode::is_space(c)) {
      ++i;
    } else if (unicode::is_word_char(c)) {
      std::string word;
      while (i < cps.size()) {
        if (unicode::is_word_char(cps[i])) {
          unicode::append_utf8(word, cps[i++]);
        } else if (unicode::is_apostrophe(cps[i]) && i + 1 < cps.size() && unicode::is_word_char(cps[i + 1])) {
          unicode::append_utf8(word, cps[i++]);
        } else {
          break;
        }
      }
      tokens.push_back(std::move(word));
    } else {
      std::string mark;
      unicode::append_utf8(mark, c);
      tokens.push_back(std::move(mark));
      ++i;
    }
  }
  return tokens;
}

bool is_punctuation_token(std::string_view token) {
  const auto cps = unicode::decode(token.substr(0, std::min<std::size_t>(token.size(), 4)));
  return cps.empty() || !unicode::is_word_char(cps.front());
}

std::size_t count_word_tokens(std::span<const std::string> tokens) {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const std::string& t) { return !is_punctuation_token(t); }));
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::ADJ: return "ADJ";
    case Pos::ADP: return "ADP";
    case Pos::ADV: return "ADV";
    case Pos::AUX: return "AUX";
    case Pos::CCONJ: return "CCONJ";
    case Pos::DET: return "DET";
    case Pos::INTJ: return "INTJ";
    case Pos::NOUN: return "NOUN";
    case Pos::NUM: return "NUM";
    case Pos::PART: return "PART";
    case Pos::PRON: return "PRON";
    case Pos::PROPN: return "PROPN";
    case Pos::PUNCT: return "PUNCT";
    case Pos::SCONJ: return "SCONJ";
    case Pos::SYM: return "SYM";
    case Pos::VERB: return "VERB";
    case Pos::X: return "X";
  }
  return "X";
}

Pos parse_pos(std::string_view name) {
  static constexpr Pos kAll[] = {Pos::ADJ,  Pos::ADP,   Pos::ADV,   Pos::AUX,   Pos::CCONJ, Pos::DET,
                                 Pos::INTJ, Pos::NOUN,  Pos::NUM,   Pos::PART,  Pos::PRON,  Pos::PROPN,
                                 Pos::PUNCT, Pos::SCONJ, Pos::SYM,  Pos::VERB,  Pos::X};
  for (Pos p : kAll) {
    if (to_string(p) == name) return p;
  }
  return Pos::X;
}

// ---------------------------------------------------------------------------
// HeuristicAnnotator

HeuristicAnnotator::HeuristicAnnotator() = default;

void HeuristicAnnotator::load_lexicon(const std::string& language, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  auto& lexicon = lexicons_[language];
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) continue;
    lexicon.insert_or_assign(unicode::lower_nfc(view.substr(0, tab)), parse_pos(trim(view.substr(tab + 1))));
  }
}

Pos HeuristicAnnotator::tag_english(std::string_view token) const {
  const detail::EnglishLexicon& lex = detail::english_lexicon();
  const std::string lower = ascii_apostrophes(unicode::lower_nfc(token));

  if (const auto it = lex.closed_class.find(lower); it != lex.closed_class.end()) return it->second;

  if (const auto apostrophe = lower.find('\''); apostrophe != std::string::npos) {
    // Contractions and possessives: "don't", "won't", "it's", "minister's".
    if (ends_with(lower, "n't") || lower == "can't" || lower == "won't") {
      std::string base = lower.substr(0, lower.size() - 3);
      if (base == "ca") base = "can";
      if (base == "wo") base = "will";
      if (base == "sha") base = "shall";
      const auto it = lex.closed_class.find(base);
      if (it != lex.closed_class.end() && it->second == Pos::AUX) return Pos::AUX;
    }
    const std::string base = lower.substr(0, apostrophe);
    if (!base.empty()) return tag_english(base);
  }

  if (lex.irregular_verb_forms.contains(lower) || detail::is_inflection_of(lex.verb_lemmas, lower)) return Pos::VERB;
  if (lex.nouns.contains(lower) || detail::is_inflection_of(lex.nouns, lower)) return Pos::NOUN;
  if (lex.adjectives.contains(lower)) return Pos::ADJ;
  if (starts_upper(token)) return Pos::PROPN;

  if (ends_with(lower, "ly")) return Pos::ADV;
  for (std::string_view suffix : {"tion", "sion", "ment", "ness", "ity", "ship", "ism", "ance", "ence", "ist"}) {
    if (ends_with(lower, suffix)) return Pos::NOUN;
  }
  for (std::string_view suffix : {"ous", "ive", "ful", "less", "able", "ible", "ical", "ial", "ic"}) {
    if (ends_with(lower, suffix)) return Pos::ADJ;
  }
  return Pos::X;
}

Pos HeuristicAnnotator::tag_generic(std::string_view token, std::string_view language) const {
  if (const auto lexicon = lexicons_.find(language); lexicon != lexicons_.end()) {
    if (const auto it = lexicon->second.find(unicode::lower_nfc(token)); it != lexicon->second.end()) return it->second;
  }
  if (starts_upper(token)) return Pos::PROPN;
  return Pos::X;
}

std::vector<Pos> HeuristicAnnotator::tag(const Sentence&, std::span<const std::string> tokens,
                                         std::string_view language) const {
  std::vector<Pos> tags;
  tags.reserve(tokens.size());
  bool first_word = true;
  for (const std::string& token : tokens) {
    if (is_punctuation_token(token)) {
      tags.push_back(symbol_or_punct(token));
      continue;
    }
    Pos pos = Pos::X;
    if (starts_with_digit(token)) {
      pos = Pos::NUM;
    } else if (language == "en") {
      // Mid-sentence capitals are names unless they are closed-class words ("I").
      const auto& closed = detail::english_lexicon().closed_class;
      if (!first_word && starts_upper(token) && !closed.contains(unicode::lower_nfc(token))) {
        pos = Pos::PROPN;
      } else {
        pos = tag_english(token);
      }
    } else {
      pos = tag_generic(token, language);
      if (pos == Pos::PROPN && first_word) pos = Pos::X;
    }
    tags.push_back(pos);
    first_word = false;
  }
  return tags;
}

// ---------------------------------------------------------------------------
// ExternalAnnotations

ExternalAnnotations ExternalAnnotations::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  ExternalAnnotations out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::BadRecord, where + ": " + e.what());
    }
    if (!j.contains("article_id") || !j["article_id"].is_string()) throw Error(ErrorCode::MissingField, where + ": article_id");
    if (!j.contains("sentence_idx") || !j["sentence_idx"].is_number_unsigned()) {
      throw Error(ErrorCode::MissingField, where + ": sentence_idx");
    }
    if (!j.contains("tags") || !j["tags"].is_array()) throw Error(ErrorCode::MissingField, where + ": tags");
    std::vector<Pos> tags;
    for (const auto& t : j["tags"]) {
      if (!t.is_string()) throw Error(ErrorCode::BadRecord, where + ": tags must be strings");
      tags.push_back(parse_pos(t.get<std::string>()));
    }
    out.add(j["article_id"].get<std::string>(), j["sentence_idx"].get<std::size_t>(), std::move(tags));
  }
  return out;
}

void ExternalAnnotations::add(std::string article_id, std::size_t sentence_idx, std::vector<Pos> tags) {
  tags_.insert_or_assign(sentence_key(article_id, sentence_idx), std::move(tags));
}

std::vector<Pos> ExternalAnnotations::tag(const Sentence& sentence, std::span<const std::string> tokens,
                                          std::string_view) const {
  const std::string key = sentence_key(sentence);
  const auto it = tags_.find(key);
  if (it == tags_.end()) throw Error(ErrorCode::AnnotationMissing, key);
  if (it->second.size() != tokens.size()) {
    throw Error(ErrorCode::AnnotationMismatch, key + ": " + std::to_string(it->second.size()) + " tags for " +
                                                   std::to_string(tokens.size()) + " tokens");
  }
  return it->second;
}

std::vector<Token> annotate(const Sentence& sentence, std::span<const std::string> tokens, std::string_view language,
                            const Annotator& annotator) {
  const std::vector<Pos> tags = annotator.tag(sentence, tokens, language);
  if (tags.size() != tokens.size()) {
    throw Error(ErrorCode::AnnotationMismatch, sentence_key(sentence) + ": annotator returned wrong tag count");
  }
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back(Token{tokens[i], tags[i]});
  return out;
}

// ---------------------------------------------------------------------------
// Eligibility

std::string_view to_string(RejectionReason reason) {
  switch (reason) {
    case RejectionReason::TooShort: return "TooShort";
    case RejectionReason::NoVerb: return "NoVerb";
    case RejectionReason::ListingHeader: return "ListingHeader";
    case RejectionReason::NumericDominant: return "NumericDominant";
  }
  return "Unknown";
}

std::optional<RejectionReason> is_eligible(const Sentence& sentence, std::span<const Token> tokens) {
  std::size_t words = 0;
  std::size_t numeric = 0;
  bool verbal = false;
  for (const Token& t : tokens) {
    if (t.pos == Pos::VERB || t.pos == Pos::AUX) verbal = true;
    if (is_punctuation_token(t.text)) continue;
    ++words;
    if (t.pos == Pos::NUM || starts_with_digit(t.text)) ++numeric;
  }
  if (words <= kMinTokensExclusive) return RejectionReason::TooShort;
  if (!verbal) return RejectionReason::NoVerb;
  if (const std::string_view text = trim(sentence.text); !text.empty() && text.back() == ':') {
    return RejectionReason::ListingHeader;
  }
  if (static_cast<double>(numeric) >= kMaxNumericShare * static_cast<double>(words)) {
    return RejectionReason::NumericDominant;
  }
  return std::nullopt;
}

AnnotatedSentence annotate_sentence(const Sentence& sentence, std::string_view language, const Annotator& annotator) {
  AnnotatedSentence out;
  out.sentence = sentence;
  const std::vector<std::string> tokens = tokenize(sentence.text);
  out.sentence.n_tokens = count_word_tokens(tokens);
  out.tokens = annotate(out.sentence, tokens, language, annotator);
  out.rejection_reason = is_eligible(out.sentence, out.tokens);
  out.eligible = !out.rejection_reason.has_value();
  return out;
}

std::vector<AnnotatedSentence> filter_sentences(const Corpus& corpus, const Segmentation& segmentation,
                                                const Annotator& annotator) {
  std::vector<AnnotatedSentence> out;
  for (const Article& a : corpus.articles()) {
    const auto it = segmentation.find(a.id);
    if (it == segmentation.end()) throw Error(ErrorCode::UnknownArticle, a.id);
    for (const Sentence& s : it->second) {
      AnnotatedSentence annotated = annotate_sentence(s, a.language, annotator);
      if (annotated.eligible) out.push_back(std::move(annotated));
    }
  }
  return out;
}

std::vector<AnnotatedSentence> filter_target_sentences(const Corpus& corpus, const Annotator& annotator,
                                                       const SentenceSplitter& splitter) {
  if (corpus.role() != Role::Target) throw Error(ErrorCode::RoleMismatch, "eligibility filtering expects a target corpus");
  return filter_sentences(corpus, segment_corpus(corpus, splitter), annotator);
}

}  // namespace newsreuse
