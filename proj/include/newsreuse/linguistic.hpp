#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newsreuse/corpus.hpp"

namespace newsreuse {

struct Sentence {
  std::string article_id;
  std::size_t idx = 0;  // dense, zero-based within the article
  std::string text;
  std::size_t n_tokens = 0;  // non-punctuation tokens

  bool operator==(const Sentence&) const = default;
};

/// "article_id#idx"
std::string sentence_key(std::string_view article_id, std::size_t idx);
inline std::string sentence_key(const Sentence& s) { return sentence_key(s.article_id, s.idx); }

struct SentenceKeyParts {
  std::string_view article_id;
  std::size_t idx = 0;
};
/// Splits at the last '#'. Throws BadRecord on malformed keys.
SentenceKeyParts parse_sentence_key(std::string_view key);

// ---------------------------------------------------------------------------
// Segmentation

/// Abbreviations after which a period does not end a sentence.
class NonBreakingPrefixes {
 public:
  /// One prefix per line, '#' starts a comment line, a trailing '.' is
  /// ignored, and a "#NUMERIC_ONLY#" suffix restricts the prefix to
  /// positions followed by a digit.
  static NonBreakingPrefixes parse(std::string_view contents);
  static NonBreakingPrefixes load(const std::filesystem::path& path);

  bool protects(std::string_view word, bool next_is_digit) const;
  std::size_t size() const { return plain_.size() + numeric_only_.size(); }

 private:
  std::set<std::string, std::less<>> plain_;
  std::set<std::string, std::less<>> numeric_only_;
};

class SentenceSplitter {
 public:
  /// Uses the prefix lists compiled in from data/prefixes.
  SentenceSplitter();

  void set_prefixes(std::string language, NonBreakingPrefixes prefixes);
  const NonBreakingPrefixes* prefixes(std::string_view language) const;

  /// Sentence boundaries fall after '.', '!' or '?' (plus any closing quotes)
  /// when whitespace follows and the next character is an uppercase letter,
  /// an opening quote or a digit, unless the word before a '.' is a known
  /// prefix, an initial, or a dotted acronym. Returned sentences are trimmed
  /// and carry an empty article_id.
  std::vector<Sentence> split(std::string_view text, std::string_view language) const;

 private:
  std::map<std::string, NonBreakingPrefixes, std::less<>> by_language_;
};

const SentenceSplitter& default_splitter();

std::vector<Sentence> split_sentences(std::string_view text, std::string_view language);

/// Sentence lists for every article of a corpus, keyed by article id.
using Segmentation = std::map<std::string, std::vector<Sentence>, std::less<>>;

Segmentation segment_corpus(const Corpus& corpus, const SentenceSplitter& splitter = default_splitter());

// ---------------------------------------------------------------------------
// Tokens and part-of-speech tags

/// Maximal runs of letters and digits (an apostrophe between two such
/// characters stays inside the run); every other non-space character is its
/// own token.
std::vector<std::string> tokenize(std::string_view sentence_text);

bool is_punctuation_token(std::string_view token);
std::size_t count_word_tokens(std::span<const std::string> tokens);

enum class Pos { ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X };

std::string_view to_string(Pos pos);
/// Unknown tag names map to X.
Pos parse_pos(std::string_view name);

struct Token {
  std::string text;
  Pos pos = Pos::X;

  bool operator==(const Token&) const = default;
};

class Annotator {
 public:
  virtual ~Annotator() = default;

  /// One tag per token.
  virtual std::vector<Pos> tag(const Sentence& sentence, std::span<const std::string> tokens,
                               std::string_view language) const = 0;
};

/// Lexicon-driven tagger. English ships with closed-class word lists and a
/// common-verb lexicon matched through regular inflections; other languages
/// tag only punctuation, numbers and capitalised words unless a lexicon file
/// is loaded.
class HeuristicAnnotator final : public Annotator {
 public:
  HeuristicAnnotator();

  /// Tab-separated "word<TAB>TAG" lines.
  void load_lexicon(const std::string& language, const std::filesystem::path& path);

  std::vector<Pos> tag(const Sentence& sentence, std::span<const std::string> tokens,
                       std::string_view language) const override;

 private:
  Pos tag_english(std::string_view token) const;
  Pos tag_generic(std::string_view token, std::string_view language) const;

  std::map<std::string, std::unordered_map<std::string, Pos>, std::less<>> lexicons_;
};

/// Pre-computed tags joined on (article_id, sentence_idx).
class ExternalAnnotations final : public Annotator {
 public:
  /// JSONL lines of {"article_id", "sentence_idx", "tags": [...]}.
  static ExternalAnnotations load(const std::filesystem::path& path);

  void add(std::string article_id, std::size_t sentence_idx, std::vector<Pos> tags);
  std::size_t size() const { return tags_.size(); }

  /// Throws AnnotationMissing, or AnnotationMismatch on a token-count mismatch.
  std::vector<Pos> tag(const Sentence& sentence, std::span<const std::string> tokens,
                       std::string_view language) const override;

 private:
  std::unordered_map<std::string, std::vector<Pos>> tags_;
};

std::vector<Token> annotate(const Sentence& sentence, std::span<const std::string> tokens, std::string_view language,
                            const Annotator& annotator);

// ---------------------------------------------------------------------------
// Eligibility

enum class RejectionReason { TooShort, NoVerb, ListingHeader, NumericDominant };

std::string_view to_string(RejectionReason reason);

struct AnnotatedSentence {
  Sentence sentence;
  std::vector<Token> tokens;
  bool eligible = false;
  std::optional<RejectionReason> rejection_reason;
};

inline constexpr std::size_t kMinTokensExclusive = 7;
inline constexpr double kMaxNumericShare = 0.30;

/// Rules in order: more than seven word tokens, a VERB or AUX tag, no
/// trailing ':' and under 30% numeric word tokens. The first failing rule is
/// reported.
std::optional<RejectionReason> is_eligible(const Sentence& sentence, std::span<const Token> tokens);

AnnotatedSentence annotate_sentence(const Sentence& sentence, std::string_view language, const Annotator& annotator);

/// Eligible sentences of a target corpus, in corpus then sentence order.
/// Throws RoleMismatch for a source corpus.
std::vector<AnnotatedSentence> filter_target_sentences(const Corpus& corpus, const Annotator& annotator,
                                                       const SentenceSplitter& splitter = default_splitter());

/// Same rules without the role check, for pipelines that opt into filtering
/// source sentences as well.
std::vector<AnnotatedSentence> filter_sentences(const Corpus& corpus, const Segmentation& segmentation,
                                                const Annotator& annotator);

}  // namespace newsreuse
