#include "english_lexicon.hpp"

#include <initializer_list>
#include <string_view>

namespace newsreuse::detail {
namespace {

void add(std::unordered_map<std::string, Pos>& map, Pos pos, std::initializer_list<std::string_view> words) {
  for (std::string_view w : words) map.emplace(std::string(w), pos);
}

void add(std::unordered_set<std::string>& set, std::initializer_list<std::string_view> words) {
  for (std::string_view w : words) set.emplace(w);
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool lemma_or_e(const std::unordered_set<std::string>& lemmas, const std::string& stem) {
  if (stem.empty()) return false;
  if (lemmas.contains(stem) || lemmas.contains(stem + "e")) return true;
  // Doubled final consonant: "stopped", "planning".
  const std::size_t n = stem.size();
  return n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && lemmas.contains(stem.substr(0, n - 1));
}

EnglishLexicon build() {
  EnglishLexicon lex;
  auto& cc = lex.closed_class;
  add(cc, Pos::AUX,
      {"be", "am", "is", "are", "was", "were", "been", "being", "have", "has", "had", "having", "do", "does", "did",
       "will", "would", "shall", "should", "can", "could", "may", "might", "must", "ought", "'s", "'re", "'m", "'ve",
       "'ll", "'d"});
  add(cc, Pos::PRON,
      {"i",        "me",        "my",         "mine",      "myself",   "you",        "your",      "yours",
       "yourself", "he",        "him",        "his",       "himself",  "she",        "her",       "hers",
       "herself",  "it",        "its",        "itself",    "we",       "us",         "our",       "ours",
       "ourselves", "they",     "them",       "their",     "theirs",   "themselves", "who",       "whom",
       "whose",    "what",      "which",      "someone",   "anyone",   "everyone",   "nobody",    "somebody",
       "anybody",  "everybody", "something",  "anything",  "everything", "nothing",  "whoever",   "whatever"});
  add(cc, Pos::DET,
      {"a", "an", "the", "this", "that", "these", "those", "some", "any", "no", "every", "each", "all", "both",
       "either", "neither", "another"});
  add(cc, Pos::ADP,
      {"of",      "in",      "on",      "at",      "by",     "for",     "with",    "from",     "to",
       "into",    "onto",    "upon",    "about",   "above",  "across",  "after",   "against",  "along",
       "among",   "around",  "before",  "behind",  "below",  "beneath", "beside",  "between",  "beyond",
       "during",  "except",  "inside",  "near",    "off",    "outside", "over",    "past",     "since",
       "through", "throughout", "toward", "towards", "under", "until",  "up",      "via",      "within",
       "without", "despite", "amid",    "per",     "like",   "unlike",  "regarding", "following", "including"});
  add(cc, Pos::CCONJ, {"and", "or", "but", "nor", "yet", "plus"});
  add(cc, Pos::SCONJ,
      {"if", "because", "although", "though", "while", "whereas", "unless", "whether", "as", "than", "once",
       "whenever", "wherever"});
  add(cc, Pos::PART, {"not", "n't", "'"});
  add(cc, Pos::INTJ, {"yes", "oh", "hello", "please", "ok", "okay"});
  add(cc, Pos::NUM,
      {"zero",   "one",    "two",     "three",    "four",    "five",     "six",       "seven",   "eight",
       "nine",   "ten",    "eleven",  "twelve",   "thirteen", "fourteen", "fifteen",  "sixteen", "seventeen",
       "eighteen", "nineteen", "twenty", "thirty", "forty",  "fifty",    "sixty",     "seventy", "eighty",
       "ninety", "hundred", "thousand", "million", "billion", "trillion", "dozens"});
  add(cc, Pos::ADV,
      {"also",     "very",      "too",       "already",  "still",      "just",        "only",       "even",
       "now",      "then",      "here",      "there",    "again",      "soon",        "later",      "today",
       "yesterday", "tomorrow", "currently", "recently", "however",    "meanwhile",   "moreover",   "furthermore",
       "never",    "always",    "often",     "sometimes", "almost",    "nearly",      "more",       "most",
       "less",     "least",     "well",      "away",     "ago",        "further",     "instead",    "rather",
       "quite",    "perhaps",   "maybe",     "together", "abroad",     "overnight",   "respectively", "so",
       "approximately", "where", "when",     "why",      "how",        "therefore",   "thus",       "ever",
       "out",      "down",      "forward",   "earlier",  "likewise",   "otherwise",   "tonight"});

  add(lex.verb_lemmas,
      {"say",       "tell",      "report",    "state",     "announce",   "claim",      "add",        "note",
       "confirm",   "deny",      "warn",      "urge",      "call",       "ask",        "answer",     "reply",
       "respond",   "agree",     "accept",    "reject",    "refuse",     "approve",    "adopt",      "sign",
       "meet",      "visit",     "travel",    "arrive",    "leave",      "return",     "go",         "come",
       "take",      "make",      "give",      "get",       "put",        "set",        "hold",       "keep",
       "bring",     "send",      "receive",   "provide",   "offer",      "pay",        "buy",        "sell",
       "spend",     "cost",      "raise",     "rise",      "fall",       "drop",       "increase",   "decrease",
       "reduce",    "cut",       "grow",      "expand",    "lose",       "win",        "beat",       "defeat",
       "attack",    "kill",      "wound",     "injure",    "die",        "fight",      "launch",     "fire",
       "shoot",     "strike",    "bomb",      "destroy",   "damage",     "hit",        "capture",    "release",
       "free",      "arrest",    "detain",    "charge",    "accuse",     "convict",    "try",        "investigate",
       "examine",   "check",     "find",      "discover",  "see",        "look",       "watch",      "show",
       "reveal",    "publish",   "write",     "read",      "speak",      "talk",       "discuss",    "debate",
       "negotiate", "decide",    "plan",      "intend",    "want",       "need",       "expect",     "hope",
       "believe",   "think",     "know",      "understand", "consider",  "remain",     "stay",       "continue",
       "start",     "begin",     "end",       "finish",    "stop",       "close",      "open",       "resume",
       "suspend",   "postpone",  "cancel",    "delay",     "run",        "lead",       "follow",     "join",
       "support",   "oppose",    "help",      "protect",   "defend",     "save",       "prevent",    "allow",
       "permit",    "ban",       "block",     "limit",     "require",    "demand",     "force",      "order",
       "invite",    "host",      "organise",  "organize",  "mark",       "celebrate",  "honour",     "honor",
       "elect",     "vote",      "appoint",   "nominate",  "resign",     "replace",    "become",     "seem",
       "appear",    "happen",    "occur",     "move",      "change",     "turn",       "build",      "create",
       "develop",   "produce",   "improve",   "affect",    "cause",      "include",    "involve",    "contain",
       "mean",      "represent", "stand",     "sit",       "live",       "work",       "employ",     "hire",
       "serve",     "use",       "apply",     "implement", "introduce",  "propose",    "submit",     "present",
       "express",   "condemn",   "criticise", "criticize", "praise",     "welcome",    "thank",      "congratulate",
       "pledge",    "promise",   "vow",       "threaten",  "evacuate",   "flee",       "escape",     "rescue",
       "treat",     "estimate",  "count",     "record",    "register",   "exceed",     "reach",      "face",
       "address",   "tackle",    "handle",    "manage",    "control",    "govern",     "regulate",   "reform",
       "invest",    "trade",     "export",    "import",    "supply",     "deliver",    "transport",  "fly",
       "drive",     "emphasise", "emphasize", "stress",    "insist",     "argue",      "explain",    "describe",
       "mention",   "point",     "remind",    "suggest",   "recommend",  "conclude",   "sentence",   "fear",
       "seek",      "bear",      "cross",     "enter",     "withdraw",   "pass",       "carry",      "study",      "receive",
       "collect",   "gather",    "shut",      "target",    "hurt",       "occupy",     "invade",     "retaliate",
       "demolish",  "shell",     "assist",    "coordinate", "contribute", "dispatch",  "discuss",    "mourn"});

  add(lex.irregular_verb_forms,
      {"said",   "told",    "met",     "went",    "gone",     "took",     "taken",     "made",    "gave",
       "given",  "came",    "saw",     "seen",    "knew",     "known",    "thought",   "brought", "bought",
       "left",   "kept",    "held",    "stood",   "spoke",    "spoken",   "wrote",     "written", "began",
       "begun",  "fell",    "fallen",  "found",   "felt",     "led",      "lost",      "paid",    "sent",
       "spent",  "won",     "built",   "ran",     "struck",   "fought",   "sought",    "taught",  "caught",
       "chose",  "chosen",  "drove",   "driven",  "rose",     "risen",    "shot",      "sold",    "sat",
       "broke",  "broken",  "flew",    "flown",   "grew",     "grown",    "threw",     "thrown",  "understood",
       "withdrew", "withdrawn", "fled", "became", "got",      "gotten",   "meant",     "heard",   "bore",
       "borne",  "forbade", "forbidden", "arose", "arisen",   "overtook", "undertook", "undertaken"});

  add(lex.nouns,
      {"schedule",  "event",     "government", "minister",  "president", "country",   "state",     "people",
       "police",    "army",      "war",        "attack",    "city",      "town",      "village",   "region",
       "area",      "year",      "month",      "week",      "day",       "time",      "news",      "agency",
       "report",    "statement", "meeting",    "talks",     "ceasefire", "hostage",   "border",    "official",
       "spokesperson", "spokesman", "spokeswoman", "leader",   "party",     "parliament", "election",  "vote",
       "court",     "law",       "bill",       "company",   "market",    "price",     "rate",      "economy",
       "bank",      "percent",   "euro",       "dollar",    "aid",       "support",   "crisis",    "conflict",
       "hospital",  "school",    "child",      "children",  "woman",     "women",     "man",       "men",
       "victim",    "death",     "toll",       "fire",      "flood",     "storm",     "rain",      "rainfall",
       "total",     "temperature", "weather",  "house",     "home",      "family",    "group",     "member",
       "union",     "council",   "committee",  "ministry",  "office",    "embassy",   "citizen",   "soldier",
       "troop",     "strike",    "rocket",     "missile",   "plan",      "deal",      "agreement", "decision",
       "measure",   "proposal",  "project",    "programme", "program",   "issue",     "question",  "situation",
       "delegation", "visit",    "trip",       "summit",    "conference", "session",  "case",      "investigation"});

  add(lex.adjectives,
      {"new",        "old",       "big",        "small",      "large",       "major",     "former",    "first",
       "last",       "next",      "other",      "many",       "few",         "several",   "high",      "low",
       "long",       "short",     "early",      "late",       "good",        "bad",       "great",     "important",
       "international", "national", "foreign",  "local",      "political",   "military",  "economic",  "public",
       "key",        "main",      "humanitarian", "european", "slovenian",   "israeli",   "palestinian", "ukrainian",
       "russian",    "american",  "german",     "french",     "italian",     "polish",    "serbian",   "croatian",
       "second",     "third",     "much",       "own",        "same",        "different", "strong",    "heavy",
       "serious",    "severe",    "recent",     "current",    "possible",    "available", "free",      "full",
       "unrelated",  "similar",   "little",     "whole",      "likely",      "further",   "total",     "daily",
       "weekly",     "annual",    "official",   "joint",      "senior",      "special"});
  return lex;
}

}  // namespace

bool is_inflection_of(const std::unordered_set<std::string>& lemmas, const std::string& w) {
  if (lemmas.contains(w)) return true;
  const auto ends = [&](std::string_view suffix) {
    return w.size() > suffix.size() + 1 && std::string_view(w).substr(w.size() - suffix.size()) == suffix;
  };
  const auto strip = [&](std::size_t n) { return w.substr(0, w.size() - n); };
  if (ends("ing")) return lemma_or_e(lemmas, strip(3));
  if (ends("ied")) return lemmas.contains(strip(3) + "y");
  if (ends("ed")) return lemma_or_e(lemmas, strip(2));
  if (ends("ies")) return lemmas.contains(strip(3) + "y");
  if (ends("es") && lemmas.contains(strip(2))) return true;
  if (ends("s")) return lemmas.contains(strip(1));
  return false;
}

const EnglishLexicon& english_lexicon() {
  static const EnglishLexicon kLexicon = build();
  return kLexicon;
}

}  // namespace newsreuse::detail
