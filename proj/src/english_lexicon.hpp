#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "newsreuse/linguistic.hpp"

namespace newsreuse::detail {

struct EnglishLexicon {
  std::unordered_map<std::string, Pos> closed_class;  // AUX, PRON, DET, ADP, ...
  std::unordered_set<std::string> verb_lemmas;
  std::unordered_set<std::string> irregular_verb_forms;
  std::unordered_set<std::string> nouns;
  std::unordered_set<std::string> adjectives;
};

const EnglishLexicon& english_lexicon();

/// True when `word` (lowercase) is a lemma of `lemmas` or a regular
/// -s/-es/-ies, -d/-ed/-ied or -ing inflection of one.
bool is_inflection_of(const std::unordered_set<std::string>& lemmas, const std::string& word);

}  // namespace newsreuse::detail
