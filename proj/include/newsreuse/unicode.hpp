#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace newsreuse::unicode {

bool is_valid_utf8(std::string_view text);

/// Decodes UTF-8; malformed bytes decode to U+FFFD.
std::vector<char32_t> decode(std::string_view text);
void append_utf8(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& cps);

/// Full Unicode lowercase followed by NFC composition.
std::string lower_nfc(std::string_view text);

bool is_upper(char32_t cp);
bool is_space(char32_t cp);
/// Letters, digits and combining marks.
bool is_word_char(char32_t cp);
bool is_apostrophe(char32_t cp);
bool is_opening_quote(char32_t cp);

}  // namespace newsreuse::unicode
