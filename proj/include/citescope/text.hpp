#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace citescope::text {

// UTF-8 helpers. Invalid bytes decode as U+FFFD and consume one byte.
char32_t decode_utf8(std::string_view s, std::size_t& pos);
void append_utf8(std::string& out, char32_t cp);

bool is_unicode_space(char32_t cp);
bool is_punctuation(char32_t cp);

// ASCII case folding; non-ASCII bytes pass through unchanged.
std::string to_lower(std::string_view s);

std::string trim(std::string_view s);

// Trims, then collapses every run of Unicode whitespace into one ASCII space.
std::string collapse_whitespace(std::string_view s);

// Splits on Unicode whitespace, strips leading/trailing punctuation from each
// piece and lowercases it. Empty pieces are dropped.
std::vector<std::string> words(std::string_view s);

// Splits on a literal delimiter, trimming each piece; empty pieces dropped.
std::vector<std::string> split_trimmed(std::string_view s, char delim);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool contains_digit(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

std::string replace_all(std::string s, std::string_view from, std::string_view to);

}  // namespace citescope::text
