#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 / case-folding toolkit used throughout the pipeline. Covers
// the scripts that actually occur on the name-change lists (Latin incl.
// extended ranges, Greek, Cyrillic); codepoints outside those ranges pass
// through case folding unchanged. Input is expected to be NFC-normalized
// UTF-8, which is what the wiki API emits.

namespace namevo {

// Decodes UTF-8 leniently; invalid bytes become U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view text);

// Same, but also records the byte offset of every codepoint. offsets has
// one extra trailing entry equal to text.size().
void decode_utf8_with_offsets(std::string_view text, std::vector<char32_t>& cps,
                              std::vector<std::size_t>& offsets);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(const std::vector<char32_t>& cps);

// Simple (1:1) case folding.
char32_t fold_case(char32_t cp);

// True iff cp has a distinct lower-case mapping in the covered ranges;
// stands in for "category Lu" on the scripts we handle.
bool is_upper(char32_t cp);

bool is_ascii_digit(char32_t cp);

// Letters and digits, including the non-ASCII letter ranges; token-boundary
// checks use this to reject matches embedded in a longer word.
bool is_word_char(char32_t cp);

bool is_space(char32_t cp);

bool is_opening_quote(char32_t cp);

std::string trim(std::string_view s);

// Collapses every whitespace run (ASCII + common Unicode spaces) to a single
// ' ' and trims the ends.
std::string normalize_whitespace(std::string_view s);

// Case-folds a whole string.
std::string fold(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

// First codepoint is an upper-case letter.
bool starts_with_upper(std::string_view s);

bool contains_ascii_digit(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_any(std::string_view s, std::string_view seps);

// First maximal ASCII digit run of length 3 or 4 in s, as an integer.
std::optional<int> first_number_3_4(std::string_view s);

// True iff s contains the exact digit string as a maximal digit run, i.e.
// not embedded in a longer number.
bool contains_standalone_number(std::string_view s, std::string_view digits);

// Removes every maximal 3-4 digit run (year candidates) from s; used to
// salvage alias text from mixed bracket tokens.
std::string remove_year_runs(std::string_view s);

// Conservative encoding for using arbitrary titles as file names.
std::string percent_encode_filename(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);

}  // namespace namevo
