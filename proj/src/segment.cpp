#include "namevo/segment.hpp"

#include <algorithm>
#include <fstream>

#include "namevo/errors.hpp"
#include "namevo/text.hpp"

namespace namevo {

namespace {

const std::vector<std::string> kBuiltinAbbreviations = {
    "Mr.",   "Mrs.",  "Ms.",   "Dr.",   "Prof.", "Rev.",  "Gen.",  "Col.",
    "Sgt.",  "Capt.", "St.",   "Mt.",   "Ft.",   "No.",   "Nos.",  "pp.",
    "p.",    "Vol.",  "vol.",  "ca.",   "c.",    "cf.",   "e.g.",  "i.e.",
    "etc.",  "vs.",   "viz.",  "Jr.",   "Sr.",   "Co.",   "Inc.",  "Ltd.",
    "Corp.", "U.S.",  "U.K.",  "U.N.",  "a.m.",  "p.m.",  "approx.",
};

bool is_sentence_punct(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

}  // namespace

const std::vector<std::string>& RuleSplitter::builtin_abbreviations() {
  return kBuiltinAbbreviations;
}

RuleSplitter::RuleSplitter() : RuleSplitter(kBuiltinAbbreviations) {}

RuleSplitter::RuleSplitter(const std::vector<std::string>& abbreviations) {
  for (const std::string& abbr : abbreviations) {
    std::string token = trim(abbr);
    if (token.empty()) continue;
    if (token.back() != '.') token += '.';
    abbreviations_.insert(fold(token));
  }
}

RuleSplitter RuleSplitter::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read abbreviation table: " + path.string());
  std::vector<std::string> abbreviations;
  std::string line;
  while (std::getline(in, line)) {
    std::string token = trim(line);
    if (token.empty() || token[0] == '#') continue;
    abbreviations.push_back(token);
  }
  return RuleSplitter(abbreviations);
}

bool RuleSplitter::is_abbreviation(std::string_view token) const {
  return abbreviations_.count(fold(token)) > 0;
}

SentenceList RuleSplitter::split(std::string_view text) const {
  std::vector<char32_t> cps;
  std::vector<std::size_t> bytes;
  decode_utf8_with_offsets(text, cps, bytes);
  const std::size_t n = cps.size();

  SentenceList out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space(cps[begin])) ++begin;
    while (end > begin && is_space(cps[end - 1])) --end;
    if (begin >= end) return;
    std::string_view slice(text.data() + bytes[begin], bytes[end] - bytes[begin]);
    out.sentences.push_back(normalize_whitespace(slice));
    out.offsets.emplace_back(bytes[begin], bytes[end]);
  };

  std::size_t seg_start = 0;
  std::size_t i = 0;
  while (i < n) {
    // A blank line is always a boundary.
    if (cps[i] == U'\n') {
      std::size_t j = i + 1;
      while (j < n && cps[j] != U'\n' && is_space(cps[j])) ++j;
      if (j < n && cps[j] == U'\n') {
        emit(seg_start, i);
        while (j < n && is_space(cps[j])) ++j;
        seg_start = j;
        i = j;
        continue;
      }
      ++i;
      continue;
    }

    if (!is_sentence_punct(cps[i])) {
      ++i;
      continue;
    }

    // Swallow a punctuation run like "?!" or "...".
    std::size_t punct_end = i + 1;
    while (punct_end < n && is_sentence_punct(cps[punct_end])) ++punct_end;

    // Needs whitespace, then an upper-case or opening-quote character.
    std::size_t next = punct_end;
    while (next < n && is_space(cps[next])) ++next;
    bool boundary = next > punct_end && next < n &&
                    (is_upper(cps[next]) || is_opening_quote(cps[next]));

    if (boundary && cps[i] == U'.' && punct_end == i + 1) {
      // Token ending at this period, scanned back over word chars and '.'.
      std::size_t tok_begin = i;
      while (tok_begin > seg_start &&
             (is_word_char(cps[tok_begin - 1]) || cps[tok_begin - 1] == U'.')) {
        --tok_begin;
      }
      if (tok_begin < i) {
        std::string token = encode_utf8(
            std::vector<char32_t>(cps.begin() + tok_begin, cps.begin() + i + 1));
        bool initial = (i - tok_begin == 1) && is_upper(cps[tok_begin]);
        if (initial || is_abbreviation(token)) boundary = false;
      }
    }

    if (boundary) {
      emit(seg_start, punct_end);
      seg_start = next;
      i = next;
    } else {
      i = punct_end;
    }
  }
  emit(seg_start, n);
  return out;
}

namespace {

// Case-folded codepoints of a sentence, computed once per sentence.
std::vector<char32_t> folded_cps(std::string_view s) {
  std::vector<char32_t> cps = decode_utf8(s);
  for (char32_t& cp : cps) cp = fold_case(cp);
  return cps;
}

bool contains_on_token_boundary(const std::vector<char32_t>& haystack,
                                const std::vector<char32_t>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  const std::size_t n = haystack.size(), m = needle.size();
  for (std::size_t pos = 0; pos + m <= n; ++pos) {
    if (!std::equal(needle.begin(), needle.end(), haystack.begin() + pos)) continue;
    bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    bool right_ok = pos + m == n || !is_word_char(haystack[pos + m]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

}  // namespace

std::vector<int> index_name_mentions(const SentenceList& sentences, const EntityName& name) {
  std::vector<std::vector<char32_t>> needles;
  auto add_needle = [&](const std::string& s) {
    std::string folded = fold(normalize_whitespace(s));
    if (!folded.empty()) needles.push_back(decode_utf8(folded));
  };
  add_needle(name.canonical);
  for (const std::string& alias : name.aliases) add_needle(alias);

  std::vector<int> hits;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    std::vector<char32_t> haystack = folded_cps(sentences.sentences[i]);
    for (const auto& needle : needles) {
      if (contains_on_token_boundary(haystack, needle)) {
        hits.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return hits;
}

std::vector<int> index_year_mentions(const SentenceList& sentences, int year) {
  std::string digits = std::to_string(year);
  std::vector<int> hits;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (contains_standalone_number(sentences.sentences[i], digits)) {
      hits.push_back(static_cast<int>(i));
    }
  }
  return hits;
}

MentionIndex build_mention_index(const SentenceList& sentences, const NameChange& change) {
  MentionIndex index;
  index.preceding_idx = index_name_mentions(sentences, change.preceding);
  index.succeeding_idx = index_name_mentions(sentences, change.succeeding);
  if (change.year) index.date_idx = index_year_mentions(sentences, *change.year);
  return index;
}

MentionIndex build_mention_index(const Article& article, const NameChange& change,
                                 const SentenceSplitter& splitter) {
  return build_mention_index(splitter.split(article.body), change);
}

}  // namespace namevo
