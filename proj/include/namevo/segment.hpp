#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "namevo/model.hpp"

// Sentence segmentation and per-sentence mention indexing. The splitter is
// deliberately rule-based and deterministic; anything smarter can be plugged
// in behind the SentenceSplitter interface.

namespace namevo {

struct SentenceList {
  // Whitespace-normalized sentence texts.
  std::vector<std::string> sentences;
  // [start, end) byte offsets of each sentence in the source text,
  // non-overlapping and increasing.
  std::vector<std::pair<std::size_t, std::size_t>> offsets;

  std::size_t size() const { return sentences.size(); }
};

class SentenceSplitter {
 public:
  virtual ~SentenceSplitter() = default;
  virtual SentenceList split(std::string_view text) const = 0;
};

// Boundaries at '.', '!' or '?' followed by whitespace and an upper-case or
// opening-quote character; an abbreviation table ("Mr.", "St.", "e.g.", ...)
// and single-letter initials suppress '.' boundaries; blank lines always end
// a sentence.
class RuleSplitter final : public SentenceSplitter {
 public:
  RuleSplitter();  // built-in abbreviation table
  explicit RuleSplitter(const std::vector<std::string>& abbreviations);

  // Loads one abbreviation per line; '#' starts a comment.
  static RuleSplitter from_file(const std::filesystem::path& path);

  SentenceList split(std::string_view text) const override;

  static const std::vector<std::string>& builtin_abbreviations();

 private:
  bool is_abbreviation(std::string_view token) const;
  std::unordered_set<std::string> abbreviations_;  // case-folded, with final '.'
};

// Sentence indices (strictly increasing) whose text contains the canonical
// name or any alias, case-insensitively, on token boundaries.
std::vector<int> index_name_mentions(const SentenceList& sentences, const EntityName& name);

// Sentence indices containing the year as a standalone number (a maximal
// digit run equal to the year's decimal digits).
std::vector<int> index_year_mentions(const SentenceList& sentences, int year);

// Composes the three index lists for one change over one article body.
MentionIndex build_mention_index(const Article& article, const NameChange& change,
                                 const SentenceSplitter& splitter);
MentionIndex build_mention_index(const SentenceList& sentences, const NameChange& change);

}  // namespace namevo
