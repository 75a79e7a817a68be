#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "namevo/model.hpp"
#include "namevo/segment.hpp"

// Minimum sentence-distance windows: given one sorted index list per
// component of a name change, find the shortest sentence run containing at
// least one index from every list.

namespace namevo {

struct Window {
  int from = 0;
  int to = 0;

  int distance() const { return to - from; }
  bool operator==(const Window&) const = default;
};

// Heap sweep over k strictly-increasing lists, O(N log k) for N total
// indices. Returns nothing if any list is empty (or k == 0). Among windows
// of minimal distance the one with the smallest 'from' wins. step_count, if
// given, receives the number of shift steps performed (at most N).
std::optional<Window> min_window(std::span<const std::vector<int>> components,
                                 std::size_t* step_count = nullptr);

std::optional<int> min_distance(std::span<const std::vector<int>> components);

// Space-joined run of sentences window.from..window.to inclusive. Indices
// out of range are a caller bug, checked by assertion semantics (throws
// std::out_of_range).
std::string extract_excerpt(const SentenceList& sentences, const Window& window);

// Runs the whole chain for one change against one article: split, index,
// sweep, excerpt. Nothing when the change is undated or any component is
// absent from the article.
std::optional<ExcerptRecord> analyze_change(const Article& article, const NameChange& change,
                                            const SentenceSplitter& splitter);

// Same, over an already-split article.
std::optional<ExcerptRecord> analyze_change(const SentenceList& sentences,
                                            const std::string& resolved_title,
                                            const NameChange& change);

// Analyzes every dated change of one entity against every fetched article
// and keeps, per change, the record with the smallest distance (ties prefer
// the current-name article, then the lexicographically smaller title).
// current_title names the article resolved for the most current name, empty
// if none.
std::vector<ExcerptRecord> analyze_entity(const EvolutionChain& chain,
                                          std::span<const Article> articles,
                                          const std::string& current_title,
                                          const SentenceSplitter& splitter);

}  // namespace namevo
