#include "namevo/window.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace namevo {

std::optional<Window> min_window(std::span<const std::vector<int>> components,
                                 std::size_t* step_count) {
  if (step_count) *step_count = 0;
  if (components.empty()) return std::nullopt;
  for (const auto& list : components) {
    if (list.empty()) return std::nullopt;
  }

  // Min-heap over (head value, component); the window under test is always
  // [smallest head, largest head seen].
  using Head = std::pair<int, std::size_t>;
  std::priority_queue<Head, std::vector<Head>, std::greater<>> heads;
  std::vector<std::size_t> pos(components.size(), 0);
  int current_max = components[0][0];
  for (std::size_t c = 0; c < components.size(); ++c) {
    heads.emplace(components[c][0], c);
    current_max = std::max(current_max, components[c][0]);
  }

  std::optional<Window> best;
  while (true) {
    auto [from, c] = heads.top();
    heads.pop();
    if (step_count) ++*step_count;
    int distance = current_max - from;
    if (!best || distance < best->distance()) best = Window{from, current_max};
    if (++pos[c] == components[c].size()) break;  // this component is spent
    int next = components[c][pos[c]];
    current_max = std::max(current_max, next);
    heads.emplace(next, c);
  }
  return best;
}

std::optional<int> min_distance(std::span<const std::vector<int>> components) {
  auto window = min_window(components);
  if (!window) return std::nullopt;
  return window->distance();
}

std::string extract_excerpt(const SentenceList& sentences, const Window& window) {
  if (window.from < 0 || window.to < window.from ||
      static_cast<std::size_t>(window.to) >= sentences.size()) {
    throw std::out_of_range("excerpt window out of sentence range");
  }
  std::string out;
  for (int i = window.from; i <= window.to; ++i) {
    if (i > window.from) out += ' ';
    out += sentences.sentences[i];
  }
  return out;
}

std::optional<ExcerptRecord> analyze_change(const SentenceList& sentences,
                                            const std::string& resolved_title,
                                            const NameChange& change) {
  if (!change.year) return std::nullopt;
  MentionIndex index = build_mention_index(sentences, change);
  if (!index.complete()) return std::nullopt;
  const std::vector<int> lists[] = {index.preceding_idx, index.succeeding_idx, index.date_idx};
  auto window = min_window(lists);
  if (!window) return std::nullopt;

  ExcerptRecord record;
  record.change = change;
  record.article = resolved_title;
  record.from = window->from;
  record.to = window->to;
  record.distance = window->distance();
  record.text = extract_excerpt(sentences, *window);
  return record;
}

std::optional<ExcerptRecord> analyze_change(const Article& article, const NameChange& change,
                                            const SentenceSplitter& splitter) {
  return analyze_change(splitter.split(article.body), article.resolved_title, change);
}

std::vector<ExcerptRecord> analyze_entity(const EvolutionChain& chain,
                                          std::span<const Article> articles,
                                          const std::string& current_title,
                                          const SentenceSplitter& splitter) {
  std::vector<SentenceList> split_articles;
  split_articles.reserve(articles.size());
  for (const Article& article : articles) split_articles.push_back(splitter.split(article.body));

  std::vector<ExcerptRecord> records;
  for (std::size_t change_index = 0; change_index < chain.changes.size(); ++change_index) {
    const NameChange& change = chain.changes[change_index];
    if (!change.year) continue;

    std::optional<ExcerptRecord> best;
    for (std::size_t a = 0; a < articles.size(); ++a) {
      auto candidate = analyze_change(split_articles[a], articles[a].resolved_title, change);
      if (!candidate) continue;
      candidate->from_current_name_article =
          !current_title.empty() && candidate->article == current_title;
      if (!best) {
        best = std::move(candidate);
        continue;
      }
      bool better = candidate->distance < best->distance ||
                    (candidate->distance == best->distance &&
                     candidate->from_current_name_article > best->from_current_name_article) ||
                    (candidate->distance == best->distance &&
                     candidate->from_current_name_article == best->from_current_name_article &&
                     candidate->article < best->article);
      if (better) best = std::move(candidate);
    }
    if (best) {
      best->entity_id = chain.entity_id;
      best->source_list = chain.source_list;
      best->change_index = static_cast<int>(change_index);
      records.push_back(std::move(*best));
    }
  }
  return records;
}

}  // namespace namevo
