#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Domain types for entity name evolution. All types are immutable in spirit:
// they are plain values, constructed once and shared freely between workers.

namespace namevo {

// One name an entity carried at some point, with spelling variants.
struct EntityName {
  std::string canonical;
  std::vector<std::string> aliases;

  // Trims the canonical and drops alias entries that are empty, duplicate
  // each other case-insensitively, duplicate the canonical, are not
  // capital-initial, or contain digits.
  static EntityName make(std::string canonical, std::vector<std::string> aliases = {});

  bool operator==(const EntityName&) const = default;
};

// One transition from a preceding to a succeeding name, optionally dated by
// the calendar year of the change.
struct NameChange {
  EntityName preceding;
  EntityName succeeding;
  std::optional<int> year;

  bool operator==(const NameChange&) const = default;
};

// The ordered name history of one entity, oldest first. changes[i] links
// names[i] to names[i+1]; the last name is the current one and doubles as
// the entity id.
struct EvolutionChain {
  std::string entity_id;
  std::vector<EntityName> names;
  std::vector<NameChange> changes;
  std::string source_list;

  // Builds the change list from consecutive name pairs. years must have
  // names.size() - 1 entries (or be empty for an all-undated chain).
  static EvolutionChain from_names(std::vector<EntityName> names,
                                   std::vector<std::optional<int>> years,
                                   std::string source_list);

  bool has_dates() const;

  bool operator==(const EvolutionChain&) const = default;
};

// A resolved article: plain text plus provenance of how the title resolved.
struct Article {
  std::string requested_title;
  std::string resolved_title;
  bool redirected = false;
  std::string body;
  std::int64_t fetched_at = 0;

  bool operator==(const Article&) const = default;
};

// Per-change sentence indices of the three components within one article.
struct MentionIndex {
  std::vector<int> preceding_idx;
  std::vector<int> succeeding_idx;
  std::vector<int> date_idx;

  bool complete() const {
    return !preceding_idx.empty() && !succeeding_idx.empty() && !date_idx.empty();
  }

  bool operator==(const MentionIndex&) const = default;
};

// The minimal excerpt covering one mentioned change in one article.
struct ExcerptRecord {
  std::string entity_id;
  std::string source_list;
  int change_index = 0;
  NameChange change;
  std::string article;  // resolved title
  int from = 0;
  int to = 0;
  int distance = 0;
  std::string text;
  bool from_current_name_article = false;

  bool operator==(const ExcerptRecord&) const = default;
};

// Exact rational, used for percentages and distance moments so that rounding
// happens only at emission.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational of(long long num, long long den);
  Rational plus(const Rational& other) const;
  Rational times(const Rational& other) const;
  double value() const;
  // Fixed-point rendering with one decimal, half-up.
  std::string fixed1() const;

  bool operator==(const Rational&) const = default;
};

// The full count ladder plus the distance distribution.
struct StatsReport {
  struct EntityCounts {
    long long total = 0;
    long long with_dates = 0;
    long long resolvable = 0;
    long long current_name_resolvable = 0;
    long long linked_on_list = 0;
    long long multi_article = 0;
    long long resolvable_and_dated = 0;
    bool operator==(const EntityCounts&) const = default;
  };
  struct ChangeCounts {
    long long total = 0;
    long long of_entities_with_articles = 0;
    long long with_dates = 0;
    long long with_articles_and_dates = 0;
    long long mentioned = 0;
    long long mentioned_in_current_article = 0;
    bool operator==(const ChangeCounts&) const = default;
  };
  struct ExcerptCounts {
    long long total = 0;
    long long dist_lt_10 = 0;
    long long dist_lt_3 = 0;
    long long dist_eq_2 = 0;
    long long dist_eq_1 = 0;
    long long dist_eq_0 = 0;
    bool operator==(const ExcerptCounts&) const = default;
  };

  EntityCounts entities;
  ChangeCounts changes;
  ExcerptCounts excerpts;
  std::vector<std::pair<int, long long>> distance_histogram;  // sorted by distance
  std::optional<Rational> mean_distance;
  std::optional<Rational> median_distance;

  bool operator==(const StatsReport&) const = default;
};

// Checks every chain invariant and reports violations as human-readable
// strings; an empty result means the chain is valid. Never throws.
std::vector<std::string> validate_chain(const EvolutionChain& chain);

}  // namespace namevo
