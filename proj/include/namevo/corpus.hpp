#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "namevo/model.hpp"

// Resolving entity names to articles: an abstract page source (live wiki API
// or a directory of fixture pages), client-side redirect following, markup
// stripping, and a one-file-per-title on-disk cache that makes re-analysis
// fully offline.

namespace namevo {

enum class FetchStatus { resolved, redirected, missing, error };

std::string_view to_string(FetchStatus status);
std::optional<FetchStatus> fetch_status_from(std::string_view s);

struct FetchOutcome {
  FetchStatus status = FetchStatus::missing;
  std::optional<Article> article;  // present iff resolved or redirected
  std::string error_detail;
};

// Raw answer of a page source for one exact title.
struct PageLookup {
  enum class Kind { page, redirect, missing, error };
  Kind kind = Kind::missing;
  std::string title;   // page: final title (after any server-side redirect);
                       // redirect: the target title
  std::string text;    // page markup
  bool server_redirected = false;
  std::string detail;  // error description
};

class PageSource {
 public:
  virtual ~PageSource() = default;
  virtual PageLookup lookup(const std::string& title) = 0;
};

// Serves pages from a directory: <dir>/<normalized title>.html or .txt.
// A file whose content starts with "#REDIRECT [[Target]]" acts as a
// redirect page buffer.
class FixturePageSource final : public PageSource {
 public:
  explicit FixturePageSource(std::filesystem::path dir);
  PageLookup lookup(const std::string& title) override;

 private:
  std::filesystem::path dir_;
};

// Removes tags, tables, reference markers and comments, preserves paragraph
// breaks as blank lines and decodes character entities. Idempotent and
// total: plain text passes through unchanged.
std::string strip_markup(std::string_view raw);

// Wiki title normalization: trim, whitespace to underscores, first letter
// upper-cased. Identical keys mean the same page.
std::string normalize_title(std::string_view title);

struct CacheEntry {
  std::string key;  // normalized title
  FetchOutcome outcome;
  std::int64_t stored_at = 0;
};

// Layout: <dir>/manifest (tab-separated: key, status, resolved_title,
// stored_at) plus <dir>/pages/<key>.txt holding stripped plain text. The
// manifest is append-only; the last record per key wins. Reads are safe from
// concurrent threads; writes are serialized internally.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  std::optional<CacheEntry> get(const std::string& key) const;
  void put(const CacheEntry& entry);
  std::size_t size() const;
  const std::filesystem::path& dir() const { return dir_; }

  static std::string page_filename(std::string_view key);

 private:
  struct Row {
    FetchStatus status;
    std::string resolved_title;
    std::int64_t stored_at;
  };
  std::filesystem::path dir_;
  std::map<std::string, Row> entries_;
  mutable std::mutex mutex_;  // guards entries_ and manifest appends
};

// Cached title resolution with redirect following (depth <= 5). With no
// upstream source the resolver is fully offline; cache misses then come back
// as error outcomes and are counted, so callers can fail hard.
class TitleResolver {
 public:
  TitleResolver(Cache* cache, PageSource* upstream);

  // Collapsed outcome for one title: cache hit, or upstream fetch following
  // redirects, stripping markup and caching the result.
  FetchOutcome resolve_title(const std::string& title);

  std::size_t offline_misses() const { return offline_misses_; }

 private:
  Cache* cache_;
  PageSource* upstream_;
  std::mutex fetch_mutex_;
  std::size_t offline_misses_ = 0;
};

// Tries the canonical name, then the aliases in order; first success wins.
// Missing only if every title is missing; a transport error without any
// success yields an error outcome (retryable).
FetchOutcome resolve_article(const EntityName& name, TitleResolver& resolver);

// Per-name resolution detail kept for the resolution log and statistics.
struct NameResolution {
  std::string name;
  FetchStatus status = FetchStatus::missing;
  bool via_alias = false;
  std::string alias;  // which alias resolved, when via_alias
  std::string resolved_title;
  std::string error_detail;
};

struct EntityResolution {
  std::string entity_id;
  std::string source_list;
  std::optional<std::string> current_title;  // article of the most current name
  std::vector<std::string> articles;         // distinct resolved titles, in order
  std::vector<NameResolution> names;

  bool resolvable() const { return !articles.empty(); }
};

struct EntityArticles {
  std::vector<Article> articles;  // deduplicated by resolved title
  EntityResolution resolution;
};

// One resolve_article per chain name; duplicate resolved titles collapse to
// the first fetch. The resolution records which article belongs to the most
// current name.
EntityArticles fetch_entity_articles(const EvolutionChain& chain, TitleResolver& resolver);

}  // namespace namevo
