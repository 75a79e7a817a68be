#include "namevo/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "namevo/errors.hpp"
#include "namevo/text.hpp"

namespace namevo {

std::string_view to_string(FetchStatus status) {
  switch (status) {
    case FetchStatus::resolved:
      return "resolved";
    case FetchStatus::redirected:
      return "redirected";
    case FetchStatus::missing:
      return "missing";
    case FetchStatus::error:
      return "error";
  }
  return "error";
}

std::optional<FetchStatus> fetch_status_from(std::string_view s) {
  if (s == "resolved") return FetchStatus::resolved;
  if (s == "redirected") return FetchStatus::redirected;
  if (s == "missing") return FetchStatus::missing;
  if (s == "error") return FetchStatus::error;
  return std::nullopt;
}

std::string normalize_title(std::string_view title) {
  std::string collapsed = normalize_whitespace(title);
  std::string underscored;
  underscored.reserve(collapsed.size());
  for (char c : collapsed) underscored.push_back(c == ' ' ? '_' : c);
  // Wiki titles are case-insensitive in the first letter only.
  std::vector<char32_t> cps = decode_utf8(underscored);
  if (!cps.empty()) {
    char32_t folded = fold_case(cps[0]);
    if (folded == cps[0]) {
      // Already lower or caseless: map to the canonical upper-case form.
      for (char32_t upper = U'A'; upper <= U'Z'; ++upper) {
        if (fold_case(upper) == cps[0]) {
          cps[0] = upper;
          break;
        }
      }
      if (cps[0] >= 0x80) {
        for (char32_t upper = 0xC0; upper <= 0x42F; ++upper) {
          if (is_upper(upper) && fold_case(upper) == cps[0]) {
            cps[0] = upper;
            break;
          }
        }
      }
    }
  }
  return encode_utf8(cps);
}

// --- markup stripping ---------------------------------------------------

namespace {

bool tag_name_matches(std::string_view text, std::size_t pos, std::string_view name) {
  if (pos + name.size() > text.size()) return false;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != name[i]) return false;
  }
  std::size_t end = pos + name.size();
  return end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
}

// Removes <name ...> ... </name> blocks, tolerating one level of nesting of
// the same element (tables inside tables).
std::string remove_element_blocks(std::string_view text, std::string_view name) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<' && i + 1 < text.size() && tag_name_matches(text, i + 1, name)) {
      int depth = 1;
      std::size_t j = text.find('>', i);
      if (j == std::string_view::npos) break;  // truncated tag: drop the rest
      if (j > 0 && text[j - 1] == '/') {       // self-closing, e.g. <ref name="a"/>
        i = j + 1;
        out.push_back('\n');
        continue;
      }
      ++j;
      while (j < text.size() && depth > 0) {
        if (text[j] == '<') {
          if (j + 1 < text.size() && tag_name_matches(text, j + 1, name)) {
            ++depth;
          } else if (j + 1 < text.size() && text[j + 1] == '/' &&
                     tag_name_matches(text, j + 2, name)) {
            --depth;
          }
        }
        ++j;
      }
      // Skip to the end of the closing tag.
      std::size_t close = text.find('>', j > 0 ? j - 1 : j);
      i = close == std::string_view::npos ? text.size() : close + 1;
      out.push_back('\n');
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

std::string remove_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 4, "<!--") == 0) {
      std::size_t end = text.find("-->", i + 4);
      i = end == std::string_view::npos ? text.size() : end + 3;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

bool is_block_tag(std::string_view tag) {
  static const char* names[] = {"p",  "div", "br",    "li", "ul",    "ol",  "tr",
                                "h1", "h2",  "h3",    "h4", "h5",    "h6",  "table",
                                "td", "th",  "blockquote", "section", "hr"};
  std::string lowered;
  for (char c : tag) {
    if (c == '/' || std::isspace(static_cast<unsigned char>(c))) continue;
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (const char* name : names) {
    if (lowered == name) return true;
  }
  return false;
}

// Drops every remaining <...> tag; block-level tags leave a newline (a
// paragraph close leaves a blank line) so sentence structure survives.
std::string remove_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '<' && i + 1 < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '/' ||
         text[i + 1] == '!')) {
      std::size_t end = text.find('>', i);
      if (end == std::string_view::npos) break;  // truncated tag
      std::string_view inside = text.substr(i + 1, end - i - 1);
      std::string_view tag_name = inside;
      std::size_t space = inside.find_first_of(" \t\n");
      if (space != std::string_view::npos) tag_name = inside.substr(0, space);
      if (tag_name == "/p" || tag_name == "/P") {
        out += "\n\n";
      } else if (is_block_tag(tag_name)) {
        out.push_back('\n');
      }
      i = end + 1;
    } else {
      out.push_back(c);
      ++i;
    }
  }
  return out;
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      ++i;
      continue;
    }
    std::string_view name = text.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    if (name == "amp") {
      cp = U'&';
    } else if (name == "lt") {
      cp = U'<';
    } else if (name == "gt") {
      cp = U'>';
    } else if (name == "quot") {
      cp = U'"';
    } else if (name == "apos") {
      cp = U'\'';
    } else if (name == "nbsp") {
      cp = U' ';
    } else if (name == "ndash") {
      cp = 0x2013;
    } else if (name == "mdash") {
      cp = 0x2014;
    } else if (!name.empty() && name[0] == '#') {
      bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      char32_t value = 0;
      bool ok = name.size() > (hex ? 2u : 1u);
      for (std::size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
        char d = name[k];
        int digit;
        if (d >= '0' && d <= '9') {
          digit = d - '0';
        } else if (hex && d >= 'a' && d <= 'f') {
          digit = d - 'a' + 10;
        } else if (hex && d >= 'A' && d <= 'F') {
          digit = d - 'A' + 10;
        } else {
          ok = false;
          break;
        }
        value = value * (hex ? 16 : 10) + digit;
      }
      if (ok && value > 0 && value <= 0x10FFFF) cp = value;
    }
    if (cp != 0) {
      append_utf8(out, cp);
      i = semi + 1;
    } else {
      out.push_back('&');
      ++i;
    }
  }
  return out;
}

// Citation markers like [12].
std::string remove_reference_markers(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '[') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
      if (j > i + 1 && j < text.size() && text[j] == ']') {
        i = j + 1;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string tidy_whitespace(std::string_view text) {
  // Trim line ends, collapse 2+ blank lines to one, trim the document.
  std::string out;
  out.reserve(text.size());
  int pending_newlines = 0;
  std::string line;
  auto flush_line = [&]() {
    std::string trimmed = trim(line);
    line.clear();
    if (trimmed.empty()) {
      if (!out.empty()) pending_newlines = 1;  // one or more empty lines: one blank line
      return;
    }
    if (!out.empty()) out.append(pending_newlines > 0 ? 2 : 1, '\n');
    pending_newlines = 0;
    out += trimmed;
  };
  for (char c : text) {
    if (c == '\n') {
      flush_line();
    } else {
      line.push_back(c);
    }
  }
  flush_line();
  return out;
}

std::string strip_markup_once(std::string_view raw) {
  std::string text = remove_comments(raw);
  for (const char* block : {"script", "style", "table", "ref", "head"}) {
    text = remove_element_blocks(text, block);
  }
  text = remove_tags(text);
  text = decode_entities(text);
  text = remove_reference_markers(text);
  return tidy_whitespace(text);
}

}  // namespace

std::string strip_markup(std::string_view raw) {
  // Iterate to a fixed point so that decoded entities which themselves form
  // markup get stripped too; this is what makes the operation idempotent.
  std::string current(raw);
  for (int round = 0; round < 4; ++round) {
    std::string next = strip_markup_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

// --- fixture source -------------------------------------------------------

FixturePageSource::FixturePageSource(std::filesystem::path dir) : dir_(std::move(dir)) {}

PageLookup FixturePageSource::lookup(const std::string& title) {
  std::string key = normalize_title(title);
  std::string display = key;
  std::replace(display.begin(), display.end(), '_', ' ');
  std::string base = percent_encode_filename(key);
  std::filesystem::path path;
  for (const char* ext : {".html", ".txt"}) {
    std::filesystem::path candidate = dir_ / (base + ext);
    if (std::filesystem::exists(candidate)) {
      path = candidate;
      break;
    }
  }
  if (path.empty()) return PageLookup{PageLookup::Kind::missing, display, "", false, ""};

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return PageLookup{PageLookup::Kind::error, display, "", false,
                      "cannot read fixture page: " + path.string()};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();

  std::string head = trim(content.substr(0, 256));
  if (starts_with_icase(head, "#REDIRECT")) {
    std::string rest = trim(head.substr(9));
    std::string target;
    if (rest.size() >= 2 && rest[0] == '[' && rest[1] == '[') {
      std::size_t close = rest.find("]]");
      target = rest.substr(2, close == std::string::npos ? std::string::npos : close - 2);
    } else {
      target = rest.substr(0, rest.find('\n'));
    }
    target = normalize_whitespace(target);
    if (target.empty()) {
      return PageLookup{PageLookup::Kind::error, display, "", false,
                        "redirect without target in " + path.string()};
    }
    return PageLookup{PageLookup::Kind::redirect, target, "", false, ""};
  }
  return PageLookup{PageLookup::Kind::page, display, std::move(content), false, ""};
}

// --- cache ----------------------------------------------------------------

namespace {

std::string sanitize_field(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

std::string Cache::page_filename(std::string_view key) {
  return percent_encode_filename(key) + ".txt";
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_ / "pages", ec);
  if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());

  std::ifstream manifest(dir_ / "manifest");
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 4) continue;  // tolerate foreign lines
    auto status = fetch_status_from(fields[1]);
    if (!status) continue;
    Row row;
    row.status = *status;
    row.resolved_title = fields[2];
    row.stored_at = std::strtoll(fields[3].c_str(), nullptr, 10);
    entries_[fields[0]] = std::move(row);  // last record wins
  }
}

std::size_t Cache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

std::optional<CacheEntry> Cache::get(const std::string& key) const {
  Row row;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    row = it->second;
  }

  CacheEntry entry;
  entry.key = key;
  entry.stored_at = row.stored_at;
  entry.outcome.status = row.status;
  if (row.status == FetchStatus::resolved || row.status == FetchStatus::redirected) {
    std::filesystem::path page = dir_ / "pages" / page_filename(key);
    std::ifstream in(page, std::ios::binary);
    if (!in) throw IoError("cache page missing on disk: " + page.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();

    Article article;
    std::string requested = key;
    std::replace(requested.begin(), requested.end(), '_', ' ');
    article.requested_title = requested;
    article.resolved_title = row.resolved_title;
    article.redirected = row.status == FetchStatus::redirected;
    article.body = buffer.str();
    article.fetched_at = row.stored_at;
    entry.outcome.article = std::move(article);
  }
  return entry;
}

void Cache::put(const CacheEntry& entry) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (entry.outcome.article) {
    std::filesystem::path page = dir_ / "pages" / page_filename(entry.key);
    std::ofstream out(page, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write cache page: " + page.string());
    out << entry.outcome.article->body;
  }
  std::string resolved =
      entry.outcome.article ? entry.outcome.article->resolved_title : std::string();
  std::ofstream manifest(dir_ / "manifest", std::ios::app);
  if (!manifest) throw IoError("cannot append cache manifest in " + dir_.string());
  manifest << sanitize_field(entry.key) << '\t' << to_string(entry.outcome.status) << '\t'
           << sanitize_field(resolved) << '\t' << entry.stored_at << '\n';
  Row row;
  row.status = entry.outcome.status;
  row.resolved_title = resolved;
  row.stored_at = entry.stored_at;
  entries_[entry.key] = std::move(row);
}

// --- resolution -------------------------------------------------------------

TitleResolver::TitleResolver(Cache* cache, PageSource* upstream)
    : cache_(cache), upstream_(upstream) {}

FetchOutcome TitleResolver::resolve_title(const std::string& title) {
  std::string key = normalize_title(title);
  if (cache_) {
    if (auto entry = cache_->get(key)) {
      FetchOutcome outcome = entry->outcome;
      if (outcome.article) outcome.article->requested_title = normalize_whitespace(title);
      return outcome;
    }
  }
  if (!upstream_) {
    std::lock_guard<std::mutex> lock(fetch_mutex_);
    ++offline_misses_;
    FetchOutcome outcome;
    outcome.status = FetchStatus::error;
    outcome.error_detail = "offline cache miss for '" + key + "'";
    return outcome;
  }

  std::lock_guard<std::mutex> lock(fetch_mutex_);
  // Re-check under the lock; another worker may have fetched it meanwhile.
  if (cache_) {
    if (auto entry = cache_->get(key)) {
      FetchOutcome outcome = entry->outcome;
      if (outcome.article) outcome.article->requested_title = normalize_whitespace(title);
      return outcome;
    }
  }

  FetchOutcome outcome;
  std::string current = key;
  bool hopped = false;
  for (int hops = 0;; ++hops) {
    if (hops > 5) {
      outcome.status = FetchStatus::error;
      outcome.error_detail = "redirect loop starting at '" + key + "'";
      return outcome;  // not cached: retryable
    }
    PageLookup page = upstream_->lookup(current);
    switch (page.kind) {
      case PageLookup::Kind::redirect:
        hopped = true;
        current = normalize_title(page.title);
        continue;
      case PageLookup::Kind::missing:
        outcome.status = FetchStatus::missing;
        break;
      case PageLookup::Kind::error:
        outcome.status = FetchStatus::error;
        outcome.error_detail = page.detail;
        return outcome;  // not cached: retryable
      case PageLookup::Kind::page: {
        Article article;
        article.requested_title = normalize_whitespace(title);
        article.resolved_title = page.title;
        article.redirected =
            hopped || page.server_redirected || normalize_title(page.title) != key;
        article.body = strip_markup(page.text);
        article.fetched_at = static_cast<std::int64_t>(std::time(nullptr));
        outcome.status = article.redirected ? FetchStatus::redirected : FetchStatus::resolved;
        outcome.article = std::move(article);
        break;
      }
    }
    break;
  }

  if (cache_) {
    CacheEntry entry;
    entry.key = key;
    entry.outcome = outcome;
    entry.stored_at = outcome.article ? outcome.article->fetched_at
                                      : static_cast<std::int64_t>(std::time(nullptr));
    cache_->put(entry);
  }
  return outcome;
}

FetchOutcome resolve_article(const EntityName& name, TitleResolver& resolver) {
  std::vector<std::string> titles;
  titles.push_back(name.canonical);
  titles.insert(titles.end(), name.aliases.begin(), name.aliases.end());

  std::optional<FetchOutcome> first_error;
  for (const std::string& title : titles) {
    FetchOutcome outcome = resolver.resolve_title(title);
    if (outcome.status == FetchStatus::resolved || outcome.status == FetchStatus::redirected) {
      return outcome;
    }
    if (outcome.status == FetchStatus::error && !first_error) first_error = std::move(outcome);
  }
  if (first_error) return *first_error;
  FetchOutcome missing;
  missing.status = FetchStatus::missing;
  return missing;
}

EntityArticles fetch_entity_articles(const EvolutionChain& chain, TitleResolver& resolver) {
  EntityArticles result;
  result.resolution.entity_id = chain.entity_id;
  result.resolution.source_list = chain.source_list;

  std::unordered_set<std::string> seen_titles;
  for (std::size_t i = 0; i < chain.names.size(); ++i) {
    const EntityName& name = chain.names[i];
    NameResolution row;
    row.name = name.canonical;

    // Canonical first, then aliases; remember which title won.
    FetchOutcome outcome = resolver.resolve_title(name.canonical);
    if (outcome.status != FetchStatus::resolved && outcome.status != FetchStatus::redirected) {
      for (const std::string& alias : name.aliases) {
        FetchOutcome via = resolver.resolve_title(alias);
        if (via.status == FetchStatus::resolved || via.status == FetchStatus::redirected) {
          outcome = std::move(via);
          row.via_alias = true;
          row.alias = alias;
          break;
        }
        if (via.status == FetchStatus::error && outcome.status == FetchStatus::missing) {
          outcome = std::move(via);
        }
      }
    }

    row.status = outcome.status;
    row.error_detail = outcome.error_detail;
    if (outcome.article) {
      row.resolved_title = outcome.article->resolved_title;
      if (seen_titles.insert(outcome.article->resolved_title).second) {
        result.resolution.articles.push_back(outcome.article->resolved_title);
        result.articles.push_back(*outcome.article);
      }
      if (i + 1 == chain.names.size()) {
        result.resolution.current_title = outcome.article->resolved_title;
      }
    }
    result.resolution.names.push_back(std::move(row));
  }
  return result;
}

}  // namespace namevo
