#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "namevo/corpus.hpp"
#include "namevo/errors.hpp"
#include "namevo/listparse.hpp"
#include "test_util.hpp"

using namespace namevo;

namespace {

const std::filesystem::path kFixtures = NAMEVO_FIXTURE_DIR;

// In-memory page source for focused resolution tests.
class MapSource : public PageSource {
 public:
  void add_page(const std::string& title, const std::string& markup) {
    pages_[normalize_title(title)] = PageLookup{PageLookup::Kind::page, title, markup, false, ""};
  }
  void add_redirect(const std::string& title, const std::string& target) {
    pages_[normalize_title(title)] =
        PageLookup{PageLookup::Kind::redirect, target, "", false, ""};
  }
  void fail(const std::string& title, const std::string& detail) {
    pages_[normalize_title(title)] =
        PageLookup{PageLookup::Kind::error, title, "", false, detail};
  }
  PageLookup lookup(const std::string& title) override {
    ++lookups;
    auto it = pages_.find(normalize_title(title));
    if (it == pages_.end()) return PageLookup{PageLookup::Kind::missing, title, "", false, ""};
    return it->second;
  }
  int lookups = 0;

 private:
  std::map<std::string, PageLookup> pages_;
};

}  // namespace

TEST_CASE("title normalization") {
  CHECK(normalize_title("New Amsterdam") == "New_Amsterdam");
  CHECK(normalize_title("new Amsterdam") == "New_Amsterdam");
  CHECK(normalize_title("  edo  ") == "Edo");
  CHECK(normalize_title("Edo") == "Edo");
  CHECK(normalize_title("école") == "École");  // é -> É
  CHECK(normalize_title("a  b\tc") == "A_b_c");
}

TEST_CASE("strip_markup removes tags") {
  CHECK(strip_markup("<p>Hello <b>world</b></p>") == "Hello world");
}

TEST_CASE("strip_markup is idempotent and total on plain text") {
  std::string plain = "Just a plain paragraph with 5 < 6 kept intact.\n\nAnd a second one.";
  CHECK(strip_markup(plain) == plain);
  std::string raw = testutil::slurp(kFixtures / "markup" / "raw_article.html");
  std::string once = strip_markup(raw);
  CHECK(strip_markup(once) == once);
  CHECK(strip_markup("&amp;lt;b&amp;gt;bold&amp;lt;/b&amp;gt;") ==
        strip_markup(strip_markup("&amp;lt;b&amp;gt;bold&amp;lt;/b&amp;gt;")));
}

TEST_CASE("strip_markup handles reference blocks and self-closing tags") {
  CHECK(strip_markup("Before<ref>cite web</ref> after.") == "Before\nafter.");
  CHECK(strip_markup("Before<ref name=\"a\"/> after.") == "Before\nafter.");
  CHECK(strip_markup("No tables <table><tr><td>cell</td></tr></table>left.") ==
        "No tables\nleft.");
}

TEST_CASE("strip_markup regression fixture") {
  std::string raw = testutil::slurp(kFixtures / "markup" / "raw_article.html");
  std::string expected = testutil::slurp(kFixtures / "markup" / "expected.txt");
  REQUIRE_FALSE(raw.empty());
  REQUIRE_FALSE(expected.empty());
  CHECK(strip_markup(raw) == expected);
}

TEST_CASE("stripped bodies carry no tag-like text") {
  for (const auto& entry : std::filesystem::directory_iterator(kFixtures / "pages")) {
    std::string body = strip_markup(testutil::slurp(entry.path()));
    for (std::size_t i = 0; i + 1 < body.size(); ++i) {
      if (body[i] != '<') continue;
      char next = body[i + 1];
      bool tag_like = next == '/' || (next >= 'a' && next <= 'z') || (next >= 'A' && next <= 'Z');
      CHECK_FALSE(tag_like);
    }
  }
}

TEST_CASE("cache round trip, miss, and last write wins") {
  testutil::ScratchDir scratch("cache");
  Cache cache(scratch.path() / "cache");

  CHECK_FALSE(cache.get("Tokyo").has_value());

  CacheEntry entry;
  entry.key = "Tokyo";
  entry.stored_at = 1234;
  entry.outcome.status = FetchStatus::resolved;
  Article article;
  article.requested_title = "Tokyo";
  article.resolved_title = "Tokyo";
  article.body = "Tokyo is the capital of Japan.";
  article.fetched_at = 1234;
  entry.outcome.article = article;
  cache.put(entry);

  auto loaded = cache.get("Tokyo");
  REQUIRE(loaded.has_value());
  CHECK(loaded->outcome.status == FetchStatus::resolved);
  REQUIRE(loaded->outcome.article.has_value());
  CHECK(loaded->outcome.article->body == article.body);
  CHECK(loaded->outcome.article->resolved_title == "Tokyo");
  CHECK(loaded->stored_at == 1234);

  entry.outcome.article->body = "Updated body.";
  entry.stored_at = 5678;
  cache.put(entry);
  auto updated = cache.get("Tokyo");
  REQUIRE(updated.has_value());
  CHECK(updated->outcome.article->body == "Updated body.");
  CHECK(updated->stored_at == 5678);

  // A fresh instance reloads the same state from disk.
  Cache reopened(scratch.path() / "cache");
  auto persisted = reopened.get("Tokyo");
  REQUIRE(persisted.has_value());
  CHECK(persisted->outcome.article->body == "Updated body.");

  CacheEntry missing;
  missing.key = "Atlantis";
  missing.outcome.status = FetchStatus::missing;
  missing.stored_at = 1;
  reopened.put(missing);
  auto missing_loaded = reopened.get("Atlantis");
  REQUIRE(missing_loaded.has_value());
  CHECK(missing_loaded->outcome.status == FetchStatus::missing);
  CHECK_FALSE(missing_loaded->outcome.article.has_value());
}

TEST_CASE("resolver: dedicated article resolves directly") {
  MapSource source;
  source.add_page("New Amsterdam", "<p>New Amsterdam was a Dutch settlement.</p>");
  TitleResolver resolver(nullptr, &source);
  FetchOutcome outcome = resolve_article(EntityName::make("New Amsterdam"), resolver);
  CHECK(outcome.status == FetchStatus::resolved);
  REQUIRE(outcome.article.has_value());
  CHECK(outcome.article->resolved_title == "New Amsterdam");
  CHECK_FALSE(outcome.article->redirected);
  CHECK(outcome.article->body == "New Amsterdam was a Dutch settlement.");
}

TEST_CASE("resolver: redirects are followed and flagged") {
  MapSource source;
  source.add_redirect("Edo", "Tokyo");
  source.add_page("Tokyo", "<p>Tokyo is the capital.</p>");
  TitleResolver resolver(nullptr, &source);
  FetchOutcome outcome = resolve_article(EntityName::make("Edo"), resolver);
  CHECK(outcome.status == FetchStatus::redirected);
  REQUIRE(outcome.article.has_value());
  CHECK(outcome.article->requested_title == "Edo");
  CHECK(outcome.article->resolved_title == "Tokyo");
  CHECK(outcome.article->redirected);
}

TEST_CASE("resolver: aliases are tried after the canonical name") {
  MapSource source;
  source.add_page("Kristiania", "<p>Kristiania article.</p>");
  TitleResolver resolver(nullptr, &source);
  FetchOutcome outcome =
      resolve_article(EntityName::make("Christiania", {"Kristiania"}), resolver);
  CHECK(outcome.status == FetchStatus::resolved);
  REQUIRE(outcome.article.has_value());
  CHECK(outcome.article->resolved_title == "Kristiania");
}

TEST_CASE("resolver: missing when nothing resolves") {
  MapSource source;
  TitleResolver resolver(nullptr, &source);
  FetchOutcome outcome = resolve_article(EntityName::make("Atlantis", {"Insula"}), resolver);
  CHECK(outcome.status == FetchStatus::missing);
  CHECK_FALSE(outcome.article.has_value());
}

TEST_CASE("resolver: redirect loops terminate with an error outcome") {
  MapSource source;
  source.add_redirect("A", "B");
  source.add_redirect("B", "A");
  TitleResolver resolver(nullptr, &source);
  FetchOutcome outcome = resolver.resolve_title("A");
  CHECK(outcome.status == FetchStatus::error);
  CHECK(outcome.error_detail.find("redirect loop") != std::string::npos);

  // Deep but finite chains still resolve (depth 5).
  MapSource chain;
  chain.add_redirect("C1", "C2");
  chain.add_redirect("C2", "C3");
  chain.add_redirect("C3", "C4");
  chain.add_page("C4", "<p>target</p>");
  TitleResolver chain_resolver(nullptr, &chain);
  CHECK(chain_resolver.resolve_title("C1").status == FetchStatus::redirected);
}

TEST_CASE("resolver: transport errors are retryable, not cached") {
  testutil::ScratchDir scratch("errcache");
  Cache cache(scratch.path() / "cache");
  MapSource source;
  source.fail("Flaky", "connection reset");
  TitleResolver resolver(&cache, &source);
  FetchOutcome outcome = resolver.resolve_title("Flaky");
  CHECK(outcome.status == FetchStatus::error);
  CHECK(cache.size() == 0);

  FetchOutcome name_outcome = resolve_article(EntityName::make("Flaky"), resolver);
  CHECK(name_outcome.status == FetchStatus::error);
}

TEST_CASE("resolver: deterministic given a deterministic source") {
  MapSource source;
  source.add_redirect("Edo", "Tokyo");
  source.add_page("Tokyo", "<p>Tokyo.</p>");
  TitleResolver resolver(nullptr, &source);
  FetchOutcome first = resolve_article(EntityName::make("Edo"), resolver);
  FetchOutcome second = resolve_article(EntityName::make("Edo"), resolver);
  CHECK(first.status == second.status);
  CHECK(first.article->resolved_title == second.article->resolved_title);
  CHECK(first.article->body == second.article->body);
}

TEST_CASE("fetch_entity_articles: same target collapses to one article") {
  MapSource source;
  source.add_redirect("Edo", "Tokyo");
  source.add_page("Tokyo", "<p>Tokyo.</p>");
  auto chain = *parse_list_line("Edo → Tokyo (1868)", "l");
  TitleResolver resolver(nullptr, &source);
  EntityArticles result = fetch_entity_articles(chain, resolver);
  CHECK(result.articles.size() == 1);
  CHECK(result.resolution.current_title == "Tokyo");
  CHECK(result.resolution.names.size() == 2);
  CHECK(result.resolution.names[0].status == FetchStatus::redirected);
  CHECK(result.resolution.names[1].status == FetchStatus::resolved);
  CHECK_FALSE(result.resolution.names[0].via_alias);
}

TEST_CASE("fetch_entity_articles: former name with its own article") {
  MapSource source;
  source.add_page("New Amsterdam", "<p>Old article.</p>");
  source.add_page("New York City", "<p>New article.</p>");
  auto chain = *parse_list_line("New Amsterdam → New York City (1664)", "l");
  TitleResolver resolver(nullptr, &source);
  EntityArticles result = fetch_entity_articles(chain, resolver);
  CHECK(result.articles.size() == 2);
  CHECK(result.resolution.articles ==
        std::vector<std::string>{"New Amsterdam", "New York City"});
  CHECK(result.resolution.current_title == "New York City");
}

TEST_CASE("fetch_entity_articles: fully unresolvable entity") {
  MapSource source;
  auto chain = *parse_list_line("Oldtownton → Newtownville (1900)", "l");
  TitleResolver resolver(nullptr, &source);
  EntityArticles result = fetch_entity_articles(chain, resolver);
  CHECK(result.articles.empty());
  CHECK_FALSE(result.resolution.resolvable());
  CHECK_FALSE(result.resolution.current_title.has_value());
  for (const NameResolution& n : result.resolution.names) {
    CHECK(n.status == FetchStatus::missing);
  }
}

TEST_CASE("fetch_entity_articles: alias resolution is recorded") {
  MapSource source;
  source.add_page("Wilson City", "<p>Bratislava article.</p>");
  auto chain = *parse_list_line("Pressburg → Bratislava (Wilson City) (1919)", "l");
  TitleResolver resolver(nullptr, &source);
  EntityArticles result = fetch_entity_articles(chain, resolver);
  REQUIRE(result.articles.size() == 1);
  CHECK(result.resolution.names[1].via_alias);
  CHECK(result.resolution.names[1].alias == "Wilson City");
}

TEST_CASE("fixture source serves pages and redirects") {
  FixturePageSource source(kFixtures / "pages");
  PageLookup page = source.lookup("Swindon");
  CHECK(page.kind == PageLookup::Kind::page);
  CHECK(page.title == "Swindon");
  CHECK(page.text.find("Thamesdown") != std::string::npos);

  PageLookup redirect = source.lookup("Thamesdown");
  CHECK(redirect.kind == PageLookup::Kind::redirect);
  CHECK(redirect.title == "Swindon");

  CHECK(source.lookup("Atlantis").kind == PageLookup::Kind::missing);

  PageLookup unicode = source.lookup("Königsberg");
  CHECK(unicode.kind == PageLookup::Kind::redirect);
  CHECK(unicode.title == "Kaliningrad");
}

TEST_CASE("warmed cache makes resolution fully offline") {
  testutil::ScratchDir scratch("warm");
  MapSource source;
  source.add_redirect("Edo", "Tokyo");
  source.add_page("Tokyo", "<p>Tokyo is the capital.</p>");
  auto chain = *parse_list_line("Edo → Tokyo (1868)", "l");

  {
    Cache cache(scratch.path() / "cache");
    TitleResolver resolver(&cache, &source);
    fetch_entity_articles(chain, resolver);
    CHECK(source.lookups > 0);
  }

  int lookups_after_warmup = source.lookups;
  Cache cache(scratch.path() / "cache");
  TitleResolver offline(&cache, &source);
  EntityArticles result = fetch_entity_articles(chain, offline);
  CHECK(source.lookups == lookups_after_warmup);  // zero network operations
  CHECK(result.articles.size() == 1);
  CHECK(result.articles[0].body == "Tokyo is the capital.");
  CHECK(result.resolution.names[0].status == FetchStatus::redirected);
  CHECK(offline.offline_misses() == 0);
}

TEST_CASE("fetch leaves one cache entry per attempted title") {
  testutil::ScratchDir scratch("entries");
  Cache cache(scratch.path() / "cache");
  MapSource source;
  source.add_page("One", "<p>1</p>");
  source.add_page("Two", "<p>2</p>");
  source.add_page("Three", "<p>3</p>");
  TitleResolver resolver(&cache, &source);
  for (const char* title : {"One", "Two", "Three"}) resolver.resolve_title(title);
  CHECK(cache.size() == 3);
  resolver.resolve_title("Nowhere");  // missing outcomes are cached too
  CHECK(cache.size() == 4);
  resolver.resolve_title("Two");  // cache hit, no new entry
  CHECK(cache.size() == 4);
}

TEST_CASE("offline misses are counted and reported as errors") {
  testutil::ScratchDir scratch("offline");
  Cache cache(scratch.path() / "cache");
  TitleResolver resolver(&cache, nullptr);
  FetchOutcome outcome = resolver.resolve_title("Nowhere");
  CHECK(outcome.status == FetchStatus::error);
  CHECK(outcome.error_detail.find("offline") != std::string::npos);
  CHECK(resolver.offline_misses() == 1);
}
