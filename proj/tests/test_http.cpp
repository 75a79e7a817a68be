#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "namevo/corpus.hpp"
#include "namevo/http_source.hpp"

using namespace namevo;

namespace {

// Local stand-in for the wiki API: action=parse with formatversion=2.
class ApiStub {
 public:
  ApiStub() {
    server_.Get("/w/api.php", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      std::string page = req.get_param_value("page");
      nlohmann::json j;
      if (page == "Missing_town") {
        j["error"] = {{"code", "missingtitle"}};
      } else if (page == "Flaky") {
        if (flaky_failures_-- > 0) {
          res.status = 503;
          return;
        }
        j["parse"] = {{"title", "Flaky"}, {"text", "<p>Recovered content.</p>"}};
      } else if (page == "Edo") {
        j["parse"] = {{"title", "Tokyo"},
                      {"text", "<p>Tokyo article body.</p>"},
                      {"redirects", nlohmann::json::array({{{"from", "Edo"}, {"to", "Tokyo"}}})}};
      } else {
        j["parse"] = {{"title", page}, {"text", "<p>Body of " + page + ".</p>"}};
      }
      res.set_content(j.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~ApiStub() {
    server_.stop();
    thread_.join();
  }

  std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/w/api.php"; }
  int hits() const { return hits_; }
  void set_flaky_failures(int n) { flaky_failures_ = n; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::atomic<int> flaky_failures_{0};
};

}  // namespace

TEST_CASE("http source fetches, strips and reports server-side redirects") {
  ApiStub stub;
  HttpPageSource source(stub.base(), "namevo-test/0.1", 1000.0);

  PageLookup page = source.lookup("Plain Town");
  CHECK(page.kind == PageLookup::Kind::page);
  CHECK(page.title == "Plain_Town");
  CHECK(page.text.find("Body of Plain_Town.") != std::string::npos);
  CHECK_FALSE(page.server_redirected);

  PageLookup redirected = source.lookup("Edo");
  CHECK(redirected.kind == PageLookup::Kind::page);
  CHECK(redirected.title == "Tokyo");
  CHECK(redirected.server_redirected);

  CHECK(source.lookup("Missing town").kind == PageLookup::Kind::missing);
}

TEST_CASE("http source integrates with the resolver") {
  ApiStub stub;
  HttpPageSource source(stub.base(), "namevo-test/0.1", 1000.0);
  TitleResolver resolver(nullptr, &source);

  FetchOutcome outcome = resolver.resolve_title("Edo");
  CHECK(outcome.status == FetchStatus::redirected);
  REQUIRE(outcome.article.has_value());
  CHECK(outcome.article->resolved_title == "Tokyo");
  CHECK(outcome.article->body == "Tokyo article body.");
}

TEST_CASE("http source retries 5xx responses with backoff") {
  ApiStub stub;
  stub.set_flaky_failures(1);
  HttpPageSource source(stub.base(), "namevo-test/0.1", 1000.0);
  PageLookup page = source.lookup("Flaky");
  CHECK(page.kind == PageLookup::Kind::page);
  CHECK(page.text.find("Recovered") != std::string::npos);
  CHECK(stub.hits() == 2);
}

TEST_CASE("http source honors the rate limit") {
  ApiStub stub;
  HttpPageSource source(stub.base(), "namevo-test/0.1", 10.0);  // 100 ms between requests
  auto start = std::chrono::steady_clock::now();
  source.lookup("A");
  source.lookup("B");
  source.lookup("C");
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(elapsed >= 0.15);
  CHECK(stub.hits() == 3);
}
