#include "namevo/http_source.hpp"

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "namevo/text.hpp"

namespace namevo {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // /w/api.php
  bool https = false;
};

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl out;
  std::size_t scheme_end = url.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  out.https = url.rfind("https://", 0) == 0;
  std::size_t path_start = url.find('/', host_start);
  if (path_start == std::string::npos) {
    out.origin = url;
    out.path = "/";
  } else {
    out.origin = url.substr(0, path_start);
    out.path = url.substr(path_start);
  }
  return out;
}

std::string url_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    unsigned char b = static_cast<unsigned char>(c);
    if ((b >= 'A' && b <= 'Z') || (b >= 'a' && b <= 'z') || (b >= '0' && b <= '9') ||
        b == '-' || b == '_' || b == '.' || b == '~') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(hex[b >> 4]);
      out.push_back(hex[b & 0xF]);
    }
  }
  return out;
}

}  // namespace

struct HttpPageSource::Impl {
  ParsedUrl url;
  std::string user_agent;
  std::chrono::milliseconds min_interval{1000};
  std::mutex mutex;
  std::chrono::steady_clock::time_point last_request{};
  std::unique_ptr<httplib::Client> client;

  void pace() {
    auto now = std::chrono::steady_clock::now();
    if (last_request.time_since_epoch().count() != 0) {
      auto elapsed = now - last_request;
      if (elapsed < min_interval) {
        std::this_thread::sleep_for(min_interval - elapsed);
      }
    }
    last_request = std::chrono::steady_clock::now();
  }
};

HttpPageSource::HttpPageSource(std::string api_base, std::string user_agent,
                               double requests_per_second)
    : impl_(std::make_unique<Impl>()) {
  impl_->url = parse_url(api_base);
  impl_->user_agent = std::move(user_agent);
  if (requests_per_second > 0) {
    impl_->min_interval =
        std::chrono::milliseconds(static_cast<long>(1000.0 / requests_per_second));
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (impl_->url.https) return;  // reported per-lookup below
#endif
  impl_->client = std::make_unique<httplib::Client>(impl_->url.origin);
  impl_->client->set_connection_timeout(15, 0);
  impl_->client->set_read_timeout(30, 0);
  impl_->client->set_follow_location(true);
  impl_->client->set_default_headers({{"User-Agent", impl_->user_agent}});
}

HttpPageSource::~HttpPageSource() = default;

PageLookup HttpPageSource::lookup(const std::string& title) {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  if (!impl_->client) {
    return PageLookup{PageLookup::Kind::error, title, "", false,
                      "built without TLS support; https API base unavailable"};
  }

  std::string query = impl_->url.path +
                      "?action=parse&format=json&formatversion=2&redirects=1&prop=text&page=" +
                      url_encode(normalize_title(title));

  std::string body;
  std::string failure;
  for (int attempt = 0; attempt < 3; ++attempt) {
    impl_->pace();
    httplib::Result res = impl_->client->Get(query);
    if (!res) {
      failure = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      failure = "HTTP " + std::to_string(res->status);
    } else if (res->status != 200) {
      return PageLookup{PageLookup::Kind::error, title, "", false,
                        "HTTP " + std::to_string(res->status)};
    } else {
      body = res->body;
      failure.clear();
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(500 * (1 << attempt)));
  }
  if (!failure.empty()) {
    return PageLookup{PageLookup::Kind::error, title, "", false, failure};
  }

  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return PageLookup{PageLookup::Kind::error, title, "", false, "unparseable API response"};
  }
  if (j.contains("error")) {
    std::string code = j["error"].value("code", "");
    if (code == "missingtitle" || code == "invalidtitle") {
      return PageLookup{PageLookup::Kind::missing, title, "", false, ""};
    }
    return PageLookup{PageLookup::Kind::error, title, "", false, "API error: " + code};
  }
  if (!j.contains("parse")) {
    return PageLookup{PageLookup::Kind::error, title, "", false, "unexpected API response"};
  }
  const auto& parse = j["parse"];
  PageLookup out;
  out.kind = PageLookup::Kind::page;
  out.title = parse.value("title", title);
  out.text = parse.value("text", "");
  out.server_redirected = parse.contains("redirects") && !parse["redirects"].empty();
  return out;
}

}  // namespace namevo
