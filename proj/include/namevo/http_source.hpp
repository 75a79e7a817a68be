#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

#include "namevo/corpus.hpp"

// Live wiki API client. Fetches rendered page HTML via
// api.php?action=parse&prop=text with server-side redirect resolution,
// honors a global rate limit and backs off on 429/5xx responses. Built for
// politeness, not throughput.

namespace namevo {

class HttpPageSource final : public PageSource {
 public:
  HttpPageSource(std::string api_base, std::string user_agent, double requests_per_second);
  ~HttpPageSource() override;

  PageLookup lookup(const std::string& title) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace namevo
