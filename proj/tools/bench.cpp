// Benchmark: serial reference vs OpenMP-parallel corpus analysis over a
// synthetic in-memory corpus. Build and run manually:
//
//   cmake --build build --target namevo-bench && ./build/tools/namevo-bench

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "namevo/analyze.hpp"
#include "namevo/corpus.hpp"
#include "namevo/segment.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namevo::EntityName;
using namevo::EvolutionChain;
using namevo::PageLookup;

class MemorySource : public namevo::PageSource {
 public:
  void add(const std::string& title, std::string body) {
    pages_[namevo::normalize_title(title)] = std::move(body);
  }
  PageLookup lookup(const std::string& title) override {
    auto it = pages_.find(namevo::normalize_title(title));
    if (it == pages_.end()) return {PageLookup::Kind::missing, title, "", false, ""};
    return {PageLookup::Kind::page, title, it->second, false, ""};
  }

 private:
  std::map<std::string, std::string> pages_;
};

struct Workload {
  std::vector<EvolutionChain> chains;
  MemorySource source;
};

Workload build_workload(int entities, int sentences_per_article) {
  Workload w;
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> year_dist(1000, 2020);
  std::uniform_int_distribution<int> pos_dist(0, sentences_per_article - 1);
  for (int i = 0; i < entities; ++i) {
    std::string old_name = "Oldplace" + std::to_string(i);
    std::string new_name = "Newplace" + std::to_string(i);
    int year = year_dist(rng);
    w.chains.push_back(EvolutionChain::from_names(
        {EntityName::make(old_name), EntityName::make(new_name)}, {year}, "bench"));

    std::string body;
    int mention_at = pos_dist(rng);
    for (int s = 0; s < sentences_per_article; ++s) {
      if (s == mention_at) {
        body += old_name + " was renamed " + new_name + " in " + std::to_string(year) + ". ";
      } else {
        body += "Sentence " + std::to_string(s) +
                " talks about the weather, the river and the market. ";
      }
    }
    w.source.add(new_name, body);
  }
  return w;
}

double run_ms(const std::function<void()>& fn) {
  auto start = std::chrono::steady_clock::now();
  fn();
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int entities = argc > 1 ? std::atoi(argv[1]) : 400;
  int sentences = argc > 2 ? std::atoi(argv[2]) : 120;
  int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

  Workload w = build_workload(entities, sentences);
  namevo::RuleSplitter splitter;

#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
#else
  int max_threads = 1;
#endif
  std::printf("corpus: %d entities x %d sentences, %d repeats, %d hardware threads\n",
              entities, sentences, repeats, max_threads);

  std::size_t serial_records = 0;
  double serial_best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    namevo::TitleResolver resolver(nullptr, &w.source);
    double ms = run_ms([&] {
      auto analysis = namevo::analyze_corpus_serial(w.chains, resolver, splitter);
      serial_records = analysis.records.size();
    });
    serial_best = std::min(serial_best, ms);
  }
  std::printf("%-22s %10.1f ms  (%zu records)\n", "serial reference", serial_best,
              serial_records);

  for (int workers : {1, 2, 4, 0}) {
    std::size_t records = 0;
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
      namevo::TitleResolver resolver(nullptr, &w.source);
      double ms = run_ms([&] {
        auto analysis = namevo::analyze_corpus(w.chains, resolver, splitter, workers);
        records = analysis.records.size();
      });
      best = std::min(best, ms);
    }
    std::string label = workers == 0 ? "openmp (all threads)"
                                     : "openmp (" + std::to_string(workers) + ")";
    std::printf("%-22s %10.1f ms  (%zu records, %.2fx)\n", label.c_str(), best, records,
                serial_best / best);
    if (records != serial_records) {
      std::fprintf(stderr, "record count mismatch against the serial reference\n");
      return 1;
    }
  }
  return 0;
}
