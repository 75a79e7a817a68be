#include "namevo/analyze.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "namevo/errors.hpp"
#include "namevo/window.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace namevo {

namespace {

using ordered_json = nlohmann::ordered_json;

struct EntitySlot {
  EntityResolution resolution;
  std::vector<ExcerptRecord> records;
};

EntitySlot analyze_one(const EvolutionChain& chain, TitleResolver& resolver,
                       const SentenceSplitter& splitter) {
  EntitySlot slot;
  EntityArticles fetched = fetch_entity_articles(chain, resolver);
  slot.resolution = std::move(fetched.resolution);
  std::string current = slot.resolution.current_title.value_or("");
  slot.records = analyze_entity(chain, fetched.articles, current, splitter);
  return slot;
}

CorpusAnalysis collect(std::vector<EntitySlot>&& slots) {
  CorpusAnalysis out;
  for (EntitySlot& slot : slots) {
    out.resolutions.push_back(std::move(slot.resolution));
    for (ExcerptRecord& record : slot.records) out.records.push_back(std::move(record));
  }
  std::sort(out.resolutions.begin(), out.resolutions.end(),
            [](const EntityResolution& a, const EntityResolution& b) {
              return std::tie(a.entity_id, a.source_list) < std::tie(b.entity_id, b.source_list);
            });
  std::sort(out.records.begin(), out.records.end(),
            [](const ExcerptRecord& a, const ExcerptRecord& b) {
              return std::tie(a.entity_id, a.source_list, a.change_index) <
                     std::tie(b.entity_id, b.source_list, b.change_index);
            });
  return out;
}

}  // namespace

CorpusAnalysis analyze_corpus_serial(std::span<const EvolutionChain> chains,
                                     TitleResolver& resolver, const SentenceSplitter& splitter) {
  std::vector<EntitySlot> slots(chains.size());
  for (std::size_t i = 0; i < chains.size(); ++i) {
    slots[i] = analyze_one(chains[i], resolver, splitter);
  }
  return collect(std::move(slots));
}

CorpusAnalysis analyze_corpus(std::span<const EvolutionChain> chains, TitleResolver& resolver,
                              const SentenceSplitter& splitter, int workers) {
  std::vector<EntitySlot> slots(chains.size());
  const long count = static_cast<long>(chains.size());
  // Exceptions must not escape the parallel region; collect and rethrow.
  std::vector<std::string> failures(chains.size());
  std::atomic<bool> failed{false};
  auto run_one = [&](long i) {
    try {
      slots[i] = analyze_one(chains[i], resolver, splitter);
    } catch (const std::exception& e) {
      failures[i] = e.what();
      failed.store(true);
    }
  };
#ifdef _OPENMP
  int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < count; ++i) {
    run_one(i);
  }
#else
  (void)workers;
  for (long i = 0; i < count; ++i) {
    run_one(i);
  }
#endif
  if (failed.load()) {
    for (std::size_t i = 0; i < failures.size(); ++i) {
      if (!failures[i].empty()) {
        throw EnvironmentError("analysis of '" + chains[i].entity_id + "' failed: " + failures[i]);
      }
    }
  }
  return collect(std::move(slots));
}

// --- serialization ----------------------------------------------------------

namespace {

ordered_json resolution_to_json(const EntityResolution& r) {
  ordered_json names = ordered_json::array();
  for (const NameResolution& n : r.names) {
    ordered_json row;
    row["name"] = n.name;
    row["status"] = std::string(to_string(n.status));
    if (n.via_alias) row["alias"] = n.alias;
    if (!n.resolved_title.empty()) row["resolved_title"] = n.resolved_title;
    if (!n.error_detail.empty()) row["error"] = n.error_detail;
    names.push_back(std::move(row));
  }
  ordered_json j;
  j["entity"] = r.entity_id;
  j["source"] = r.source_list;
  j["current_title"] = r.current_title ? ordered_json(*r.current_title) : ordered_json(nullptr);
  j["articles"] = r.articles;
  j["names"] = std::move(names);
  return j;
}

EntityResolution resolution_from_json(const ordered_json& j, int record_no) {
  const std::string where = "resolution record " + std::to_string(record_no);
  if (!j.is_object() || !j.contains("entity") || !j.contains("names")) {
    throw SchemaError(where + ": not a resolution record");
  }
  EntityResolution r;
  r.entity_id = j.value("entity", "");
  r.source_list = j.value("source", "");
  if (j.contains("current_title") && !j["current_title"].is_null()) {
    r.current_title = j["current_title"].get<std::string>();
  }
  if (j.contains("articles")) {
    for (const auto& a : j["articles"]) r.articles.push_back(a.get<std::string>());
  }
  for (const auto& n : j["names"]) {
    NameResolution row;
    row.name = n.value("name", "");
    auto status = fetch_status_from(n.value("status", ""));
    if (!status) throw SchemaError(where + ": unknown status '" + n.value("status", "") + "'");
    row.status = *status;
    if (n.contains("alias")) {
      row.via_alias = true;
      row.alias = n["alias"].get<std::string>();
    }
    row.resolved_title = n.value("resolved_title", "");
    row.error_detail = n.value("error", "");
    r.names.push_back(std::move(row));
  }
  return r;
}

ordered_json record_to_json(const ExcerptRecord& r) {
  ordered_json j;
  j["entity"] = r.entity_id;
  j["source"] = r.source_list;
  j["change_index"] = r.change_index;
  j["preceding"] = r.change.preceding.canonical;
  j["succeeding"] = r.change.succeeding.canonical;
  j["year"] = r.change.year ? ordered_json(*r.change.year) : ordered_json(nullptr);
  j["article"] = r.article;
  j["from"] = r.from;
  j["to"] = r.to;
  j["distance"] = r.distance;
  j["text"] = r.text;
  j["from_current_name_article"] = r.from_current_name_article;
  return j;
}

ExcerptRecord record_from_json(const ordered_json& j, int record_no) {
  const std::string where = "excerpt record " + std::to_string(record_no);
  for (const char* field : {"entity", "change_index", "article", "from", "to", "distance", "text"}) {
    if (!j.contains(field)) throw SchemaError(where + ": field '" + field + "' missing");
  }
  ExcerptRecord r;
  r.entity_id = j["entity"].get<std::string>();
  r.source_list = j.value("source", "");
  r.change_index = j["change_index"].get<int>();
  r.change.preceding = EntityName::make(j.value("preceding", ""));
  r.change.succeeding = EntityName::make(j.value("succeeding", ""));
  if (j.contains("year") && !j["year"].is_null()) r.change.year = j["year"].get<int>();
  r.article = j["article"].get<std::string>();
  r.from = j["from"].get<int>();
  r.to = j["to"].get<int>();
  r.distance = j["distance"].get<int>();
  r.text = j["text"].get<std::string>();
  r.from_current_name_article = j.value("from_current_name_article", false);
  if (r.distance != r.to - r.from || r.distance < 0) {
    throw SchemaError(where + ": distance does not match window");
  }
  return r;
}

template <typename T, typename Fn>
std::vector<T> read_jsonl(std::istream& in, Fn&& from_json) {
  std::vector<T> out;
  std::string line;
  int record_no = 0;
  while (std::getline(in, line)) {
    ++record_no;
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw SchemaError("record " + std::to_string(record_no) + ": invalid JSON");
    }
    out.push_back(from_json(j, record_no));
  }
  return out;
}

}  // namespace

void write_resolution_log(std::ostream& out, const std::vector<EntityResolution>& resolutions) {
  for (const EntityResolution& r : resolutions) out << resolution_to_json(r).dump() << '\n';
}

std::vector<EntityResolution> read_resolution_log(std::istream& in) {
  return read_jsonl<EntityResolution>(in, resolution_from_json);
}

void write_excerpt_records(std::ostream& out, const std::vector<ExcerptRecord>& records) {
  for (const ExcerptRecord& r : records) out << record_to_json(r).dump() << '\n';
}

std::vector<ExcerptRecord> read_excerpt_records(std::istream& in) {
  return read_jsonl<ExcerptRecord>(in, record_from_json);
}

}  // namespace namevo
