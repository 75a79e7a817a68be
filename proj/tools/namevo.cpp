// namevo: extract entity name-evolution knowledge from wiki-style corpora.
//
// Pipeline stages communicate through files so the slow fetch stage is
// resumable and every later stage can run fully offline:
//
//   parse    list pages -> chains.jsonl
//   fetch    chains.jsonl -> warmed page cache + resolution log
//   analyze  chains.jsonl + cache -> excerpts.jsonl
//   stats    chains + excerpts + log -> report (table, JSON, CSV)
//   export   chains + excerpts -> knowledge-base file

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "namevo/analyze.hpp"
#include "namevo/config.hpp"
#include "namevo/corpus.hpp"
#include "namevo/errors.hpp"
#include "namevo/http_source.hpp"
#include "namevo/listparse.hpp"
#include "namevo/segment.hpp"
#include "namevo/stats.hpp"
#include "namevo/window.hpp"

namespace {

using namevo::Config;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitEnvironment = 3;
constexpr int kExitInternal = 4;

std::string slurp_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw namevo::IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw namevo::IoError("cannot write " + path.string());
  return out;
}

std::vector<namevo::EvolutionChain> load_chains(const std::filesystem::path& path,
                                                namevo::Warnings* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw namevo::IoError("cannot read chains file " + path.string());
  return namevo::load_curated_changes(in, warnings);
}

void print_warnings(const namevo::Warnings& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

namevo::RuleSplitter make_splitter(const Config& config) {
  if (config.abbreviations_path) {
    return namevo::RuleSplitter::from_file(*config.abbreviations_path);
  }
  return namevo::RuleSplitter();
}

struct Sources {
  std::unique_ptr<namevo::PageSource> upstream;  // null when offline
};

Sources make_upstream(const Config& config, const std::string& fixture_dir) {
  Sources sources;
  if (!fixture_dir.empty()) {
    sources.upstream = std::make_unique<namevo::FixturePageSource>(fixture_dir);
  } else if (!config.offline) {
    sources.upstream = std::make_unique<namevo::HttpPageSource>(
        config.api_base, config.user_agent, config.rate_limit);
  }
  return sources;
}

int cmd_parse(const std::vector<std::string>& inputs, const std::string& out_path) {
  namevo::Warnings warnings;
  std::vector<namevo::EvolutionChain> chains;
  for (const std::string& input : inputs) {
    std::filesystem::path path(input);
    std::string document = slurp_file(path);
    std::string source = path.stem().string();
    try {
      auto parsed = namevo::parse_list_page(document, source, &warnings);
      chains.insert(chains.end(), parsed.begin(), parsed.end());
    } catch (const namevo::MalformedLineError& e) {
      throw namevo::MalformedLineError(path.string() + ": " + e.what(), e.line());
    }
  }
  auto deduped = namevo::dedupe_chains(chains, &warnings);
  print_warnings(warnings);

  auto out = open_output(out_path);
  namevo::write_chains(out, deduped);
  std::cerr << "parsed " << chains.size() << " chains from " << inputs.size()
            << " list(s), " << deduped.size() << " after deduplication\n";
  return kExitOk;
}

int cmd_fetch(const Config& config, const std::string& chains_path,
              const std::string& fixture_dir, const std::string& log_path) {
  namevo::Warnings warnings;
  auto chains = load_chains(chains_path, &warnings);
  print_warnings(warnings);

  namevo::Cache cache(config.cache_dir);
  Sources sources = make_upstream(config, fixture_dir);
  namevo::TitleResolver resolver(&cache, sources.upstream.get());

  std::vector<namevo::EntityResolution> resolutions;
  long long resolved = 0, redirected = 0, missing = 0, errors = 0;
  std::vector<std::string> unresolved;
  for (const namevo::EvolutionChain& chain : chains) {
    namevo::EntityArticles fetched = namevo::fetch_entity_articles(chain, resolver);
    for (const namevo::NameResolution& n : fetched.resolution.names) {
      switch (n.status) {
        case namevo::FetchStatus::resolved: ++resolved; break;
        case namevo::FetchStatus::redirected: ++redirected; break;
        case namevo::FetchStatus::missing: ++missing; break;
        case namevo::FetchStatus::error: ++errors; break;
      }
    }
    if (!fetched.resolution.resolvable()) unresolved.push_back(chain.entity_id);
    resolutions.push_back(std::move(fetched.resolution));
  }
  std::sort(resolutions.begin(), resolutions.end(),
            [](const namevo::EntityResolution& a, const namevo::EntityResolution& b) {
              return std::tie(a.entity_id, a.source_list) < std::tie(b.entity_id, b.source_list);
            });

  if (!log_path.empty()) {
    auto out = open_output(log_path);
    namevo::write_resolution_log(out, resolutions);
  }

  std::cout << "names: " << resolved << " resolved, " << redirected << " redirected, "
            << missing << " missing, " << errors << " errors\n";
  std::cout << "cache: " << cache.size() << " entries in " << cache.dir().string() << '\n';
  if (!unresolved.empty()) {
    std::cout << "unresolved entities (" << unresolved.size() << "):\n";
    for (const std::string& id : unresolved) std::cout << "  " << id << '\n';
  }

  if (config.offline && resolver.offline_misses() > 0) {
    throw namevo::EnvironmentError("offline fetch with an incomplete cache (" +
                                   std::to_string(resolver.offline_misses()) + " misses)");
  }
  if (errors > 0 && !config.offline) {
    std::cerr << "warning: " << errors << " name(s) failed with transport errors; rerun fetch to retry\n";
  }
  return kExitOk;
}

int cmd_analyze(const Config& config, const std::string& chains_path,
                const std::string& fixture_dir, const std::string& out_path) {
  namevo::Warnings warnings;
  auto chains = load_chains(chains_path, &warnings);
  print_warnings(warnings);

  namevo::Cache cache(config.cache_dir);
  Sources sources = make_upstream(config, fixture_dir);
  namevo::TitleResolver resolver(&cache, sources.upstream.get());
  namevo::RuleSplitter splitter = make_splitter(config);

  namevo::CorpusAnalysis analysis =
      namevo::analyze_corpus(chains, resolver, splitter, config.workers);
  if (config.offline && resolver.offline_misses() > 0) {
    throw namevo::EnvironmentError(
        "offline analysis hit " + std::to_string(resolver.offline_misses()) +
        " cache miss(es); run fetch first");
  }

  auto out = open_output(out_path);
  namevo::write_excerpt_records(out, analysis.records);
  std::cout << "analyzed " << chains.size() << " entities, " << analysis.records.size()
            << " mentioned changes written to " << out_path << '\n';
  return kExitOk;
}

int cmd_stats(const std::string& chains_path, const std::string& excerpts_path,
              const std::string& log_path, const std::string& json_path,
              const std::string& csv_path, const std::string& table_path) {
  namevo::Warnings warnings;
  auto chains = load_chains(chains_path, &warnings);
  print_warnings(warnings);

  std::ifstream excerpts_in(excerpts_path);
  if (!excerpts_in) throw namevo::IoError("cannot read excerpts file " + excerpts_path);
  auto records = namevo::read_excerpt_records(excerpts_in);

  std::vector<namevo::EntityResolution> resolutions;
  if (!log_path.empty()) {
    std::ifstream log_in(log_path);
    if (!log_in) throw namevo::IoError("cannot read resolution log " + log_path);
    resolutions = namevo::read_resolution_log(log_in);
  }

  // Every excerpt must reference a known chain and change position.
  std::map<std::pair<std::string, std::string>, std::size_t> change_counts;
  for (const namevo::EvolutionChain& chain : chains) {
    change_counts[{chain.entity_id, chain.source_list}] = chain.changes.size();
  }
  for (const namevo::ExcerptRecord& record : records) {
    auto it = change_counts.find({record.entity_id, record.source_list});
    if (it == change_counts.end()) {
      throw namevo::InputError("excerpt references unknown chain '" + record.entity_id +
                               "' (source '" + record.source_list + "')");
    }
    if (record.change_index < 0 || static_cast<std::size_t>(record.change_index) >= it->second) {
      throw namevo::InputError("excerpt references change " +
                               std::to_string(record.change_index) + " of '" +
                               record.entity_id + "' which has only " +
                               std::to_string(it->second) + " changes");
    }
  }

  namevo::StatsReport report = namevo::aggregate(chains, resolutions, records);

  std::string table = namevo::render_text_table(report);
  if (table_path.empty()) {
    std::cout << table;
  } else {
    open_output(table_path) << table;
  }
  if (!json_path.empty()) {
    open_output(json_path) << namevo::report_to_json(report).dump(2) << '\n';
  }
  if (!csv_path.empty()) {
    open_output(csv_path) << namevo::histogram_csv(report);
  }
  return kExitOk;
}

int cmd_export(const std::string& chains_path, const std::string& excerpts_path,
               const std::string& out_path) {
  namevo::Warnings warnings;
  auto chains = load_chains(chains_path, &warnings);
  print_warnings(warnings);

  std::ifstream excerpts_in(excerpts_path);
  if (!excerpts_in) throw namevo::IoError("cannot read excerpts file " + excerpts_path);
  auto records = namevo::read_excerpt_records(excerpts_in);

  std::map<std::tuple<std::string, std::string, int>, const namevo::ExcerptRecord*> best;
  for (const namevo::ExcerptRecord& record : records) {
    best[{record.entity_id, record.source_list, record.change_index}] = &record;
  }

  std::sort(chains.begin(), chains.end(),
            [](const namevo::EvolutionChain& a, const namevo::EvolutionChain& b) {
              return std::tie(a.entity_id, a.source_list) < std::tie(b.entity_id, b.source_list);
            });

  auto out = open_output(out_path);
  for (const namevo::EvolutionChain& chain : chains) {
    ordered_json names = ordered_json::array();
    for (const namevo::EntityName& name : chain.names) {
      names.push_back(ordered_json{{"name", name.canonical}, {"aliases", name.aliases}});
    }
    ordered_json changes = ordered_json::array();
    for (std::size_t i = 0; i < chain.changes.size(); ++i) {
      const namevo::NameChange& change = chain.changes[i];
      ordered_json entry;
      entry["preceding"] = change.preceding.canonical;
      entry["succeeding"] = change.succeeding.canonical;
      entry["year"] = change.year ? ordered_json(*change.year) : ordered_json(nullptr);
      auto it = best.find({chain.entity_id, chain.source_list, static_cast<int>(i)});
      if (it != best.end()) {
        const namevo::ExcerptRecord* record = it->second;
        entry["excerpt"] = ordered_json{{"article", record->article},
                                        {"from", record->from},
                                        {"to", record->to},
                                        {"distance", record->distance},
                                        {"text", record->text},
                                        {"from_current_name_article",
                                         record->from_current_name_article}};
      } else {
        entry["excerpt"] = nullptr;
      }
      changes.push_back(std::move(entry));
    }
    ordered_json j;
    j["entity"] = chain.entity_id;
    j["source"] = chain.source_list;
    j["names"] = std::move(names);
    j["changes"] = std::move(changes);
    out << j.dump() << '\n';
  }
  std::cout << "exported " << chains.size() << " entities to " << out_path << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity name-evolution extraction from wiki-style corpora"};
  app.require_subcommand(1);

  std::string config_path;
  std::string cache_dir;
  std::string api_base;
  std::string user_agent;
  std::string abbreviations;
  double rate_limit = 0;
  int workers = -1;
  bool offline = false;

  app.add_option("--config", config_path, "JSON config file");
  auto* flag_cache = app.add_option("--cache-dir", cache_dir, "page cache directory");
  auto* flag_api = app.add_option("--api-base", api_base, "wiki API endpoint");
  auto* flag_ua = app.add_option("--user-agent", user_agent, "HTTP User-Agent");
  auto* flag_rate = app.add_option("--rate-limit", rate_limit, "max requests per second");
  auto* flag_workers = app.add_option("--workers", workers, "parallel workers (0 = all cores)");
  auto* flag_offline = app.add_flag("--offline", offline, "forbid network operations");
  auto* flag_abbrev =
      app.add_option("--abbreviations", abbreviations, "abbreviation table for the splitter");

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "parse list pages into a chains file");
  std::vector<std::string> parse_inputs;
  std::string parse_out;
  parse_cmd->add_option("inputs", parse_inputs, "list page files")->required();
  parse_cmd->add_option("-o,--out", parse_out, "output chains file")->required();

  // fetch
  auto* fetch_cmd = app.add_subcommand("fetch", "resolve names and warm the page cache");
  std::string fetch_chains, fetch_fixture, fetch_log;
  fetch_cmd->add_option("--chains", fetch_chains, "chains file")->required();
  fetch_cmd->add_option("--fixture-dir", fetch_fixture, "serve pages from a directory");
  fetch_cmd->add_option("--log", fetch_log, "write the resolution log here");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "extract minimum excerpts from the cache");
  std::string analyze_chains, analyze_fixture, analyze_out;
  analyze_cmd->add_option("--chains", analyze_chains, "chains file")->required();
  analyze_cmd->add_option("--fixture-dir", analyze_fixture, "serve pages from a directory");
  analyze_cmd->add_option("-o,--out", analyze_out, "output excerpt records file")->required();

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "aggregate the statistics report");
  std::string stats_chains, stats_excerpts, stats_log, stats_json, stats_csv, stats_table;
  stats_cmd->add_option("--chains", stats_chains, "chains file")->required();
  stats_cmd->add_option("--excerpts", stats_excerpts, "excerpt records file")->required();
  stats_cmd->add_option("--log", stats_log, "resolution log from fetch");
  stats_cmd->add_option("--json", stats_json, "write the structured report here");
  stats_cmd->add_option("--csv", stats_csv, "write the distance histogram CSV here");
  stats_cmd->add_option("--table", stats_table, "write the text table here instead of stdout");

  // export
  auto* export_cmd = app.add_subcommand("export", "emit the knowledge-base file");
  std::string export_chains, export_excerpts, export_out;
  export_cmd->add_option("--chains", export_chains, "chains file")->required();
  export_cmd->add_option("--excerpts", export_excerpts, "excerpt records file")->required();
  export_cmd->add_option("-o,--out", export_out, "output knowledge-base file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    app.exit(e);
    return kExitInput;
  }

  try {
    // Precedence: defaults < config file < environment < flags.
    Config config;
    if (!config_path.empty()) config = namevo::load_config_file(config_path);
    namevo::apply_env(config);
    if (flag_cache->count() > 0) config.cache_dir = cache_dir;
    if (flag_api->count() > 0) config.api_base = api_base;
    if (flag_ua->count() > 0) config.user_agent = user_agent;
    if (flag_rate->count() > 0) config.rate_limit = rate_limit;
    if (flag_workers->count() > 0) config.workers = workers;
    if (flag_offline->count() > 0) config.offline = offline;
    if (flag_abbrev->count() > 0) config.abbreviations_path = abbreviations;

    if (parse_cmd->parsed()) return cmd_parse(parse_inputs, parse_out);
    if (fetch_cmd->parsed()) return cmd_fetch(config, fetch_chains, fetch_fixture, fetch_log);
    if (analyze_cmd->parsed()) {
      return cmd_analyze(config, analyze_chains, analyze_fixture, analyze_out);
    }
    if (stats_cmd->parsed()) {
      return cmd_stats(stats_chains, stats_excerpts, stats_log, stats_json, stats_csv,
                       stats_table);
    }
    if (export_cmd->parsed()) return cmd_export(export_chains, export_excerpts, export_out);
    std::cerr << "error: no subcommand\n";
    return kExitInput;
  } catch (const namevo::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const namevo::EnvironmentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEnvironment;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
