#include "namevo/stats.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "namevo/errors.hpp"

namespace namevo {

namespace {

using ordered_json = nlohmann::ordered_json;

// Chains and resolution rows are matched on entity, source and the full
// name sequence, so two distinct chains sharing a current name cannot
// swallow each other's resolution.
std::string entity_key(const std::string& entity_id, const std::string& source,
                       const std::vector<std::string>& names) {
  std::string key = entity_id + '\x1F' + source;
  for (const std::string& name : names) {
    key += '\x1F';
    key += name;
  }
  return key;
}

std::string chain_key(const EvolutionChain& chain) {
  std::vector<std::string> names;
  names.reserve(chain.names.size());
  for (const EntityName& name : chain.names) names.push_back(name.canonical);
  return entity_key(chain.entity_id, chain.source_list, names);
}

std::string resolution_key(const EntityResolution& resolution) {
  std::vector<std::string> names;
  names.reserve(resolution.names.size());
  for (const NameResolution& row : resolution.names) names.push_back(row.name);
  return entity_key(resolution.entity_id, resolution.source_list, names);
}

// Recomputes mean/median from the histogram so that merged reports stay
// consistent with their distribution.
void fill_moments(StatsReport& report) {
  long long total = 0;
  long long sum = 0;
  for (const auto& [distance, count] : report.distance_histogram) {
    total += count;
    sum += static_cast<long long>(distance) * count;
  }
  if (total == 0) {
    report.mean_distance.reset();
    report.median_distance.reset();
    return;
  }
  report.mean_distance = Rational::of(sum, total);

  // Median by rank walk over the sorted histogram.
  auto value_at_rank = [&](long long rank) {
    long long seen = 0;
    for (const auto& [distance, count] : report.distance_histogram) {
      seen += count;
      if (seen > rank) return distance;
    }
    return report.distance_histogram.back().first;
  };
  if (total % 2 == 1) {
    report.median_distance = Rational::of(value_at_rank(total / 2), 1);
  } else {
    long long lo = value_at_rank(total / 2 - 1);
    long long hi = value_at_rank(total / 2);
    report.median_distance = Rational::of(lo + hi, 2);
  }
}

void count_excerpts(StatsReport& report, std::span<const ExcerptRecord> records) {
  std::map<int, long long> histogram;
  for (const ExcerptRecord& record : records) {
    report.excerpts.total += 1;
    if (record.distance < 10) report.excerpts.dist_lt_10 += 1;
    if (record.distance < 3) report.excerpts.dist_lt_3 += 1;
    if (record.distance == 2) report.excerpts.dist_eq_2 += 1;
    if (record.distance == 1) report.excerpts.dist_eq_1 += 1;
    if (record.distance == 0) report.excerpts.dist_eq_0 += 1;
    histogram[record.distance] += 1;
    report.changes.mentioned += 1;
    if (record.from_current_name_article) report.changes.mentioned_in_current_article += 1;
  }
  report.distance_histogram.assign(histogram.begin(), histogram.end());
  fill_moments(report);
}

}  // namespace

StatsReport aggregate(std::span<const EvolutionChain> chains,
                      std::span<const EntityResolution> resolutions,
                      std::span<const ExcerptRecord> records) {
  StatsReport report;

  std::unordered_map<std::string, const EntityResolution*> resolution_of;
  for (const EntityResolution& r : resolutions) {
    resolution_of[resolution_key(r)] = &r;
  }

  for (const EvolutionChain& chain : chains) {
    const bool dated = chain.has_dates();
    report.entities.total += 1;
    if (dated) report.entities.with_dates += 1;

    const EntityResolution* resolution = nullptr;
    auto it = resolution_of.find(chain_key(chain));
    if (it != resolution_of.end()) resolution = it->second;

    const bool resolvable = resolution && resolution->resolvable();
    if (resolvable) {
      report.entities.resolvable += 1;
      if (resolution->current_title) report.entities.current_name_resolvable += 1;
      bool via_name = false;
      for (const NameResolution& n : resolution->names) {
        if ((n.status == FetchStatus::resolved || n.status == FetchStatus::redirected) &&
            !n.via_alias) {
          via_name = true;
          break;
        }
      }
      if (via_name) report.entities.linked_on_list += 1;
      if (resolution->articles.size() >= 2) report.entities.multi_article += 1;
      if (dated) report.entities.resolvable_and_dated += 1;
    }

    for (const NameChange& change : chain.changes) {
      report.changes.total += 1;
      if (resolvable) report.changes.of_entities_with_articles += 1;
      if (change.year) {
        report.changes.with_dates += 1;
        if (resolvable) report.changes.with_articles_and_dates += 1;
      }
    }
  }

  count_excerpts(report, records);
  return report;
}

std::map<int, long long> distance_histogram(std::span<const ExcerptRecord> records) {
  std::map<int, long long> histogram;
  for (const ExcerptRecord& record : records) histogram[record.distance] += 1;
  return histogram;
}

std::pair<Rational, Rational> summary_moments(std::span<const ExcerptRecord> records) {
  if (records.empty()) throw EmptyInputError("summary moments of zero records");
  StatsReport scratch;
  count_excerpts(scratch, records);
  return {*scratch.mean_distance, *scratch.median_distance};
}

StatsReport merge_reports(const StatsReport& a, const StatsReport& b) {
  StatsReport out;
  auto add = [](auto& dst, const auto& x, const auto& y) { dst = x + y; };
  add(out.entities.total, a.entities.total, b.entities.total);
  add(out.entities.with_dates, a.entities.with_dates, b.entities.with_dates);
  add(out.entities.resolvable, a.entities.resolvable, b.entities.resolvable);
  add(out.entities.current_name_resolvable, a.entities.current_name_resolvable,
      b.entities.current_name_resolvable);
  add(out.entities.linked_on_list, a.entities.linked_on_list, b.entities.linked_on_list);
  add(out.entities.multi_article, a.entities.multi_article, b.entities.multi_article);
  add(out.entities.resolvable_and_dated, a.entities.resolvable_and_dated,
      b.entities.resolvable_and_dated);
  add(out.changes.total, a.changes.total, b.changes.total);
  add(out.changes.of_entities_with_articles, a.changes.of_entities_with_articles,
      b.changes.of_entities_with_articles);
  add(out.changes.with_dates, a.changes.with_dates, b.changes.with_dates);
  add(out.changes.with_articles_and_dates, a.changes.with_articles_and_dates,
      b.changes.with_articles_and_dates);
  add(out.changes.mentioned, a.changes.mentioned, b.changes.mentioned);
  add(out.changes.mentioned_in_current_article, a.changes.mentioned_in_current_article,
      b.changes.mentioned_in_current_article);
  add(out.excerpts.total, a.excerpts.total, b.excerpts.total);
  add(out.excerpts.dist_lt_10, a.excerpts.dist_lt_10, b.excerpts.dist_lt_10);
  add(out.excerpts.dist_lt_3, a.excerpts.dist_lt_3, b.excerpts.dist_lt_3);
  add(out.excerpts.dist_eq_2, a.excerpts.dist_eq_2, b.excerpts.dist_eq_2);
  add(out.excerpts.dist_eq_1, a.excerpts.dist_eq_1, b.excerpts.dist_eq_1);
  add(out.excerpts.dist_eq_0, a.excerpts.dist_eq_0, b.excerpts.dist_eq_0);

  std::map<int, long long> histogram;
  for (const auto& [d, c] : a.distance_histogram) histogram[d] += c;
  for (const auto& [d, c] : b.distance_histogram) histogram[d] += c;
  out.distance_histogram.assign(histogram.begin(), histogram.end());
  fill_moments(out);
  return out;
}

Rational coverage_estimate(const Rational& articles_rate, const Rational& mentioned_rate,
                           const Rational& short_distance_rate) {
  return articles_rate.times(mentioned_rate).times(short_distance_rate);
}

Rational coverage_estimate(const StatsReport& report) {
  if (report.entities.total == 0 || report.changes.with_articles_and_dates == 0 ||
      report.excerpts.total == 0) {
    throw UndefinedRateError("coverage estimate over a zero base");
  }
  Rational articles_rate = Rational::of(report.entities.resolvable, report.entities.total);
  Rational mentioned_rate =
      Rational::of(report.changes.mentioned, report.changes.with_articles_and_dates);
  Rational short_rate = Rational::of(report.excerpts.dist_lt_3, report.excerpts.total);
  return coverage_estimate(articles_rate, mentioned_rate, short_rate);
}

double coverage_estimate(double articles_rate, double mentioned_rate,
                         double short_distance_rate) {
  return articles_rate * mentioned_rate * short_distance_rate;
}

std::string format_percent(long long count, long long base) {
  if (base == 0) return "-";
  return Rational::of(100 * count, base).fixed1();
}

// --- rendering ---------------------------------------------------------------

namespace {

std::string thousands(long long value) {
  std::string digits = std::to_string(value);
  std::string out;
  int until_sep = static_cast<int>(digits.size() % 3);
  if (until_sep == 0) until_sep = 3;
  for (char c : digits) {
    if (until_sep == 0) {
      out += ',';
      until_sep = 3;
    }
    out += c;
    --until_sep;
  }
  return out;
}

struct TableRow {
  int indent;          // 0 section header, 1 or 2 nested
  std::string label;
  long long count;
  long long global_base;  // 0: this row IS the 100% row
  long long nested_base;  // 0: no nested percentage
};

std::vector<TableRow> table_rows(const StatsReport& r) {
  const auto& e = r.entities;
  const auto& c = r.changes;
  const auto& x = r.excerpts;
  return {
      {0, "Entities", e.total, 0, 0},
      {1, "annotated with change dates", e.with_dates, e.total, 0},
      {1, "resolvable to articles", e.resolvable, e.total, -1},
      {2, "most current name resolvable", e.current_name_resolvable, e.total, e.resolvable},
      {2, "linked on a list", e.linked_on_list, e.total, e.resolvable},
      {2, "with multiple articles", e.multi_article, e.total, e.resolvable},
      {2, "annotated with change dates", e.resolvable_and_dated, e.total, e.resolvable},
      {0, "Name changes", c.total, 0, 0},
      {1, "of entities with articles", c.of_entities_with_articles, c.total, 0},
      {1, "annotated with dates", c.with_dates, c.total, 0},
      {1, "of entities with articles, annotated with dates", c.with_articles_and_dates, c.total,
       -1},
      {2, "mentioned in an article", c.mentioned, c.total, c.with_articles_and_dates},
      {2, "mentioned in the most current name's article", c.mentioned_in_current_article, c.total,
       c.with_articles_and_dates},
      {0, "Extracted excerpts", x.total, 0, 0},
      {1, "sentence distance less than 10", x.dist_lt_10, x.total, -1},
      {2, "sentence distance less than 3", x.dist_lt_3, x.total, x.dist_lt_10},
      {2, "sentence distance 2", x.dist_eq_2, x.total, x.dist_lt_10},
      {2, "sentence distance 1", x.dist_eq_1, x.total, x.dist_lt_10},
      {2, "sentence distance 0", x.dist_eq_0, x.total, x.dist_lt_10},
  };
}

}  // namespace

std::string render_text_table(const StatsReport& report) {
  std::ostringstream out;
  auto line = [&](const std::string& label, const std::string& count, const std::string& p1,
                  const std::string& p2) {
    out << label;
    if (label.size() < 52) out << std::string(52 - label.size(), ' ');
    out << ' ';
    if (count.size() < 7) out << std::string(7 - count.size(), ' ');
    out << count << ' ';
    if (p1.size() < 7) out << std::string(7 - p1.size(), ' ');
    out << p1 << ' ';
    if (p2.size() < 7) out << std::string(7 - p2.size(), ' ');
    out << p2 << '\n';
  };

  auto percent_or_dash = [](long long count, long long base) {
    std::string p = format_percent(count, base);
    return p == "-" ? p : p + "%";
  };

  line("Subject", "Count", "Pct", "Pct");
  out << std::string(76, '-') << '\n';
  for (const TableRow& row : table_rows(report)) {
    std::string label = row.indent == 0 ? row.label
                                        : std::string(2 * row.indent, ' ') + "- " + row.label;
    std::string global =
        row.global_base == 0 ? "100%" : percent_or_dash(row.count, row.global_base);
    std::string nested;
    if (row.nested_base == -1) {
      nested = "100%";
    } else if (row.nested_base > 0) {
      nested = percent_or_dash(row.count, row.nested_base);
    }
    line(label, thousands(row.count), global, nested);
  }

  out << '\n' << "Distance distribution" << '\n';
  for (const auto& [distance, count] : report.distance_histogram) {
    out << "  " << distance << ": " << count << '\n';
  }
  if (report.mean_distance) {
    out << "Mean distance:   " << report.mean_distance->fixed1() << '\n';
  }
  if (report.median_distance) {
    out << "Median distance: " << report.median_distance->fixed1() << '\n';
  }
  return out.str();
}

nlohmann::ordered_json report_to_json(const StatsReport& report) {
  ordered_json sections = ordered_json::array();
  ordered_json current;
  for (const TableRow& row : table_rows(report)) {
    ordered_json entry;
    entry["label"] = row.label;
    entry["count"] = row.count;
    if (row.global_base == 0) {
      entry["percent"] = "100";
    } else if (row.global_base > 0) {
      entry["percent"] = format_percent(row.count, row.global_base);
    }
    if (row.nested_base == -1) {
      entry["percent_nested"] = "100";
    } else if (row.nested_base > 0) {
      entry["percent_nested"] = format_percent(row.count, row.nested_base);
    }
    if (row.indent == 0) {
      if (!current.is_null()) sections.push_back(std::move(current));
      current = std::move(entry);
      current["rows"] = ordered_json::array();
    } else {
      current["rows"].push_back(std::move(entry));
    }
  }
  if (!current.is_null()) sections.push_back(std::move(current));

  ordered_json histogram = ordered_json::array();
  for (const auto& [distance, count] : report.distance_histogram) {
    histogram.push_back(ordered_json{{"distance", distance}, {"count", count}});
  }

  ordered_json j;
  j["sections"] = std::move(sections);
  j["distance_histogram"] = std::move(histogram);
  auto rational_json = [](const std::optional<Rational>& r) -> ordered_json {
    if (!r) return nullptr;
    return ordered_json{{"num", r->num}, {"den", r->den}, {"fixed1", r->fixed1()}};
  };
  j["mean_distance"] = rational_json(report.mean_distance);
  j["median_distance"] = rational_json(report.median_distance);
  try {
    Rational coverage = coverage_estimate(report);
    j["coverage_estimate"] =
        ordered_json{{"num", coverage.num}, {"den", coverage.den},
                     {"percent", Rational::of(100 * coverage.num, coverage.den).fixed1()}};
  } catch (const UndefinedRateError&) {
    j["coverage_estimate"] = nullptr;
  }
  return j;
}

std::string histogram_csv(const StatsReport& report) {
  std::ostringstream out;
  out << "distance,count\n";
  for (const auto& [distance, count] : report.distance_histogram) {
    out << distance << ',' << count << '\n';
  }
  return out.str();
}

}  // namespace namevo
