#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "namevo/corpus.hpp"
#include "namevo/model.hpp"

// Statistics aggregation: the nested entity / change / excerpt count ladder,
// the distance distribution, exact mean and median, and the coverage
// product. Percentages live as exact rationals and are rounded only when a
// report is rendered.

namespace namevo {

// Fills the whole ladder from one pipeline run. Chains are expected to be
// deduplicated; resolutions are matched to chains by (entity_id, source).
// Empty inputs produce an all-zero report.
StatsReport aggregate(std::span<const EvolutionChain> chains,
                      std::span<const EntityResolution> resolutions,
                      std::span<const ExcerptRecord> records);

std::map<int, long long> distance_histogram(std::span<const ExcerptRecord> records);

// Exact mean and median of the record distances (median uses the midpoint
// convention for even counts). Throws EmptyInputError on no records.
std::pair<Rational, Rational> summary_moments(std::span<const ExcerptRecord> records);

// Reports of disjoint entity partitions merge into the report of the union;
// moments are recomputed from the merged histogram.
StatsReport merge_reports(const StatsReport& a, const StatsReport& b);

// Product of (entities resolvable to articles) x (changes mentioned, of
// those with articles and dates) x (excerpts with distance < 3). Throws
// UndefinedRateError if a base is zero.
Rational coverage_estimate(const StatsReport& report);
Rational coverage_estimate(const Rational& articles_rate, const Rational& mentioned_rate,
                           const Rational& short_distance_rate);
double coverage_estimate(double articles_rate, double mentioned_rate,
                         double short_distance_rate);

// "85.3" style percentage of count/base, one decimal, half-up; "-" when the
// base is zero.
std::string format_percent(long long count, long long base);

// Plain-text aligned table for terminals.
std::string render_text_table(const StatsReport& report);

// Structured report with the table's row labels, the histogram and moments.
nlohmann::ordered_json report_to_json(const StatsReport& report);

// "distance,count" CSV of the distribution, one row per distance.
std::string histogram_csv(const StatsReport& report);

}  // namespace namevo
