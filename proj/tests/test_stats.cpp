#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "namevo/errors.hpp"
#include "namevo/stats.hpp"
#include "test_util.hpp"

using namespace namevo;

namespace {

std::vector<ExcerptRecord> records_with_distances(const std::vector<int>& distances) {
  std::vector<ExcerptRecord> records;
  int i = 0;
  for (int d : distances) {
    ExcerptRecord r;
    r.entity_id = "E" + std::to_string(i);
    r.source_list = "synthetic";
    r.change_index = 0;
    r.article = r.entity_id;
    r.from = 0;
    r.to = d;
    r.distance = d;
    r.from_current_name_article = true;
    records.push_back(std::move(r));
    ++i;
  }
  return records;
}

// The excerpt ladder of the published geographic run: 226/118/45 at
// distances 0/1/2, 99 more below 10, 84 at and beyond 10.
std::vector<int> geographic_distances() {
  std::vector<int> distances;
  distances.insert(distances.end(), 226, 0);
  distances.insert(distances.end(), 118, 1);
  distances.insert(distances.end(), 45, 2);
  distances.insert(distances.end(), 99, 5);
  distances.insert(distances.end(), 84, 96);
  return distances;
}

std::vector<int> product_distances() {
  std::vector<int> distances;
  distances.insert(distances.end(), 14, 0);
  distances.insert(distances.end(), 6, 1);
  distances.insert(distances.end(), 2, 2);
  distances.insert(distances.end(), 11, 4);
  distances.insert(distances.end(), 3, 30);
  return distances;
}

StatsReport report_of(const std::vector<int>& distances) {
  auto records = records_with_distances(distances);
  return aggregate({}, {}, records);
}

}  // namespace

TEST_CASE("geographic excerpt ladder percentages") {
  StatsReport report = report_of(geographic_distances());
  CHECK(report.excerpts.total == 572);
  CHECK(report.excerpts.dist_lt_10 == 488);
  CHECK(report.excerpts.dist_lt_3 == 389);
  CHECK(report.excerpts.dist_eq_2 == 45);
  CHECK(report.excerpts.dist_eq_1 == 118);
  CHECK(report.excerpts.dist_eq_0 == 226);

  CHECK(format_percent(report.excerpts.dist_lt_10, report.excerpts.total) == "85.3");
  CHECK(format_percent(report.excerpts.dist_lt_3, report.excerpts.total) == "68.0");
  CHECK(format_percent(report.excerpts.dist_lt_3, report.excerpts.dist_lt_10) == "79.7");
  CHECK(format_percent(report.excerpts.dist_eq_2, report.excerpts.total) == "7.9");
  CHECK(format_percent(report.excerpts.dist_eq_1, report.excerpts.total) == "20.6");
  CHECK(format_percent(report.excerpts.dist_eq_0, report.excerpts.total) == "39.5");
  CHECK(format_percent(report.excerpts.dist_eq_2, report.excerpts.dist_lt_10) == "9.2");
  CHECK(format_percent(report.excerpts.dist_eq_1, report.excerpts.dist_lt_10) == "24.2");
  CHECK(format_percent(report.excerpts.dist_eq_0, report.excerpts.dist_lt_10) == "46.3");
}

TEST_CASE("product excerpt ladder percentages") {
  StatsReport report = report_of(product_distances());
  CHECK(report.excerpts.total == 36);
  CHECK(report.excerpts.dist_lt_10 == 33);
  CHECK(report.excerpts.dist_lt_3 == 22);
  CHECK(format_percent(report.excerpts.dist_lt_10, report.excerpts.total) == "91.7");
  CHECK(format_percent(report.excerpts.dist_lt_3, report.excerpts.total) == "61.1");
  CHECK(format_percent(report.excerpts.dist_lt_3, report.excerpts.dist_lt_10) == "66.7");
}

TEST_CASE("entity and change ladders from chains plus resolutions") {
  std::vector<EvolutionChain> chains;
  chains.push_back(EvolutionChain::from_names(
      {EntityName::make("Edo"), EntityName::make("Tokyo")}, {1868}, "lists"));
  chains.push_back(EvolutionChain::from_names(
      {EntityName::make("Old"), EntityName::make("Mid"), EntityName::make("New")},
      {std::nullopt, std::nullopt}, "lists"));
  chains.push_back(EvolutionChain::from_names(
      {EntityName::make("Lost"), EntityName::make("Gone")}, {1900}, "lists"));

  std::vector<EntityResolution> resolutions(3);
  resolutions[0].entity_id = "Tokyo";
  resolutions[0].source_list = "lists";
  resolutions[0].current_title = "Tokyo";
  resolutions[0].articles = {"Tokyo"};
  resolutions[0].names = {{"Edo", FetchStatus::redirected, false, "", "Tokyo", ""},
                          {"Tokyo", FetchStatus::resolved, false, "", "Tokyo", ""}};
  resolutions[1].entity_id = "New";
  resolutions[1].source_list = "lists";
  resolutions[1].current_title = "New";
  resolutions[1].articles = {"New", "Old"};
  resolutions[1].names = {{"Old", FetchStatus::resolved, false, "", "Old", ""},
                          {"Mid", FetchStatus::missing, false, "", "", ""},
                          {"New", FetchStatus::resolved, true, "Novus", "New", ""}};
  resolutions[2].entity_id = "Gone";
  resolutions[2].source_list = "lists";
  resolutions[2].names = {{"Lost", FetchStatus::missing, false, "", "", ""},
                          {"Gone", FetchStatus::missing, false, "", "", ""}};

  ExcerptRecord record;
  record.entity_id = "Tokyo";
  record.source_list = "lists";
  record.change_index = 0;
  record.article = "Tokyo";
  record.distance = 0;
  record.from_current_name_article = true;
  std::vector<ExcerptRecord> records = {record};

  StatsReport report = aggregate(chains, resolutions, records);
  CHECK(report.entities.total == 3);
  CHECK(report.entities.with_dates == 2);
  CHECK(report.entities.resolvable == 2);
  CHECK(report.entities.current_name_resolvable == 2);
  CHECK(report.entities.linked_on_list == 2);
  CHECK(report.entities.multi_article == 1);
  CHECK(report.entities.resolvable_and_dated == 1);

  CHECK(report.changes.total == 4);
  CHECK(report.changes.of_entities_with_articles == 3);
  CHECK(report.changes.with_dates == 2);
  CHECK(report.changes.with_articles_and_dates == 1);
  CHECK(report.changes.mentioned == 1);
  CHECK(report.changes.mentioned_in_current_article == 1);
}

TEST_CASE("chains sharing a current name keep their own resolutions") {
  // Two distinct chains with the same entity id and source; only the second
  // one resolved.
  std::vector<EvolutionChain> chains;
  chains.push_back(EvolutionChain::from_names(
      {EntityName::make("Alpha"), EntityName::make("Target")}, {1900}, "lists"));
  chains.push_back(EvolutionChain::from_names(
      {EntityName::make("Beta"), EntityName::make("Target")}, {1950}, "lists"));

  std::vector<EntityResolution> resolutions(2);
  resolutions[0].entity_id = "Target";
  resolutions[0].source_list = "lists";
  resolutions[0].names = {{"Alpha", FetchStatus::missing, false, "", "", ""},
                          {"Target", FetchStatus::missing, false, "", "", ""}};
  resolutions[1].entity_id = "Target";
  resolutions[1].source_list = "lists";
  resolutions[1].current_title = "Target";
  resolutions[1].articles = {"Target"};
  resolutions[1].names = {{"Beta", FetchStatus::missing, false, "", "", ""},
                          {"Target", FetchStatus::resolved, false, "", "Target", ""}};

  StatsReport report = aggregate(chains, resolutions, {});
  CHECK(report.entities.total == 2);
  CHECK(report.entities.resolvable == 1);
  CHECK(report.changes.of_entities_with_articles == 1);
}

TEST_CASE("empty inputs produce the all-zero report") {
  StatsReport report = aggregate({}, {}, {});
  CHECK(report.entities.total == 0);
  CHECK(report.excerpts.total == 0);
  CHECK(report.distance_histogram.empty());
  CHECK_FALSE(report.mean_distance.has_value());
  CHECK_FALSE(report.median_distance.has_value());
  CHECK(format_percent(0, 0) == "-");
}

TEST_CASE("distance histogram") {
  auto records = records_with_distances({0, 0, 1, 2});
  auto histogram = distance_histogram(records);
  CHECK(histogram == std::map<int, long long>{{0, 2}, {1, 1}, {2, 1}});
  CHECK(distance_histogram({}).empty());

  auto geographic = distance_histogram(records_with_distances(geographic_distances()));
  CHECK(geographic[0] == 226);
  CHECK(geographic[1] == 118);
  CHECK(geographic[2] == 45);
}

TEST_CASE("summary moments") {
  auto one = records_with_distances({1});
  auto [mean1, median1] = summary_moments(one);
  CHECK(mean1 == Rational::of(1, 1));
  CHECK(median1 == Rational::of(1, 1));

  auto skew = records_with_distances({0, 1, 1, 2, 96});
  auto [mean2, median2] = summary_moments(skew);
  CHECK(mean2 == Rational::of(20, 1));
  CHECK(median2 == Rational::of(1, 1));

  auto even = records_with_distances({0, 2});
  auto [mean3, median3] = summary_moments(even);
  CHECK(mean3 == Rational::of(1, 1));
  CHECK(median3 == Rational::of(1, 1));

  CHECK_THROWS_AS(summary_moments({}), EmptyInputError);
}

TEST_CASE("outlier-dominated fixtures keep a small median") {
  std::mt19937 rng(606);
  std::uniform_int_distribution<int> small(0, 2);
  for (int round = 0; round < 50; ++round) {
    // Mostly short distances in {0,1} plus one large outlier: the mean is
    // dragged up while the median stays at most 1.
    std::vector<int> distances;
    int n = 10 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) distances.push_back(small(rng) % 2);
    int outlier = 10 * (1 + static_cast<int>(rng() % 50));
    distances.push_back(outlier);
    auto [mean, median] = summary_moments(records_with_distances(distances));
    CHECK(median.value() <= 1.0);
    CHECK(mean.value() > median.value());
  }
}

TEST_CASE("coverage estimate reproduces the published product") {
  CHECK(coverage_estimate(0.985, 0.623, 0.680) == doctest::Approx(0.417).epsilon(0.0025));
  CHECK(coverage_estimate(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(coverage_estimate(0.0, 0.5, 0.5) == doctest::Approx(0.0));

  Rational exact = coverage_estimate(Rational::of(985, 1000), Rational::of(623, 1000),
                                     Rational::of(680, 1000));
  CHECK(std::abs(exact.value() - 0.417) < 0.001);
}

TEST_CASE("coverage estimate from a report, with undefined bases") {
  auto records = records_with_distances(geographic_distances());
  std::vector<EvolutionChain> chains;
  for (int i = 0; i < 4; ++i) {
    chains.push_back(EvolutionChain::from_names(
        {EntityName::make("A" + std::to_string(i)), EntityName::make("B" + std::to_string(i))},
        {1900}, "lists"));
  }
  std::vector<EntityResolution> resolutions(4);
  for (int i = 0; i < 4; ++i) {
    const std::string a = "A" + std::to_string(i);
    const std::string b = "B" + std::to_string(i);
    resolutions[i].entity_id = b;
    resolutions[i].source_list = "lists";
    if (i < 3) {
      resolutions[i].articles = {b};
      resolutions[i].current_title = b;
      resolutions[i].names = {{a, FetchStatus::missing, false, "", "", ""},
                              {b, FetchStatus::resolved, false, "", b, ""}};
    } else {
      resolutions[i].names = {{a, FetchStatus::missing, false, "", "", ""},
                              {b, FetchStatus::missing, false, "", "", ""}};
    }
  }
  StatsReport report = aggregate(chains, resolutions, records);
  // 3/4 resolvable; 572 mentioned of 3 dated-with-articles is nonsense as a
  // rate but exercises the arithmetic path exactly.
  Rational coverage = coverage_estimate(report);
  Rational expected = Rational::of(3, 4)
                          .times(Rational::of(572, 3))
                          .times(Rational::of(389, 572));
  CHECK(coverage == expected);

  CHECK_THROWS_AS(coverage_estimate(aggregate({}, {}, {})), UndefinedRateError);
}

TEST_CASE("invariant suite over randomized record sets") {
  std::mt19937 rng(8080);
  std::uniform_int_distribution<int> count_dist(0, 60);
  std::uniform_int_distribution<int> shape(0, 2);
  for (int round = 0; round < 200; ++round) {
    std::vector<int> distances;
    int n = count_dist(rng);
    for (int i = 0; i < n; ++i) {
      switch (shape(rng)) {
        case 0:
          distances.push_back(static_cast<int>(rng() % 3));
          break;
        case 1:
          distances.push_back(static_cast<int>(rng() % 10));
          break;
        default:
          distances.push_back(static_cast<int>(rng() % 120));
          break;
      }
    }
    StatsReport report = report_of(distances);

    // Nesting monotonicity.
    CHECK(report.excerpts.dist_eq_0 + report.excerpts.dist_eq_1 + report.excerpts.dist_eq_2 ==
          report.excerpts.dist_lt_3);
    CHECK(report.excerpts.dist_lt_3 <= report.excerpts.dist_lt_10);
    CHECK(report.excerpts.dist_lt_10 <= report.excerpts.total);
    CHECK(report.changes.mentioned_in_current_article <= report.changes.mentioned);

    // Histogram total and mean consistency.
    long long histogram_total = 0;
    long long weighted = 0;
    for (const auto& [d, c] : report.distance_histogram) {
      histogram_total += c;
      weighted += static_cast<long long>(d) * c;
    }
    CHECK(histogram_total == report.excerpts.total);
    if (n > 0) {
      auto records = records_with_distances(distances);
      auto [mean, median] = summary_moments(records);
      CHECK(mean == Rational::of(weighted, histogram_total));
      CHECK(*report.mean_distance == mean);
      CHECK(*report.median_distance == median);
    }

    // Partition-merge associativity: split the records at a random point.
    auto records = records_with_distances(distances);
    std::size_t cut = records.empty() ? 0 : rng() % (records.size() + 1);
    std::vector<ExcerptRecord> left(records.begin(), records.begin() + cut);
    std::vector<ExcerptRecord> right(records.begin() + cut, records.end());
    StatsReport merged = merge_reports(aggregate({}, {}, left), aggregate({}, {}, right));
    CHECK(merged == report);
  }
}

TEST_CASE("merge is associative across three partitions") {
  auto a = report_of({0, 1});
  auto b = report_of({2, 5, 11});
  auto c = report_of({1});
  CHECK(merge_reports(merge_reports(a, b), c) == merge_reports(a, merge_reports(b, c)));
}

TEST_CASE("entity partitions merge into the report of the union") {
  std::mt19937 rng(515);
  for (int round = 0; round < 50; ++round) {
    std::vector<EvolutionChain> chains;
    std::vector<EntityResolution> resolutions;
    std::vector<ExcerptRecord> records;
    int n = 3 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) {
      const std::string old_name = "Old" + std::to_string(i);
      const std::string new_name = "New" + std::to_string(i);
      bool dated = rng() % 3 != 0;
      chains.push_back(EvolutionChain::from_names(
          {EntityName::make(old_name), EntityName::make(new_name)},
          {dated ? std::optional<int>(1900 + i) : std::nullopt}, "lists"));

      EntityResolution resolution;
      resolution.entity_id = new_name;
      resolution.source_list = "lists";
      bool resolvable = rng() % 4 != 0;
      resolution.names = {{old_name, FetchStatus::missing, false, "", "", ""},
                          {new_name, resolvable ? FetchStatus::resolved : FetchStatus::missing,
                           false, "", resolvable ? new_name : "", ""}};
      if (resolvable) {
        resolution.articles = {new_name};
        resolution.current_title = new_name;
      }
      resolutions.push_back(std::move(resolution));

      if (dated && resolvable && rng() % 2 == 0) {
        ExcerptRecord record;
        record.entity_id = new_name;
        record.source_list = "lists";
        record.change_index = 0;
        record.article = new_name;
        record.distance = static_cast<int>(rng() % 12);
        record.to = record.distance;
        record.from_current_name_article = true;
        records.push_back(std::move(record));
      }
    }

    StatsReport whole = aggregate(chains, resolutions, records);

    // Split the entities into two disjoint partitions.
    std::vector<EvolutionChain> chains_a, chains_b;
    std::vector<EntityResolution> res_a, res_b;
    std::vector<ExcerptRecord> rec_a, rec_b;
    for (int i = 0; i < n; ++i) {
      bool left = rng() % 2 == 0;
      (left ? chains_a : chains_b).push_back(chains[i]);
      (left ? res_a : res_b).push_back(resolutions[i]);
      for (const ExcerptRecord& record : records) {
        if (record.entity_id == chains[i].entity_id) {
          (left ? rec_a : rec_b).push_back(record);
        }
      }
    }
    StatsReport merged =
        merge_reports(aggregate(chains_a, res_a, rec_a), aggregate(chains_b, res_b, rec_b));
    CHECK(merged == whole);
  }
}

TEST_CASE("emitted percentages stay within half a unit of the exact value") {
  std::mt19937 rng(99);
  for (int round = 0; round < 500; ++round) {
    long long base = 1 + static_cast<long long>(rng() % 2000);
    long long count = static_cast<long long>(rng() % (base + 1));
    std::string emitted = format_percent(count, base);
    double value = std::stod(emitted);
    double exact = 100.0 * static_cast<double>(count) / static_cast<double>(base);
    CHECK(std::abs(value - exact) <= 0.05 + 1e-9);
  }
}

TEST_CASE("text table mirrors the published row labels") {
  StatsReport report = report_of(geographic_distances());
  report.entities.total = 1926;
  report.entities.with_dates = 708;
  report.entities.resolvable = 1898;
  report.entities.current_name_resolvable = 1829;
  report.entities.linked_on_list = 1786;
  report.entities.multi_article = 766;
  report.entities.resolvable_and_dated = 696;
  report.changes.total = 2852;
  report.changes.of_entities_with_articles = 2810;
  report.changes.with_dates = 933;
  report.changes.with_articles_and_dates = 918;
  report.changes.mentioned = 572;
  report.changes.mentioned_in_current_article = 551;

  std::string table = render_text_table(report);
  CHECK(table.find("Entities") != std::string::npos);
  CHECK(table.find("annotated with change dates") != std::string::npos);
  CHECK(table.find("resolvable to articles") != std::string::npos);
  CHECK(table.find("most current name resolvable") != std::string::npos);
  CHECK(table.find("linked on a list") != std::string::npos);
  CHECK(table.find("with multiple articles") != std::string::npos);
  CHECK(table.find("Name changes") != std::string::npos);
  CHECK(table.find("of entities with articles, annotated with dates") != std::string::npos);
  CHECK(table.find("mentioned in an article") != std::string::npos);
  CHECK(table.find("mentioned in the most current name's article") != std::string::npos);
  CHECK(table.find("Extracted excerpts") != std::string::npos);
  CHECK(table.find("sentence distance less than 10") != std::string::npos);
  CHECK(table.find("sentence distance 0") != std::string::npos);
  CHECK(table.find("1,926") != std::string::npos);
  CHECK(table.find("36.8%") != std::string::npos);
  CHECK(table.find("98.5%") != std::string::npos);
  CHECK(table.find("96.4%") != std::string::npos);
  CHECK(table.find("94.1%") != std::string::npos);
  CHECK(table.find("40.4%") != std::string::npos);
  CHECK(table.find("36.7%") != std::string::npos);
  CHECK(table.find("32.7%") != std::string::npos);
  CHECK(table.find("32.2%") != std::string::npos);
  CHECK(table.find("62.3%") != std::string::npos);
  CHECK(table.find("60.0%") != std::string::npos);
  CHECK(table.find("85.3%") != std::string::npos);
  CHECK(table.find("79.7%") != std::string::npos);
}

TEST_CASE("json report and histogram csv") {
  StatsReport report = report_of({0, 0, 1, 5});
  nlohmann::ordered_json j = report_to_json(report);
  REQUIRE(j.contains("sections"));
  CHECK(j["sections"].size() == 3);
  CHECK(j["distance_histogram"].size() == 3);
  CHECK(j["mean_distance"]["fixed1"] == "1.5");
  CHECK(j["median_distance"]["fixed1"] == "0.5");

  CHECK(histogram_csv(report) == "distance,count\n0,2\n1,1\n5,1\n");
}
