#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "namevo/model.hpp"
#include "namevo/text.hpp"

using namespace namevo;

namespace {

EvolutionChain edo_tokyo() {
  return EvolutionChain::from_names({EntityName::make("Edo"), EntityName::make("Tokyo")}, {1868},
                                    "city_name_changes");
}

}  // namespace

TEST_CASE("entity name construction filters aliases") {
  EntityName name = EntityName::make("  Kendros ", {"Kendrisos", "kendrisos", "KENDRISOS",
                                                    "lowercase", "Num3ric", "", "Kendrisia"});
  CHECK(name.canonical == "Kendros");
  CHECK(name.aliases == std::vector<std::string>{"Kendrisos", "Kendrisia"});
}

TEST_CASE("canonical never appears among aliases") {
  EntityName name = EntityName::make("Tokyo", {"TOKYO", "Edo"});
  CHECK(name.aliases == std::vector<std::string>{"Edo"});
}

TEST_CASE("valid chain has no violations") {
  EvolutionChain chain = edo_tokyo();
  CHECK(chain.entity_id == "Tokyo");
  CHECK(chain.changes.size() == 1);
  CHECK(chain.changes[0].year == 1868);
  CHECK(validate_chain(chain).empty());
}

TEST_CASE("single-name chain yields exactly one violation") {
  EvolutionChain chain = EvolutionChain::from_names({EntityName::make("Tokyo")}, {}, "x");
  auto violations = validate_chain(chain);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("at least 2 names") != std::string::npos);
}

TEST_CASE("broken linkage is reported") {
  EvolutionChain chain = edo_tokyo();
  chain.changes[0].succeeding = EntityName::make("Osaka");
  auto violations = validate_chain(chain);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("succeeding") != std::string::npos);
}

TEST_CASE("self-rename and bad year are reported") {
  EvolutionChain chain = edo_tokyo();
  chain.names[1] = EntityName::make("EDO");
  chain.changes[0].succeeding = chain.names[1];
  chain.entity_id = "EDO";
  CHECK_FALSE(validate_chain(chain).empty());

  EvolutionChain dated = edo_tokyo();
  dated.changes[0].year = 0;
  CHECK(validate_chain(dated).size() == 1);
  dated.changes[0].year = 10000;
  CHECK(validate_chain(dated).size() == 1);
}

TEST_CASE("entity id must match the current name") {
  EvolutionChain chain = edo_tokyo();
  chain.entity_id = "Edo";
  CHECK(validate_chain(chain).size() == 1);
}

TEST_CASE("validate_chain is deterministic") {
  EvolutionChain chain = edo_tokyo();
  chain.names.push_back(chain.names[1]);  // duplicate tail without a change
  auto first = validate_chain(chain);
  auto second = validate_chain(chain);
  CHECK(first == second);
  CHECK_FALSE(first.empty());
}

TEST_CASE("rational arithmetic") {
  Rational half = Rational::of(1, 2);
  Rational third = Rational::of(2, 6);
  CHECK(third.num == 1);
  CHECK(third.den == 3);
  CHECK(half.plus(third) == Rational::of(5, 6));
  CHECK(half.times(third) == Rational::of(1, 6));
  CHECK(Rational::of(3, -4) == Rational::of(-3, 4));
  CHECK(Rational::of(853, 10).fixed1() == "85.3");
  CHECK(Rational::of(199, 10).fixed1() == "19.9");
  CHECK(Rational::of(1, 1).fixed1() == "1.0");
  CHECK(Rational::of(389 * 100, 572).fixed1() == "68.0");
  CHECK(Rational::of(389 * 100, 488).fixed1() == "79.7");
}
