#include "namevo/model.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

#include "namevo/errors.hpp"
#include "namevo/text.hpp"

namespace namevo {

EntityName EntityName::make(std::string canonical, std::vector<std::string> aliases) {
  EntityName name;
  name.canonical = normalize_whitespace(canonical);
  std::unordered_set<std::string> seen;
  seen.insert(fold(name.canonical));
  for (const std::string& raw : aliases) {
    std::string alias = normalize_whitespace(raw);
    if (alias.empty() || !starts_with_upper(alias) || contains_ascii_digit(alias)) continue;
    if (!seen.insert(fold(alias)).second) continue;
    name.aliases.push_back(std::move(alias));
  }
  return name;
}

EvolutionChain EvolutionChain::from_names(std::vector<EntityName> names,
                                          std::vector<std::optional<int>> years,
                                          std::string source_list) {
  EvolutionChain chain;
  chain.names = std::move(names);
  chain.source_list = std::move(source_list);
  if (!chain.names.empty()) chain.entity_id = chain.names.back().canonical;
  if (years.empty()) years.resize(chain.names.empty() ? 0 : chain.names.size() - 1);
  for (std::size_t i = 0; i + 1 < chain.names.size(); ++i) {
    NameChange change;
    change.preceding = chain.names[i];
    change.succeeding = chain.names[i + 1];
    if (i < years.size()) change.year = years[i];
    chain.changes.push_back(std::move(change));
  }
  return chain;
}

bool EvolutionChain::has_dates() const {
  for (const NameChange& c : changes) {
    if (c.year) return true;
  }
  return false;
}

namespace {

void check_name(const EntityName& name, const std::string& where,
                std::vector<std::string>& out) {
  if (name.canonical.empty()) out.push_back(where + ": canonical name is empty");
  if (name.canonical != normalize_whitespace(name.canonical)) {
    out.push_back(where + ": canonical name is not whitespace-normalized");
  }
  std::unordered_set<std::string> seen;
  seen.insert(fold(name.canonical));
  for (const std::string& alias : name.aliases) {
    if (alias.empty()) {
      out.push_back(where + ": empty alias");
      continue;
    }
    if (!starts_with_upper(alias)) {
      out.push_back(where + ": alias '" + alias + "' is not capital-initial");
    }
    if (iequals(alias, name.canonical)) {
      out.push_back(where + ": alias '" + alias + "' duplicates the canonical name");
    } else if (!seen.insert(fold(alias)).second) {
      out.push_back(where + ": duplicate alias '" + alias + "'");
    }
  }
}

}  // namespace

std::vector<std::string> validate_chain(const EvolutionChain& chain) {
  std::vector<std::string> v;
  if (chain.names.size() < 2) v.push_back("chain must have at least 2 names");
  for (std::size_t i = 0; i < chain.names.size(); ++i) {
    check_name(chain.names[i], "names[" + std::to_string(i) + "]", v);
  }
  if (chain.changes.size() + 1 != chain.names.size() && !chain.names.empty()) {
    v.push_back("change count must be name count - 1");
  }
  for (std::size_t i = 0; i < chain.changes.size(); ++i) {
    const NameChange& c = chain.changes[i];
    const std::string where = "changes[" + std::to_string(i) + "]";
    if (i < chain.names.size() && !(c.preceding == chain.names[i])) {
      v.push_back(where + ": preceding does not match names[" + std::to_string(i) + "]");
    }
    if (i + 1 < chain.names.size() && !(c.succeeding == chain.names[i + 1])) {
      v.push_back(where + ": succeeding does not match names[" + std::to_string(i + 1) + "]");
    }
    if (iequals(c.preceding.canonical, c.succeeding.canonical)) {
      v.push_back(where + ": self-rename '" + c.preceding.canonical + "'");
    }
    if (c.year && (*c.year < 1 || *c.year > 9999)) {
      v.push_back(where + ": year " + std::to_string(*c.year) + " out of range");
    }
  }
  if (!chain.names.empty() && chain.entity_id != chain.names.back().canonical) {
    v.push_back("entity_id must equal the most current canonical name");
  }
  return v;
}

Rational Rational::of(long long num, long long den) {
  if (den == 0) throw UndefinedRateError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Rational Rational::plus(const Rational& other) const {
  return Rational::of(num * other.den + other.num * den, den * other.den);
}

Rational Rational::times(const Rational& other) const {
  // Cross-reduce before multiplying to keep intermediates small.
  long long a = num, b = den, c = other.num, d = other.den;
  long long g1 = std::gcd(a < 0 ? -a : a, d);
  long long g2 = std::gcd(c < 0 ? -c : c, b);
  if (g1 > 1) {
    a /= g1;
    d /= g1;
  }
  if (g2 > 1) {
    c /= g2;
    b /= g2;
  }
  return Rational::of(a * c, b * d);
}

double Rational::value() const { return static_cast<double>(num) / static_cast<double>(den); }

std::string Rational::fixed1() const {
  long long n = num;
  bool negative = n < 0;
  if (negative) n = -n;
  // Tenths, rounded half-up.
  long long tenths = (10 * n + den / 2) / den;
  std::string s = negative && tenths != 0 ? "-" : "";
  s += std::to_string(tenths / 10);
  s += '.';
  s += std::to_string(tenths % 10);
  return s;
}

}  // namespace namevo
