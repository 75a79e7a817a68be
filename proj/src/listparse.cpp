#include "namevo/listparse.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "namevo/errors.hpp"
#include "namevo/text.hpp"

namespace namevo {

namespace {

using ordered_json = nlohmann::ordered_json;

void warn(Warnings* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

// Strips leading bullet markers: runs of '*', '#', '-' or a numbered prefix
// like "12." / "3)".
std::string_view strip_bullet(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  std::size_t marks = i;
  while (marks < line.size() &&
         (line[marks] == '*' || line[marks] == '#' ||
          (line[marks] == '-' && !(marks + 1 < line.size() && line[marks + 1] == '>')))) {
    ++marks;
  }
  if (marks > i) return line.substr(marks);
  std::size_t digits = i;
  while (digits < line.size() && line[digits] >= '0' && line[digits] <= '9') ++digits;
  if (digits > i && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) {
    return line.substr(digits + 1);
  }
  return line.substr(i);
}

bool contains_arrow(std::string_view s) {
  return s.find("→") != std::string_view::npos || s.find("->") != std::string_view::npos;
}

// List pages sometimes arrive as raw wikitext. Replace [[target|label]] with
// the label ([[target]] with the target) and drop bold/italic apostrophe
// runs, so link targets with parentheses cannot confuse the bracket scan.
// Anything unterminated is left untouched.
std::string unwrap_wikitext(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  std::size_t i = 0;
  while (i < line.size()) {
    if (line.compare(i, 2, "[[") == 0) {
      std::size_t close = line.find("]]", i + 2);
      if (close != std::string_view::npos) {
        std::string_view inside = line.substr(i + 2, close - i - 2);
        std::size_t pipe = inside.rfind('|');
        out += pipe == std::string_view::npos ? inside : inside.substr(pipe + 1);
        i = close + 2;
        continue;
      }
    }
    if (line[i] == '\'' && i + 1 < line.size() && line[i + 1] == '\'') {
      std::size_t run = i;
      while (run < line.size() && line[run] == '\'') ++run;
      if (run - i <= 3) {
        i = run;
        continue;
      }
    }
    out.push_back(line[i]);
    ++i;
  }
  return out;
}

// Position and length of the next arrow at parenthesis depth 0, or npos.
struct ArrowPos {
  std::size_t pos = std::string_view::npos;
  std::size_t len = 0;
};

ArrowPos next_arrow(std::string_view s, std::size_t start, int& depth) {
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
      if (depth < 0) throw MalformedLineError("unbalanced ')'");
    } else if (depth == 0) {
      if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') return {i, 2};
      if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < s.size() &&
          static_cast<unsigned char>(s[i + 1]) == 0x86 &&
          static_cast<unsigned char>(s[i + 2]) == 0x92) {
        return {i, 3};
      }
    }
  }
  return {};
}

// Splits one arrow-free segment into the bare name and its bracket contents.
ListLine::Segment parse_segment(std::string_view segment) {
  ListLine::Segment out;
  std::string name;
  std::size_t i = 0;
  while (i < segment.size()) {
    char c = segment[i];
    if (c == '(') {
      int depth = 1;
      std::size_t j = i + 1;
      while (j < segment.size() && depth > 0) {
        if (segment[j] == '(') ++depth;
        if (segment[j] == ')') --depth;
        ++j;
      }
      if (depth != 0) throw MalformedLineError("unbalanced '('");
      out.bracket_texts.emplace_back(segment.substr(i + 1, j - i - 2));
      i = j;
    } else if (c == ')') {
      throw MalformedLineError("unbalanced ')'");
    } else {
      name.push_back(c);
      ++i;
    }
  }
  out.name = normalize_whitespace(name);
  return out;
}

// Trims codepoints that are neither word characters nor spaces from both
// ends (date punctuation left over after removing year digits).
std::string strip_edge_punct(std::string_view s) {
  std::vector<char32_t> cps = decode_utf8(s);
  std::size_t b = 0, e = cps.size();
  while (b < e && !is_word_char(cps[b]) && !is_space(cps[b])) ++b;
  while (e > b && !is_word_char(cps[e - 1]) && !is_space(cps[e - 1])) --e;
  return normalize_whitespace(encode_utf8(std::vector<char32_t>(cps.begin() + b, cps.begin() + e)));
}

// Finds the first maximal 3-4 digit run; returns [begin, end) or npos.
std::pair<std::size_t, std::size_t> first_year_run(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] >= '0' && s[i] <= '9') {
      std::size_t j = i;
      while (j < s.size() && s[j] >= '0' && s[j] <= '9') ++j;
      if (j - i == 3 || j - i == 4) return {i, j};
      i = j;
    } else {
      ++i;
    }
  }
  return {std::string_view::npos, std::string_view::npos};
}

}  // namespace

Annotation parse_annotation(std::string_view bracket_text) {
  Annotation ann;
  for (const std::string& raw : split_any(bracket_text, "/,;")) {
    std::string token = normalize_whitespace(raw);
    if (token.empty()) continue;
    auto [yb, ye] = first_year_run(token);
    if (yb != std::string_view::npos) {
      int year = 0;
      for (std::size_t k = yb; k < ye; ++k) year = year * 10 + (token[k] - '0');
      ann.years.push_back(year);
      // Salvage a leading alias like "Byzantion" out of "Byzantion 667 BC".
      std::string prefix = strip_edge_punct(token.substr(0, yb));
      if (!prefix.empty() && starts_with_upper(prefix) && !contains_ascii_digit(prefix)) {
        ann.aliases.push_back(prefix);
      } else if (!prefix.empty()) {
        ann.discarded.push_back(prefix);
      }
      std::string suffix = strip_edge_punct(remove_year_runs(token.substr(ye)));
      if (!suffix.empty()) ann.discarded.push_back(suffix);
      continue;
    }
    if (starts_with_upper(token) && !contains_ascii_digit(token)) {
      ann.aliases.push_back(token);
    } else {
      ann.discarded.push_back(token);
    }
  }
  return ann;
}

std::optional<ListLine> tokenize_list_line(std::string_view line) {
  std::string unwrapped = unwrap_wikitext(strip_bullet(line));
  std::string_view body = unwrapped;
  if (!contains_arrow(body)) return std::nullopt;

  ListLine out;
  out.raw = std::string(line);
  int depth = 0;
  std::size_t start = 0;
  std::vector<std::string> segments;
  while (true) {
    ArrowPos arrow = next_arrow(body, start, depth);
    if (arrow.pos == std::string_view::npos) {
      segments.emplace_back(body.substr(start));
      break;
    }
    segments.emplace_back(body.substr(start, arrow.pos - start));
    start = arrow.pos + arrow.len;
  }
  if (depth != 0) throw MalformedLineError("unbalanced '('");
  if (segments.size() < 2) return std::nullopt;  // arrows only inside brackets

  for (const std::string& segment : segments) {
    ListLine::Segment parsed = parse_segment(segment);
    if (parsed.name.empty()) throw MalformedLineError("empty name next to an arrow");
    out.names_with_annotations.push_back(std::move(parsed));
  }
  return out;
}

std::optional<EvolutionChain> parse_list_line(std::string_view line,
                                              std::string_view source_list,
                                              Warnings* warnings) {
  std::optional<ListLine> tokens = tokenize_list_line(line);
  if (!tokens) return std::nullopt;

  const auto& segments = tokens->names_with_annotations;
  std::vector<EntityName> names;
  std::vector<std::optional<int>> years(segments.size() - 1);

  for (std::size_t i = 0; i < segments.size(); ++i) {
    const ListLine::Segment& seg = segments[i];
    std::vector<std::string> aliases;
    std::vector<int> seg_years;
    for (const std::string& bracket : seg.bracket_texts) {
      Annotation ann = parse_annotation(bracket);
      aliases.insert(aliases.end(), ann.aliases.begin(), ann.aliases.end());
      seg_years.insert(seg_years.end(), ann.years.begin(), ann.years.end());
      for (const std::string& noise : ann.discarded) {
        warn(warnings, "'" + seg.name + "': ignored bracket text '" + noise + "'");
      }
    }
    // Slash-joined variants outside brackets keep the full token as the
    // canonical name; the post-slash parts become aliases.
    if (seg.name.find('/') != std::string::npos) {
      std::vector<std::string> parts = split(seg.name, '/');
      for (std::size_t p = 1; p < parts.size(); ++p) {
        std::string part = normalize_whitespace(parts[p]);
        if (!part.empty()) aliases.push_back(std::move(part));
      }
    }
    names.push_back(EntityName::make(seg.name, std::move(aliases)));

    if (!seg_years.empty()) {
      if (i == 0) {
        warn(warnings, "'" + seg.name + "': year annotation on the first name has no change to date");
      } else {
        years[i - 1] = seg_years.front();
        if (seg_years.size() > 1) {
          warn(warnings, "'" + seg.name + "': multiple year annotations, keeping " +
                             std::to_string(seg_years.front()));
        }
      }
    }
  }

  for (std::size_t i = 0; i + 1 < names.size(); ++i) {
    if (iequals(names[i].canonical, names[i + 1].canonical)) {
      throw MalformedLineError("self-rename '" + names[i].canonical + "' → '" +
                               names[i + 1].canonical + "'");
    }
  }

  return EvolutionChain::from_names(std::move(names), std::move(years),
                                    std::string(source_list));
}

std::vector<EvolutionChain> parse_list_page(std::string_view document,
                                            std::string_view source_list,
                                            Warnings* warnings) {
  std::vector<EvolutionChain> chains;
  int line_no = 0;
  for (const std::string& line : split(document, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      if (auto chain = parse_list_line(line, source_list, warnings)) {
        chains.push_back(std::move(*chain));
      }
    } catch (const MalformedLineError& e) {
      throw e.at_line(line_no);
    }
  }
  return chains;
}

std::vector<EvolutionChain> dedupe_chains(const std::vector<EvolutionChain>& chains,
                                          Warnings* warnings) {
  struct Working {
    std::vector<EntityName> names;
    std::vector<std::optional<int>> years;
    std::string source;
  };
  std::vector<Working> merged;
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::size_t> by_key;

  for (const EvolutionChain& chain : chains) {
    std::string key;
    for (const EntityName& name : chain.names) {
      key += fold(name.canonical);
      key += '\x1F';
    }
    auto [it, inserted] = by_key.try_emplace(key, merged.size());
    if (inserted) {
      Working w;
      w.names = chain.names;
      w.years.resize(chain.changes.size());
      for (std::size_t i = 0; i < chain.changes.size(); ++i) w.years[i] = chain.changes[i].year;
      w.source = chain.source_list;
      merged.push_back(std::move(w));
      continue;
    }
    Working& w = merged[it->second];
    for (std::size_t i = 0; i < chain.changes.size() && i < w.years.size(); ++i) {
      const std::optional<int>& incoming = chain.changes[i].year;
      if (!incoming) continue;
      if (!w.years[i]) {
        w.years[i] = incoming;
      } else if (*w.years[i] != *incoming) {
        warn(warnings, "duplicate chain '" + chain.entity_id + "': conflicting years " +
                           std::to_string(*w.years[i]) + " vs " + std::to_string(*incoming) +
                           " for change " + std::to_string(i) + ", keeping the first");
      }
    }
    for (std::size_t i = 0; i < chain.names.size() && i < w.names.size(); ++i) {
      std::unordered_set<std::string> seen;
      seen.insert(fold(w.names[i].canonical));
      for (const std::string& alias : w.names[i].aliases) seen.insert(fold(alias));
      for (const std::string& alias : chain.names[i].aliases) {
        if (seen.insert(fold(alias)).second) w.names[i].aliases.push_back(alias);
      }
    }
  }

  std::vector<EvolutionChain> out;
  out.reserve(merged.size());
  for (Working& w : merged) {
    out.push_back(EvolutionChain::from_names(std::move(w.names), std::move(w.years),
                                             std::move(w.source)));
  }
  return out;
}

namespace {

EvolutionChain chain_from_record(const ordered_json& record, int record_no,
                                 Warnings* warnings) {
  const std::string where = "record " + std::to_string(record_no);
  if (!record.is_object()) throw SchemaError(where + ": not an object");

  if (!record.contains("names") || !record["names"].is_array()) {
    throw SchemaError(where + ": field 'names' missing or not an array");
  }
  std::vector<std::string> names;
  for (const auto& n : record["names"]) {
    if (!n.is_string() || n.get<std::string>().empty()) {
      throw SchemaError(where + ": field 'names' must contain non-empty strings");
    }
    names.push_back(n.get<std::string>());
  }
  if (names.size() < 2) throw SchemaError(where + ": field 'names' needs at least 2 entries");

  std::vector<std::optional<int>> years(names.size() - 1);
  if (record.contains("years")) {
    const auto& jy = record["years"];
    if (!jy.is_array() || jy.size() != names.size() - 1) {
      throw SchemaError(where + ": field 'years' must be an array of length " +
                        std::to_string(names.size() - 1));
    }
    for (std::size_t i = 0; i < jy.size(); ++i) {
      if (jy[i].is_null()) continue;
      if (!jy[i].is_number_integer()) {
        throw SchemaError(where + ": field 'years[" + std::to_string(i) + "]' must be an integer or null");
      }
      int year = jy[i].get<int>();
      if (year < 1 || year > 9999) {
        throw SchemaError(where + ": field 'years[" + std::to_string(i) + "]' out of range [1, 9999]");
      }
      years[i] = year;
    }
  }

  std::vector<std::vector<std::string>> aliases(names.size());
  if (record.contains("aliases")) {
    const auto& ja = record["aliases"];
    if (!ja.is_array() || ja.size() != names.size()) {
      throw SchemaError(where + ": field 'aliases' must be an array of length " +
                        std::to_string(names.size()));
    }
    for (std::size_t i = 0; i < ja.size(); ++i) {
      if (!ja[i].is_array()) {
        throw SchemaError(where + ": field 'aliases[" + std::to_string(i) + "]' must be an array");
      }
      for (const auto& a : ja[i]) {
        if (!a.is_string()) {
          throw SchemaError(where + ": field 'aliases[" + std::to_string(i) + "]' must contain strings");
        }
        aliases[i].push_back(a.get<std::string>());
      }
    }
  }

  std::string source;
  if (record.contains("source")) {
    if (!record["source"].is_string()) throw SchemaError(where + ": field 'source' must be a string");
    source = record["source"].get<std::string>();
  }

  std::vector<EntityName> entity_names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    EntityName name = EntityName::make(names[i], aliases[i]);
    if (name.canonical.empty()) {
      throw SchemaError(where + ": field 'names[" + std::to_string(i) + "]' is blank");
    }
    if (name.aliases.size() != aliases[i].size()) {
      warn(warnings, where + ": dropped invalid aliases of '" + name.canonical + "'");
    }
    entity_names.push_back(std::move(name));
  }
  for (std::size_t i = 0; i + 1 < entity_names.size(); ++i) {
    if (iequals(entity_names[i].canonical, entity_names[i + 1].canonical)) {
      throw SchemaError(where + ": field 'names' contains the self-rename '" +
                        entity_names[i].canonical + "'");
    }
  }
  return EvolutionChain::from_names(std::move(entity_names), std::move(years), std::move(source));
}

}  // namespace

std::vector<EvolutionChain> load_curated_changes(std::istream& in, Warnings* warnings) {
  std::vector<EvolutionChain> chains;
  std::string line;
  int record_no = 0;
  while (std::getline(in, line)) {
    ++record_no;
    if (trim(line).empty()) continue;
    ordered_json record;
    try {
      record = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("record " + std::to_string(record_no) + ": invalid JSON: " + e.what());
    }
    chains.push_back(chain_from_record(record, record_no, warnings));
  }
  return chains;
}

std::vector<EvolutionChain> load_curated_changes(std::string_view document, Warnings* warnings) {
  std::istringstream in{std::string(document)};
  return load_curated_changes(in, warnings);
}

void write_chains(std::ostream& out, const std::vector<EvolutionChain>& chains) {
  for (const EvolutionChain& chain : chains) {
    ordered_json record;
    ordered_json names = ordered_json::array();
    ordered_json years = ordered_json::array();
    ordered_json aliases = ordered_json::array();
    for (const EntityName& name : chain.names) {
      names.push_back(name.canonical);
      aliases.push_back(name.aliases);
    }
    for (const NameChange& change : chain.changes) {
      if (change.year) {
        years.push_back(*change.year);
      } else {
        years.push_back(nullptr);
      }
    }
    record["names"] = std::move(names);
    record["years"] = std::move(years);
    record["aliases"] = std::move(aliases);
    record["source"] = chain.source_list;
    out << record.dump() << '\n';
  }
}

std::string chains_to_string(const std::vector<EvolutionChain>& chains) {
  std::ostringstream out;
  write_chains(out, chains);
  return out.str();
}

std::string normalize_chain_line(const EvolutionChain& chain) {
  std::string out;
  for (std::size_t i = 0; i < chain.names.size(); ++i) {
    if (i > 0) out += " → ";
    const EntityName& name = chain.names[i];
    out += name.canonical;
    if (!name.aliases.empty()) {
      out += " (";
      for (std::size_t a = 0; a < name.aliases.size(); ++a) {
        if (a > 0) out += '/';
        out += name.aliases[a];
      }
      out += ')';
    }
    if (i > 0 && chain.changes[i - 1].year) {
      out += " (" + std::to_string(*chain.changes[i - 1].year) + ")";
    }
  }
  return out;
}

}  // namespace namevo
