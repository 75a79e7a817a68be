#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "namevo/model.hpp"

// Parsing of semi-structured name-change list pages ("Edo → Tokyo (1868)")
// and of curated newline-delimited change records, plus the inverse
// normalized-line emitter and cross-list deduplication.

namespace namevo {

// Interpretation of one parenthesized annotation. Tokens carrying a 3-4
// digit number feed years; capital-initial digit-free tokens are aliases;
// the rest is noise and lands in discarded.
struct Annotation {
  std::vector<int> years;
  std::vector<std::string> aliases;
  std::vector<std::string> discarded;

  bool operator==(const Annotation&) const = default;
};

// One list item split into arrow-separated names with their raw bracket
// contents, before any interpretation.
struct ListLine {
  struct Segment {
    std::string name;
    std::vector<std::string> bracket_texts;
    bool operator==(const Segment&) const = default;
  };
  std::string raw;
  std::vector<Segment> names_with_annotations;

  bool operator==(const ListLine&) const = default;
};

using Warnings = std::vector<std::string>;

Annotation parse_annotation(std::string_view bracket_text);

// Splits a line at arrows ('→' or '->') outside parentheses. Returns nothing
// when the line has no arrow separator. Throws MalformedLineError on
// unbalanced parentheses or an empty arrow-adjacent name.
std::optional<ListLine> tokenize_list_line(std::string_view line);

// Full line parse: tokenize, interpret annotations, assemble the chain.
// Years attach to the change ending at the annotated name; a year annotation
// on the first name has no change to attach to and is dropped with a
// warning. Adjacent equal names (case-insensitive) are rejected.
std::optional<EvolutionChain> parse_list_line(std::string_view line,
                                              std::string_view source_list,
                                              Warnings* warnings = nullptr);

// Applies parse_list_line to every line of a list page; non-chain lines are
// skipped. MalformedLineError is rethrown with the 1-based line number.
std::vector<EvolutionChain> parse_list_page(std::string_view document,
                                            std::string_view source_list,
                                            Warnings* warnings = nullptr);

// Chains are duplicates iff their case-insensitive canonical name sequences
// are equal. The first occurrence survives; years and aliases of later
// duplicates are unioned in (a conflicting year keeps the first and warns).
// Idempotent.
std::vector<EvolutionChain> dedupe_chains(const std::vector<EvolutionChain>& chains,
                                          Warnings* warnings = nullptr);

// Curated-record format: one flat JSON object per line with fields
//   names   array of text, oldest name first (length >= 2)
//   years   array of integer-or-null, length = len(names) - 1
//   aliases array of array-of-text, length = len(names)
//   source  text
// years, aliases and source may be omitted. Throws SchemaError naming the
// offending record and field.
std::vector<EvolutionChain> load_curated_changes(std::istream& in,
                                                 Warnings* warnings = nullptr);
std::vector<EvolutionChain> load_curated_changes(std::string_view document,
                                                 Warnings* warnings = nullptr);

// Writes chains in the curated-record format; the exact inverse of
// load_curated_changes.
void write_chains(std::ostream& out, const std::vector<EvolutionChain>& chains);
std::string chains_to_string(const std::vector<EvolutionChain>& chains);

// Emits "Name1 (Alias1/Alias2) → Name2 (1868) → ..." such that
// parse_list_line(normalize_chain_line(c)) == c for chains expressible in
// the line grammar (names free of arrows and parentheses, years >= 100).
std::string normalize_chain_line(const EvolutionChain& chain);

}  // namespace namevo
