#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "namevo/corpus.hpp"
#include "namevo/model.hpp"
#include "namevo/segment.hpp"

// Whole-corpus analysis: resolve every chain, run the per-entity window
// analysis, and produce the excerpt records plus the resolution log. The
// parallel driver is the production path; the serial one is the reference
// implementation the tests and the benchmark compare against. Both produce
// identical output: results are written into per-entity slots and sorted by
// a worker-independent key.

namespace namevo {

struct CorpusAnalysis {
  std::vector<EntityResolution> resolutions;  // sorted by (entity_id, source_list)
  std::vector<ExcerptRecord> records;         // sorted by (entity_id, source_list, change_index)
};

// Reference implementation: one entity at a time.
CorpusAnalysis analyze_corpus_serial(std::span<const EvolutionChain> chains,
                                     TitleResolver& resolver, const SentenceSplitter& splitter);

// OpenMP-parallel over entities. The resolver must be warmed (every title
// answerable without an upstream fetch) or backed by a thread-safe source.
// workers <= 0 means "use all hardware threads".
CorpusAnalysis analyze_corpus(std::span<const EvolutionChain> chains, TitleResolver& resolver,
                              const SentenceSplitter& splitter, int workers = 0);

// Newline-delimited JSON serialization of both outputs.
void write_resolution_log(std::ostream& out, const std::vector<EntityResolution>& resolutions);
std::vector<EntityResolution> read_resolution_log(std::istream& in);

void write_excerpt_records(std::ostream& out, const std::vector<ExcerptRecord>& records);
std::vector<ExcerptRecord> read_excerpt_records(std::istream& in);

}  // namespace namevo
