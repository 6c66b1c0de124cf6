#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include "seedgen/corpus_model.hpp"
#include "seedgen/rng.hpp"

namespace seedgen {

struct GenerationSpec {
  enum class TargetKind { DocCount, ByteSize };
  TargetKind target_kind = TargetKind::DocCount;
  uint64_t target = 0;              // documents or bytes, per target_kind
  uint64_t master_seed = 0;
  uint64_t chunk_size = 10000;      // documents per deterministic chunk
  unsigned threads = 1;
  bool unlabeled = false;           // emit tokens only (Sort/Grep/WordCount inputs)
};

// Precomputed cumulative-weight tables for one model; O(log V) per draw.
class DocumentSampler {
 public:
  explicit DocumentSampler(const CorpusModel& model);
  Document sample(Rng& rng) const;

 private:
  struct ClassTables {
    std::string label;
    std::vector<std::string> words;
    std::vector<uint64_t> word_cum;
    std::vector<uint64_t> lengths;
    std::vector<uint64_t> length_cum;
  };
  std::vector<ClassTables> classes_;
  std::vector<uint64_t> class_cum_;
};

Document generate_document(const DocumentSampler& sampler, Rng& rng);

struct GenerationSummary {
  uint64_t docs_written = 0;
  uint64_t bytes_written = 0;
};

// Writes `label<TAB>tokens` lines (or bare token lines when unlabeled).
// Output bytes are a pure function of (model, spec.master_seed, target,
// chunk_size, unlabeled) regardless of spec.threads.
GenerationSummary generate_corpus(const CorpusModel& model, const GenerationSpec& spec,
                                  std::ostream& sink);
GenerationSummary generate_corpus_file(const CorpusModel& model,
                                       const GenerationSpec& spec,
                                       const std::string& path);

}  // namespace seedgen
