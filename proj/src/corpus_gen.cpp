#include "seedgen/corpus_gen.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <ostream>
#include <vector>

#include "seedgen/error.hpp"

namespace seedgen {

namespace {

// Index of the first cumulative entry strictly greater than pick.
size_t cum_pick(const std::vector<uint64_t>& cum, uint64_t pick) {
  return std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin();
}

}  // namespace

DocumentSampler::DocumentSampler(const CorpusModel& model) {
  model.check_invariants();
  uint64_t running = 0;
  for (const auto& [label, cls] : model.classes) {
    ClassTables tables;
    tables.label = label;
    uint64_t wcum = 0;
    for (const auto& [w, c] : cls.word_counts) {
      wcum += c;
      tables.words.push_back(w);
      tables.word_cum.push_back(wcum);
    }
    uint64_t lcum = 0;
    for (const auto& [len, c] : cls.length_histogram) {
      lcum += c;
      tables.lengths.push_back(len);
      tables.length_cum.push_back(lcum);
    }
    classes_.push_back(std::move(tables));
    running += cls.doc_count;
    class_cum_.push_back(running);
  }
  if (classes_.empty()) throw Error("empty model");
}

Document DocumentSampler::sample(Rng& rng) const {
  const ClassTables& cls =
      classes_[cum_pick(class_cum_, rng.uniform_index(class_cum_.back()))];
  uint64_t length =
      cls.lengths[cum_pick(cls.length_cum, rng.uniform_index(cls.length_cum.back()))];
  Document doc;
  doc.label = cls.label;
  doc.tokens.reserve(length);
  for (uint64_t i = 0; i < length; ++i) {
    doc.tokens.push_back(
        cls.words[cum_pick(cls.word_cum, rng.uniform_index(cls.word_cum.back()))]);
  }
  return doc;
}

Document generate_document(const DocumentSampler& sampler, Rng& rng) {
  return sampler.sample(rng);
}

namespace {

// Serialized lines for one chunk of documents.
std::string render_chunk(const DocumentSampler& sampler, uint64_t master_seed,
                         uint64_t chunk_index, uint64_t chunk_docs, bool unlabeled) {
  Rng rng = derive_stream(master_seed, chunk_index);
  std::string out;
  for (uint64_t i = 0; i < chunk_docs; ++i) {
    Document doc = sampler.sample(rng);
    if (unlabeled) {
      for (size_t t = 0; t < doc.tokens.size(); ++t) {
        if (t) out += ' ';
        out += doc.tokens[t];
      }
    } else {
      out += format_document(doc);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

GenerationSummary generate_corpus(const CorpusModel& model, const GenerationSpec& spec,
                                  std::ostream& sink) {
  if (spec.target == 0) throw Error("generation target must be positive");
  if (spec.chunk_size == 0) throw Error("chunk_size must be at least 1");
  DocumentSampler sampler(model);

  const bool by_docs = spec.target_kind == GenerationSpec::TargetKind::DocCount;
  const unsigned workers = std::max(1u, spec.threads);
  GenerationSummary summary;

  // Chunks are rendered ahead by a bounded window of async tasks and written
  // strictly in index order, so thread count never changes the bytes.
  std::vector<std::future<std::string>> window;
  uint64_t next_to_launch = 0;
  uint64_t next_to_write = 0;
  bool done = false;

  auto chunk_docs_for = [&](uint64_t chunk_index) -> uint64_t {
    if (!by_docs) return spec.chunk_size;
    uint64_t start = chunk_index * spec.chunk_size;
    if (start >= spec.target) return 0;
    return std::min<uint64_t>(spec.chunk_size, spec.target - start);
  };

  auto launch = [&]() {
    uint64_t docs = chunk_docs_for(next_to_launch);
    if (docs == 0) return false;
    uint64_t idx = next_to_launch++;
    window.push_back(std::async(std::launch::async, render_chunk, std::cref(sampler),
                                spec.master_seed, idx, docs, spec.unlabeled));
    return true;
  };

  while (!done) {
    while (window.size() < 2 * workers && launch()) {
    }
    if (window.empty()) break;
    std::string chunk = window.front().get();
    window.erase(window.begin());
    uint64_t docs = chunk_docs_for(next_to_write);
    ++next_to_write;
    if (by_docs) {
      sink.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      summary.docs_written += docs;
      summary.bytes_written += chunk.size();
    } else {
      // Byte target: stop at the first document whose write crosses it.
      size_t pos = 0;
      for (uint64_t i = 0; i < docs && !done; ++i) {
        size_t nl = chunk.find('\n', pos);
        size_t line_len = nl - pos + 1;
        sink.write(chunk.data() + pos, static_cast<std::streamsize>(line_len));
        pos = nl + 1;
        summary.docs_written += 1;
        summary.bytes_written += line_len;
        if (summary.bytes_written >= spec.target) done = true;
      }
    }
    if (!sink) {
      throw IoError("sink write failed after " + std::to_string(summary.docs_written) +
                    " documents");
    }
  }
  for (auto& fut : window) fut.wait();
  return summary;
}

GenerationSummary generate_corpus_file(const CorpusModel& model,
                                       const GenerationSpec& spec,
                                       const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write output file: " + path);
  GenerationSummary summary = generate_corpus(model, spec, out);
  out.close();
  if (!out) throw IoError("write failed: " + path);
  return summary;
}

}  // namespace seedgen
