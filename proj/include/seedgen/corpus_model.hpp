#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace seedgen {

// A labeled token sequence, one line of the seed corpus.
struct Document {
  std::string label;
  std::vector<std::string> tokens;

  bool operator==(const Document&) const = default;
};

// Parses `label<TAB>token token ...`. line_no is used in error messages
// (1-based). Throws ParseError on empty label/tokens or embedded whitespace.
Document parse_document_line(const std::string& line, uint64_t line_no);

// Serializes back to the line format, without trailing newline.
std::string format_document(const Document& doc);

struct ClassStats {
  uint64_t doc_count = 0;
  uint64_t total_words = 0;
  std::map<std::string, uint64_t> word_counts;
  std::map<uint64_t, uint64_t> length_histogram;  // length in tokens -> docs

  bool operator==(const ClassStats&) const = default;
};

// Exact counts for P(class), P(word|class), P(length|class).
struct CorpusModel {
  uint64_t total_docs = 0;
  std::map<std::string, ClassStats> classes;

  bool operator==(const CorpusModel&) const = default;

  // Throws Error if any count invariant is violated.
  void check_invariants() const;
};

// Incremental counting; partial analyzers merge deterministically, so a
// corpus may be analyzed in parallel slices.
class CorpusAnalyzer {
 public:
  // index is the 0-based record position, used in error messages.
  void add(const Document& doc, uint64_t index);
  void merge(const CorpusAnalyzer& other);
  // Throws Error("empty seed corpus") if nothing was added.
  CorpusModel finish() const;

 private:
  CorpusModel model_;
};

// Single full pass over a document stream.
CorpusModel analyze_corpus(const std::vector<Document>& docs);
// Reads `label<TAB>tokens` lines until EOF. Blank lines are rejected.
CorpusModel analyze_corpus_stream(std::istream& in);
CorpusModel analyze_corpus_file(const std::string& path);

// Normalized views. Unknown class throws Error naming the class.
std::vector<std::pair<std::string, double>> class_distribution(const CorpusModel& model);
std::map<std::string, double> word_distribution(const CorpusModel& model,
                                                const std::string& cls);
std::map<uint64_t, double> length_distribution(const CorpusModel& model,
                                               const std::string& cls);

// Deterministic structured-text persistence (schema_version 1, sorted keys).
// load(save(m)) == m at count level; re-save is byte-identical.
std::string serialize_model(const CorpusModel& model);
CorpusModel deserialize_model(const std::string& text);
void save_model(const CorpusModel& model, const std::string& path);
CorpusModel load_model(const std::string& path);

}  // namespace seedgen
