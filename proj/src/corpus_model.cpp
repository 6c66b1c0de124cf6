#include "seedgen/corpus_model.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "json.hpp"
#include "seedgen/error.hpp"

namespace seedgen {

namespace {

bool has_whitespace(const std::string& s) {
  for (unsigned char c : s) {
    if (std::isspace(c)) return true;
  }
  return false;
}

}  // namespace

Document parse_document_line(const std::string& line, uint64_t line_no) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) {
    throw ParseError("line " + std::to_string(line_no) + ": missing tab separator");
  }
  Document doc;
  doc.label = line.substr(0, tab);
  if (doc.label.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": empty label");
  }
  if (has_whitespace(doc.label)) {
    throw ParseError("line " + std::to_string(line_no) + ": whitespace in label");
  }
  std::istringstream rest(line.substr(tab + 1));
  std::string token;
  while (rest >> token) doc.tokens.push_back(std::move(token));
  if (doc.tokens.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": document has no tokens");
  }
  return doc;
}

std::string format_document(const Document& doc) {
  std::string out = doc.label;
  out += '\t';
  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i) out += ' ';
    out += doc.tokens[i];
  }
  return out;
}

void CorpusModel::check_invariants() const {
  uint64_t doc_sum = 0;
  for (const auto& [label, cls] : classes) {
    if (cls.doc_count == 0) throw Error("class '" + label + "' has zero documents");
    doc_sum += cls.doc_count;
    uint64_t words = 0;
    for (const auto& [w, c] : cls.word_counts) words += c;
    if (words != cls.total_words) {
      throw Error("class '" + label + "': word counts do not sum to total_words");
    }
    uint64_t docs = 0;
    for (const auto& [len, c] : cls.length_histogram) docs += c;
    if (docs != cls.doc_count) {
      throw Error("class '" + label + "': length histogram does not sum to doc_count");
    }
  }
  if (doc_sum != total_docs) throw Error("class doc counts do not sum to total_docs");
}

void CorpusAnalyzer::add(const Document& doc, uint64_t index) {
  if (doc.tokens.empty()) {
    throw ParseError("record " + std::to_string(index) + ": document has no tokens");
  }
  if (doc.label.empty()) {
    throw ParseError("record " + std::to_string(index) + ": empty label");
  }
  auto& cls = model_.classes[doc.label];
  cls.doc_count += 1;
  cls.total_words += doc.tokens.size();
  cls.length_histogram[doc.tokens.size()] += 1;
  for (const auto& tok : doc.tokens) cls.word_counts[tok] += 1;
  model_.total_docs += 1;
}

void CorpusAnalyzer::merge(const CorpusAnalyzer& other) {
  model_.total_docs += other.model_.total_docs;
  for (const auto& [label, theirs] : other.model_.classes) {
    auto& ours = model_.classes[label];
    ours.doc_count += theirs.doc_count;
    ours.total_words += theirs.total_words;
    for (const auto& [w, c] : theirs.word_counts) ours.word_counts[w] += c;
    for (const auto& [len, c] : theirs.length_histogram) ours.length_histogram[len] += c;
  }
}

CorpusModel CorpusAnalyzer::finish() const {
  if (model_.total_docs == 0) throw Error("empty seed corpus");
  model_.check_invariants();
  return model_;
}

CorpusModel analyze_corpus(const std::vector<Document>& docs) {
  CorpusAnalyzer analyzer;
  for (uint64_t i = 0; i < docs.size(); ++i) analyzer.add(docs[i], i);
  return analyzer.finish();
}

CorpusModel analyze_corpus_stream(std::istream& in) {
  CorpusAnalyzer analyzer;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    analyzer.add(parse_document_line(line, line_no), line_no - 1);
  }
  return analyzer.finish();
}

CorpusModel analyze_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path);
  return analyze_corpus_stream(in);
}

std::vector<std::pair<std::string, double>> class_distribution(const CorpusModel& model) {
  if (model.total_docs == 0) throw Error("empty model");
  std::vector<std::pair<std::string, double>> dist;
  dist.reserve(model.classes.size());
  for (const auto& [label, cls] : model.classes) {
    dist.emplace_back(label, static_cast<double>(cls.doc_count) /
                                 static_cast<double>(model.total_docs));
  }
  return dist;
}

namespace {

const ClassStats& find_class(const CorpusModel& model, const std::string& cls) {
  auto it = model.classes.find(cls);
  if (it == model.classes.end()) throw Error("unknown class: " + cls);
  return it->second;
}

}  // namespace

std::map<std::string, double> word_distribution(const CorpusModel& model,
                                                const std::string& cls) {
  const ClassStats& stats = find_class(model, cls);
  std::map<std::string, double> dist;
  for (const auto& [w, c] : stats.word_counts) {
    dist[w] = static_cast<double>(c) / static_cast<double>(stats.total_words);
  }
  return dist;
}

std::map<uint64_t, double> length_distribution(const CorpusModel& model,
                                               const std::string& cls) {
  const ClassStats& stats = find_class(model, cls);
  std::map<uint64_t, double> dist;
  for (const auto& [len, c] : stats.length_histogram) {
    dist[len] = static_cast<double>(c) / static_cast<double>(stats.doc_count);
  }
  return dist;
}

std::string serialize_model(const CorpusModel& model) {
  nlohmann::json root;
  root["schema_version"] = 1;
  root["total_docs"] = model.total_docs;
  auto& classes = root["classes"] = nlohmann::json::array();
  for (const auto& [label, cls] : model.classes) {
    nlohmann::json entry;
    entry["label"] = label;
    entry["doc_count"] = cls.doc_count;
    entry["total_words"] = cls.total_words;
    entry["word_counts"] = nlohmann::json::object();
    for (const auto& [w, c] : cls.word_counts) entry["word_counts"][w] = c;
    entry["length_histogram"] = nlohmann::json::object();
    for (const auto& [len, c] : cls.length_histogram) {
      entry["length_histogram"][std::to_string(len)] = c;
    }
    classes.push_back(std::move(entry));
  }
  return root.dump(2) + "\n";
}

CorpusModel deserialize_model(const std::string& text) {
  if (text.empty()) throw ParseError("truncated file: empty model document");
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("truncated file: ") + e.what());
  }
  if (!root.contains("schema_version") || root["schema_version"] != 1) {
    throw ParseError("schema-version mismatch: expected 1");
  }
  CorpusModel model;
  model.total_docs = root.at("total_docs").get<uint64_t>();
  for (const auto& entry : root.at("classes")) {
    std::string label = entry.at("label").get<std::string>();
    if (model.classes.count(label)) {
      throw ParseError("duplicate class key: " + label);
    }
    ClassStats cls;
    cls.doc_count = entry.at("doc_count").get<uint64_t>();
    cls.total_words = entry.at("total_words").get<uint64_t>();
    for (const auto& [w, c] : entry.at("word_counts").items()) {
      cls.word_counts[w] = c.get<uint64_t>();
    }
    for (const auto& [len, c] : entry.at("length_histogram").items()) {
      cls.length_histogram[std::stoull(len)] = c.get<uint64_t>();
    }
    model.classes.emplace(std::move(label), std::move(cls));
  }
  model.check_invariants();
  return model;
}

void save_model(const CorpusModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file: " + path);
  out << serialize_model(model);
  if (!out) throw IoError("write failed: " + path);
}

CorpusModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace seedgen
