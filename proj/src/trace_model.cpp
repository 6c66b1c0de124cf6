#include "seedgen/trace_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "seedgen/error.hpp"

namespace seedgen {

TraceEntry parse_trace_line(const std::string& line, uint64_t line_no) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) {
    throw ParseError("line " + std::to_string(line_no) + ": missing tab separator");
  }
  TraceEntry entry;
  try {
    size_t used = 0;
    entry.timestamp_ms = std::stoull(line.substr(0, tab), &used);
    if (used != tab) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad timestamp");
  }
  std::istringstream rest(line.substr(tab + 1));
  std::string term;
  while (rest >> term) entry.terms.push_back(std::move(term));
  if (entry.terms.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": query has no terms");
  }
  return entry;
}

std::string format_trace_entry(const TraceEntry& entry) {
  std::string out = std::to_string(entry.timestamp_ms);
  out += '\t';
  for (size_t i = 0; i < entry.terms.size(); ++i) {
    if (i) out += ' ';
    out += entry.terms[i];
  }
  return out;
}

QueryTrace read_trace_stream(std::istream& in) {
  QueryTrace trace;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    trace.entries.push_back(parse_trace_line(line, line_no));
  }
  return trace;
}

QueryTrace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace file: " + path);
  return read_trace_stream(in);
}

void write_trace_stream(const QueryTrace& trace, std::ostream& out) {
  for (const auto& entry : trace.entries) out << format_trace_entry(entry) << '\n';
}

void write_trace_file(const QueryTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write trace file: " + path);
  write_trace_stream(trace, out);
  if (!out) throw IoError("write failed: " + path);
}

std::string query_key(const std::vector<std::string>& terms) {
  std::string key;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) key += ' ';
    key += terms[i];
  }
  return key;
}

namespace {

// Fenwick tree over event positions; a set bit marks the latest occurrence
// of some key.
class BitSet {
 public:
  explicit BitSet(size_t n) : tree_(n + 1, 0) {}

  void add(size_t pos, int delta) {
    for (size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  // Count of set positions in [0, pos).
  uint64_t prefix(size_t pos) const {
    uint64_t sum = 0;
    for (size_t i = pos; i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

 private:
  std::vector<int64_t> tree_;
};

}  // namespace

ReuseDistances compute_reuse_distances(const std::vector<std::string>& keys) {
  if (keys.empty()) throw Error("empty key sequence");
  ReuseDistances result;
  result.per_event.reserve(keys.size());
  BitSet marks(keys.size());
  std::unordered_map<std::string, size_t> last_seen;
  last_seen.reserve(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    auto it = last_seen.find(keys[i]);
    if (it == last_seen.end()) {
      result.per_event.push_back(std::nullopt);
      result.cold_count += 1;
      last_seen.emplace(keys[i], i);
    } else {
      size_t prev = it->second;
      uint64_t distance = marks.prefix(i) - marks.prefix(prev + 1);
      result.per_event.push_back(distance);
      result.histogram[distance] += 1;
      marks.add(prev, -1);
      it->second = i;
    }
    marks.add(i, +1);
  }
  return result;
}

ZipfFit fit_zipf(const std::vector<uint64_t>& freq_by_rank, uint64_t min_freq) {
  std::vector<double> xs, ys;
  for (size_t r = 0; r < freq_by_rank.size(); ++r) {
    if (freq_by_rank[r] >= min_freq) {
      xs.push_back(std::log(static_cast<double>(r + 1)));
      ys.push_back(std::log(static_cast<double>(freq_by_rank[r])));
    }
  }
  if (xs.size() < 2) throw Error("insufficient mass for Zipf fit");
  const size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  double slope = sxy / sxx;
  ZipfFit fit;
  fit.s = -slope;
  if (syy <= 0.0) {
    fit.r2 = 1.0;  // all frequencies equal; the flat line is exact
  } else {
    double ss_res = syy - slope * sxy;
    fit.r2 = std::max(0.0, 1.0 - ss_res / syy);
  }
  return fit;
}

uint64_t TraceModel::query_count() const {
  uint64_t n = 0;
  for (const auto& [k, c] : terms_per_query) n += c;
  return n;
}

std::vector<std::pair<std::string, uint64_t>> TraceModel::ranked_terms() const {
  std::vector<std::pair<std::string, uint64_t>> ranked(term_freq.begin(),
                                                       term_freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

void TraceModel::check_invariants() const {
  uint64_t reuse_total = 0;
  for (const auto& [d, c] : reuse_hist) reuse_total += c;
  if (reuse_total + cold_count != query_count()) {
    throw Error("reuse histogram mass does not match query count");
  }
  for (double r : section_rates) {
    if (!(r >= 0.0)) throw Error("negative section rate");
  }
  if (zipf_s < 0.0) throw Error("negative Zipf exponent");
}

TraceModel analyze_trace(const QueryTrace& trace, uint64_t section_len_ms,
                         uint64_t zipf_min_freq) {
  if (trace.entries.empty()) throw Error("empty trace");
  if (section_len_ms == 0) throw Error("section length must be positive");

  TraceModel model;
  model.section_len_ms = section_len_ms;
  std::vector<std::string> keys;
  keys.reserve(trace.entries.size());
  uint64_t prev_ts = 0;
  for (size_t i = 0; i < trace.entries.size(); ++i) {
    const TraceEntry& entry = trace.entries[i];
    if (entry.terms.empty()) {
      throw ParseError("entry " + std::to_string(i) + ": query has no terms");
    }
    if (i > 0 && entry.timestamp_ms < prev_ts) {
      throw ParseError("entry " + std::to_string(i) + ": timestamp decreases");
    }
    prev_ts = entry.timestamp_ms;
    model.terms_per_query[entry.terms.size()] += 1;
    for (const auto& term : entry.terms) model.term_freq[term] += 1;
    keys.push_back(query_key(entry.terms));
  }

  ReuseDistances reuse = compute_reuse_distances(keys);
  model.reuse_hist = std::move(reuse.histogram);
  model.cold_count = reuse.cold_count;

  uint64_t sections = trace.entries.back().timestamp_ms / section_len_ms + 1;
  std::vector<uint64_t> counts(sections, 0);
  for (const auto& entry : trace.entries) counts[entry.timestamp_ms / section_len_ms] += 1;
  model.section_rates.reserve(sections);
  for (uint64_t c : counts) {
    model.section_rates.push_back(static_cast<double>(c) /
                                  (static_cast<double>(section_len_ms) / 1000.0));
  }

  std::vector<uint64_t> freq_by_rank;
  for (const auto& [term, count] : model.ranked_terms()) freq_by_rank.push_back(count);
  try {
    ZipfFit fit = fit_zipf(freq_by_rank, zipf_min_freq);
    model.zipf_s = fit.s;
    model.zipf_r2 = fit.r2;
  } catch (const Error&) {
    // Not enough mass above the cutoff; retry without it so tiny traces
    // still produce a model.
    try {
      ZipfFit fit = fit_zipf(freq_by_rank, 1);
      model.zipf_s = fit.s;
      model.zipf_r2 = fit.r2;
    } catch (const Error&) {
      model.zipf_s = 0.0;
      model.zipf_r2 = 0.0;
    }
  }

  model.check_invariants();
  return model;
}

std::string serialize_trace_model(const TraceModel& model) {
  nlohmann::json root;
  root["schema_version"] = 1;
  root["section_len_ms"] = model.section_len_ms;
  root["section_rates"] = model.section_rates;
  root["cold_count"] = model.cold_count;
  root["zipf_s"] = model.zipf_s;
  root["zipf_r2"] = model.zipf_r2;
  root["term_freq"] = nlohmann::json::object();
  for (const auto& [t, c] : model.term_freq) root["term_freq"][t] = c;
  root["terms_per_query"] = nlohmann::json::object();
  for (const auto& [k, c] : model.terms_per_query) {
    root["terms_per_query"][std::to_string(k)] = c;
  }
  root["reuse_hist"] = nlohmann::json::object();
  for (const auto& [d, c] : model.reuse_hist) root["reuse_hist"][std::to_string(d)] = c;
  return root.dump(2) + "\n";
}

TraceModel deserialize_trace_model(const std::string& text) {
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
  TraceModel model;
  model.section_len_ms = root.at("section_len_ms").get<uint64_t>();
  model.section_rates = root.at("section_rates").get<std::vector<double>>();
  model.cold_count = root.at("cold_count").get<uint64_t>();
  model.zipf_s = root.at("zipf_s").get<double>();
  model.zipf_r2 = root.at("zipf_r2").get<double>();
  for (const auto& [t, c] : root.at("term_freq").items()) {
    model.term_freq[t] = c.get<uint64_t>();
  }
  for (const auto& [k, c] : root.at("terms_per_query").items()) {
    model.terms_per_query[std::stoull(k)] = c.get<uint64_t>();
  }
  for (const auto& [d, c] : root.at("reuse_hist").items()) {
    model.reuse_hist[std::stoull(d)] = c.get<uint64_t>();
  }
  model.check_invariants();
  return model;
}

void save_trace_model(const TraceModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file: " + path);
  out << serialize_trace_model(model);
  if (!out) throw IoError("write failed: " + path);
}

TraceModel load_trace_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_trace_model(buf.str());
}

}  // namespace seedgen
