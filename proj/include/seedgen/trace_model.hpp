#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace seedgen {

struct TraceEntry {
  uint64_t timestamp_ms = 0;  // milliseconds since trace start
  std::vector<std::string> terms;

  bool operator==(const TraceEntry&) const = default;
};

// Time-ordered query records.
struct QueryTrace {
  std::vector<TraceEntry> entries;

  bool operator==(const QueryTrace&) const = default;
};

// Parses `timestamp_ms<TAB>term term ...` lines.
TraceEntry parse_trace_line(const std::string& line, uint64_t line_no);
std::string format_trace_entry(const TraceEntry& entry);
QueryTrace read_trace_stream(std::istream& in);
QueryTrace read_trace_file(const std::string& path);
void write_trace_stream(const QueryTrace& trace, std::ostream& out);
void write_trace_file(const QueryTrace& trace, const std::string& path);

// Query identity for the locality model: terms joined by single spaces,
// order preserved.
std::string query_key(const std::vector<std::string>& terms);

// Per-event reuse distances. nullopt marks a cold (first) occurrence;
// a recurrence's distance is the number of distinct keys issued strictly
// between it and the previous occurrence of the same key.
struct ReuseDistances {
  std::vector<std::optional<uint64_t>> per_event;
  std::map<uint64_t, uint64_t> histogram;
  uint64_t cold_count = 0;
};

// O(n log n): last-occurrence map plus a Fenwick tree over event positions
// marking each key's latest occurrence.
ReuseDistances compute_reuse_distances(const std::vector<std::string>& keys);

struct ZipfFit {
  double s = 0.0;   // negated slope of the log-log least-squares line
  double r2 = 0.0;  // coefficient of determination
};

// Least squares through (log rank, log frequency) over ranks whose frequency
// is at least min_freq. Throws Error("insufficient mass for Zipf fit") when
// fewer than 2 ranks qualify.
ZipfFit fit_zipf(const std::vector<uint64_t>& freq_by_rank, uint64_t min_freq = 5);

// Semantic + locality + timing models of one trace.
struct TraceModel {
  std::map<std::string, uint64_t> term_freq;
  double zipf_s = 0.0;
  double zipf_r2 = 0.0;
  std::map<uint64_t, uint64_t> terms_per_query;
  std::map<uint64_t, uint64_t> reuse_hist;
  uint64_t cold_count = 0;
  uint64_t section_len_ms = 0;
  std::vector<double> section_rates;  // requests per second

  uint64_t query_count() const;
  // Terms ranked by descending count, ties broken lexicographically.
  std::vector<std::pair<std::string, uint64_t>> ranked_terms() const;
  void check_invariants() const;
};

// Single pass over a non-empty, time-ordered trace. Section i covers
// [i*section_len, (i+1)*section_len) from timestamp 0.
TraceModel analyze_trace(const QueryTrace& trace, uint64_t section_len_ms,
                         uint64_t zipf_min_freq = 5);

std::string serialize_trace_model(const TraceModel& model);
TraceModel deserialize_trace_model(const std::string& text);
void save_trace_model(const TraceModel& model, const std::string& path);
TraceModel load_trace_model(const std::string& path);

}  // namespace seedgen
