#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "seedgen/rng.hpp"
#include "seedgen/trace_model.hpp"

namespace seedgen {

struct TraceGenSpec {
  enum class TargetKind { QueryCount, DurationMs };
  TargetKind target_kind = TargetKind::QueryCount;
  uint64_t target = 0;
  double rate_scale = 1.0;
  uint64_t master_seed = 0;
  bool uniform_arrivals = false;  // evenly spaced instead of Poisson
};

// Zipf-weighted term sampler plus terms-per-query sampler for cold queries.
class QuerySampler {
 public:
  explicit QuerySampler(const TraceModel& model);
  std::vector<std::string> sample_new_query(Rng& rng) const;

 private:
  std::vector<std::string> terms_;
  std::vector<uint64_t> term_cum_;
  std::vector<uint64_t> lengths_;
  std::vector<uint64_t> length_cum_;
};

// LRU stack driving reuse-distance replay. A sampled distance d replays the
// query at stack depth d and moves it to the top; Cold or d beyond the
// current depth emits a fresh query.
class LocalityStack {
 public:
  LocalityStack(const TraceModel& model, const QuerySampler& sampler);
  std::vector<std::string> step(Rng& rng);

 private:
  const QuerySampler& sampler_;
  std::deque<std::vector<std::string>> stack_;
  std::unordered_set<std::string> seen_;  // keys of everything ever pushed
  std::vector<uint64_t> distances_;  // index == distance_cum_ slot; last = Cold
  std::vector<uint64_t> distance_cum_;
};

// Per-section arrival timestamps: Poisson with rate rate_scale * rate_i
// (or evenly spaced in uniform mode), sections cycling past the model's end.
// Emits timestamps until `count` arrivals or `duration_ms` is exceeded.
std::vector<uint64_t> generate_timestamps(const std::vector<double>& section_rates,
                                          uint64_t section_len_ms, double rate_scale,
                                          Rng& rng, uint64_t count_target,
                                          uint64_t duration_ms_target,
                                          bool uniform_arrivals = false);

QueryTrace generate_trace(const TraceModel& model, const TraceGenSpec& spec);

}  // namespace seedgen
