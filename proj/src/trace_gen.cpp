#include "seedgen/trace_gen.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "seedgen/error.hpp"

namespace seedgen {

namespace {

size_t cum_pick(const std::vector<uint64_t>& cum, uint64_t pick) {
  return std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin();
}

}  // namespace

QuerySampler::QuerySampler(const TraceModel& model) {
  uint64_t cum = 0;
  for (const auto& [term, count] : model.term_freq) {
    cum += count;
    terms_.push_back(term);
    term_cum_.push_back(cum);
  }
  if (terms_.empty()) throw Error("model has empty vocabulary");
  cum = 0;
  for (const auto& [len, count] : model.terms_per_query) {
    cum += count;
    lengths_.push_back(len);
    length_cum_.push_back(cum);
  }
  if (lengths_.empty()) throw Error("model has no terms-per-query mass");
}

std::vector<std::string> QuerySampler::sample_new_query(Rng& rng) const {
  uint64_t length =
      lengths_[cum_pick(length_cum_, rng.uniform_index(length_cum_.back()))];
  std::vector<std::string> terms;
  terms.reserve(length);
  for (uint64_t i = 0; i < length; ++i) {
    terms.push_back(terms_[cum_pick(term_cum_, rng.uniform_index(term_cum_.back()))]);
  }
  return terms;
}

LocalityStack::LocalityStack(const TraceModel& model, const QuerySampler& sampler)
    : sampler_(sampler) {
  if (model.cold_count == 0 && model.reuse_hist.empty()) {
    throw Error("model has no locality mass");
  }
  uint64_t cum = 0;
  for (const auto& [d, count] : model.reuse_hist) {
    cum += count;
    distances_.push_back(d);
    distance_cum_.push_back(cum);
  }
  // Last slot is Cold.
  cum += model.cold_count;
  distances_.push_back(0);
  distance_cum_.push_back(cum);
}

std::vector<std::string> LocalityStack::step(Rng& rng) {
  size_t slot = cum_pick(distance_cum_, rng.uniform_index(distance_cum_.back()));
  bool cold = slot + 1 == distance_cum_.size();
  if (!cold) {
    uint64_t d = distances_[slot];
    if (d < stack_.size()) {
      std::vector<std::string> query = stack_[d];
      stack_.erase(stack_.begin() + static_cast<std::ptrdiff_t>(d));
      stack_.push_front(query);
      return query;
    }
    // Distance beyond the current depth falls back to a cold query.
  }
  // A cold emission must be a key never seen before, or re-analysis would
  // count it as a reuse and shrink the cold fraction. A bounded number of
  // resamples keeps pathological tiny vocabularies from looping forever.
  std::vector<std::string> query;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    query = sampler_.sample_new_query(rng);
    if (!seen_.count(query_key(query))) break;
  }
  seen_.insert(query_key(query));
  stack_.push_front(query);
  return query;
}

std::vector<uint64_t> generate_timestamps(const std::vector<double>& section_rates,
                                          uint64_t section_len_ms, double rate_scale,
                                          Rng& rng, uint64_t count_target,
                                          uint64_t duration_ms_target,
                                          bool uniform_arrivals) {
  if (section_rates.empty()) throw Error("no section rates");
  if (section_len_ms == 0) throw Error("section length must be positive");
  if (rate_scale <= 0.0) throw Error("rate_scale must be positive");
  bool any_positive = std::any_of(section_rates.begin(), section_rates.end(),
                                  [](double r) { return r > 0.0; });
  if (!any_positive && count_target > 0) throw Error("unreachable target");

  std::vector<uint64_t> out;
  const double len_ms = static_cast<double>(section_len_ms);
  for (uint64_t section = 0;; ++section) {
    double rate_per_ms =
        rate_scale * section_rates[section % section_rates.size()] / 1000.0;
    double start = static_cast<double>(section) * len_ms;
    if (duration_ms_target > 0 && start >= static_cast<double>(duration_ms_target)) {
      return out;
    }
    if (rate_per_ms > 0.0) {
      if (uniform_arrivals) {
        auto n = static_cast<uint64_t>(std::llround(rate_per_ms * len_ms));
        for (uint64_t j = 0; j < n; ++j) {
          double t = start + static_cast<double>(j) * len_ms / static_cast<double>(n);
          uint64_t ts = static_cast<uint64_t>(t);
          if (duration_ms_target > 0 && ts >= duration_ms_target) return out;
          out.push_back(ts);
          if (count_target > 0 && out.size() >= count_target) return out;
        }
      } else {
        double t = start + rng.exponential(rate_per_ms);
        while (t < start + len_ms) {
          uint64_t ts = static_cast<uint64_t>(t);
          if (duration_ms_target > 0 && ts >= duration_ms_target) return out;
          out.push_back(ts);
          if (count_target > 0 && out.size() >= count_target) return out;
          t += rng.exponential(rate_per_ms);
        }
      }
    }
  }
}

QueryTrace generate_trace(const TraceModel& model, const TraceGenSpec& spec) {
  if (spec.target == 0) throw Error("generation target must be positive");
  // The generator treats terms_per_query and reuse_hist as sampling weights,
  // so it only needs them to be proper distributions; the mass-match invariant
  // is enforced on analyzed models, not here.
  if (model.term_freq.empty()) throw Error("model has no terms");
  if (model.terms_per_query.empty()) throw Error("model has no query-length histogram");
  if (model.reuse_hist.empty() && model.cold_count == 0) {
    throw Error("model has no reuse mass");
  }
  for (double r : model.section_rates) {
    if (!(r >= 0.0)) throw Error("negative section rate");
  }
  QuerySampler sampler(model);
  LocalityStack stack(model, sampler);

  Rng timing_rng = derive_stream(spec.master_seed, 0);
  Rng query_rng = derive_stream(spec.master_seed, 1);

  uint64_t count_target =
      spec.target_kind == TraceGenSpec::TargetKind::QueryCount ? spec.target : 0;
  uint64_t duration_target =
      spec.target_kind == TraceGenSpec::TargetKind::DurationMs ? spec.target : 0;
  std::vector<uint64_t> timestamps =
      generate_timestamps(model.section_rates, model.section_len_ms, spec.rate_scale,
                          timing_rng, count_target, duration_target,
                          spec.uniform_arrivals);

  QueryTrace trace;
  trace.entries.reserve(timestamps.size());
  for (uint64_t ts : timestamps) {
    trace.entries.push_back(TraceEntry{ts, stack.step(query_rng)});
  }
  return trace;
}

}  // namespace seedgen
