#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seedgen/corpus_model.hpp"
#include "seedgen/error.hpp"
#include "seedgen/trace_model.hpp"

namespace seedgen {

// Regularized upper incomplete gamma Q(a, x); series for x < a + 1,
// continued fraction otherwise. Relative accuracy ~1e-10.
double gamma_q(double a, double x);

struct ChiSquareResult {
  double statistic = 0.0;
  uint64_t dof = 0;
  double p_value = 1.0;
};

// D(p || q) with additive smoothing 1e-9 on q followed by renormalization,
// so q has mass wherever p does. p must sum to 1 within 1e-6.
template <class Key>
double kl_divergence(const std::map<Key, double>& p, const std::map<Key, double>& q) {
  double p_total = 0.0;
  for (const auto& [k, v] : p) p_total += v;
  if (std::abs(p_total - 1.0) > 1e-6) throw Error("p is not normalized");

  constexpr double kSmooth = 1e-9;
  double q_total = 0.0;
  for (const auto& [k, v] : q) q_total += v + kSmooth;
  for (const auto& [k, v] : p) {
    if (!q.count(k)) q_total += kSmooth;
  }

  double d = 0.0;
  for (const auto& [k, pv] : p) {
    if (pv <= 0.0) continue;
    auto it = q.find(k);
    double qv = ((it != q.end() ? it->second : 0.0) + kSmooth) / q_total;
    d += pv * std::log(pv / qv);
  }
  return std::max(0.0, d);
}

// Pearson chi-square against expected proportions. Cells with expected
// count below 1 are pooled into one; dof = retained cells - 1.
template <class Key>
ChiSquareResult chi_square_test(const std::map<Key, uint64_t>& observed,
                                const std::map<Key, double>& expected, uint64_t n) {
  if (n == 0) throw Error("chi-square requires n >= 1");
  double pooled_obs = 0.0, pooled_exp = 0.0;
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  for (const auto& [k, p] : expected) {
    double e = p * static_cast<double>(n);
    auto it = observed.find(k);
    double o = it != observed.end() ? static_cast<double>(it->second) : 0.0;
    if (e < 1.0) {
      pooled_obs += o;
      pooled_exp += e;
    } else {
      cells.emplace_back(o, e);
    }
  }
  if (pooled_exp > 0.0) cells.emplace_back(pooled_obs, pooled_exp);
  if (cells.size() < 2) throw Error("chi-square: all cells pooled away");

  ChiSquareResult result;
  for (const auto& [o, e] : cells) result.statistic += (o - e) * (o - e) / e;
  result.dof = cells.size() - 1;
  result.p_value = gamma_q(static_cast<double>(result.dof) / 2.0, result.statistic / 2.0);
  return result;
}

// Max pointwise CDF difference over the merged support.
template <class Key>
double ks_statistic(const std::map<Key, double>& cdf_a, const std::map<Key, double>& cdf_b) {
  if (cdf_a.empty() && cdf_b.empty()) throw Error("empty support");
  for (const auto* cdf : {&cdf_a, &cdf_b}) {
    double prev = 0.0;
    for (const auto& [k, v] : *cdf) {
      if (v + 1e-12 < prev) throw Error("CDF is decreasing");
      prev = v;
    }
    if (!cdf->empty() && std::abs(prev - 1.0) > 1e-6) throw Error("CDF does not end at 1");
  }
  auto ia = cdf_a.begin();
  auto ib = cdf_b.begin();
  double va = 0.0, vb = 0.0, d = 0.0;
  while (ia != cdf_a.end() || ib != cdf_b.end()) {
    if (ib == cdf_b.end() || (ia != cdf_a.end() && ia->first < ib->first)) {
      va = (ia++)->second;
    } else if (ia == cdf_a.end() || ib->first < ia->first) {
      vb = (ib++)->second;
    } else {
      va = (ia++)->second;
      vb = (ib++)->second;
    }
    d = std::max(d, std::abs(va - vb));
  }
  return d;
}

// Empirical CDF from a count histogram.
template <class Key>
std::map<Key, double> histogram_cdf(const std::map<Key, uint64_t>& hist) {
  uint64_t total = 0;
  for (const auto& [k, c] : hist) total += c;
  std::map<Key, double> cdf;
  if (total == 0) return cdf;
  uint64_t running = 0;
  for (const auto& [k, c] : hist) {
    running += c;
    cdf[k] = static_cast<double>(running) / static_cast<double>(total);
  }
  return cdf;
}

struct CheckRecord {
  std::string name;
  double seed_value = 0.0;
  double synthetic_value = 0.0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<CheckRecord> checks;

  bool overall_pass() const;
  std::string to_table() const;        // human-readable, one row per check
  std::string serialize() const;       // deterministic structured text
};

struct ValidationThresholds {
  double word_kl = 0.02;
  double length_ks = 0.05;
  double class_alpha = 0.001;
  double reuse_ks = 0.05;
  double zipf_s_delta = 0.1;
  double rate_rel_err = 0.10;
};

// Distributional fidelity of a synthetic corpus against its seed model.
ValidationReport validate_corpus(const CorpusModel& seed, const CorpusModel& synthetic,
                                 const ValidationThresholds& thresholds = {});

// Fidelity of a synthetic trace: Zipf exponent, reuse-distance CDF, and
// per-section rates (synthetic rates divided by rate_scale before compare).
ValidationReport validate_trace(const TraceModel& seed, const QueryTrace& synthetic,
                                const ValidationThresholds& thresholds = {},
                                double rate_scale = 1.0);

}  // namespace seedgen
