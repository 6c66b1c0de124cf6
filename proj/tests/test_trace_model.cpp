#include <set>

#include "doctest.h"
#include "seedgen/error.hpp"
#include "seedgen/rng.hpp"
#include "seedgen/trace_model.hpp"

using namespace seedgen;

namespace {

// Naive O(n^2) oracle: walk back to the previous occurrence, counting the
// distinct keys strictly between.
std::vector<std::optional<uint64_t>> naive_reuse(const std::vector<std::string>& keys) {
  std::vector<std::optional<uint64_t>> out;
  for (size_t i = 0; i < keys.size(); ++i) {
    size_t prev = keys.size();
    for (size_t j = i; j-- > 0;) {
      if (keys[j] == keys[i]) {
        prev = j;
        break;
      }
    }
    if (prev == keys.size()) {
      out.push_back(std::nullopt);
    } else {
      std::set<std::string> between(keys.begin() + prev + 1, keys.begin() + i);
      out.push_back(between.size());
    }
  }
  return out;
}

std::vector<std::string> random_keys(Rng& rng, size_t alphabet, size_t length) {
  std::vector<std::string> keys;
  for (size_t i = 0; i < length; ++i) {
    keys.push_back("k" + std::to_string(rng.uniform_index(alphabet)));
  }
  return keys;
}

QueryTrace make_trace(std::initializer_list<std::pair<uint64_t, const char*>> items) {
  QueryTrace trace;
  for (const auto& [ts, term] : items) trace.entries.push_back({ts, {term}});
  return trace;
}

}  // namespace

TEST_CASE("reuse distance base cases") {
  auto aa = compute_reuse_distances({"a", "a"});
  CHECK(aa.per_event == std::vector<std::optional<uint64_t>>{std::nullopt, 0});
  CHECK(aa.cold_count == 1);

  auto aba = compute_reuse_distances({"a", "b", "a"});
  CHECK(aba.per_event ==
        std::vector<std::optional<uint64_t>>{std::nullopt, std::nullopt, 1});

  auto abcba = compute_reuse_distances({"a", "b", "c", "b", "a"});
  CHECK(abcba.per_event == std::vector<std::optional<uint64_t>>{std::nullopt, std::nullopt,
                                                                std::nullopt, 1, 2});
  CHECK(abcba.cold_count == 3);
  CHECK(abcba.histogram.at(1) == 1);
  CHECK(abcba.histogram.at(2) == 1);
}

TEST_CASE("reuse distance matches the quadratic oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 800; ++trial) {
    size_t alphabet = 1 + rng.uniform_index(3);
    size_t length = 1 + rng.uniform_index(200);
    auto keys = random_keys(rng, alphabet, length);
    auto fast = compute_reuse_distances(keys);
    CHECK(fast.per_event == naive_reuse(keys));
    // Mass conservation.
    uint64_t mass = fast.cold_count;
    for (const auto& [d, c] : fast.histogram) mass += c;
    CHECK(mass == keys.size());
  }
}

TEST_CASE("zipf fit on an exact power law") {
  std::vector<uint64_t> freqs;
  for (int r = 1; r <= 100; ++r) {
    freqs.push_back(static_cast<uint64_t>(1000000.0 / r));
  }
  ZipfFit fit = fit_zipf(freqs);
  CHECK(fit.s == doctest::Approx(1.0).epsilon(0.01));
  CHECK(fit.r2 >= 0.999);
}

TEST_CASE("zipf fit on equal frequencies is flat") {
  ZipfFit fit = fit_zipf(std::vector<uint64_t>(50, 400));
  CHECK(fit.s == doctest::Approx(0.0).epsilon(0.01));
}

TEST_CASE("zipf fit is scale invariant") {
  std::vector<uint64_t> freqs;
  Rng rng(5);
  for (int r = 1; r <= 60; ++r) {
    freqs.push_back(static_cast<uint64_t>(50000.0 / std::pow(r, 1.3)) +
                    rng.uniform_index(5));
  }
  ZipfFit base = fit_zipf(freqs);
  std::vector<uint64_t> scaled;
  for (uint64_t f : freqs) scaled.push_back(f * 10);
  ZipfFit big = fit_zipf(scaled);
  CHECK(big.s == doctest::Approx(base.s).epsilon(1e-9));
  CHECK(big.r2 == doctest::Approx(base.r2).epsilon(1e-9));
}

TEST_CASE("zipf fit needs two qualifying ranks") {
  CHECK_THROWS_WITH_AS(fit_zipf({100, 3, 2}, 5), "insufficient mass for Zipf fit", Error);
}

TEST_CASE("section rates") {
  TraceModel one = analyze_trace(
      make_trace({{0, "a"}, {100, "b"}, {500, "c"}, {900, "d"}}), 1000);
  REQUIRE(one.section_rates.size() == 1);
  CHECK(one.section_rates[0] == doctest::Approx(4.0));

  TraceModel two = analyze_trace(make_trace({{0, "a"}, {500, "b"}, {1500, "c"}}), 1000);
  REQUIRE(two.section_rates.size() == 2);
  CHECK(two.section_rates[0] == doctest::Approx(2.0));
  CHECK(two.section_rates[1] == doctest::Approx(1.0));
}

TEST_CASE("non-monotone trace names the offending entry") {
  QueryTrace bad = make_trace({{100, "a"}, {50, "b"}});
  CHECK_THROWS_WITH_AS(analyze_trace(bad, 1000), "entry 1: timestamp decreases",
                       ParseError);
  CHECK_THROWS_AS(analyze_trace(QueryTrace{}, 1000), Error);
}

TEST_CASE("rank assignment is deterministic with lexicographic ties") {
  QueryTrace trace = make_trace({{0, "b"}, {1, "a"}, {2, "a"}, {3, "b"}, {4, "c"}});
  TraceModel model = analyze_trace(trace, 1000);
  auto ranked = model.ranked_terms();
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].first == "a");  // count 2, tie broken lexicographically
  CHECK(ranked[1].first == "b");
  CHECK(ranked[2].first == "c");
}

TEST_CASE("trace line parsing") {
  TraceEntry entry = parse_trace_line("1500\tfoo bar", 1);
  CHECK(entry.timestamp_ms == 1500);
  CHECK(entry.terms == std::vector<std::string>{"foo", "bar"});
  CHECK(format_trace_entry(entry) == "1500\tfoo bar");
  CHECK_THROWS_AS(parse_trace_line("oops\tfoo", 2), ParseError);
  CHECK_THROWS_AS(parse_trace_line("12 foo", 3), ParseError);
  CHECK_THROWS_AS(parse_trace_line("12\t", 4), ParseError);
}

TEST_CASE("trace model persistence roundtrip") {
  Rng rng(31);
  QueryTrace trace;
  for (uint64_t i = 0; i < 500; ++i) {
    trace.entries.push_back(
        {i * 7, {"t" + std::to_string(rng.uniform_index(20)),
                 "t" + std::to_string(rng.uniform_index(20))}});
  }
  TraceModel model = analyze_trace(trace, 1000);
  std::string text = serialize_trace_model(model);
  TraceModel back = deserialize_trace_model(text);
  CHECK(back.term_freq == model.term_freq);
  CHECK(back.reuse_hist == model.reuse_hist);
  CHECK(back.cold_count == model.cold_count);
  CHECK(back.section_rates == model.section_rates);
  CHECK(back.zipf_s == doctest::Approx(model.zipf_s));
  CHECK(serialize_trace_model(back) == text);
}
