#include "seedgen/stats.hpp"

#include <cmath>
#include <sstream>

namespace seedgen {

namespace {

// ln Gamma(x), Lanczos approximation.
double ln_gamma(double x) {
  static const double coeffs[6] = {76.18009172947146,  -86.50532032941677,
                                   24.01409824083091,  -1.231739572450155,
                                   0.1208650973866179e-2, -0.5395239384953e-5};
  double y = x;
  double tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (double c : coeffs) ser += c / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

// Lower regularized gamma P(a, x) by series expansion.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-14) break;
  }
  return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Upper regularized gamma Q(a, x) by continued fraction (modified Lentz).
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-14) break;
  }
  return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw Error("gamma_q: invalid arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

bool ValidationReport::overall_pass() const {
  for (const auto& check : checks) {
    if (!check.pass) return false;
  }
  return true;
}

std::string ValidationReport::to_table() const {
  std::ostringstream out;
  out << "check\tseed\tsynthetic\tstatistic\tthreshold\tverdict\n";
  for (const auto& c : checks) {
    out << c.name << '\t' << c.seed_value << '\t' << c.synthetic_value << '\t'
        << c.statistic << '\t' << c.threshold << '\t' << (c.pass ? "pass" : "FAIL")
        << '\n';
  }
  out << "overall\t\t\t\t\t" << (overall_pass() ? "pass" : "FAIL") << '\n';
  return out.str();
}

std::string ValidationReport::serialize() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& c : checks) {
    out << c.name << '\t' << c.seed_value << '\t' << c.synthetic_value << '\t'
        << c.statistic << '\t' << c.threshold << '\t' << (c.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

ValidationReport validate_corpus(const CorpusModel& seed, const CorpusModel& synthetic,
                                 const ValidationThresholds& thresholds) {
  if (seed.total_docs == 0 || synthetic.total_docs == 0) {
    throw Error("validate_corpus: empty input");
  }
  ValidationReport report;

  // Classes absent from the seed are hard failures.
  for (const auto& [label, cls] : synthetic.classes) {
    if (!seed.classes.count(label)) {
      report.checks.push_back({"class-unknown:" + label, 0.0,
                               static_cast<double>(cls.doc_count), 1.0, 0.0, false});
    }
  }

  std::map<std::string, uint64_t> observed;
  for (const auto& [label, cls] : synthetic.classes) observed[label] = cls.doc_count;
  std::map<std::string, double> expected;
  for (const auto& [label, p] : class_distribution(seed)) expected[label] = p;
  ChiSquareResult chi = chi_square_test(observed, expected, synthetic.total_docs);
  report.checks.push_back({"class-chi2-p", 1.0, chi.p_value, chi.statistic,
                           thresholds.class_alpha, chi.p_value >= thresholds.class_alpha});

  for (const auto& [label, cls] : seed.classes) {
    if (!synthetic.classes.count(label)) {
      report.checks.push_back({"class-missing:" + label,
                               static_cast<double>(cls.doc_count), 0.0, 1.0, 0.0, false});
      continue;
    }
    double kl = kl_divergence(word_distribution(seed, label),
                              word_distribution(synthetic, label));
    report.checks.push_back(
        {"word-kl:" + label, 0.0, kl, kl, thresholds.word_kl, kl <= thresholds.word_kl});

    double ks = ks_statistic(histogram_cdf(cls.length_histogram),
                             histogram_cdf(synthetic.classes.at(label).length_histogram));
    report.checks.push_back({"length-ks:" + label, 0.0, ks, ks, thresholds.length_ks,
                             ks <= thresholds.length_ks});
  }
  return report;
}

ValidationReport validate_trace(const TraceModel& seed, const QueryTrace& synthetic,
                                const ValidationThresholds& thresholds,
                                double rate_scale) {
  if (synthetic.entries.empty()) throw Error("validate_trace: empty synthetic trace");
  TraceModel resynth = analyze_trace(synthetic, seed.section_len_ms);
  if (resynth.section_rates.size() < seed.section_rates.size()) {
    throw Error("synthetic trace too short to cover the modeled sections");
  }
  ValidationReport report;

  double zipf_delta = std::abs(resynth.zipf_s - seed.zipf_s);
  report.checks.push_back({"zipf-s", seed.zipf_s, resynth.zipf_s, zipf_delta,
                           thresholds.zipf_s_delta,
                           zipf_delta <= thresholds.zipf_s_delta});

  double reuse_ks = ks_statistic(histogram_cdf(seed.reuse_hist),
                                 histogram_cdf(resynth.reuse_hist));
  report.checks.push_back({"reuse-ks", 0.0, reuse_ks, reuse_ks, thresholds.reuse_ks,
                           reuse_ks <= thresholds.reuse_ks});

  // Compare full sections only; the last analyzed section is dropped because
  // a count-targeted generation can stop partway through it.
  size_t full_sections = resynth.section_rates.size() - 1;
  double worst = 0.0;
  for (size_t i = 0; i < full_sections; ++i) {
    double expected = seed.section_rates[i % seed.section_rates.size()];
    if (expected <= 0.0) continue;
    double got = resynth.section_rates[i] / rate_scale;
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  report.checks.push_back({"section-rate-rel-err", 0.0, worst, worst,
                           thresholds.rate_rel_err, worst <= thresholds.rate_rel_err});
  return report;
}

}  // namespace seedgen
