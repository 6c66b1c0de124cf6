#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seedgen/corpus_model.hpp"
#include "seedgen/corpus_gen.hpp"

namespace seedgen {

// Input size divided by running time, MB = 2^20 bytes.
double data_processing_rate(uint64_t input_bytes, double wall_time_seconds);

struct WorkloadResult {
  std::string workload;
  uint64_t input_bytes = 0;
  double wall_time_seconds = 0.0;
  double rate_mb_per_s = 0.0;
  std::string summary;  // match count / top words / accuracy / output checksum
};

// External merge sort of input lines into lexicographic byte order; spills
// runs when in-memory data exceeds memory_budget. Spill directory comes
// from $SEEDGEN_TMPDIR, falling back to the output file's directory.
WorkloadResult run_sort(const std::string& input_path, const std::string& output_path,
                        uint64_t memory_budget_bytes);

// Counts lines containing the fixed substring pattern.
WorkloadResult run_grep(const std::string& input_path, const std::string& pattern);

// Exact whitespace-token counts; summary lists the top_k most frequent
// words (by count, ties lexicographic).
WorkloadResult run_wordcount(const std::string& input_path, size_t top_k = 20);

// Multinomial Naive Bayes with additive smoothing alpha = 1; ties broken
// by lexicographic class label. Inputs are labeled corpus files.
WorkloadResult run_naive_bayes(const std::string& train_path,
                               const std::string& test_path);

// Linear SVM: hinge loss, SGD with eta_t = 1/(lambda*t), lambda = 1e-4,
// 5 epochs, term-frequency features sign-hashed into 2^18 dimensions.
// One-vs-rest for more than two classes. Deterministic given seed.
WorkloadResult run_svm(const std::string& train_path, const std::string& test_path,
                       uint64_t seed = 1);

struct BenchOptions {
  std::vector<std::string> workloads;  // subset of {sort,grep,wordcount,bayes,svm}
  std::string grep_pattern = "the";
  uint64_t sort_memory_budget = 256ull << 20;
  double train_fraction = 0.8;
  uint64_t seed = 1;
  std::string work_dir = ".";  // scratch space for splits/sort output
};

// One measured run of a named workload over a labeled corpus file.
WorkloadResult run_workload(const std::string& workload, const std::string& input_path,
                            const BenchOptions& options);

struct ComparisonRow {
  std::string workload;
  double rate_a = 0.0;  // mean over repetitions, MB/s
  double rate_b = 0.0;
  double deviation = 0.0;  // |rate_a - rate_b| / rate_a
};

// The rate-consistency protocol: both inputs must match in size within 1%,
// each workload runs `repetitions` times per input (>= 3) and mean rates
// are compared.
std::vector<ComparisonRow> bench_compare(const std::string& input_a,
                                         const std::string& input_b,
                                         unsigned repetitions,
                                         const BenchOptions& options);

struct SweepRow {
  std::string workload;
  uint64_t input_bytes = 0;
  double wall_time_seconds = 0.0;
  double rate_mb_per_s = 0.0;
};

// Generates each volume from the model, then measures every workload on it.
std::vector<SweepRow> bench_sweep(const CorpusModel& model,
                                  const std::vector<uint64_t>& volumes_bytes,
                                  uint64_t gen_seed, const BenchOptions& options);

std::string format_results_table(const std::vector<WorkloadResult>& results);

}  // namespace seedgen
