#include "seedgen/workloads.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "seedgen/error.hpp"
#include "seedgen/rng.hpp"

namespace seedgen {

namespace fs = std::filesystem;

double data_processing_rate(uint64_t input_bytes, double wall_time_seconds) {
  if (input_bytes == 0 || wall_time_seconds <= 0.0) {
    throw Error("data_processing_rate: arguments must be positive");
  }
  return static_cast<double>(input_bytes) / (1024.0 * 1024.0) / wall_time_seconds;
}

namespace {

// Empty inputs are legal for the scan-style workloads; report a zero rate
// rather than erroring out of the strict formula.
double measured_rate(uint64_t input_bytes, double wall_time_seconds) {
  if (input_bytes == 0) return 0.0;
  return data_processing_rate(input_bytes, wall_time_seconds);
}

}  // namespace

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

uint64_t file_size_bytes(const std::string& path) {
  std::error_code ec;
  auto size = fs::file_size(path, ec);
  if (ec) throw IoError("cannot stat input: " + path);
  return size;
}

uint64_t fnv1a(uint64_t hash, const char* data, size_t len) {
  for (size_t i = 0; i < len; ++i) {
    hash ^= static_cast<unsigned char>(data[i]);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string spill_dir(const std::string& output_path) {
  if (const char* env = std::getenv("SEEDGEN_TMPDIR"); env && *env) return env;
  fs::path parent = fs::path(output_path).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

void write_run(const std::vector<std::string>& lines, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write spill file: " + path);
  for (const auto& line : lines) out << line << '\n';
  if (!out) throw IoError("insufficient disk for spill file: " + path);
}

}  // namespace

WorkloadResult run_sort(const std::string& input_path, const std::string& output_path,
                        uint64_t memory_budget_bytes) {
  uint64_t input_bytes = file_size_bytes(input_path);
  Stopwatch timer;

  std::ifstream in(input_path, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + input_path);

  std::vector<std::string> buffer;
  std::vector<std::string> spill_files;
  uint64_t buffered = 0;
  std::string line;
  const std::string dir = spill_dir(output_path);
  while (std::getline(in, line)) {
    buffered += line.size() + 1;
    buffer.push_back(std::move(line));
    if (buffered >= memory_budget_bytes) {
      std::sort(buffer.begin(), buffer.end());
      std::string run_path =
          dir + "/seedgen_sort_run_" + std::to_string(spill_files.size()) + ".tmp";
      write_run(buffer, run_path);
      spill_files.push_back(run_path);
      buffer.clear();
      buffered = 0;
    }
  }
  std::sort(buffer.begin(), buffer.end());

  std::ofstream out(output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write output: " + output_path);
  uint64_t checksum = 0xcbf29ce484222325ULL;
  auto emit = [&](const std::string& l) {
    out << l << '\n';
    checksum = fnv1a(checksum, l.data(), l.size());
    checksum = fnv1a(checksum, "\n", 1);
  };

  if (spill_files.empty()) {
    for (const auto& l : buffer) emit(l);
  } else {
    // k-way merge of spilled runs plus the in-memory tail.
    if (!buffer.empty()) {
      std::string run_path =
          dir + "/seedgen_sort_run_" + std::to_string(spill_files.size()) + ".tmp";
      write_run(buffer, run_path);
      spill_files.push_back(run_path);
      buffer.clear();
    }
    std::vector<std::ifstream> runs;
    using HeapItem = std::pair<std::string, size_t>;
    auto cmp = [](const HeapItem& a, const HeapItem& b) { return a.first > b.first; };
    std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(cmp)> heap(cmp);
    runs.reserve(spill_files.size());
    for (size_t i = 0; i < spill_files.size(); ++i) {
      runs.emplace_back(spill_files[i], std::ios::binary);
      if (!runs.back()) throw IoError("cannot reopen spill file: " + spill_files[i]);
      std::string first;
      if (std::getline(runs[i], first)) heap.emplace(std::move(first), i);
    }
    while (!heap.empty()) {
      auto [top, run_idx] = heap.top();
      heap.pop();
      emit(top);
      std::string next;
      if (std::getline(runs[run_idx], next)) heap.emplace(std::move(next), run_idx);
    }
    for (const auto& path : spill_files) std::remove(path.c_str());
  }
  out.flush();
  if (!out) throw IoError("insufficient disk for sort output: " + output_path);

  WorkloadResult result;
  result.workload = "sort";
  result.input_bytes = input_bytes;
  result.wall_time_seconds = timer.seconds();
  result.rate_mb_per_s = measured_rate(input_bytes, result.wall_time_seconds);
  std::ostringstream sum;
  sum << "checksum=" << std::hex << checksum;
  result.summary = sum.str();
  return result;
}

WorkloadResult run_grep(const std::string& input_path, const std::string& pattern) {
  if (pattern.empty()) throw Error("grep pattern must be non-empty");
  uint64_t input_bytes = file_size_bytes(input_path);
  Stopwatch timer;
  std::ifstream in(input_path, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + input_path);
  uint64_t matches = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find(pattern) != std::string::npos) ++matches;
  }
  WorkloadResult result;
  result.workload = "grep";
  result.input_bytes = input_bytes;
  result.wall_time_seconds = timer.seconds();
  result.rate_mb_per_s = measured_rate(input_bytes, result.wall_time_seconds);
  result.summary = "matches=" + std::to_string(matches);
  return result;
}

WorkloadResult run_wordcount(const std::string& input_path, size_t top_k) {
  uint64_t input_bytes = file_size_bytes(input_path);
  Stopwatch timer;
  std::ifstream in(input_path, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + input_path);
  std::unordered_map<std::string, uint64_t> counts;
  std::string word;
  uint64_t total = 0;
  while (in >> word) {
    counts[word] += 1;
    ++total;
  }
  std::vector<std::pair<std::string, uint64_t>> top(counts.begin(), counts.end());
  std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (top.size() > top_k) top.resize(top_k);

  WorkloadResult result;
  result.workload = "wordcount";
  result.input_bytes = input_bytes;
  result.wall_time_seconds = timer.seconds();
  result.rate_mb_per_s = measured_rate(input_bytes, result.wall_time_seconds);
  std::ostringstream sum;
  sum << "total=" << total;
  for (const auto& [w, c] : top) sum << ' ' << w << ':' << c;
  result.summary = sum.str();
  return result;
}

namespace {

// Streams documents one at a time so gigabyte inputs never sit in memory
// as token vectors.
template <typename Fn>
void for_each_labeled(const std::string& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + path);
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fn(parse_document_line(line, line_no));
  }
}

}  // namespace

WorkloadResult run_naive_bayes(const std::string& train_path,
                               const std::string& test_path) {
  uint64_t input_bytes = file_size_bytes(train_path) + file_size_bytes(test_path);
  Stopwatch timer;
  CorpusModel model = analyze_corpus_file(train_path);
  if (model.classes.size() < 2) throw Error("naive bayes needs at least 2 classes");

  // Log priors and per-class log likelihoods with alpha = 1 smoothing over
  // the training vocabulary.
  std::unordered_map<std::string, size_t> vocab;
  for (const auto& [label, cls] : model.classes) {
    for (const auto& [w, c] : cls.word_counts) {
      vocab.emplace(w, vocab.size());
    }
  }
  const double vocab_size = static_cast<double>(vocab.size());

  struct ClassParams {
    std::string label;
    double log_prior;
    double log_denominator;
    const std::map<std::string, uint64_t>* counts;
  };
  std::vector<ClassParams> params;
  for (const auto& [label, cls] : model.classes) {
    params.push_back({label,
                      std::log(static_cast<double>(cls.doc_count) /
                               static_cast<double>(model.total_docs)),
                      std::log(static_cast<double>(cls.total_words) + vocab_size),
                      &cls.word_counts});
  }

  uint64_t correct = 0;
  uint64_t test_count = 0;
  for_each_labeled(test_path, [&](const Document& doc) {
    ++test_count;
    std::string best_label;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const auto& cls : params) {
      double score = cls.log_prior;
      for (const auto& tok : doc.tokens) {
        auto it = cls.counts->find(tok);
        double count = it != cls.counts->end() ? static_cast<double>(it->second) : 0.0;
        score += std::log(count + 1.0) - cls.log_denominator;
      }
      // Ties break toward the lexicographically smaller label; params is
      // already label-sorted, so strict improvement suffices.
      if (score > best_score) {
        best_score = score;
        best_label = cls.label;
      }
    }
    if (best_label == doc.label) ++correct;
  });
  double accuracy = test_count == 0
                        ? 0.0
                        : static_cast<double>(correct) / static_cast<double>(test_count);

  WorkloadResult result;
  result.workload = "bayes";
  result.input_bytes = input_bytes;
  result.wall_time_seconds = timer.seconds();
  result.rate_mb_per_s = measured_rate(input_bytes, result.wall_time_seconds);
  std::ostringstream sum;
  sum << "accuracy=" << accuracy;
  result.summary = sum.str();
  return result;
}

namespace {

constexpr size_t kHashDims = 1u << 18;
constexpr double kSvmLambda = 1e-4;
constexpr int kSvmEpochs = 5;

uint64_t term_hash(const std::string& term) {
  return fnv1a(0xcbf29ce484222325ULL, term.data(), term.size());
}

// Sparse sign-hashed term-frequency vector.
std::vector<std::pair<uint32_t, float>> hash_features(const Document& doc) {
  std::unordered_map<uint32_t, float> acc;
  for (const auto& tok : doc.tokens) {
    uint64_t h = term_hash(tok);
    auto idx = static_cast<uint32_t>(h % kHashDims);
    float sign = (h >> 63) ? -1.0f : 1.0f;
    acc[idx] += sign;
  }
  return {acc.begin(), acc.end()};
}

// Binary hinge-loss SGD; labels are +1/-1.
std::vector<double> train_svm_binary(
    const std::vector<std::vector<std::pair<uint32_t, float>>>& features,
    const std::vector<int>& labels, uint64_t seed) {
  // Weights are stored as scale * w to make the per-step regularization
  // shrink O(1) instead of O(dims).
  std::vector<double> weights(kHashDims, 0.0);
  double scale = 1.0;
  std::vector<size_t> order(features.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  uint64_t t = 0;
  for (int epoch = 0; epoch < kSvmEpochs; ++epoch) {
    // Fisher-Yates with the deterministic stream.
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    for (size_t idx : order) {
      ++t;
      double eta = 1.0 / (kSvmLambda * static_cast<double>(t));
      double margin = 0.0;
      for (const auto& [dim, val] : features[idx]) margin += weights[dim] * val;
      margin *= scale * labels[idx];
      double shrink = 1.0 - eta * kSvmLambda;
      if (shrink > 0.0) {
        scale *= shrink;
      } else {
        scale = 0.0;
      }
      if (scale == 0.0) {
        // t == 1 zeroes the weights entirely; restart the scale.
        std::fill(weights.begin(), weights.end(), 0.0);
        scale = 1.0;
      }
      if (margin < 1.0) {
        for (const auto& [dim, val] : features[idx]) {
          weights[dim] += eta * labels[idx] * val / scale;
        }
      }
      if (scale < 1e-9) {
        for (auto& w : weights) w *= scale;
        scale = 1.0;
      }
    }
  }
  for (auto& w : weights) w *= scale;
  return weights;
}

}  // namespace

WorkloadResult run_svm(const std::string& train_path, const std::string& test_path,
                       uint64_t seed) {
  uint64_t input_bytes = file_size_bytes(train_path) + file_size_bytes(test_path);
  Stopwatch timer;
  // Hashed features are far smaller than token vectors, so only they are
  // kept across the training epochs; documents themselves are streamed.
  std::vector<std::vector<std::pair<uint32_t, float>>> train_feats;
  std::vector<std::string> train_labels;
  for_each_labeled(train_path, [&](const Document& doc) {
    train_feats.push_back(hash_features(doc));
    train_labels.push_back(doc.label);
  });

  std::vector<std::string> class_labels = train_labels;
  std::sort(class_labels.begin(), class_labels.end());
  class_labels.erase(std::unique(class_labels.begin(), class_labels.end()),
                     class_labels.end());
  if (class_labels.size() < 2) throw Error("svm needs at least 2 classes");

  // Binary: one weight vector. More classes: one-vs-rest.
  std::vector<std::vector<double>> weight_sets;
  if (class_labels.size() == 2) {
    std::vector<int> labels;
    labels.reserve(train_labels.size());
    for (const auto& label : train_labels) {
      labels.push_back(label == class_labels[0] ? 1 : -1);
    }
    weight_sets.push_back(train_svm_binary(train_feats, labels, seed));
  } else {
    for (const auto& positive : class_labels) {
      std::vector<int> labels;
      labels.reserve(train_labels.size());
      for (const auto& label : train_labels) {
        labels.push_back(label == positive ? 1 : -1);
      }
      weight_sets.push_back(train_svm_binary(train_feats, labels, seed));
    }
  }

  uint64_t correct = 0;
  uint64_t test_count = 0;
  for_each_labeled(test_path, [&](const Document& doc) {
    ++test_count;
    auto feats = hash_features(doc);
    std::string predicted;
    if (class_labels.size() == 2) {
      double score = 0.0;
      for (const auto& [dim, val] : feats) score += weight_sets[0][dim] * val;
      predicted = score >= 0.0 ? class_labels[0] : class_labels[1];
    } else {
      double best = -std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < class_labels.size(); ++c) {
        double score = 0.0;
        for (const auto& [dim, val] : feats) score += weight_sets[c][dim] * val;
        if (score > best) {
          best = score;
          predicted = class_labels[c];
        }
      }
    }
    if (predicted == doc.label) ++correct;
  });
  double accuracy = test_count == 0
                        ? 0.0
                        : static_cast<double>(correct) / static_cast<double>(test_count);

  WorkloadResult result;
  result.workload = "svm";
  result.input_bytes = input_bytes;
  result.wall_time_seconds = timer.seconds();
  result.rate_mb_per_s = measured_rate(input_bytes, result.wall_time_seconds);
  std::ostringstream sum;
  sum << "accuracy=" << accuracy;
  result.summary = sum.str();
  return result;
}

namespace {

// Splits a labeled file into train/test by line position.
void split_labeled_file(const std::string& input_path, const std::string& train_path,
                        const std::string& test_path, double train_fraction) {
  std::ifstream in(input_path, std::ios::binary);
  if (!in) throw IoError("cannot open input: " + input_path);
  uint64_t total = 0;
  std::string line;
  while (std::getline(in, line)) ++total;
  in.clear();
  in.seekg(0);
  auto train_count = static_cast<uint64_t>(static_cast<double>(total) * train_fraction);
  std::ofstream train_out(train_path, std::ios::binary | std::ios::trunc);
  std::ofstream test_out(test_path, std::ios::binary | std::ios::trunc);
  if (!train_out || !test_out) throw IoError("cannot write split files");
  uint64_t i = 0;
  while (std::getline(in, line)) {
    (i < train_count ? train_out : test_out) << line << '\n';
    ++i;
  }
}

}  // namespace

WorkloadResult run_workload(const std::string& workload, const std::string& input_path,
                            const BenchOptions& options) {
  if (workload == "sort") {
    return run_sort(input_path, options.work_dir + "/seedgen_sort_out.tmp",
                    options.sort_memory_budget);
  }
  if (workload == "grep") return run_grep(input_path, options.grep_pattern);
  if (workload == "wordcount") return run_wordcount(input_path);
  if (workload == "bayes" || workload == "svm") {
    std::string train_path = options.work_dir + "/seedgen_train.tmp";
    std::string test_path = options.work_dir + "/seedgen_test.tmp";
    split_labeled_file(input_path, train_path, test_path, options.train_fraction);
    WorkloadResult result = workload == "bayes"
                                ? run_naive_bayes(train_path, test_path)
                                : run_svm(train_path, test_path, options.seed);
    // Rate is charged against the undivided input.
    result.input_bytes = file_size_bytes(input_path);
    result.rate_mb_per_s =
        measured_rate(result.input_bytes, result.wall_time_seconds);
    return result;
  }
  throw Error("unknown workload: " + workload);
}

std::vector<ComparisonRow> bench_compare(const std::string& input_a,
                                         const std::string& input_b,
                                         unsigned repetitions,
                                         const BenchOptions& options) {
  if (repetitions < 3) throw Error("bench compare needs at least 3 repetitions");
  uint64_t size_a = file_size_bytes(input_a);
  uint64_t size_b = file_size_bytes(input_b);
  double rel = std::abs(static_cast<double>(size_a) - static_cast<double>(size_b)) /
               static_cast<double>(size_a);
  if (rel > 0.01) throw Error("input sizes differ by more than 1%");

  std::vector<ComparisonRow> rows;
  for (const auto& workload : options.workloads) {
    // One untimed warmup per input (page cache, allocator, CPU frequency),
    // then timed reps with the A/B order alternated to cancel machine drift.
    run_workload(workload, input_a, options);
    run_workload(workload, input_b, options);
    double mean_a = 0.0, mean_b = 0.0;
    for (unsigned r = 0; r < repetitions; ++r) {
      const std::string& first = (r % 2 == 0) ? input_a : input_b;
      const std::string& second = (r % 2 == 0) ? input_b : input_a;
      double rate_first = run_workload(workload, first, options).rate_mb_per_s;
      double rate_second = run_workload(workload, second, options).rate_mb_per_s;
      mean_a += (r % 2 == 0) ? rate_first : rate_second;
      mean_b += (r % 2 == 0) ? rate_second : rate_first;
    }
    mean_a /= repetitions;
    mean_b /= repetitions;
    rows.push_back({workload, mean_a, mean_b, std::abs(mean_a - mean_b) / mean_a});
  }
  return rows;
}

std::vector<SweepRow> bench_sweep(const CorpusModel& model,
                                  const std::vector<uint64_t>& volumes_bytes,
                                  uint64_t gen_seed, const BenchOptions& options) {
  for (size_t i = 1; i < volumes_bytes.size(); ++i) {
    if (volumes_bytes[i] <= volumes_bytes[i - 1]) {
      throw Error("sweep volumes must be ascending");
    }
  }
  std::vector<SweepRow> rows;
  for (uint64_t volume : volumes_bytes) {
    std::string data_path = options.work_dir + "/seedgen_sweep_input.tmp";
    GenerationSpec spec;
    spec.target_kind = GenerationSpec::TargetKind::ByteSize;
    spec.target = volume;
    spec.master_seed = gen_seed;
    generate_corpus_file(model, spec, data_path);
    for (const auto& workload : options.workloads) {
      WorkloadResult result = run_workload(workload, data_path, options);
      rows.push_back(
          {workload, result.input_bytes, result.wall_time_seconds, result.rate_mb_per_s});
    }
    std::remove(data_path.c_str());
  }
  return rows;
}

std::string format_results_table(const std::vector<WorkloadResult>& results) {
  std::ostringstream out;
  out << "workload\tbytes\tseconds\tMB/s\tsummary\n";
  for (const auto& r : results) {
    out << r.workload << '\t' << r.input_bytes << '\t' << r.wall_time_seconds << '\t'
        << r.rate_mb_per_s << '\t' << r.summary << '\n';
  }
  return out.str();
}

}  // namespace seedgen
