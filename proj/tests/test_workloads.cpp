#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "seedgen/corpus_gen.hpp"
#include "seedgen/error.hpp"
#include "seedgen/rng.hpp"
#include "seedgen/workloads.hpp"

using namespace seedgen;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& p, const std::string& content = "") : path(p) {
    write_file(path, content);
  }
  ~TempFile() { std::remove(path.c_str()); }
};

// Two classes over disjoint vocabularies; trivially separable.
CorpusModel disjoint_model() {
  std::vector<Document> docs;
  for (int i = 0; i < 10; ++i) {
    docs.push_back(Document{"cats", {"meow", "purr", "whisker", "paw", "meow"}});
    docs.push_back(Document{"dogs", {"bark", "fetch", "tail", "bone", "bark"}});
  }
  return analyze_corpus(docs);
}

}  // namespace

TEST_CASE("data processing rate formula") {
  CHECK(data_processing_rate(1000ull << 20, 10.0) == doctest::Approx(100.0));
  CHECK(data_processing_rate(1ull << 20, 1.0) == doctest::Approx(1.0));
  // 100 GB in 2487 s comes out at 41.17 MB/s under binary units.
  CHECK(data_processing_rate(100ull << 30, 2487.0) == doctest::Approx(41.17).epsilon(0.001));
  CHECK_THROWS_AS(data_processing_rate(0, 1.0), Error);
  CHECK_THROWS_AS(data_processing_rate(1, 0.0), Error);
}

TEST_CASE("sort orders lines and leaves sorted input unchanged") {
  TempFile in("wl_sort_in.tmp", "b\na\nc\n");
  TempFile out("wl_sort_out.tmp");
  run_sort(in.path, out.path, 1 << 20);
  CHECK(read_file(out.path) == "a\nb\nc\n");

  TempFile sorted_in("wl_sort_in2.tmp", "a\nb\nc\n");
  run_sort(sorted_in.path, out.path, 1 << 20);
  CHECK(read_file(out.path) == "a\nb\nc\n");
}

TEST_CASE("external sort matches the in-memory oracle") {
  Rng rng(42);
  std::vector<std::string> lines;
  std::string content;
  for (int i = 0; i < 30000; ++i) {
    std::string line = "line" + std::to_string(rng.next_u64() % 1000000);
    lines.push_back(line);
    content += line;
    content += '\n';
  }
  TempFile in("wl_extsort_in.tmp", content);
  TempFile out("wl_extsort_out.tmp");
  // ~64 KB budget forces many spill runs.
  run_sort(in.path, out.path, 64 << 10);

  std::sort(lines.begin(), lines.end());
  std::string expected;
  for (const auto& l : lines) {
    expected += l;
    expected += '\n';
  }
  CHECK(read_file(out.path) == expected);
}

TEST_CASE("sort output is a permutation of its input") {
  Rng rng(7);
  std::string content;
  for (int i = 0; i < 5000; ++i) {
    content += "k" + std::to_string(rng.uniform_index(500)) + "\n";
  }
  TempFile in("wl_perm_in.tmp", content);
  TempFile out("wl_perm_out.tmp");
  run_sort(in.path, out.path, 16 << 10);

  auto multiset_of = [](const std::string& text) {
    std::istringstream stream(text);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
    std::sort(lines.begin(), lines.end());
    return lines;
  };
  auto result = multiset_of(read_file(out.path));
  CHECK(result == multiset_of(content));
  CHECK(std::is_sorted(result.begin(), result.end()));
}

TEST_CASE("grep counts match a naive oracle") {
  TempFile empty("wl_grep_empty.tmp", "");
  CHECK(run_grep(empty.path, "x").summary == "matches=0");

  TempFile sole("wl_grep_sole.tmp", "needle\n");
  CHECK(run_grep(sole.path, "needle").summary == "matches=1");

  Rng rng(11);
  std::string content;
  uint64_t expected = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string line = "w" + std::to_string(rng.uniform_index(50)) + " filler w" +
                       std::to_string(rng.uniform_index(50));
    if (line.find("w7") != std::string::npos) ++expected;
    content += line;
    content += '\n';
  }
  TempFile in("wl_grep_in.tmp", content);
  CHECK(run_grep(in.path, "w7").summary == "matches=" + std::to_string(expected));
  CHECK_THROWS_AS(run_grep(in.path, ""), Error);
}

TEST_CASE("wordcount counts whitespace tokens exactly") {
  TempFile in("wl_wc_in.tmp", "x x y\n");
  WorkloadResult result = run_wordcount(in.path);
  CHECK(result.summary == "total=3 x:2 y:1");

  TempFile empty("wl_wc_empty.tmp", "");
  CHECK(run_wordcount(empty.path).summary == "total=0");
}

TEST_CASE("wordcount total agrees with corpus analysis") {
  CorpusModel model = disjoint_model();
  GenerationSpec spec;
  spec.target = 2000;
  spec.master_seed = 9;
  TempFile labeled("wl_wc_labeled.tmp");
  generate_corpus_file(model, spec, labeled.path);

  CorpusModel regen = analyze_corpus_file(labeled.path);
  uint64_t expected_words = regen.total_docs;  // one label token per line
  for (const auto& [label, cls] : regen.classes) expected_words += cls.total_words;
  WorkloadResult result = run_wordcount(labeled.path);
  CHECK(result.summary.substr(0, result.summary.find(' ')) ==
        "total=" + std::to_string(expected_words));
}

TEST_CASE("naive bayes separates trivially separable classes") {
  TempFile train("wl_nb_train.tmp", "A\tx\nB\ty\n");
  TempFile test("wl_nb_test.tmp", "A\tx\n");
  CHECK(run_naive_bayes(train.path, test.path).summary == "accuracy=1");
}

TEST_CASE("naive bayes falls back to the larger prior on unseen words") {
  TempFile train("wl_nb_train2.tmp", "A\tx\nA\tx\nA\tx\nB\ty\n");
  TempFile test("wl_nb_test2.tmp", "A\tzzz\nB\tzzz\n");
  // All-unseen test docs go to the larger-prior class A: one right, one wrong.
  CHECK(run_naive_bayes(train.path, test.path).summary == "accuracy=0.5");
}

TEST_CASE("naive bayes argmax is invariant under duplicating training docs") {
  std::string base = "A\tx x y\nA\tx z\nB\ty y z\nB\tz z\n";
  std::string tripled;
  for (int i = 0; i < 3; ++i) tripled += base;
  TempFile train1("wl_nb_dup1.tmp", base);
  TempFile train3("wl_nb_dup3.tmp", tripled);
  TempFile test("wl_nb_dup_test.tmp", "A\tx x\nA\tx y\nB\tz y\nB\tz z z\nA\ty\nB\tx z\n");
  CHECK(run_naive_bayes(train1.path, test.path).summary ==
        run_naive_bayes(train3.path, test.path).summary);
}

TEST_CASE("naive bayes accuracy on disjoint-vocabulary synthetic data") {
  CorpusModel model = disjoint_model();
  GenerationSpec spec;
  spec.master_seed = 3;
  spec.target = 4000;
  TempFile train("wl_nb_syn_train.tmp");
  generate_corpus_file(model, spec, train.path);
  spec.master_seed = 4;
  spec.target = 10000;
  TempFile test("wl_nb_syn_test.tmp");
  generate_corpus_file(model, spec, test.path);
  WorkloadResult result = run_naive_bayes(train.path, test.path);
  double accuracy = std::stod(result.summary.substr(result.summary.find('=') + 1));
  CHECK(accuracy >= 0.99);
}

TEST_CASE("svm separates two singleton documents") {
  TempFile train("wl_svm_train.tmp", "A\tx\nB\ty\n");
  CHECK(run_svm(train.path, train.path).summary == "accuracy=1");
}

TEST_CASE("svm accuracy is invariant under label flip") {
  CorpusModel model = disjoint_model();
  GenerationSpec spec;
  spec.master_seed = 5;
  spec.target = 500;
  TempFile train("wl_svm_flip_train.tmp");
  generate_corpus_file(model, spec, train.path);
  spec.master_seed = 6;
  TempFile test("wl_svm_flip_test.tmp");
  generate_corpus_file(model, spec, test.path);

  auto flip_labels = [](const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    std::ofstream out(out_path, std::ios::trunc);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("cats\t", 0) == 0) {
        out << "dogs" << line.substr(4) << '\n';
      } else {
        out << "cats" << line.substr(4) << '\n';
      }
    }
  };
  TempFile flipped_train("wl_svm_flip_train2.tmp");
  TempFile flipped_test("wl_svm_flip_test2.tmp");
  flip_labels(train.path, flipped_train.path);
  flip_labels(test.path, flipped_test.path);

  CHECK(run_svm(train.path, test.path, 12).summary ==
        run_svm(flipped_train.path, flipped_test.path, 12).summary);
  // Deterministic given the seed.
  CHECK(run_svm(train.path, test.path, 12).summary ==
        run_svm(train.path, test.path, 12).summary);
}

TEST_CASE("svm accuracy on disjoint-vocabulary synthetic data") {
  CorpusModel model = disjoint_model();
  GenerationSpec spec;
  spec.master_seed = 8;
  spec.target = 2000;
  TempFile train("wl_svm_syn_train.tmp");
  generate_corpus_file(model, spec, train.path);
  spec.master_seed = 9;
  TempFile test("wl_svm_syn_test.tmp");
  generate_corpus_file(model, spec, test.path);
  WorkloadResult result = run_svm(train.path, test.path);
  double accuracy = std::stod(result.summary.substr(result.summary.find('=') + 1));
  CHECK(accuracy >= 0.95);
}

TEST_CASE("rate field always satisfies the formula") {
  TempFile in("wl_rate_in.tmp", std::string(1 << 16, 'a') + "\n");
  WorkloadResult result = run_grep(in.path, "a");
  CHECK(result.rate_mb_per_s ==
        doctest::Approx(data_processing_rate(result.input_bytes,
                                             result.wall_time_seconds)));
}

TEST_CASE("bench compare rejects mismatched sizes") {
  TempFile a("wl_cmp_a.tmp", std::string(10000, 'x'));
  TempFile b("wl_cmp_b.tmp", std::string(8000, 'x'));
  BenchOptions options;
  options.workloads = {"grep"};
  CHECK_THROWS_AS(bench_compare(a.path, b.path, 3, options), Error);
  CHECK_THROWS_AS(bench_compare(a.path, a.path, 2, options), Error);
}

TEST_CASE("bench sweep rejects non-ascending volumes") {
  BenchOptions options;
  options.workloads = {"grep"};
  CHECK_THROWS_AS(bench_sweep(disjoint_model(), {1000, 1000}, 1, options), Error);
}

TEST_CASE("bench sweep emits one row per workload per volume") {
  BenchOptions options;
  options.workloads = {"grep", "wordcount"};
  options.grep_pattern = "meow";
  auto rows = bench_sweep(disjoint_model(), {20000, 40000}, 1, options);
  REQUIRE(rows.size() == 4);
  // Monotone input sizes per workload.
  CHECK(rows[0].input_bytes < rows[2].input_bytes);
  CHECK(rows[1].input_bytes < rows[3].input_bytes);
  for (const auto& row : rows) CHECK(row.rate_mb_per_s > 0.0);
}
