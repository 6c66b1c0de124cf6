#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seedgen/corpus_gen.hpp"
#include "seedgen/corpus_model.hpp"
#include "seedgen/error.hpp"
#include "seedgen/stats.hpp"
#include "seedgen/trace_gen.hpp"
#include "seedgen/trace_model.hpp"
#include "seedgen/workloads.hpp"

namespace {

constexpr uint64_t kDefaultSeed = 42;

void append_results_log(const std::string& log_path,
                        const std::vector<seedgen::WorkloadResult>& results) {
  if (log_path.empty()) return;
  std::ofstream log(log_path, std::ios::app);
  if (!log) throw seedgen::IoError("cannot append to results log: " + log_path);
  for (const auto& r : results) {
    log << r.workload << '\t' << r.input_bytes << '\t' << r.wall_time_seconds << '\t'
        << r.rate_mb_per_s << '\t' << r.summary << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seedgen: seed-driven synthetic corpus/trace generator and benchmark"};
  app.require_subcommand(1);

  // analyze-corpus
  std::string ac_input, ac_out;
  auto* analyze_corpus_cmd =
      app.add_subcommand("analyze-corpus", "Build a corpus model from a labeled seed");
  analyze_corpus_cmd->add_option("--input", ac_input, "Seed corpus file (label<TAB>tokens)")
      ->required();
  analyze_corpus_cmd->add_option("--out", ac_out, "Model output file")->required();

  // gen-corpus
  std::string gc_model, gc_out;
  uint64_t gc_docs = 0, gc_bytes = 0, gc_seed = kDefaultSeed, gc_chunk = 10000;
  unsigned gc_threads = 1;
  bool gc_unlabeled = false;
  auto* gen_corpus_cmd =
      app.add_subcommand("gen-corpus", "Generate a synthetic corpus from a model");
  gen_corpus_cmd->add_option("--model", gc_model, "Corpus model file")->required();
  gen_corpus_cmd->add_option("--out", gc_out, "Output corpus file")->required();
  auto* gc_docs_opt = gen_corpus_cmd->add_option("--docs", gc_docs, "Target document count");
  auto* gc_bytes_opt = gen_corpus_cmd->add_option("--bytes", gc_bytes, "Target byte size");
  gc_docs_opt->excludes(gc_bytes_opt);
  gen_corpus_cmd->add_option("--seed", gc_seed, "Master seed");
  gen_corpus_cmd->add_option("--chunk-size", gc_chunk, "Documents per deterministic chunk");
  gen_corpus_cmd->add_option("--threads", gc_threads, "Generation threads");
  gen_corpus_cmd->add_flag("--unlabeled", gc_unlabeled, "Emit tokens only, no labels");

  // analyze-trace
  std::string at_input, at_out;
  uint64_t at_section = 60000, at_min_freq = 5;
  auto* analyze_trace_cmd =
      app.add_subcommand("analyze-trace", "Build a trace model from a query trace");
  analyze_trace_cmd->add_option("--input", at_input, "Trace file (ts_ms<TAB>terms)")
      ->required();
  analyze_trace_cmd->add_option("--out", at_out, "Model output file")->required();
  analyze_trace_cmd->add_option("--section-len", at_section, "Section length in ms");
  analyze_trace_cmd->add_option("--min-freq", at_min_freq, "Zipf fit frequency cutoff");

  // gen-trace
  std::string gt_model, gt_out;
  uint64_t gt_queries = 0, gt_duration = 0, gt_seed = kDefaultSeed;
  double gt_rate_scale = 1.0;
  bool gt_uniform = false;
  auto* gen_trace_cmd =
      app.add_subcommand("gen-trace", "Generate a synthetic query trace from a model");
  gen_trace_cmd->add_option("--model", gt_model, "Trace model file")->required();
  gen_trace_cmd->add_option("--out", gt_out, "Output trace file")->required();
  auto* gt_q_opt = gen_trace_cmd->add_option("--queries", gt_queries, "Target query count");
  auto* gt_d_opt =
      gen_trace_cmd->add_option("--duration", gt_duration, "Target duration in ms");
  gt_q_opt->excludes(gt_d_opt);
  gen_trace_cmd->add_option("--rate-scale", gt_rate_scale, "Section rate multiplier");
  gen_trace_cmd->add_option("--seed", gt_seed, "Master seed");
  gen_trace_cmd->add_flag("--uniform-arrivals", gt_uniform,
                          "Evenly spaced arrivals instead of Poisson");

  // validate-corpus / validate-trace
  std::string vc_model, vc_data, vc_report;
  seedgen::ValidationThresholds vc_thresholds;
  auto* validate_corpus_cmd =
      app.add_subcommand("validate-corpus", "Compare synthetic corpus against seed model");
  validate_corpus_cmd->add_option("--model", vc_model, "Seed corpus model")->required();
  validate_corpus_cmd->add_option("--data", vc_data, "Synthetic corpus file")->required();
  validate_corpus_cmd->add_option("--report", vc_report, "Write report file");
  validate_corpus_cmd->add_option("--word-kl", vc_thresholds.word_kl, "Per-class word KL cap");
  validate_corpus_cmd->add_option("--length-ks", vc_thresholds.length_ks,
                                  "Per-class length KS cap");
  validate_corpus_cmd->add_option("--class-alpha", vc_thresholds.class_alpha,
                                  "Class chi-square significance");

  std::string vt_model, vt_data, vt_report;
  seedgen::ValidationThresholds vt_thresholds;
  double vt_rate_scale = 1.0;
  auto* validate_trace_cmd =
      app.add_subcommand("validate-trace", "Compare synthetic trace against seed model");
  validate_trace_cmd->add_option("--model", vt_model, "Seed trace model")->required();
  validate_trace_cmd->add_option("--data", vt_data, "Synthetic trace file")->required();
  validate_trace_cmd->add_option("--report", vt_report, "Write report file");
  validate_trace_cmd->add_option("--rate-scale", vt_rate_scale,
                                 "Rate scale the trace was generated with");
  validate_trace_cmd->add_option("--reuse-ks", vt_thresholds.reuse_ks,
                                 "Reuse-distance CDF KS cap");
  validate_trace_cmd->add_option("--zipf-delta", vt_thresholds.zipf_s_delta,
                                 "Zipf exponent tolerance");
  validate_trace_cmd->add_option("--rate-err", vt_thresholds.rate_rel_err,
                                 "Per-section rate relative error cap");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Workload benchmarks");
  bench_cmd->require_subcommand(1);
  seedgen::BenchOptions bench_options;
  bench_options.workloads = {"sort", "grep", "wordcount", "bayes", "svm"};
  std::string bench_log;
  bench_cmd->add_option("--workloads", bench_options.workloads,
                        "Workload subset (sort grep wordcount bayes svm)");
  bench_cmd->add_option("--pattern", bench_options.grep_pattern, "Grep pattern");
  bench_cmd->add_option("--sort-memory", bench_options.sort_memory_budget,
                        "Sort memory budget in bytes");
  bench_cmd->add_option("--work-dir", bench_options.work_dir, "Scratch directory");
  bench_cmd->add_option("--seed", bench_options.seed, "Workload seed (SVM shuffling)");
  bench_cmd->add_option("--log", bench_log, "Append results to this log file");

  std::string br_input;
  auto* bench_run_cmd = bench_cmd->add_subcommand("run", "Run workloads once on one input");
  bench_run_cmd->add_option("--input", br_input, "Input data file")->required();

  std::string bc_a, bc_b;
  unsigned bc_reps = 3;
  auto* bench_compare_cmd =
      bench_cmd->add_subcommand("compare", "Rate-consistency comparison of two inputs");
  bench_compare_cmd->add_option("--a", bc_a, "First input (e.g. real seed expansion)")
      ->required();
  bench_compare_cmd->add_option("--b", bc_b, "Second input (e.g. synthetic)")->required();
  bench_compare_cmd->add_option("--reps", bc_reps, "Repetitions per workload (>= 3)");

  std::string bs_model, bs_prefix = "sweep";
  std::vector<uint64_t> bs_volumes;
  uint64_t bs_seed = kDefaultSeed;
  auto* bench_sweep_cmd =
      bench_cmd->add_subcommand("sweep", "Rate-vs-volume sweep over generated data");
  bench_sweep_cmd->add_option("--model", bs_model, "Corpus model file")->required();
  bench_sweep_cmd->add_option("--volumes", bs_volumes, "Ascending byte sizes")->required();
  bench_sweep_cmd->add_option("--gen-seed", bs_seed, "Generation seed");
  bench_sweep_cmd->add_option("--out-prefix", bs_prefix, "CSV prefix, one file per workload");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the usage message
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze_corpus_cmd) {
      seedgen::save_model(seedgen::analyze_corpus_file(ac_input), ac_out);
      return 0;
    }
    if (*gen_corpus_cmd) {
      if ((gc_docs == 0) == (gc_bytes == 0)) {
        std::cerr << "gen-corpus: exactly one of --docs/--bytes is required\n";
        return 2;
      }
      seedgen::GenerationSpec spec;
      spec.target_kind = gc_docs ? seedgen::GenerationSpec::TargetKind::DocCount
                                 : seedgen::GenerationSpec::TargetKind::ByteSize;
      spec.target = gc_docs ? gc_docs : gc_bytes;
      spec.master_seed = gc_seed;
      spec.chunk_size = gc_chunk;
      spec.threads = gc_threads;
      spec.unlabeled = gc_unlabeled;
      auto summary =
          seedgen::generate_corpus_file(seedgen::load_model(gc_model), spec, gc_out);
      std::cout << "docs_written\t" << summary.docs_written << "\nbytes_written\t"
                << summary.bytes_written << '\n';
      return 0;
    }
    if (*analyze_trace_cmd) {
      seedgen::QueryTrace trace = seedgen::read_trace_file(at_input);
      seedgen::save_trace_model(seedgen::analyze_trace(trace, at_section, at_min_freq),
                                at_out);
      return 0;
    }
    if (*gen_trace_cmd) {
      if ((gt_queries == 0) == (gt_duration == 0)) {
        std::cerr << "gen-trace: exactly one of --queries/--duration is required\n";
        return 2;
      }
      seedgen::TraceGenSpec spec;
      spec.target_kind = gt_queries ? seedgen::TraceGenSpec::TargetKind::QueryCount
                                    : seedgen::TraceGenSpec::TargetKind::DurationMs;
      spec.target = gt_queries ? gt_queries : gt_duration;
      spec.rate_scale = gt_rate_scale;
      spec.master_seed = gt_seed;
      spec.uniform_arrivals = gt_uniform;
      seedgen::write_trace_file(
          seedgen::generate_trace(seedgen::load_trace_model(gt_model), spec), gt_out);
      return 0;
    }
    if (*validate_corpus_cmd) {
      seedgen::CorpusModel seed = seedgen::load_model(vc_model);
      seedgen::CorpusModel synthetic = seedgen::analyze_corpus_file(vc_data);
      seedgen::ValidationReport report =
          seedgen::validate_corpus(seed, synthetic, vc_thresholds);
      std::cout << report.to_table();
      if (!vc_report.empty()) {
        std::ofstream out(vc_report, std::ios::trunc);
        out << report.serialize();
      }
      return report.overall_pass() ? 0 : 1;
    }
    if (*validate_trace_cmd) {
      seedgen::TraceModel seed = seedgen::load_trace_model(vt_model);
      seedgen::QueryTrace synthetic = seedgen::read_trace_file(vt_data);
      seedgen::ValidationReport report =
          seedgen::validate_trace(seed, synthetic, vt_thresholds, vt_rate_scale);
      std::cout << report.to_table();
      if (!vt_report.empty()) {
        std::ofstream out(vt_report, std::ios::trunc);
        out << report.serialize();
      }
      return report.overall_pass() ? 0 : 1;
    }
    if (*bench_run_cmd) {
      std::vector<seedgen::WorkloadResult> results;
      for (const auto& workload : bench_options.workloads) {
        results.push_back(seedgen::run_workload(workload, br_input, bench_options));
      }
      std::cout << seedgen::format_results_table(results);
      append_results_log(bench_log, results);
      return 0;
    }
    if (*bench_compare_cmd) {
      auto rows = seedgen::bench_compare(bc_a, bc_b, bc_reps, bench_options);
      std::cout << "workload\trate_a(MB/s)\trate_b(MB/s)\tdeviation\n";
      for (const auto& row : rows) {
        std::cout << row.workload << '\t' << row.rate_a << '\t' << row.rate_b << '\t'
                  << row.deviation << '\n';
      }
      return 0;
    }
    if (*bench_sweep_cmd) {
      auto rows = seedgen::bench_sweep(seedgen::load_model(bs_model), bs_volumes, bs_seed,
                                       bench_options);
      std::cout << "workload\tbytes\tseconds\tMB/s\n";
      for (const auto& row : rows) {
        std::cout << row.workload << '\t' << row.input_bytes << '\t'
                  << row.wall_time_seconds << '\t' << row.rate_mb_per_s << '\n';
      }
      for (const auto& workload : bench_options.workloads) {
        std::ofstream csv(bs_prefix + "_" + workload + ".csv", std::ios::trunc);
        csv << "bytes,mb_per_s\n";
        for (const auto& row : rows) {
          if (row.workload == workload) {
            csv << row.input_bytes << ',' << row.rate_mb_per_s << '\n';
          }
        }
      }
      return 0;
    }
  } catch (const seedgen::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
