#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "seedgen/corpus_gen.hpp"
#include "seedgen/corpus_model.hpp"
#include "seedgen/error.hpp"
#include "seedgen/stats.hpp"
#include "seedgen/trace_gen.hpp"
#include "seedgen/trace_model.hpp"
#include "seedgen/workloads.hpp"

namespace py = pybind11;
using namespace seedgen;

PYBIND11_MODULE(_seedgen, m) {
  m.doc() = "Seed-driven synthetic corpus/trace generation and validation";

  py::register_exception<Error>(m, "SeedgenError");

  py::class_<Document>(m, "Document")
      .def(py::init<>())
      .def(py::init([](std::string label, std::vector<std::string> tokens) {
             return Document{std::move(label), std::move(tokens)};
           }),
           py::arg("label"), py::arg("tokens"))
      .def_readwrite("label", &Document::label)
      .def_readwrite("tokens", &Document::tokens)
      .def("__eq__", [](const Document& a, const Document& b) { return a == b; })
      .def("__repr__", [](const Document& d) {
        return "Document(label='" + d.label + "', tokens=" +
               std::to_string(d.tokens.size()) + ")";
      });

  py::class_<ClassStats>(m, "ClassStats")
      .def_readonly("doc_count", &ClassStats::doc_count)
      .def_readonly("total_words", &ClassStats::total_words)
      .def_readonly("word_counts", &ClassStats::word_counts)
      .def_readonly("length_histogram", &ClassStats::length_histogram);

  py::class_<CorpusModel>(m, "CorpusModel")
      .def_readonly("total_docs", &CorpusModel::total_docs)
      .def_readonly("classes", &CorpusModel::classes)
      .def("__eq__", [](const CorpusModel& a, const CorpusModel& b) { return a == b; })
      .def("serialize", &serialize_model)
      .def("save", &save_model, py::arg("path"))
      .def_static("deserialize", &deserialize_model)
      .def_static("load", &load_model);

  m.def("analyze_corpus",
        py::overload_cast<const std::vector<Document>&>(&analyze_corpus),
        py::arg("documents"));
  m.def("analyze_corpus_file", &analyze_corpus_file, py::arg("path"));
  m.def("class_distribution", &class_distribution);
  m.def("word_distribution", &word_distribution, py::arg("model"), py::arg("cls"));
  m.def("length_distribution", &length_distribution, py::arg("model"), py::arg("cls"));

  m.def(
      "generate_corpus_file",
      [](const CorpusModel& model, const std::string& path, uint64_t doc_count,
         uint64_t byte_size, uint64_t seed, uint64_t chunk_size, unsigned threads,
         bool unlabeled) {
        if ((doc_count == 0) == (byte_size == 0)) {
          throw Error("exactly one of doc_count/byte_size must be set");
        }
        GenerationSpec spec;
        spec.target_kind = doc_count ? GenerationSpec::TargetKind::DocCount
                                     : GenerationSpec::TargetKind::ByteSize;
        spec.target = doc_count ? doc_count : byte_size;
        spec.master_seed = seed;
        spec.chunk_size = chunk_size;
        spec.threads = threads;
        spec.unlabeled = unlabeled;
        GenerationSummary summary = generate_corpus_file(model, spec, path);
        return py::make_tuple(summary.docs_written, summary.bytes_written);
      },
      py::arg("model"), py::arg("path"), py::arg("doc_count") = 0,
      py::arg("byte_size") = 0, py::arg("seed") = 42, py::arg("chunk_size") = 10000,
      py::arg("threads") = 1, py::arg("unlabeled") = false);

  py::class_<TraceEntry>(m, "TraceEntry")
      .def_readwrite("timestamp_ms", &TraceEntry::timestamp_ms)
      .def_readwrite("terms", &TraceEntry::terms);

  py::class_<QueryTrace>(m, "QueryTrace")
      .def(py::init<>())
      .def_readwrite("entries", &QueryTrace::entries)
      .def("__len__", [](const QueryTrace& t) { return t.entries.size(); });

  py::class_<TraceModel>(m, "TraceModel")
      .def_readonly("term_freq", &TraceModel::term_freq)
      .def_readonly("zipf_s", &TraceModel::zipf_s)
      .def_readonly("zipf_r2", &TraceModel::zipf_r2)
      .def_readonly("terms_per_query", &TraceModel::terms_per_query)
      .def_readonly("reuse_hist", &TraceModel::reuse_hist)
      .def_readonly("cold_count", &TraceModel::cold_count)
      .def_readonly("section_len_ms", &TraceModel::section_len_ms)
      .def_readonly("section_rates", &TraceModel::section_rates)
      .def("query_count", &TraceModel::query_count)
      .def("serialize", &serialize_trace_model)
      .def("save", &save_trace_model, py::arg("path"))
      .def_static("deserialize", &deserialize_trace_model)
      .def_static("load", &load_trace_model);

  m.def("read_trace_file", &read_trace_file, py::arg("path"));
  m.def("write_trace_file", &write_trace_file, py::arg("trace"), py::arg("path"));
  m.def("analyze_trace", &analyze_trace, py::arg("trace"), py::arg("section_len_ms"),
        py::arg("zipf_min_freq") = 5);
  m.def(
      "compute_reuse_distances",
      [](const std::vector<std::string>& keys) {
        ReuseDistances result = compute_reuse_distances(keys);
        py::list per_event;
        for (const auto& d : result.per_event) {
          if (d) {
            per_event.append(*d);
          } else {
            per_event.append(py::none());
          }
        }
        return py::make_tuple(per_event, result.histogram, result.cold_count);
      },
      py::arg("keys"));
  m.def(
      "fit_zipf",
      [](const std::vector<uint64_t>& freq_by_rank, uint64_t min_freq) {
        ZipfFit fit = fit_zipf(freq_by_rank, min_freq);
        return py::make_tuple(fit.s, fit.r2);
      },
      py::arg("freq_by_rank"), py::arg("min_freq") = 5);

  m.def(
      "generate_trace",
      [](const TraceModel& model, uint64_t query_count, uint64_t duration_ms,
         double rate_scale, uint64_t seed, bool uniform_arrivals) {
        if ((query_count == 0) == (duration_ms == 0)) {
          throw Error("exactly one of query_count/duration_ms must be set");
        }
        TraceGenSpec spec;
        spec.target_kind = query_count ? TraceGenSpec::TargetKind::QueryCount
                                       : TraceGenSpec::TargetKind::DurationMs;
        spec.target = query_count ? query_count : duration_ms;
        spec.rate_scale = rate_scale;
        spec.master_seed = seed;
        spec.uniform_arrivals = uniform_arrivals;
        return generate_trace(model, spec);
      },
      py::arg("model"), py::arg("query_count") = 0, py::arg("duration_ms") = 0,
      py::arg("rate_scale") = 1.0, py::arg("seed") = 42,
      py::arg("uniform_arrivals") = false);

  m.def("kl_divergence", &kl_divergence<std::string>, py::arg("p"), py::arg("q"));
  m.def(
      "chi_square_test",
      [](const std::map<std::string, uint64_t>& observed,
         const std::map<std::string, double>& expected, uint64_t n) {
        ChiSquareResult result = chi_square_test(observed, expected, n);
        return py::make_tuple(result.statistic, result.dof, result.p_value);
      },
      py::arg("observed"), py::arg("expected"), py::arg("n"));
  m.def("ks_statistic", &ks_statistic<uint64_t>, py::arg("cdf_a"), py::arg("cdf_b"));
  m.def("gamma_q", &gamma_q, py::arg("a"), py::arg("x"));

  py::class_<CheckRecord>(m, "CheckRecord")
      .def_readonly("name", &CheckRecord::name)
      .def_readonly("statistic", &CheckRecord::statistic)
      .def_readonly("threshold", &CheckRecord::threshold)
      .def_readonly("passed", &CheckRecord::pass);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def("overall_pass", &ValidationReport::overall_pass)
      .def("to_table", &ValidationReport::to_table);

  m.def(
      "validate_corpus",
      [](const CorpusModel& seed, const CorpusModel& synthetic) {
        return validate_corpus(seed, synthetic);
      },
      py::arg("seed_model"), py::arg("synthetic_model"));
  m.def(
      "validate_trace",
      [](const TraceModel& seed, const QueryTrace& synthetic, double rate_scale) {
        return validate_trace(seed, synthetic, {}, rate_scale);
      },
      py::arg("seed_model"), py::arg("synthetic_trace"), py::arg("rate_scale") = 1.0);

  py::class_<WorkloadResult>(m, "WorkloadResult")
      .def_readonly("workload", &WorkloadResult::workload)
      .def_readonly("input_bytes", &WorkloadResult::input_bytes)
      .def_readonly("wall_time_seconds", &WorkloadResult::wall_time_seconds)
      .def_readonly("rate_mb_per_s", &WorkloadResult::rate_mb_per_s)
      .def_readonly("summary", &WorkloadResult::summary);

  m.def("data_processing_rate", &data_processing_rate, py::arg("input_bytes"),
        py::arg("wall_time_seconds"));
  m.def("run_sort", &run_sort, py::arg("input_path"), py::arg("output_path"),
        py::arg("memory_budget_bytes"));
  m.def("run_grep", &run_grep, py::arg("input_path"), py::arg("pattern"));
  m.def("run_wordcount", &run_wordcount, py::arg("input_path"), py::arg("top_k") = 20);
  m.def("run_naive_bayes", &run_naive_bayes, py::arg("train_path"), py::arg("test_path"));
  m.def("run_svm", &run_svm, py::arg("train_path"), py::arg("test_path"),
        py::arg("seed") = 1);
}
