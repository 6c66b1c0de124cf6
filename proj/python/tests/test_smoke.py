import math

import pytest

import seedgen


def test_analyze_and_distributions():
    docs = [seedgen.Document("A", ["x", "x", "y"]), seedgen.Document("B", ["z"])]
    model = seedgen.analyze_corpus(docs)
    assert model.total_docs == 2
    assert model.classes["A"].word_counts == {"x": 2, "y": 1}
    dist = dict(seedgen.class_distribution(model))
    assert dist == {"A": 0.5, "B": 0.5}
    assert seedgen.word_distribution(model, "A")["x"] == pytest.approx(2 / 3)


def test_model_roundtrip(tmp_path):
    docs = [seedgen.Document("A", ["x"]), seedgen.Document("B", ["y", "y"])]
    model = seedgen.analyze_corpus(docs)
    path = str(tmp_path / "model.json")
    model.save(path)
    assert seedgen.CorpusModel.load(path) == model


def test_generate_corpus_deterministic(tmp_path):
    model = seedgen.analyze_corpus([seedgen.Document("A", ["x", "x"])])
    a = str(tmp_path / "a.txt")
    b = str(tmp_path / "b.txt")
    docs, size = seedgen.generate_corpus_file(model, a, doc_count=100, seed=7)
    seedgen.generate_corpus_file(model, b, doc_count=100, seed=7, threads=4)
    assert docs == 100
    assert open(a).read() == open(b).read()
    assert open(a).readline() == "A\tx x\n"


def test_reuse_distances():
    per_event, hist, cold = seedgen.compute_reuse_distances(["a", "b", "c", "b", "a"])
    assert per_event == [None, None, None, 1, 2]
    assert hist == {1: 1, 2: 1}
    assert cold == 3


def test_trace_roundtrip(tmp_path):
    entries = []
    for i in range(2000):
        entries.append((i * 5, ["t%d" % (i % 11), "t%d" % ((i * 3) % 11)]))
    path = str(tmp_path / "trace.txt")
    with open(path, "w") as handle:
        for ts, terms in entries:
            handle.write("%d\t%s\n" % (ts, " ".join(terms)))
    trace = seedgen.read_trace_file(path)
    assert len(trace) == 2000
    model = seedgen.analyze_trace(trace, 1000)
    assert model.query_count() == 2000
    synth = seedgen.generate_trace(model, query_count=500, seed=3)
    assert len(synth) == 500


def test_stats():
    assert seedgen.kl_divergence({"a": 1.0}, {"a": 0.5, "b": 0.5}) == pytest.approx(
        math.log(2), abs=1e-6
    )
    stat, dof, p = seedgen.chi_square_test({"a": 50, "b": 50}, {"a": 0.5, "b": 0.5}, 100)
    assert stat == pytest.approx(0.0)
    assert dof == 1
    assert p == pytest.approx(1.0)
    assert seedgen.gamma_q(0.5, 3.84 / 2) == pytest.approx(0.05, abs=1e-3)


def test_validation_and_errors(tmp_path):
    model = seedgen.analyze_corpus(
        [seedgen.Document("A", ["x", "y"]), seedgen.Document("B", ["z"])] * 5
    )
    report = seedgen.validate_corpus(model, model)
    assert report.overall_pass()
    with pytest.raises(seedgen.SeedgenError):
        seedgen.analyze_corpus([])


def test_workloads(tmp_path):
    path = str(tmp_path / "lines.txt")
    with open(path, "w") as handle:
        handle.write("b\na\nc\n")
    out = str(tmp_path / "sorted.txt")
    seedgen.run_sort(path, out, 1 << 20)
    assert open(out).read() == "a\nb\nc\n"
    assert "matches=1" == seedgen.run_grep(path, "b").summary
    assert seedgen.run_wordcount(path).summary.startswith("total=3")
    assert seedgen.data_processing_rate(2**20, 1.0) == pytest.approx(1.0)
