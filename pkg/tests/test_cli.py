import json

import numpy as np
import pytest

from greedycut.cli import main, read_labels
from greedycut.synthetic import blobs


@pytest.fixture
def files(tmp_path):
    (tmp_path / "path.txt").write_text("0 1 1\n1 2 1\n")
    (tmp_path / "dis.txt").write_text("0 1 1\n2 3 1\n")
    (tmp_path / "a.txt").write_text("0\n0\n1\n1\n")
    (tmp_path / "b.txt").write_text("0\n1\n0\n1\n")
    (tmp_path / "p.txt").write_text("0\n0\n1\n")
    return tmp_path


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_cluster_path(files):
    out, rep, tr = files / "l.txt", files / "r.json", files / "t.txt"
    code = main(["cluster", "--graph", str(files / "path.txt"), "--clusters", "2",
                 "--out", str(out), "--report", str(rep), "--trace", str(tr)])
    assert code == 0
    assert out.read_text() == "0\n0\n1\n"
    report = json.loads(rep.read_text())
    assert report["merges_executed"] == 1 and report["c"] == 2
    assert report["objective_trace"][-1] == pytest.approx(4 / 3)
    step, i, j, e, d, obj = tr.read_text().split()
    assert (step, i, j, e) == ("1", "0", "1", "3")


def test_cluster_zero_clusters(files, capsys):
    with pytest.raises(SystemExit) as info:
        main(["cluster", "--graph", str(files / "path.txt"), "--clusters", "0",
              "--out", str(files / "l.txt")])
    assert info.value.code == 2


def test_cluster_too_many_clusters(files, capsys):
    code = main(["cluster", "--graph", str(files / "path.txt"), "--clusters", "4",
                 "--out", str(files / "l.txt")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cluster_strict_exhaustion(files):
    out = files / "d.txt"
    code = main(["cluster", "--graph", str(files / "dis.txt"), "--clusters", "1",
                 "--out", str(out), "--disconnected", "strict"])
    assert code == 3
    assert (files / "d.txt.partial").read_text() == "0\n0\n1\n1\n"
    assert not out.exists()


def test_cluster_bad_graph(files, capsys):
    (files / "bad.txt").write_text("0 1 1\n1 0 1\n")
    code = main(["cluster", "--graph", str(files / "bad.txt"), "--clusters", "1",
                 "--out", str(files / "l.txt")])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_eval(files, capsys):
    assert main(["eval", "--pred", str(files / "a.txt"), "--truth", str(files / "a.txt")]) == 0
    assert _json(capsys) == {"acc": 1.0, "nmi": 1.0, "ari": 1.0}
    assert main(["eval", "--pred", str(files / "a.txt"), "--truth", str(files / "b.txt")]) == 0
    assert _json(capsys)["ari"] == -0.5
    assert main(["eval", "--pred", str(files / "p.txt"), "--truth", str(files / "p.txt"),
                 "--graph", str(files / "path.txt")]) == 0
    assert _json(capsys)["ncut"] == pytest.approx(1.3333333333, abs=1e-10)


def test_eval_length_mismatch(files, capsys):
    assert main(["eval", "--pred", str(files / "p.txt"), "--truth", str(files / "a.txt")]) == 2


def test_oracle_modes(files, capsys):
    tr_engine, tr_naive = files / "te.txt", files / "tn.txt"
    main(["cluster", "--graph", str(files / "path.txt"), "--clusters", "1",
          "--out", str(files / "l.txt"), "--trace", str(tr_engine)])
    assert main(["oracle", "--mode", "naive", "--graph", str(files / "path.txt"),
                 "--clusters", "1", "--trace", str(tr_naive)]) == 0
    assert tr_naive.read_text() == tr_engine.read_text()
    capsys.readouterr()
    assert main(["oracle", "--mode", "exhaustive", "--graph", str(files / "path.txt"),
                 "--clusters", "2"]) == 0
    out = _json(capsys)
    assert out["ncut"] == pytest.approx(4 / 3) and out["labels"] == [0, 0, 1]


def test_oracle_exhaustive_too_large(files, capsys):
    big = files / "big.txt"
    big.write_text("".join(f"{i} {i + 1} 1\n" for i in range(19)))
    assert main(["oracle", "--mode", "exhaustive", "--graph", str(big), "--clusters", "2"]) == 2


def test_build_graph(files, capsys):
    x, y = blobs(10, 10, seed=3)
    feats = files / "f.tsv"
    np.savetxt(feats, x, delimiter="\t")
    out = files / "g.txt"
    assert main(["build-graph", "--features", str(feats), "--clusters", "10",
                 "--out", str(out)]) == 0
    info = _json(capsys)
    assert info["n"] == 100 and info["k"] == 10 and info["edges"] > 0
    assert main(["build-graph", "--features", str(feats), "--k", "5", "--zscore",
                 "--out", str(out)]) == 0
    assert _json(capsys)["k"] == 5


def test_build_graph_missing_file(files, capsys):
    code = main(["build-graph", "--features", str(files / "nope.tsv"), "--k", "3",
                 "--out", str(files / "g.txt")])
    assert code == 2
    assert capsys.readouterr().err.startswith("error")


def test_pipeline_round_trip_and_determinism(files, capsys):
    x, y = blobs(4, 30, seed=1)
    np.savetxt(files / "f.tsv", x, delimiter="\t")
    (files / "y.txt").write_text("".join(f"{v}\n" for v in y))
    main(["build-graph", "--features", str(files / "f.tsv"), "--k", "8",
          "--out", str(files / "g.txt")])
    outputs = []
    for run_id in range(2):
        lab, rep, tr = (files / f"l{run_id}.txt", files / f"r{run_id}.json",
                        files / f"t{run_id}.txt")
        main(["cluster", "--graph", str(files / "g.txt"), "--clusters", "4",
              "--out", str(lab), "--report", str(rep), "--trace", str(tr), "--no-timings"])
        outputs.append((lab.read_bytes(), rep.read_bytes(), tr.read_bytes()))
    assert outputs[0] == outputs[1]
    capsys.readouterr()
    main(["eval", "--pred", str(files / "l0.txt"), "--truth", str(files / "y.txt"),
          "--graph", str(files / "g.txt")])
    res = _json(capsys)
    final = json.loads((files / "r0.json").read_text())["objective_trace"][-1]
    assert res["ncut"] == pytest.approx(final, abs=1e-9)
    assert res["acc"] >= 0.9


def test_bench_small(capsys):
    code = main(["bench", "--sizes", "500,1000", "--trials", "1", "--generator", "grid"])
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0].startswith("n,median_ms,queue_ops,k1_init")
    assert len(rows) == 3
    for row in rows[1:]:
        n, ms, ops, k1, k1max, bound = row.split(",")
        assert int(ops) <= float(bound)
    assert code in (0, 1)


def test_read_labels_rejects_garbage(tmp_path):
    p = tmp_path / "l.txt"
    p.write_text("0\nx\n")
    with pytest.raises(ValueError):
        read_labels(p)
