import csv
import json
import statistics

import pytest

from dlmplace.harness import (
    DlmOptions,
    ExperimentConfig,
    ResultRow,
    derive_seed,
    k_for,
    make_instance,
    read_rows,
    run_experiment,
    summarize,
    write_rows,
    write_summary,
)
from dlmplace.topology import DemandSpec


def _small(**kw):
    base = dict(topologies=["grid"], sizes=[25], k_ratios=[0.04], instances_per_cell=1,
                algorithms=["dlm", "greedy", "brute"], record_runtime=False)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(topologies=["torus"])
    with pytest.raises(ValueError):
        ExperimentConfig(algorithms=["simplex"])
    with pytest.raises(ValueError):
        ExperimentConfig(topologies=["file"])
    with pytest.raises(ValueError):
        ExperimentConfig(instances_per_cell=0)
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"nonsense": 1})


def test_config_json_round_trip(tmp_path):
    cfg = _small(demand=DemandSpec("uniform", scale=2.0), dlm=DlmOptions(max_iter=7))
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert ExperimentConfig.from_json(path) == cfg


def test_k_rule():
    assert k_for(400, 0.005) == 2
    assert k_for(1000, 0.015) == 15
    assert k_for(25, 0.001) == 1


def test_seed_derivation_is_stable_and_distinct():
    assert derive_seed(0, "grid", 400, 1) == derive_seed(0, "grid", 400, 1)
    assert len({derive_seed(0, "grid", 400, i) for i in range(50)}) == 50
    assert derive_seed(0, "grid", 400, 1) != derive_seed(1, "grid", 400, 1)
    assert 0 <= derive_seed(5, "x") < 2**64


def test_instances_are_valid_graphs():
    cfg = ExperimentConfig(topologies=["grid", "small-world"], sizes=[60])
    for topo in cfg.topologies:
        g, seed = make_instance(cfg, topo, 60, 0)
        assert g.node_count == 60 and g.is_connected
        assert (g.demand >= 1).all()
        assert make_instance(cfg, topo, 60, 0) == (g, seed)


def test_sandwich_on_small_grid():
    rows = run_experiment(_small())
    assert [r.algorithm for r in rows] == ["dlm", "greedy", "brute"]
    cost = {r.algorithm: r.cost for r in rows}
    assert cost["brute"] <= cost["dlm"] and cost["brute"] <= cost["greedy"]
    dlm = rows[0]
    assert dlm.iterations >= 1 and dlm.messages_sent > 0
    assert rows[1].iterations is None and rows[1].messages_sent is None


def test_empty_algorithm_set(tmp_path):
    out = tmp_path / "r.csv"
    rows = run_experiment(_small(algorithms=[], output_path=str(out)))
    assert rows == []
    assert read_rows(out) == []
    assert out.read_text().splitlines()[0].startswith("topology,")


def test_same_config_gives_identical_files(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_experiment(_small(output_path=str(a), algorithms=["dlm", "greedy", "random"]))
    run_experiment(_small(output_path=str(b), algorithms=["dlm", "greedy", "random"]))
    assert a.read_bytes() == b.read_bytes()


def test_errors_are_recorded_per_row():
    rows = run_experiment(_small(sizes=[36], k_ratios=[0.1], brute_budget=10))
    by_alg = {r.algorithm: r for r in rows}
    assert "InstanceTooLargeError" in by_alg["brute"].error and by_alg["brute"].cost is None
    assert by_alg["dlm"].error == "" and by_alg["greedy"].cost > 0


def test_file_topology(tmp_path):
    (tmp_path / "g.edges").write_text("0 1 1\n1 2 1\n2 3 1\n3 4 1\n")
    cfg = ExperimentConfig(topologies=["file"], edge_file=str(tmp_path / "g.edges"), k_ratios=[0.4],
                           instances_per_cell=1, algorithms=["greedy", "brute"])
    rows = run_experiment(cfg)
    assert [(r.n, r.k) for r in rows] == [(5, 2), (5, 2)]


def test_csv_round_trip(tmp_path):
    rows = [
        ResultRow("grid", 25, 1, 0.04, 0, 2**63 + 5, "dlm", 12.5, 3, 1.25, 40),
        ResultRow("grid", 25, 1, 0.04, 0, 2**63 + 5, "brute", None, error='Boom: "quoted", comma'),
    ]
    path = tmp_path / "r.csv"
    write_rows(rows, path)
    assert read_rows(path) == rows
    with open(path, newline="") as fh:
        assert len(list(csv.reader(fh))) == 3


def test_parallel_workers_keep_canonical_order():
    cfg = _small(sizes=[16, 25], instances_per_cell=2, algorithms=["greedy", "random"])
    serial = run_experiment(cfg)
    cfg.workers = 2
    assert run_experiment(cfg) == serial


def _row(alg, seed, cost, n=400, k=2):
    return ResultRow("grid", n, k, 0.005, 0, seed, alg, cost)


def test_summary_arithmetic():
    rows = [_row("greedy", 1, 10.0), _row("dlm", 1, 10.0), _row("greedy", 2, 10.0), _row("dlm", 2, 12.0)]
    (s,) = summarize(rows)
    assert (s.algorithm, s.instances) == ("dlm", 2)
    assert s.mean == pytest.approx(1.1) and s.median == pytest.approx(1.1)
    assert (s.max, s.min) == (pytest.approx(1.2), 1.0)


def test_summary_identical_algorithm():
    rows = [_row("greedy", i, 3.0 + i) for i in range(4)] + [_row("random", i, 3.0 + i) for i in range(4)]
    (s,) = summarize(rows)
    assert s.mean == s.max == s.min == 1.0


def test_summary_missing_baseline_warns():
    (s,) = summarize([_row("dlm", 1, 5.0)])
    assert s.mean is None and "missing baseline" in s.warning


def test_summary_recomputed_from_raw_csv(tmp_path):
    path = tmp_path / "r.csv"
    cfg = ExperimentConfig(sizes=[400], k_ratios=[0.005], topologies=["grid"], output_path=str(path),
                           record_runtime=False)
    summary = summarize(run_experiment(cfg))
    with open(path, newline="") as fh:
        raw = list(csv.DictReader(fh))
    greedy = {r["instance_seed"]: float(r["cost"]) for r in raw if r["algorithm"] == "greedy"}
    ratios = [float(r["cost"]) / greedy[r["instance_seed"]] for r in raw if r["algorithm"] == "dlm"]
    (s,) = summary
    assert (s.n, s.k, s.instances) == (400, 2, 5)
    assert s.mean == pytest.approx(statistics.fmean(ratios), rel=1e-12)
    assert s.max == max(ratios) and s.min == min(ratios)
    out = tmp_path / "s.csv"
    write_summary(summary, out)
    assert out.read_text().splitlines()[0].startswith("topology,n,k,algorithm,baseline")
