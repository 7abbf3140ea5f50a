"""Experiment drivers: sweeps, lattice comparison, ensembles, simulation runs."""
import json

import numpy as np
import pytest

from crossnet import DEFAULT_SKT_PARAMS, GraphSpec, IntegratorConfig
from crossnet.experiments import (
    SweepSpec,
    ensemble_report,
    lattice_comparison,
    ring_sweep,
    simulate_and_report,
    write_ensemble_report,
    write_lattice_comparison,
    write_manifest,
    write_ring_sweep,
)

P = DEFAULT_SKT_PARAMS

# frozen mode counts for the benchmark window on the 100-ring
RING_100_COUNTS = {1: 0, 2: 0, 3: 37, 5: 87, 10: 6, 15: 2, 20: 2, 25: 0, 30: 0, 49: 0}


def test_ring_sweep_counts_match_frozen_table():
    base = GraphSpec(family="ring", n=100, k=10)
    sweep = SweepSpec(base=base, swept="k", values=tuple(RING_100_COUNTS), skt=P)
    rows = ring_sweep(sweep)
    got = {row.value: row.unstable_count for row in rows}
    assert got == RING_100_COUNTS


def test_ring_sweep_rejects_nonring():
    base = GraphSpec(family="path", n=10)
    with pytest.raises(ValueError, match="ring"):
        ring_sweep(SweepSpec(base=base, swept="n", values=(10,), skt=P))


def test_sweep_spec_at_replaces_only_swept_field():
    base = GraphSpec(family="ring", n=100, k=10)
    sweep = SweepSpec(base=base, swept="k", values=(3, 7), skt=P)
    assert sweep.spec_at(3).k == 3
    assert sweep.spec_at(3).n == 100


def test_lattice_comparison_frozen_counts():
    dims = {kind: (10, 11) for kind in ("hexagonal", "square", "triangular")}
    results = lattice_comparison(dims, P)
    assert len(results["hexagonal"].unstable_modes) == 0
    assert len(results["square"].unstable_modes) == 3
    assert len(results["triangular"].unstable_modes) == 32
    for res in results.values():
        assert res.n_nodes == 110


def test_ensemble_report_deterministic_and_fraction_bounded():
    base = GraphSpec(family="erdos-renyi", n=25, p=0.25)
    sweep = SweepSpec(base=base, swept="p", values=(0.15, 0.3), skt=P,
                      realizations=20, master_seed=4)
    rows_a = ensemble_report(sweep)
    rows_b = ensemble_report(sweep, threads=3)
    for ra, rb in zip(rows_a, rows_b):
        assert np.array_equal(ra.stats.mean, rb.stats.mean)
        assert ra.instability_fraction == rb.instability_fraction
        assert 0.0 <= ra.instability_fraction <= 1.0
        assert ra.stats.realizations == 20


def test_ensemble_values_use_independent_seed_streams():
    base = GraphSpec(family="erdos-renyi", n=25, p=0.25)
    one = ensemble_report(SweepSpec(base=base, swept="p", values=(0.25,), skt=P,
                                    realizations=10, master_seed=4))
    two = ensemble_report(SweepSpec(base=base, swept="p", values=(0.3, 0.25), skt=P,
                                    realizations=10, master_seed=4))
    # same value at a different sweep position draws different realizations
    assert not np.array_equal(one[0].stats.mean, two[1].stats.mean)


def test_simulate_and_report_runs_and_metrics(tmp_path):
    out = tmp_path / "run"
    runs = simulate_and_report(
        GraphSpec(family="ring", n=30, k=3),
        P,
        seeds=(0, 1),
        cfg=IntegratorConfig(t_max=40.0, steady_state_tol=1e-30),
        perturbation=1e-2,
        out_dir=str(out),
    )
    assert [r.seed for r in runs] == [0, 1]
    for r in runs:
        assert r.result.final.t == pytest.approx(40.0)
        assert r.metrics.total_u > 0
    assert (out / "report.json").exists()
    assert (out / "spectrum.csv").exists()
    assert (out / "graph.txt").exists()
    assert (out / "manifest.json").exists()
    for seed in (0, 1):
        assert (out / f"seed_{seed}" / "trajectory.csv").exists()
        assert (out / f"seed_{seed}" / "final_state.csv").exists()


def test_simulate_and_report_single_seed_flat_layout(tmp_path):
    out = tmp_path / "single"
    simulate_and_report(
        GraphSpec(family="ring", n=20, k=2),
        P,
        seeds=(7,),
        cfg=IntegratorConfig(t_max=5.0, steady_state_tol=1e-30),
        out_dir=str(out),
    )
    assert (out / "trajectory.csv").exists()
    assert (out / "final_state.csv").exists()
    report = json.loads((out / "report.json").read_text())
    assert report["u_star"] == 1.625
    assert report["runs"][0]["seed"] == 7


def test_simulate_and_report_outputs_reproducible(tmp_path):
    kw = dict(
        skt=P,
        seeds=(3,),
        cfg=IntegratorConfig(t_max=5.0, steady_state_tol=1e-30),
        perturbation=1e-2,
    )
    spec = GraphSpec(family="ring", n=15, k=2)
    simulate_and_report(spec, out_dir=str(tmp_path / "a"), **kw)
    simulate_and_report(spec, out_dir=str(tmp_path / "b"), **kw)
    for name in ("report.json", "trajectory.csv", "final_state.csv", "manifest.json", "spectrum.csv", "graph.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes(), name


def test_manifest_contents(tmp_path):
    path = tmp_path / "manifest.json"
    write_manifest(path, graph=GraphSpec(family="ring", n=10, k=2), skt=P,
                   master_seed=5, extra={"command": "test"})
    doc = json.loads(path.read_text())
    assert doc["graph"]["family"] == "ring"
    assert doc["skt"]["r1"] == 5.0
    assert doc["master_seed"] == 5
    assert doc["command"] == "test"
    # manifests must be replayable: no wall-clock or host fields
    assert "timestamp" not in doc and "host" not in doc


def test_write_ring_sweep_files(tmp_path):
    base = GraphSpec(family="ring", n=20, k=2)
    sweep = SweepSpec(base=base, swept="k", values=(2, 3), skt=P)
    rows = ring_sweep(sweep)
    write_ring_sweep(rows, str(tmp_path))
    summary = (tmp_path / "summary.csv").read_text().splitlines()
    assert summary[0] == "value,n,k,lambda_star,lambda_star_1,lambda_star_2,unstable_count"
    assert len(summary) == 3
    spectra_lines = (tmp_path / "spectra.csv").read_text().splitlines()
    assert spectra_lines[0] == "value,n,k,index,eigenvalue"
    assert len(spectra_lines) == 1 + 2 * 20


def test_write_lattice_comparison_files(tmp_path):
    results = lattice_comparison({"square": (4, 5), "hexagonal": (4, 5)}, P)
    write_lattice_comparison(results, str(tmp_path))
    lines = (tmp_path / "summary.csv").read_text().splitlines()
    assert lines[0] == "kind,rows,cols,n_nodes,unstable_count"
    assert len(lines) == 3


def test_write_ensemble_report_files(tmp_path):
    base = GraphSpec(family="regular-random", n=20, k=4)
    sweep = SweepSpec(base=base, swept="k", values=(4, 6), skt=P,
                      realizations=5, master_seed=0)
    rows = ensemble_report(sweep)
    write_ensemble_report(sweep, rows, str(tmp_path))
    ens = (tmp_path / "ensemble.csv").read_text().splitlines()
    assert ens[0] == "value,index,mean,variance,realizations"
    assert len(ens) == 1 + 2 * 20
    summary = (tmp_path / "summary.csv").read_text().splitlines()
    # degree-type sweep: both the raw degree and the half-degree convention
    assert summary[0] == "k,k_half,instability_fraction,mean_spectrum_unstable_count"
    assert summary[1].startswith("4,2,")
