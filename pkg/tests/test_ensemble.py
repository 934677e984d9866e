"""
test_ensemble.py
역할: 앙상블 실행기의 재현성 (seed 스트림, worker 수 무관성)과
      percolation / reference 큐비트 실험 진입점 검증.
"""

import numpy as np
import pytest

from engine.circuits import BoundaryLayout, build_preset
from engine.errors import ArgumentError, GeometryError, ScheduleError
from engine.resultfile import render_data_block
from engine.seeding import realization_rng, realization_seed
from workers.ensemble import (
    chunk_bounds,
    run_ensemble,
    run_percolation_ensemble,
    run_reference_qubit_experiment,
)


@pytest.fixture
def fffa_small():
    layout = BoundaryLayout("fffa", 8, 4, 0.2)
    _, schedule = build_preset("fffa_sweep", 8, 4)
    return layout, schedule


# ── seed 스트림 ───────────────────────────────────────────────

def test_realization_streams_are_reproducible():
    a = realization_rng(7, 3).integers(1 << 30, size=4)
    b = realization_rng(7, 3).integers(1 << 30, size=4)
    c = realization_rng(7, 4).integers(1 << 30, size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert realization_seed(7, 3, 1).spawn_key == (3, 1)


def test_negative_master_seed():
    with pytest.raises(ArgumentError):
        realization_seed(-1, 0)


# ── chunk 분할 ────────────────────────────────────────────────

def test_chunk_bounds_cover_range():
    assert chunk_bounds(10, 2) == [(0, 2), (2, 4), (4, 6), (6, 8), (8, 10)]
    assert chunk_bounds(3, 8) == [(0, 1), (1, 2), (2, 3)]
    assert chunk_bounds(1, 1) == [(0, 1)]


# ── 회로 앙상블 ───────────────────────────────────────────────

def test_single_realization_has_zero_stderr(fffa_small):
    layout, schedule = fffa_small
    series = run_ensemble(layout, schedule, n_realizations=1, master_seed=3)
    assert series.count == 1
    assert all(r.stderr == 0.0 for r in series)
    assert len(series) == len(schedule)
    assert series.metadata["source"] == "circuit"
    assert series.metadata["layout"]["kind"] == "fffa"


def test_same_seed_same_series(fffa_small):
    layout, schedule = fffa_small
    first = run_ensemble(layout, schedule, n_realizations=3, master_seed=11)
    second = run_ensemble(layout, schedule, n_realizations=3, master_seed=11)
    assert render_data_block(first) == render_data_block(second)


def test_worker_count_does_not_change_result(fffa_small):
    """spawn 자식 2개로 나눠도 정수 합 merge 라 bit-identical."""
    layout, schedule = fffa_small
    serial = run_ensemble(layout, schedule, n_realizations=6, master_seed=5, workers=1)
    parallel = run_ensemble(layout, schedule, n_realizations=6, master_seed=5, workers=2)
    assert render_data_block(serial) == render_data_block(parallel)


@pytest.mark.parametrize("preset", [
    "fffa_sweep", "afaa_probes", "fafa_bell", "aaaa_intervals", "pbc_intervals", "pbc_bell_entropy", "reference",
])
def test_worker_count_does_not_change_any_layout(preset):
    """layout 종류마다 (주입/방출, 환경 큐비트, 주기 경계 포함) workers=1 과 3 이 같다."""
    kind, schedule = build_preset(preset, 16, 8)
    layout = BoundaryLayout(kind, 16, 8, 0.16)
    serial = run_ensemble(layout, schedule, n_realizations=5, master_seed=9, workers=1)
    parallel = run_ensemble(layout, schedule, n_realizations=5, master_seed=9, workers=3)
    assert render_data_block(serial) == render_data_block(parallel)


def test_percolation_worker_count_does_not_change_result():
    serial = run_percolation_ensemble(8, [1, 2, 4], 0.3, n_realizations=5, master_seed=4, workers=1)
    parallel = run_percolation_ensemble(8, [1, 2, 4], 0.3, n_realizations=5, master_seed=4, workers=2)
    assert render_data_block(serial) == render_data_block(parallel)


@pytest.mark.parametrize("n, workers", [(0, 1), (2, 0)])
def test_bad_counts(fffa_small, n, workers):
    layout, schedule = fffa_small
    with pytest.raises(ArgumentError):
        run_ensemble(layout, schedule, n_realizations=n, master_seed=0, workers=workers)


def test_invalid_schedule_fails_before_running():
    layout = BoundaryLayout("fffa", 8, 4, 0.2)
    _, schedule = build_preset("fafa_bell", 8, 4)
    with pytest.raises(ScheduleError):
        run_ensemble(layout, schedule, n_realizations=1, master_seed=0)


# ── reference 큐비트 ──────────────────────────────────────────

def test_reference_qubits_start_maximally_entangled():
    series = run_reference_qubit_experiment(8, 0, 0.2, (2, 6), n_realizations=1, master_seed=0)
    (record,) = series.records
    assert record.observable == "refQ_entropy"
    assert record.mean_bits == 4


def test_reference_qubits_purified_by_full_measurement():
    series = run_reference_qubit_experiment(8, 4, 1.0, (2, 6), n_realizations=2, master_seed=0)
    assert [r.t for r in series] == [0, 1, 2, 3, 4]
    assert [r.mean_bits for r in series] == [4, 0, 0, 0, 0]


def test_reference_segment_must_be_nonempty():
    with pytest.raises(GeometryError):
        run_reference_qubit_experiment(8, 4, 0.2, (3, 3), n_realizations=1, master_seed=0)


# ── percolation ───────────────────────────────────────────────

def test_percolation_intact_lattice_cuts_every_column():
    series = run_percolation_ensemble(4, [0, 1, 2], 0.0, "top_vs_bottom", n_realizations=2, master_seed=1)
    assert [r.t for r in series] == [0, 1, 2]
    assert [r.mean_bits for r in series] == [4, 4, 4]
    assert series.metadata["percolation"] == {"coloring": "top_vs_bottom", "wrap": "open", "p": 0.0}


def test_percolation_fully_broken_lattice():
    series = run_percolation_ensemble(4, [0, 1, 2], 1.0, "top_vs_bottom", n_realizations=2, master_seed=1)
    assert [r.mean_bits for r in series] == [4, 0, 0]


def test_percolation_default_cuts_for_bipartition():
    series = run_percolation_ensemble(8, [2], 0.3, n_realizations=2, master_seed=2)
    assert {r.segment for r in series} == {f"top:0-top:{x}" for x in range(1, 8)}
    assert all(r.observable == "bipartite_entropy" for r in series)


@pytest.mark.parametrize("L, depths", [(5, [1]), (4, [-1, 2]), (4, [])])
def test_percolation_bad_geometry(L, depths):
    with pytest.raises(GeometryError):
        run_percolation_ensemble(L, depths, 0.2, n_realizations=1)
