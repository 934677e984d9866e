"""
ensemble.py
역할: realization 앙상블 실행기 (회로 / percolation 공통).

핵심 설계:
  - realization i 는 realization_seed(master_seed, i) 스트림만 쓴다.
    → 어떤 worker 가 어떤 순서로 처리해도 같은 i 는 같은 결과.
  - 인덱스 구간(chunk)을 ProcessPoolExecutor(spawn) 에 나눠 주고
    as_completed 로 도착 순서대로 정수 합(Σbits, Σbits²)에 merge 한다.
    정수 덧셈이라 완료 순서 / worker 수와 무관하게 bit-identical.
  - workers=1 이면 프로세스 풀 없이 현재 프로세스에서 순차 실행.
  - Django 를 import 하지 않는다 (spawn 자식에서 django.setup() 불필요).
"""

import logging
import math
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor, as_completed

from engine import __version__
from engine.circuits import (
    DEFAULT_Y_OVER_T,
    BoundaryLayout,
    ProbeSchedule,
    build_preset,
    record_keys,
    run_realization,
)
from engine.errors import ArgumentError, GeometryError
from engine.observables import EnsembleAccumulator, ObservableSeries
from engine.percolation import (
    ANALOG_KINDS,
    COLORINGS,
    PERCOLATION_Y_OVER_T,
    WRAPS,
    default_schedule,
    percolation_realization,
)
from engine.seeding import realization_seed
from workers.events import log

logger = logging.getLogger(__name__)

# worker 하나당 chunk 수. 작을수록 꼬리 대기가 길고, 클수록 IPC 가 늘어난다.
CHUNKS_PER_WORKER = 4


# ── chunk 작업 (spawn 자식에서 실행되므로 모듈 최상위 함수여야 함) ──
def _circuit_chunk(layout: BoundaryLayout, schedule: ProbeSchedule, master_seed: int, start: int, stop: int):
    acc = EnsembleAccumulator(len(schedule))
    for i in range(start, stop):
        acc.add(run_realization(layout, schedule, realization_seed(master_seed, i)))
    return acc


def _percolation_chunk(
    L: int, p: float, coloring: str, wrap: str, schedule: ProbeSchedule, master_seed: int, start: int, stop: int
):
    acc = EnsembleAccumulator(len(schedule))
    for i in range(start, stop):
        acc.add(percolation_realization(L, p, coloring, wrap, schedule, realization_seed(master_seed, i)))
    return acc


def chunk_bounds(n_realizations: int, workers: int) -> list[tuple[int, int]]:
    """[0, n) 를 연속 구간으로 나눈다. 구간 경계는 결과에 영향을 주지 않는다."""
    parts = max(1, min(n_realizations, workers * CHUNKS_PER_WORKER))
    size = math.ceil(n_realizations / parts)
    return [(a, min(a + size, n_realizations)) for a in range(0, n_realizations, size)]


def _check_counts(n_realizations: int, workers: int) -> None:
    if n_realizations < 1:
        raise ArgumentError(f"n_realizations ≥ 1 이어야 함: {n_realizations}")
    if workers < 1:
        raise ArgumentError(f"workers ≥ 1 이어야 함: {workers}")


def _reduce(task, args: tuple, size: int, n_realizations: int, workers: int) -> EnsembleAccumulator:
    total = EnsembleAccumulator(size)
    bounds = chunk_bounds(n_realizations, workers)

    if workers == 1:
        for start, stop in bounds:
            total.merge(task(*args, start, stop))
            log("realization_done", level=logging.DEBUG, done=total.count, total=n_realizations)
        return total

    # spawn: fork 된 자식이 부모의 Redis/DB 연결을 공유하지 않도록
    ctx = mp.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        futures = [pool.submit(task, *args, start, stop) for start, stop in bounds]
        for future in as_completed(futures):
            total.merge(future.result())
            log("realization_done", level=logging.DEBUG, done=total.count, total=n_realizations)
    return total


def _metadata(source: str, layout: BoundaryLayout, schedule: ProbeSchedule, n_realizations: int, master_seed: int) -> dict:
    return {
        "source": source,
        "code_version": __version__,
        "layout": layout.to_dict(),
        "schedule": schedule.to_dict(),
        "n_realizations": n_realizations,
        "master_seed": master_seed,
    }


# ── 회로 ──────────────────────────────────────────────────────
def run_ensemble(
    layout: BoundaryLayout,
    schedule: ProbeSchedule,
    n_realizations: int,
    master_seed: int,
    workers: int = 1,
) -> ObservableSeries:
    """
    n_realizations 개 회로를 돌려 프로브별 평균/표준오차를 모은다.
    schedule 은 시작 전에 검증된다 (실패 시 ScheduleError, 아무것도 실행하지 않음).
    """
    _check_counts(n_realizations, workers)
    keys = record_keys(layout, schedule)

    started = time.monotonic()
    log(
        "ensemble_start",
        kind=layout.kind, L=layout.L, T=layout.T, p=layout.p,
        n=n_realizations, workers=workers, probes=len(keys), schedule=schedule.name,
    )
    acc = _reduce(_circuit_chunk, (layout, schedule, master_seed), len(keys), n_realizations, workers)
    elapsed = round(time.monotonic() - started, 3)
    log("ensemble_done", kind=layout.kind, L=layout.L, T=layout.T, n=acc.count, elapsed_s=elapsed)

    return ObservableSeries.from_accumulator(
        keys, acc, _metadata("circuit", layout, schedule, n_realizations, master_seed)
    )


def run_reference_qubit_experiment(
    L: int,
    T: int,
    p: float,
    segment: tuple[int, int],
    n_realizations: int,
    master_seed: int,
    workers: int = 1,
    times=None,
    y_over_t: float = DEFAULT_Y_OVER_T,
) -> ObservableSeries:
    """
    구간 A 의 각 큐비트를 고정 reference 큐비트와 Bell 쌍으로 묶고 체인만 진화시켜
    reference 집합의 엔트로피 S_Q(t) 를 기록한다. times 기본값은 period+log 격자.
    """
    a, b = segment
    if b - a < 1:
        raise GeometryError(f"reference 구간은 |A| ≥ 1: ({a}, {b})")
    layout = BoundaryLayout("reference_qubits", L, T, p, y_over_t=y_over_t, ref_segment=(a, b))
    _, schedule = build_preset("reference", L, T, layout.ref_segment)
    if times is not None:
        schedule = ProbeSchedule(tuple(times), schedule.probes, schedule.name)
    return run_ensemble(layout, schedule, n_realizations, master_seed, workers)


# ── percolation ───────────────────────────────────────────────
def percolation_layout(L: int, T: int, p: float, coloring: str, wrap: str) -> BoundaryLayout:
    """cut 결과를 회로와 같은 모양의 series 로 내보내기 위한 대응 layout (Y/T = 1 고정)."""
    if coloring not in COLORINGS:
        raise GeometryError(f"알 수 없는 색칠: {coloring} (가능: {', '.join(COLORINGS)})")
    if wrap not in WRAPS:
        raise GeometryError(f"wrap 은 open|periodic: {wrap}")
    return BoundaryLayout(ANALOG_KINDS[(coloring, wrap)], L, T, p, y_over_t=PERCOLATION_Y_OVER_T)


def run_percolation_ensemble(
    L: int,
    depths,
    p: float,
    coloring: str = "top_bipartition",
    wrap: str = "open",
    n_realizations: int = 1,
    master_seed: int = 0,
    workers: int = 1,
    schedule: ProbeSchedule | None = None,
) -> ObservableSeries:
    """
    깊이 격자(depths)마다 최소 cut 비용을 모아 회로와 같은 ObservableSeries 로 만든다.
    realization i 는 최대 깊이 격자 하나를 만들고 각 깊이로 잘라 쓴다.
    """
    _check_counts(n_realizations, workers)
    depths = tuple(sorted({int(d) for d in depths}))
    if not depths or depths[0] < 0:
        raise GeometryError(f"깊이는 0 이상이어야 함: {depths}")
    if L % 2:
        raise GeometryError(f"brickwork 격자는 짝수 L 필요: {L}")
    if schedule is None:
        schedule = default_schedule(L, depths, coloring, wrap)
    layout = percolation_layout(L, max(schedule.times), p, coloring, wrap)
    keys = record_keys(layout, schedule)

    started = time.monotonic()
    log("ensemble_start", kind=f"percolation_{coloring}_{wrap}", L=L, T=layout.T, p=p, n=n_realizations, workers=workers)
    acc = _reduce(
        _percolation_chunk, (L, p, coloring, wrap, schedule, master_seed), len(keys), n_realizations, workers
    )
    elapsed = round(time.monotonic() - started, 3)
    log("percolation_done", coloring=coloring, wrap=wrap, L=L, T=layout.T, n=acc.count, elapsed_s=elapsed)

    metadata = _metadata("percolation", layout, schedule, n_realizations, master_seed)
    metadata["percolation"] = {"coloring": coloring, "wrap": wrap, "p": p}
    return ObservableSeries.from_accumulator(keys, acc, metadata)
