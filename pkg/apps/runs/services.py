"""
services.py
역할: 검증된 RunConfig 를 실제로 실행하는 공용 진입점.
      manage.py 명령(인라인 실행), simulate --queue, POST /v1/runs, 큐 워커가 모두 여기로 들어온다.

흐름:
  check_plan(config)  : serializer 검증 단계에서 layout/schedule 을 미리 풀어 본다
  execute(config, out): 명령별 실행 → 결과 파일(atomic write) → summary dict
  submit_run(config)  : 같은 실험 dedupe 후 SimulationRun 생성 + 큐 등록
"""

import json
import logging
import math
import time
from pathlib import Path

from django.conf import settings
from django.db import transaction

from engine.circuits import (
    BoundaryLayout,
    Probe,
    build_preset,
    load_schedule,
    named_time_grid,
    validate_schedule,
)
from engine.errors import ArgumentError, GeometryError, ScheduleError
from engine.percolation import default_schedule
from engine.resultfile import atomic_write_text, read_result, write_result
from engine.scaling import (
    calibrate,
    calibrate_p_series,
    collapse,
    compare_lightcone_models,
    fit_series,
    pooled_fit,
)
from workers.ensemble import percolation_layout, run_ensemble, run_percolation_ensemble
from workers.events import log
from workers.redis_queue import enqueue, get_cache, set_cache

from .models import SimulationRun
from .serializers import config_sha256

logger = logging.getLogger(__name__)

# --schedule 생략 시 layout 별 기본 preset
DEFAULT_PRESETS = {
    "fffa": "fffa_sweep",
    "afaa": "afaa_probes",
    "fafa": "fafa_bell",
    "aaaa": "aaaa_intervals",
    "pbc_product": "pbc_intervals",
    "pbc_bell": "pbc_bell_entropy",
    "reference_qubits": "reference",
}

# fit 종류별로 의미가 있는 창(window) 옵션
FIT_OPTIONS = {
    "log_linear": ("min_separation",),
    "power_law": ("ceiling", "floor", "two_term"),
    "eta_to_one": ("width",),
    "bell_early": ("h", "upper"),
    "bell_late": ("lower",),
    "refQ_power": ("lower", "upper"),
    "lightcone": (),
}

# 파일 출력이 필수인 명령
FILE_COMMANDS = ("simulate", "percolate", "collapse")


# ── 계획 (layout / schedule 해석) ─────────────────────────────
def simulation_plan(config: dict) -> tuple[BoundaryLayout, object]:
    L, T = config["L"], config["T"]
    ref = tuple(config["ref_segment"]) if config.get("ref_segment") else None
    kind = config.get("layout")
    spec = config.get("schedule")
    if spec is None:
        if kind is None:
            raise ScheduleError("layout 과 schedule 이 모두 없음")
        spec = DEFAULT_PRESETS[kind]

    schedule_kind, schedule = load_schedule(spec, L, T, ref)
    if kind is None:
        kind = schedule_kind
    if kind is None:
        raise ScheduleError(f"{spec}: layout 을 정할 수 없음 (--layout 또는 schedule 의 kind 필요)")
    if schedule_kind is not None and schedule_kind != kind:
        raise ScheduleError(f"schedule {spec!r} 은 {schedule_kind} 용인데 layout 은 {kind}")

    layout = BoundaryLayout(kind, L, T, config["p"], y_over_t=config["y_over_t"], ref_segment=ref)
    return layout, schedule


def percolation_plan(config: dict):
    """Returns: (대응 layout, schedule). depths 생략 시 period+log 격자."""
    L, T = config["L"], config["T"]
    if L % 2:
        raise GeometryError(f"brickwork 격자는 짝수 L 필요: {L}")
    coloring, wrap = config["coloring"], config["wrap"]
    if config.get("schedule"):
        _, schedule = load_schedule(config["schedule"], L, T)
    else:
        depths = config.get("depths") or named_time_grid("period+log", T)
        schedule = default_schedule(L, depths, coloring, wrap)
    layout = percolation_layout(L, max(schedule.times), config["p"], coloring, wrap)
    return layout, schedule


def calibration_plans(config: dict):
    """p 격자 각 점의 pbc_product 정상상태 plan 과, p 자리를 비워 둔 pbc_bell schedule."""
    L, T = config["L"], config["T"]
    _, steady = build_preset("pbc_intervals", L, T)
    _, bell = build_preset("pbc_bell_entropy", L, T)
    layouts = [BoundaryLayout("pbc_product", L, T, p, y_over_t=config["y_over_t"]) for p in config["p_grid"]]
    return layouts, steady, bell


def check_plan(config: dict) -> None:
    """실행 전에 풀 수 없는 설정을 예외로 알린다 (serializer.validate 에서 호출)."""
    command = config["command"]
    if command == "simulate":
        validate_schedule(*simulation_plan(config))
    elif command == "percolate":
        validate_schedule(*percolation_plan(config))
    elif command == "calibrate":
        layouts, steady, bell = calibration_plans(config)
        for layout in layouts:
            validate_schedule(layout, steady)
        first = layouts[0]
        validate_schedule(BoundaryLayout("pbc_bell", first.L, first.T, first.p, y_over_t=first.y_over_t), bell)


# ── 명령별 실행 ───────────────────────────────────────────────
def _require_out(config: dict, out) -> Path:
    out = out or config.get("out")
    if not out:
        raise ArgumentError(f"{config['command']}: 출력 경로(--out)가 필요")
    return Path(out)


def _series_summary(series, path: Path, started: float) -> dict:
    return {
        "rows": len(series),
        "n_realizations": series.count,
        "elapsed_s": round(time.monotonic() - started, 3),
        "output_path": str(path),
    }


def run_simulate(config: dict, out=None) -> dict:
    path = _require_out(config, out)
    started = time.monotonic()
    layout, schedule = simulation_plan(config)
    series = run_ensemble(layout, schedule, config["n"], config["seed"], config["workers"])
    write_result(path, series, config)
    return _series_summary(series, path, started)


def run_percolate(config: dict, out=None) -> dict:
    path = _require_out(config, out)
    started = time.monotonic()
    _, schedule = percolation_plan(config)
    series = run_percolation_ensemble(
        config["L"],
        schedule.times,
        config["p"],
        config["coloring"],
        config["wrap"],
        config["n"],
        config["seed"],
        config["workers"],
        schedule=schedule,
    )
    write_result(path, series, config)
    return _series_summary(series, path, started)


def _fit_options(config: dict) -> dict:
    options = {k: config[k] for k in FIT_OPTIONS[config["fit_kind"]] if k in config}
    if "min_tau" in config:
        options["min_tau"] = config["min_tau"]
    return options


def lightcone_comparison(series):
    """얕은 깊이 aaaa 의 두 구간 상호정보: 교차비 거듭제곱 vs 지수 lightcone (AIC)."""
    rows = [r for r in series.select("mutual_information") if r.count and math.isfinite(r.eta)]
    separation = []
    for r in rows:
        a, b = Probe(r.observable, r.segment).arcs
        separation.append(b.start.offset - a.stop.offset)
    return compare_lightcone_models(
        [r.eta for r in rows],
        [r.mean_nats for r in rows],
        separation,
        [r.t for r in rows],
        [r.stderr for r in rows],
    )


def run_fit(config: dict, out=None) -> dict:
    kind = config["fit_kind"]
    options = _fit_options(config)
    inputs = config["inputs"]
    series_list = [read_result(path).series for path in inputs]

    rows = []
    for path, series in zip(inputs, series_list):
        if kind == "lightcone":
            result = lightcone_comparison(series)
        else:
            result = fit_series(series, kind, **options)
        rows.append({"input": path, **result.to_dict()})
        log("fit_done", input=path, kind=kind)
    if kind != "lightcone" and config.get("pooled") and len(series_list) > 1:
        rows.append({"input": "pooled", **pooled_fit(series_list, kind, **options).to_dict()})

    summary = {"fits": rows}
    path = out or config.get("out")
    if path:
        atomic_write_text(path, json.dumps(rows, ensure_ascii=False, indent=2) + "\n")
        summary["output_path"] = str(path)
    return summary


def run_calibrate(config: dict, out=None) -> dict:
    """p 격자마다 새 pbc_product 앙상블 → p_c, 그 p_c 에서 pbc_bell 앙상블 → Y/T."""
    layouts, steady, bell_schedule = calibration_plans(config)
    n, seed, workers = config["n"], config["seed"], config["workers"]

    p_series = {}
    for layout in layouts:
        p_series[layout.p] = run_ensemble(layout, steady, n, seed, workers)

    # Bell 앙상블은 p_c 에서 돌려야 하므로 p 축을 먼저 확정한다
    p_axis = calibrate_p_series(p_series)
    p_c, _, _, p_grid, p_objective, _ = p_axis
    for p, r2 in zip(p_grid, p_objective):
        log("calibration_point", axis="p", value=p, objective=r2)

    first = layouts[0]
    bell_layout = BoundaryLayout("pbc_bell", first.L, first.T, p_c, y_over_t=first.y_over_t)
    bell_series = run_ensemble(bell_layout, bell_schedule, n, seed, workers)
    result = calibrate(p_series, bell_series, config["y_over_t_grid"], p_axis=p_axis)
    for value, chi2 in zip(result.y_over_t_grid, result.y_over_t_objective):
        log("calibration_point", axis="y_over_t", value=value, objective=chi2)

    summary = {"calibration": result.to_dict()}
    path = out or config.get("out")
    if path:
        atomic_write_text(path, json.dumps(summary["calibration"], ensure_ascii=False, indent=2) + "\n")
        summary["output_path"] = str(path)
    return summary


def run_collapse(config: dict, out=None) -> dict:
    path = _require_out(config, out)
    started = time.monotonic()
    source = read_result(config["inputs"][0])
    series = collapse(source.series, config["y_over_t"])
    write_result(path, series, config)
    summary = _series_summary(series, path, started)
    summary["source_config"] = source.config
    return summary


COMMANDS = {
    "simulate": run_simulate,
    "percolate": run_percolate,
    "fit": run_fit,
    "calibrate": run_calibrate,
    "collapse": run_collapse,
}


def execute(config: dict, out=None) -> dict:
    return COMMANDS[config["command"]](config, out)


# ── 큐 제출 ───────────────────────────────────────────────────
def default_output_path(run: SimulationRun) -> str:
    suffix = "csv" if run.command in FILE_COMMANDS else "json"
    return str(Path(settings.RESULTS_DIR) / f"run-{run.id}-{run.command}.{suffix}")


def submit_run(config: dict) -> tuple[SimulationRun, bool]:
    """
    같은 canonical config 의 run 이 있으면 그대로 반환 (FAILED 제외), 없으면 생성 + 큐 등록.
    Returns: (run, created)
    """
    sha256 = config_sha256(config)

    # 1. Redis 캐시에서 같은 실험의 run_id 조회
    cached_id = get_cache(sha256)
    if cached_id:
        run = SimulationRun.objects.filter(pk=cached_id).first()
        if run is not None and run.status != SimulationRun.Status.FAILED:
            return run, False

    # 2. DB fallback: 캐시 TTL 만료 등
    existing = (
        SimulationRun.objects.filter(config_sha256=sha256)
        .exclude(status=SimulationRun.Status.FAILED)
        .order_by("-created_at")
        .first()
    )
    if existing:
        set_cache(sha256, existing.id)
        return existing, False

    # 3. 새 run 생성: Redis 는 DB 트랜잭션에 참여하지 못하므로 enqueue 는 커밋 뒤에.
    #    enqueue 전에 크래시하면 매니저의 QUEUED stuck 복구가 다시 넣는다.
    with transaction.atomic():
        run = SimulationRun.objects.create(
            command=config["command"],
            status=SimulationRun.Status.QUEUED,
            config=config,
            config_sha256=sha256,
        )
        run.output_path = config.get("out") or default_output_path(run)
        run.save(update_fields=["output_path", "updated_at"])

    enqueue(run.id)
    set_cache(sha256, run.id)
    return run, True
