"""
scaling.py
역할: 스케일링 차원 추출 (로그/거듭제곱 fit), data collapse, p_c 와 Y/T 보정.

  - 모든 엔트로피는 nats 로 들어온다.
  - 선형 모델은 curve_fit + 해석적 jac, 초기값은 가중 polyfit → 잡음 없는 데이터는 정확히 복원.
  - 가중치 1/stderr², stderr 가 없거나 0 이 섞이면 비가중.
"""

import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from engine.circuits import BoundaryLayout, Probe, collapse_for, collapse_points
from engine.conformal import PRECISION_TAU, CollapseCoordinate
from engine.errors import DegenerateProbeError, FitError
from engine.observables import ObservableSeries

logger = logging.getLogger(__name__)

MIN_POINTS = 3
DEFAULT_MIN_SEPARATION = 4.0
DEFAULT_H = 0.53


@dataclass(frozen=True)
class FitResult:
    kind: str
    exponent: float
    offset: float
    covariance: tuple[tuple[float, float], tuple[float, float]]
    r_squared: float
    window: tuple[float, float]
    n_points: int
    chi2: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def sigma(self) -> float:
        return math.sqrt(max(self.covariance[0][0], 0.0))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "exponent": self.exponent,
            "sigma": self.sigma,
            "offset": self.offset,
            "covariance": [list(row) for row in self.covariance],
            "r_squared": self.r_squared,
            "window": list(self.window),
            "n_points": self.n_points,
            "chi2": self.chi2,
            **({"extra": self.extra} if self.extra else {}),
        }


@dataclass(frozen=True)
class ModelComparison:
    aic_power: float
    aic_exponential: float
    preferred: str
    power_fit: FitResult

    def to_dict(self) -> dict:
        return {
            "aic_power": self.aic_power,
            "aic_exponential": self.aic_exponential,
            "preferred": self.preferred,
            "power_fit": self.power_fit.to_dict(),
        }


@dataclass(frozen=True)
class CalibrationResult:
    p_c: float
    p_c_sigma: float
    y_over_t: float
    y_over_t_sigma: float
    h: float
    p_grid: tuple[float, ...]
    p_objective: tuple[float, ...]
    y_over_t_grid: tuple[float, ...]
    y_over_t_objective: tuple[float, ...]
    p_c_on_edge: bool = False
    y_over_t_on_edge: bool = False

    def to_dict(self) -> dict:
        return {
            "p_c": self.p_c,
            "p_c_sigma": self.p_c_sigma,
            "y_over_t": self.y_over_t,
            "y_over_t_sigma": self.y_over_t_sigma,
            "h": self.h,
            "p_grid": list(self.p_grid),
            "p_objective": list(self.p_objective),
            "y_over_t_grid": list(self.y_over_t_grid),
            "y_over_t_objective": list(self.y_over_t_objective),
            "p_c_on_edge": self.p_c_on_edge,
            "y_over_t_on_edge": self.y_over_t_on_edge,
        }


# ── 공통 선형 fit ─────────────────────────────────────────────
def _line(u, slope, offset):
    return slope * u + offset


def _line_jac(u, slope, offset):
    return np.column_stack([u, np.ones_like(u)])


def _clean_sigma(sigma, size: int):
    if sigma is None:
        return None
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (size,) or not np.all(np.isfinite(sigma)) or np.any(sigma <= 0):
        return None
    return sigma


def _r_squared(y, fitted, weights) -> float:
    mean = np.average(y, weights=weights)
    ss_tot = float(np.sum(weights * (y - mean) ** 2))
    ss_res = float(np.sum(weights * (y - fitted) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return min(1.0, max(0.0, 1.0 - ss_res / ss_tot))


def linear_fit(u, y, sigma=None, *, kind: str, window: tuple[float, float]) -> FitResult:
    """y = slope·u + offset 가중 최소제곱. exponent = slope."""
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    if u.size < MIN_POINTS:
        raise FitError(f"{kind}: fit 창 안의 점이 {u.size}개 (최소 {MIN_POINTS})")
    if np.ptp(u) < 1e-12:
        raise FitError(f"{kind}: 가로축 값이 모두 같음")
    sigma = _clean_sigma(sigma, u.size)
    weights = np.ones_like(u) if sigma is None else 1.0 / sigma**2

    p0 = np.polyfit(u, y, 1, w=np.sqrt(weights))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, pcov = curve_fit(
            _line, u, y, p0=p0, sigma=sigma, absolute_sigma=sigma is not None, jac=_line_jac
        )
    pcov = np.where(np.isfinite(pcov), pcov, 0.0)
    fitted = _line(u, *popt)
    chi2 = float(np.sum(weights * (y - fitted) ** 2))
    return FitResult(
        kind=kind,
        exponent=float(popt[0]),
        offset=float(popt[1]),
        covariance=((float(pcov[0, 0]), float(pcov[0, 1])), (float(pcov[1, 0]), float(pcov[1, 1]))),
        r_squared=_r_squared(y, fitted, weights),
        window=(float(window[0]), float(window[1])),
        n_points=int(u.size),
        chi2=chi2,
    )


def _arrays(*cols):
    return [np.asarray(c, dtype=float) for c in cols]


def _select(mask, x, y, err):
    return x[mask], y[mask], (None if err is None else np.asarray(err, dtype=float)[mask])


def _window(x) -> tuple[float, float]:
    return (float(np.min(x)), float(np.max(x))) if len(x) else (math.nan, math.nan)


# ── 개별 fitter ───────────────────────────────────────────────
def fit_log_linear(xi, S, stderr=None, separation=None, min_separation: float = DEFAULT_MIN_SEPARATION) -> FitResult:
    """S = −h ln ξ + const. exponent = h."""
    xi, S = _arrays(xi, S)
    mask = np.isfinite(xi) & (xi > 0) & np.isfinite(S)
    if separation is not None:
        mask &= np.asarray(separation, dtype=float) >= min_separation
    xi, S, err = _select(mask, xi, S, stderr)
    if xi.size and np.ptp(np.log(xi)) < 1e-12:
        raise FitError("log_linear: ξ 값의 spread 가 없음")
    return linear_fit(-np.log(xi), S, err, kind="log_linear", window=_window(xi))


def fit_power_law(
    eta, I, stderr=None, ceiling: float = 0.1, floor: float = 0.0, two_term: bool = False
) -> FitResult:
    """η → 0: I ∝ η^a. two_term 이면 I = A η^a + B η."""
    eta, I = _arrays(eta, I)
    mask = np.isfinite(eta) & (eta > floor) & (eta < ceiling) & np.isfinite(I) & (I > 0)
    eta, I, err = _select(mask, eta, I, stderr)
    if two_term:
        return _fit_two_term(eta, I, err)
    sigma_log = None if err is None else err / I
    return linear_fit(np.log(eta), np.log(I), sigma_log, kind="power_law", window=_window(eta))


def _two_term(eta, amplitude, exponent, linear):
    return amplitude * np.power(eta, exponent) + linear * eta


def fit_two_term_power_law(eta, I, stderr=None, ceiling: float = 0.1, floor: float = 0.0) -> FitResult:
    return fit_power_law(eta, I, stderr, ceiling=ceiling, floor=floor, two_term=True)


def _fit_two_term(eta, I, err) -> FitResult:
    if eta.size < MIN_POINTS + 1:
        raise FitError(f"power_law_two_term: 점이 {eta.size}개 (최소 {MIN_POINTS + 1})")
    start = linear_fit(np.log(eta), np.log(I), None, kind="power_law", window=_window(eta))
    sigma = _clean_sigma(err, eta.size)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, pcov = curve_fit(
                _two_term,
                eta,
                I,
                p0=[math.exp(start.offset), start.exponent, 0.0],
                sigma=sigma,
                absolute_sigma=sigma is not None,
                maxfev=20000,
            )
    except RuntimeError as e:
        raise FitError(f"power_law_two_term: 수렴 실패 ({e})") from e
    pcov = np.where(np.isfinite(pcov), pcov, 0.0)
    weights = np.ones_like(eta) if sigma is None else 1.0 / sigma**2
    fitted = _two_term(eta, *popt)
    # (exponent, ln A) 공분산: d ln A = dA / A
    amp = popt[0]
    scale = np.array([[0.0, 1.0, 0.0], [1.0 / amp if amp else 0.0, 0.0, 0.0]])
    cov2 = scale @ pcov @ scale.T
    return FitResult(
        kind="power_law_two_term",
        exponent=float(popt[1]),
        offset=float(math.log(amp)) if amp > 0 else math.nan,
        covariance=((float(cov2[0, 0]), float(cov2[0, 1])), (float(cov2[1, 0]), float(cov2[1, 1]))),
        r_squared=_r_squared(I, fitted, weights),
        window=_window(eta),
        n_points=int(eta.size),
        chi2=float(np.sum(weights * (I - fitted) ** 2)),
        extra={"linear_coefficient": float(popt[2]), "amplitude": float(amp)},
    )


def fit_eta_to_one(eta, I, stderr=None, width: float = 0.1) -> FitResult:
    """η → 1: I = −k ln(1 − η) + const. exponent = k (≈ 2h)."""
    eta, I = _arrays(eta, I)
    gap = 1.0 - eta
    mask = np.isfinite(eta) & (gap > 0) & (gap < width) & np.isfinite(I)
    eta, I, err = _select(mask, eta, I, stderr)
    return linear_fit(-np.log1p(-eta), I, err, kind="eta_to_one", window=_window(eta))


def fit_bell_early(tau, S, stderr=None, L: float | None = None, h: float = DEFAULT_H, upper: float = 0.3) -> FitResult:
    """τ ≪ 1: S = h π / τ + const. 창 [hπ/L, upper]."""
    tau, S = _arrays(tau, S)
    lower = h * math.pi / L if L else 0.0
    mask = np.isfinite(tau) & (tau > 0) & (tau >= lower) & (tau <= upper) & np.isfinite(S)
    tau, S, err = _select(mask, tau, S, stderr)
    if tau.size == 0:
        raise FitError(f"bell_early: 창 [{lower:.4g}, {upper}] 이 비어 있음")
    return linear_fit(math.pi / tau, S, err, kind="bell_early", window=_window(tau))


def fit_bell_late(tau, S, stderr=None, mode: str = "open", lower: float = 1.0) -> FitResult:
    """τ > 1: ln S = −x·c·τ + const, c = π (open) / 2π (periodic). exponent = x."""
    if mode not in ("open", "periodic"):
        raise FitError(f"bell_late: mode 는 open|periodic: {mode}")
    tau, S = _arrays(tau, S)
    mask = np.isfinite(tau) & (tau > lower) & np.isfinite(S) & (S > 0)
    tau, S, err = _select(mask, tau, S, stderr)
    if tau.size == 0:
        raise FitError(f"bell_late: τ > {lower} 이고 S > 0 인 점이 없음")
    scale = math.pi if mode == "open" else 2.0 * math.pi
    raw = linear_fit(tau, np.log(S), None if err is None else err / S, kind="bell_late", window=_window(tau))
    (c00, c01), (c10, c11) = raw.covariance
    return replace(
        raw,
        exponent=-raw.exponent / scale,
        covariance=((c00 / scale**2, -c01 / scale), (-c10 / scale, c11)),
        extra={"mode": mode},
    )


def fit_refq_power(t, S, stderr=None, lower: float = 1.0, upper: float = math.inf) -> FitResult:
    """z₅₆ ≪ T ≪ L: S_Q ∝ T^(−h). ln S = −h ln T + const, exponent = h. 창 [lower, upper] 은 layer 단위."""
    t, S = _arrays(t, S)
    mask = np.isfinite(t) & (t > 0) & (t >= lower) & (t <= upper) & np.isfinite(S) & (S > 0)
    t, S, err = _select(mask, t, S, stderr)
    if t.size == 0:
        raise FitError(f"refQ_power: T ∈ [{lower:.4g}, {upper:.4g}] 이고 S > 0 인 점이 없음")
    return linear_fit(-np.log(t), np.log(S), None if err is None else err / S, kind="refQ_power", window=_window(t))


# ── lightcone 모델 비교 ──────────────────────────────────────
def _aic(rss: float, n: int, k: int) -> float:
    rss = max(rss, 1e-300)
    return n * math.log(rss / n) + 2 * k


def compare_lightcone_models(eta, I, r, t, stderr=None) -> ModelComparison:
    """
    ln I 공간에서 비교:
      power law:   ln I = a ln η + b                       (k = 2)
      exponential: ln I = ln C − (r − v t)/ξ = c0 + c1 r + c2 t   (k = 3)
    """
    eta, I, r, t = _arrays(eta, I, r, t)
    mask = np.isfinite(eta) & (eta > 0) & np.isfinite(I) & (I > 0)
    eta, I, r, t = eta[mask], I[mask], r[mask], t[mask]
    if eta.size < MIN_POINTS + 1:
        raise FitError(f"lightcone: 양의 상호정보 점이 {eta.size}개 (최소 {MIN_POINTS + 1})")
    err = None if stderr is None else np.asarray(stderr, dtype=float)[mask]
    power = linear_fit(
        np.log(eta), np.log(I), None if err is None else err / I, kind="lightcone_power", window=_window(eta)
    )
    rss_power = float(np.sum((np.log(I) - _line(np.log(eta), power.exponent, power.offset)) ** 2))

    design = np.column_stack([np.ones_like(r), r, t])
    coef, *_ = np.linalg.lstsq(design, np.log(I), rcond=None)
    rss_exp = float(np.sum((np.log(I) - design @ coef) ** 2))

    n = int(eta.size)
    aic_power = _aic(rss_power, n, 2)
    aic_exp = _aic(rss_exp, n, 3)
    return ModelComparison(
        aic_power=aic_power,
        aic_exponential=aic_exp,
        preferred="power_law" if aic_power <= aic_exp else "exponential",
        power_fit=power,
    )


# ── ObservableSeries 어댑터 ─────────────────────────────────
FIT_KINDS = ("log_linear", "power_law", "eta_to_one", "bell_early", "bell_late", "refQ_power")
_FIT_OBSERVABLES = {
    "log_linear": ("bipartite_entropy", "segment_entropy"),
    "power_law": ("mutual_information",),
    "eta_to_one": ("mutual_information",),
    "bell_early": ("bell_entropy",),
    "bell_late": ("bell_entropy", "refQ_entropy"),
    "refQ_power": ("refQ_entropy",),
}
# τ 하한을 적용하지 않는 종류 (가로축이 τ 가 아니거나 늦은 시간 전용)
_NO_MIN_TAU = ("bell_late", "refQ_power")


def series_layout(series: ObservableSeries, y_over_t: float | None = None) -> BoundaryLayout:
    meta = dict(series.metadata.get("layout") or {})
    if not meta:
        raise FitError("series metadata 에 layout 이 없음")
    if y_over_t is not None:
        meta["y_over_t"] = y_over_t
    seg = meta.get("ref_segment")
    meta["ref_segment"] = tuple(seg) if seg else None
    return BoundaryLayout(**meta)


def _probe_frames(series: ObservableSeries) -> dict[tuple[str, str], str | None]:
    schedule = series.metadata.get("schedule") or {}
    return {(p["observable"], p["segment"]): p.get("frame") for p in schedule.get("probes", [])}


def probe_separation(layout: BoundaryLayout, observable: str, segment: str, t: int) -> float:
    """collapse 점 사이 최소 거리 (격자 단위)."""
    _, points = collapse_points(layout, Probe(observable, segment))
    coords = {layout.coordinate(pt, t) for pt in points}
    coords = list(coords)
    if len(coords) < 2:
        return 0.0
    return min(abs(a - b) for i, a in enumerate(coords) for b in coords[i + 1 :])


def _series_points(series: ObservableSeries, kind: str, min_tau: float):
    observables = _FIT_OBSERVABLES[kind]
    rows = [r for r in series.records if r.observable in observables and r.count > 0]
    if kind not in _NO_MIN_TAU:
        rows = [r for r in rows if r.tau >= min_tau]
    return rows


def fit_series(series: ObservableSeries, kind: str, min_tau: float = PRECISION_TAU, **options) -> FitResult:
    """series 의 해당 관측량 행을 골라 fit. τ < min_tau 인 행은 제외."""
    if kind not in FIT_KINDS:
        raise FitError(f"알 수 없는 fit 종류: {kind} (가능: {', '.join(FIT_KINDS)})")
    return _fit_rows(series, _series_points(series, kind, min_tau), kind, **options)


def pooled_fit(series_list, kind: str, min_tau: float = PRECISION_TAU, **options) -> FitResult:
    """여러 series 의 행을 합쳐 한 번에 fit. layout 정보는 첫 series 기준."""
    if not series_list:
        raise FitError("pooled fit 대상이 없음")
    rows = [r for s in series_list for r in _series_points(s, kind, min_tau)]
    result = _fit_rows(series_list[0], rows, kind, **options)
    return replace(result, kind=f"{result.kind}_pooled")


def _fit_rows(series: ObservableSeries, rows, kind: str, **options) -> FitResult:
    y = np.array([r.mean_nats for r in rows], dtype=float)
    err = np.array([r.stderr for r in rows], dtype=float)
    if kind == "log_linear":
        layout = series_layout(series)
        sep = [probe_separation(layout, r.observable, r.segment, r.t) for r in rows]
        return fit_log_linear([r.xi for r in rows], y, err, separation=sep, **options)
    if kind == "power_law":
        return fit_power_law([r.eta for r in rows], y, err, **options)
    if kind == "eta_to_one":
        return fit_eta_to_one([r.eta for r in rows], y, err, **options)
    if kind == "refQ_power":
        # 기본 창: T ≥ |A| (z₅₆ 규모), T ≤ L/2
        layout = series_layout(series)
        a, b = layout.ref_segment or (0, 1)
        options.setdefault("lower", float(b - a))
        options.setdefault("upper", layout.L / 2)
        return fit_refq_power([r.t for r in rows], y, err, **options)
    tau = [r.tau for r in rows]
    if kind == "bell_early":
        options.setdefault("L", series_layout(series).L)
        return fit_bell_early(tau, y, err, **options)
    options.setdefault("mode", "periodic" if series_layout(series).periodic else "open")
    return fit_bell_late(tau, y, err, **options)


def collapse(series: ObservableSeries, y_over_t: float) -> ObservableSeries:
    """새 Y/T 로 τ, ξ, η 를 다시 계산 (재시뮬레이션 없음)."""
    layout = series_layout(series, y_over_t)
    frames = _probe_frames(series)
    records = []
    for r in series.records:
        probe = Probe(r.observable, r.segment, frames.get((r.observable, r.segment)))
        try:
            coord = collapse_for(layout, probe, r.t)
        except DegenerateProbeError:
            coord = CollapseCoordinate()
        records.append(replace(r, tau=layout.tau(r.t), xi=coord.xi, eta=coord.eta))
    meta = dict(series.metadata)
    meta["layout"] = layout.to_dict()
    return ObservableSeries(meta, records)


# ── 보정 ──────────────────────────────────────────────────────
def _curvature_sigma(grid, objective, best: int, tolerance: float) -> float:
    """최적점 주변 3점 포물선 a(x−x0)² 에서 objective 가 tolerance 만큼 변하는 반폭."""
    grid = np.asarray(grid, dtype=float)
    step = float(np.min(np.diff(grid))) if grid.size > 1 else 0.0
    if best == 0 or best == grid.size - 1:
        return step
    window = slice(best - 1, best + 2)
    a = np.polyfit(grid[window], np.asarray(objective, dtype=float)[window], 2)[0]
    if a == 0 or tolerance <= 0:
        return step
    return float(math.sqrt(tolerance / abs(a)))


def calibrate_p_c(points_by_p: dict, min_separation: float = DEFAULT_MIN_SEPARATION):
    """
    points_by_p: p → (ξ, S, stderr[, separation]). r² 최대인 p 를 고른다.
    Returns: (p_c, sigma, fit at p_c, grid, r² 목록, edge 여부)
    """
    if not points_by_p:
        raise FitError("p 격자가 비어 있음")
    grid = sorted(points_by_p)
    fits = []
    for p in grid:
        xi, S, err, *rest = points_by_p[p]
        fits.append(fit_log_linear(xi, S, err, separation=rest[0] if rest else None, min_separation=min_separation))
    objective = [f.r_squared for f in fits]
    best = int(np.argmax(objective))
    sigma = _curvature_sigma(grid, objective, best, tolerance=max(1.0 - objective[best], 1e-12))
    edge = best in (0, len(grid) - 1)
    if edge:
        logger.warning("⚠️ p_c 최적점이 격자 경계에 있음: %s", grid[best])
    return grid[best], sigma, fits[best], grid, objective, edge


def calibrate_y_over_t(t, S, stderr, L: float, h: float, grid, upper: float = 0.3):
    """
    h 를 고정하고 S = hπ/τ + c, τ = (Y/T)·t/L 의 reduced χ² 최소인 Y/T 를 고른다.
    Returns: (Y/T, sigma, grid, reduced χ² 목록, edge 여부)
    """
    t = np.asarray(t, dtype=float)
    S = np.asarray(S, dtype=float)
    err = _clean_sigma(stderr, t.size)
    weights = np.ones_like(t) if err is None else 1.0 / err**2
    grid = sorted(float(g) for g in grid)
    if not grid:
        raise FitError("Y/T 격자가 비어 있음")

    objective = []
    chi2_total = []
    for s in grid:
        tau = s * t / L
        mask = (tau > 0) & (tau >= h * math.pi / L) & (tau <= upper) & np.isfinite(S)
        if mask.sum() < MIN_POINTS:
            objective.append(math.inf)
            chi2_total.append(math.inf)
            continue
        model = h * math.pi / tau[mask]
        w = weights[mask]
        offset = float(np.average(S[mask] - model, weights=w))
        chi2 = float(np.sum(w * (S[mask] - model - offset) ** 2))
        objective.append(chi2 / max(int(mask.sum()) - 1, 1))
        chi2_total.append(chi2)
    if not np.isfinite(objective).any():
        raise FitError("Y/T 격자 어디에서도 fit 창이 채워지지 않음")
    best = int(np.argmin(objective))
    # 포물선 3점 중 창이 빈 점이 있으면 격자 간격으로 대신한다
    neighbours = chi2_total[max(best - 1, 0) : best + 2]
    if all(math.isfinite(c) for c in neighbours):
        sigma = _curvature_sigma(grid, chi2_total, best, 1.0)
    else:
        sigma = float(np.min(np.diff(grid))) if len(grid) > 1 else 0.0
    edge = best in (0, len(grid) - 1)
    if edge:
        logger.warning("⚠️ Y/T 최적점이 격자 경계에 있음: %s", grid[best])
    return grid[best], sigma, grid, objective, edge


def calibrate_p_series(p_series: dict):
    """p → 정상상태 series 를 calibrate_p_c 입력으로 바꿔 p_c 를 고른다."""
    points_by_p = {}
    for p, series in p_series.items():
        rows = _series_points(series, "log_linear", 0.0)
        layout = series_layout(series)
        points_by_p[float(p)] = (
            [r.xi for r in rows],
            [r.mean_nats for r in rows],
            [r.stderr for r in rows],
            [probe_separation(layout, r.observable, r.segment, r.t) for r in rows],
        )
    return calibrate_p_c(points_by_p)


def calibrate(p_series: dict, bell_series: ObservableSeries, y_over_t_grid, p_axis=None) -> CalibrationResult:
    """
    1) p 격자 위 pbc 정상상태 2점 데이터 → r² 최대 p_c, 기울기 h
    2) p_c 에서의 pbc Bell 초기 시간 데이터 → h 고정, reduced χ² 최소 Y/T
    p_axis: 이미 계산한 calibrate_p_series 결과 (Bell 앙상블을 p_c 에서 돌리기 위해 먼저 구한 경우)
    """
    p_c, p_sigma, best_fit, p_grid, p_obj, p_edge = p_axis or calibrate_p_series(p_series)

    rows = [r for r in bell_series.records if r.observable == "bell_entropy" and r.t > 0]
    L = series_layout(bell_series).L
    y_over_t, yt_sigma, yt_grid, yt_obj, yt_edge = calibrate_y_over_t(
        [r.t for r in rows],
        [r.mean_nats for r in rows],
        [r.stderr for r in rows],
        L=L,
        h=best_fit.exponent,
        grid=y_over_t_grid,
    )
    return CalibrationResult(
        p_c=p_c,
        p_c_sigma=p_sigma,
        y_over_t=y_over_t,
        y_over_t_sigma=yt_sigma,
        h=best_fit.exponent,
        p_grid=tuple(p_grid),
        p_objective=tuple(p_obj),
        y_over_t_grid=tuple(yt_grid),
        y_over_t_objective=tuple(yt_obj),
        p_c_on_edge=p_edge,
        y_over_t_on_edge=yt_edge,
    )
