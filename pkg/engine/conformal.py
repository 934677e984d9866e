"""
conformal.py
역할: 타원 특수함수와, 회로 좌표 (x, t) 를 반평면 좌표로 보내는 등각사상.

좌표계:
  - 직사각형 z = x + i·y,  x ∈ [−L/2, L/2],  y ∈ [0, Y],  Y = (Y/T)·t.
  - 꼭짓점: z1 = −L/2 + iY (좌상), z2 = −L/2 (좌하), z3 = +L/2 (우하), z4 = +L/2 + iY (우상).
  - w(z) = sn(λ(z − iY) | m),  λ = 2K(m)/L = K(1−m)/Y,  τ = Y/L = K(1−m) / 2K(m).

경계점 이미지는 사영 좌표 (num, den) 와 Jacobian |J| = |dw/dz|·den² 으로도 보관한다.
아래 변 중점은 w = ∞ 로 가지만, 비율(ξ, η)에서는 den 이 약분되어 유한하게 계산된다.

m → 1 (τ → 0) 근처 정밀도를 위해 모든 함수는 보수 파라미터 mc = 1 − m 을 직접 받는다.
"""

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from engine.errors import DegenerateProbeError, DomainError, PrecisionWarning

# τ 가 이보다 작으면 1 − m 이 부동소수 한계(~1e-16)에 가까워짐
PRECISION_TAU = 0.03

_AGM_TOL = 1e-16
_MAX_LANDEN = 60


# ── AGM / 완전 타원적분 ─────────────────────────────────────────
def agm(a: float, b: float) -> float:
    """산술-기하 평균."""
    for _ in range(_MAX_LANDEN):
        if abs(a - b) <= _AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return a


def ellint_K(m: float, mc: float | None = None) -> float:
    """
    제1종 완전 타원적분 K(m) = π / (2·AGM(1, √(1−m))).
    mc 를 주면 1 − m 대신 그대로 사용 (m → 1 정밀도 보존).
    """
    if mc is None:
        if m < 0 or m >= 1:
            raise DomainError(f"K(m): 0 ≤ m < 1 이어야 함: {m}")
        mc = 1.0 - m
    if mc <= 0 or mc > 1:
        raise DomainError(f"K(m): 보수 파라미터 mc ∈ (0, 1] 이어야 함: {mc}")
    return math.pi / (2.0 * agm(1.0, math.sqrt(mc)))


def ellint_K_complement(m: float) -> float:
    """K(1 − m). m 을 그대로 보수 파라미터로 사용."""
    if m <= 0 or m > 1:
        raise DomainError(f"K(1−m): 0 < m ≤ 1 이어야 함: {m}")
    return math.pi / (2.0 * agm(1.0, math.sqrt(m)))


# ── Jacobi 타원함수 (descending Landen) ─────────────────────────
def jacobi_sn_cn_dn(u, m: float, mc: float | None = None):
    """
    sn, cn, dn (u | m): AGM 수열로 진폭 φ 를 구한 뒤 역방향 Landen 점화.
    u 는 스칼라 또는 numpy 배열.
    """
    if mc is None:
        if m < 0 or m >= 1:
            raise DomainError(f"sn(u|m): 0 ≤ m < 1 이어야 함: {m}")
        mc = 1.0 - m
    u = np.asarray(u, dtype=float)

    a_seq = [1.0]
    c_seq = [math.sqrt(max(m, 0.0))]
    a, b = 1.0, math.sqrt(mc)
    while abs(c_seq[-1]) > _AGM_TOL and len(a_seq) < _MAX_LANDEN:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)

    N = len(a_seq) - 1
    if N == 0:
        sn, cn = np.sin(u), np.cos(u)
        return sn, cn, np.ones_like(u)

    phi = (2.0**N) * a_seq[N] * u
    for k in range(N, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c_seq[k] / a_seq[k] * np.sin(phi), -1.0, 1.0)))
    sn, cn = np.sin(phi), np.cos(phi)
    # dn² = 1 − m·sn² = mc + m·cn²: cn ≈ 0 (u ≈ ±K) 에서도 mc 정밀도를 그대로 유지
    dn = np.sqrt(mc + m * cn * cn)
    return sn, cn, dn


def jacobi_sn(u, m: float, mc: float | None = None):
    return jacobi_sn_cn_dn(u, m, mc)[0]


# ── m(τ) 풀이 ─────────────────────────────────────────────────
def tau_of(m: float, mc: float) -> float:
    """τ(m) = K(1−m) / 2K(m) = AGM(1, √mc) / (2·AGM(1, √m))."""
    return agm(1.0, math.sqrt(mc)) / (2.0 * agm(1.0, math.sqrt(m)))


def _bracket_root(f, seed: float, upper: float) -> tuple[float, float]:
    """log 공간에서 seed 주변으로 부호가 바뀌는 구간을 찾는다."""
    lo = max(seed - 8.0, -700.0)
    while f(lo) > 0:
        if lo <= -700.0:
            raise DomainError("τ 가 너무 작아 파라미터가 부동소수 범위를 벗어남")
        lo = max(lo - 16.0, -700.0)
    return lo, upper


def solve_parameters(tau: float) -> tuple[float, float]:
    """τ → (m, 1 − m). τ ≤ 1/2 는 log(1−m), 그 외는 log(m) 에 대해 brentq."""
    if not tau > 0:
        raise DomainError(f"τ > 0 이어야 함: {tau}")
    if tau < PRECISION_TAU:
        warnings.warn(
            f"τ={tau:.4g} < {PRECISION_TAU}: 1−m 이 정밀도 한계에 가까움",
            PrecisionWarning,
            stacklevel=2,
        )
    if tau == 0.5:
        return 0.5, 0.5

    half = math.log(0.5)
    if tau < 0.5:
        # τ(mc): mc 증가 함수, 점근 1 − m ≈ 16·exp(−π/2τ)
        def f(s):
            mc = math.exp(s)
            return tau_of(1.0 - mc, mc) - tau

        seed = math.log(16.0) - math.pi / (2.0 * tau)
        lo, hi = _bracket_root(f, min(seed, half), half)
        s = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
        mc = math.exp(s)
        return 1.0 - mc, mc

    # τ(m): m 감소 함수, 점근 m ≈ 16·exp(−2πτ)
    def g(s):
        m = math.exp(s)
        return tau - tau_of(m, 1.0 - m)

    seed = math.log(16.0) - 2.0 * math.pi * tau
    lo, hi = _bracket_root(g, min(seed, half), half)
    s = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    m = math.exp(s)
    return m, 1.0 - m


def solve_m(tau: float) -> float:
    return solve_parameters(tau)[0]


# ── 경계점 이미지 ──────────────────────────────────────────────
@dataclass(frozen=True)
class BoundaryPointImage:
    """
    w: 반평면 실수 좌표 (∞ 가능), dw_dz: |dw/dz|.
    num/den: w = num/den 사영 좌표, jac = |dw/dz|·den².
    """

    w: float
    dw_dz: float
    num: float
    den: float
    jac: float

    @classmethod
    def from_projective(cls, num: float, den: float, jac: float) -> "BoundaryPointImage":
        jac = abs(jac)
        if den == 0:
            return cls(math.copysign(math.inf, num), math.inf, num, den, jac)
        return cls(num / den, jac / (den * den), num, den, jac)


@dataclass(frozen=True)
class ConformalFrame:
    """직사각형 L × Y 에 대한 타원 파라미터 묶음."""

    L: float
    Y: float
    tau: float
    m: float
    mc: float
    lam: float
    K_m: float
    K_1m: float

    @classmethod
    def for_rectangle(cls, L: float, Y: float) -> "ConformalFrame":
        if L <= 0 or Y <= 0:
            raise DomainError(f"직사각형 크기는 양수여야 함: L={L}, Y={Y}")
        tau = Y / L
        m, mc = solve_parameters(tau)
        K_m = ellint_K(m, mc)
        K_1m = ellint_K_complement(m)
        return cls(L=L, Y=Y, tau=tau, m=m, mc=mc, lam=2.0 * K_m / L, K_m=K_m, K_1m=K_1m)

    def image(self, z: complex) -> BoundaryPointImage:
        return rect_to_lhp(z, self)

    def corners(self) -> tuple[complex, complex, complex, complex]:
        h = self.L / 2
        return complex(-h, self.Y), complex(-h, 0.0), complex(h, 0.0), complex(h, self.Y)


def rect_to_lhp(z: complex, frame: ConformalFrame) -> BoundaryPointImage:
    """직사각형 경계점 z → 실축 위 w. 각 변마다 실수 분기를 사용."""
    z = complex(z)
    x, y = z.real, z.imag
    half = frame.L / 2
    eps = 1e-9 * max(frame.L, frame.Y)
    lam, m, mc = frame.lam, frame.m, frame.mc

    if abs(x) > half + eps or y < -eps or y > frame.Y + eps:
        raise DomainError(f"z={z} 는 직사각형 밖")

    if abs(y - frame.Y) <= eps:
        # 윗변: w = sn(λx | m)
        sn, cn, dn = jacobi_sn_cn_dn(lam * x, m, mc)
        return BoundaryPointImage.from_projective(float(sn), 1.0, float(lam * cn * dn))
    if abs(y) <= eps:
        # 아랫변: sn(u − iK') = 1 / (√m · sn(u))
        sn, cn, dn = jacobi_sn_cn_dn(lam * x, m, mc)
        sqm = math.sqrt(m)
        return BoundaryPointImage.from_projective(1.0, float(sqm * sn), float(sqm * lam * cn * dn))
    if abs(abs(x) - half) <= eps:
        # 옆변: sn(±K − iv) = ±nd(v | 1−m),  v = λ(Y − y) ∈ [0, K']
        v = lam * (frame.Y - y)
        sn, cn, dn = jacobi_sn_cn_dn(v, mc, m)
        sign = -1.0 if x < 0 else 1.0
        return BoundaryPointImage.from_projective(sign, float(dn), float(lam * mc * sn * cn))
    raise DomainError(f"z={z} 는 경계 위의 점이 아님")


# ── strip / cylinder ──────────────────────────────────────────
def strip_map(z: complex, Y: float) -> BoundaryPointImage:
    """w = −exp(πz/Y). 윗변 → 양의 실축, 아랫변 → 음의 실축."""
    z = complex(z)
    if Y <= 0 or z.imag < -1e-12 or z.imag > Y + 1e-12:
        raise DomainError(f"z={z} 는 띠 0 ≤ Im z ≤ {Y} 밖")
    w = -np.exp(np.pi * z / Y)
    deriv = abs(np.pi / Y * w)
    return BoundaryPointImage.from_projective(float(w.real), 1.0, float(deriv))


def cylinder_map(z: complex, L: float) -> BoundaryPointImage:
    """w = tan(πz/L). 사영 좌표 (sin, cos), Jacobian = π/L."""
    theta = math.pi * complex(z).real / L
    return BoundaryPointImage.from_projective(math.sin(theta), math.cos(theta), math.pi / L)


@dataclass(frozen=True)
class StripFrame:
    Y: float

    def image(self, z: complex) -> BoundaryPointImage:
        return strip_map(z, self.Y)


@dataclass(frozen=True)
class CylinderFrame:
    L: float

    def image(self, z: complex) -> BoundaryPointImage:
        return cylinder_map(z, self.L)


# ── collapse 좌표 ─────────────────────────────────────────────
class CollapseCoordinate(NamedTuple):
    xi: float = math.nan
    eta: float = math.nan


def _delta(p: BoundaryPointImage, q: BoundaryPointImage) -> float:
    """w_q − w_p 의 사영 분자."""
    return q.num * p.den - p.num * q.den


def _check_distinct(points) -> None:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if abs(complex(points[i]) - complex(points[j])) < 1e-12:
                raise DegenerateProbeError(f"일치하는 collapse 점: {points[i]}")


def three_point_xi(a: BoundaryPointImage, b: BoundaryPointImage, p: BoundaryPointImage) -> float:
    """ξ = |dw/dz|_p · w_ab / (w_ap · w_pb)."""
    denom = _delta(a, p) * _delta(p, b)
    if denom == 0:
        raise DegenerateProbeError("3점 collapse 에서 점이 겹침")
    return abs(p.jac * _delta(a, b) / denom)


def two_point_xi(p: BoundaryPointImage, q: BoundaryPointImage) -> float:
    """ξ₂ = |dw/dz|_p |dw/dz|_q / w_pq²."""
    d = _delta(p, q)
    if d == 0:
        raise DegenerateProbeError("2점 collapse 에서 점이 겹침")
    return abs(p.jac * q.jac) / (d * d)


def cross_ratio(a, b, c, d) -> float:
    """η = w_ab · w_cd / (w_ac · w_bd)."""
    denom = _delta(a, c) * _delta(b, d)
    if denom == 0:
        raise DegenerateProbeError("cross ratio 분모가 0")
    return abs(_delta(a, b) * _delta(c, d) / denom)


def collapse_coordinates(kind: str, points, frame) -> CollapseCoordinate:
    """
    kind:
      three_point: points = (모서리 a, 모서리 b, z5)
      two_point  : points = (z5, z6)
      four_point : points = (a, b, c, d),  η = w_ab w_cd / (w_ac w_bd)
    frame: ConformalFrame | StripFrame | CylinderFrame
    """
    _check_distinct(points)
    images = [frame.image(p) for p in points]
    if kind == "three_point":
        return CollapseCoordinate(xi=three_point_xi(*images))
    if kind == "two_point":
        return CollapseCoordinate(xi=two_point_xi(*images))
    if kind == "four_point":
        return CollapseCoordinate(eta=cross_ratio(*images))
    raise DomainError(f"알 수 없는 collapse 종류: {kind}")
