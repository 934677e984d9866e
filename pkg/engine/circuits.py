"""
circuits.py
역할: 경계 조건별 하이브리드 Clifford 회로 실행과 (시간, 경계 호) 프로브 측정.

경계 좌표:
  - 점은 "edge:offset" 문자열 (예: top:0, left:3, bottom:16).
    top/bottom offset 은 cut 위치 0..L, left/right offset 은 아래에서부터 센 주기(2 layer) 수.
  - 경계 ring 순서: left(아래→위) → top(왼→오) → right(위→아래) → bottom(오→왼).
    모든 큐비트가 ring 위 정확히 한 자리에 있으므로 어떤 호든 ring 상의 연속 구간이다.
  - 모서리: z1 = top:0, z2 = bottom:0, z3 = bottom:L, z4 = top:L.

실행 흐름 (layer t = 1..T):
  주입(afaa/aaaa 홀수 layer) → brickwork 2큐비트 Clifford → 사이트별 확률 p 의 Z 측정
  → 방출(afaa/aaaa 짝수 layer) → 해당 시간의 프로브 평가
"""

import json
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from engine.conformal import (
    CollapseCoordinate,
    ConformalFrame,
    CylinderFrame,
    StripFrame,
    collapse_coordinates,
)
from engine.entropy import clip_gauge, entropy_subset
from engine.errors import DegenerateProbeError, GeometryError, ScheduleError
from engine.stabilizer import (
    CliffordGate,
    StabilizerTableau,
    clifford_from_index,
    new_bell_pairs,
    new_product_state,
)

logger = logging.getLogger(__name__)

KINDS = ("fffa", "afaa", "fafa", "aaaa", "pbc_product", "pbc_bell", "reference_qubits")
PERIODIC_KINDS = frozenset({"pbc_product", "pbc_bell"})
INJECTING_KINDS = frozenset({"afaa", "aaaa"})
ENVIRONMENT_KINDS = frozenset({"fafa", "aaaa", "pbc_bell"})

OBSERVABLES = (
    "bipartite_entropy",
    "segment_entropy",
    "mutual_information",
    "bell_entropy",
    "refQ_entropy",
)
EDGES = ("left", "top", "right", "bottom")
FRAMES = ("rect", "strip", "cylinder")

DEFAULT_Y_OVER_T = 0.61
N_SYMPLECTIC = 720
N_SIGNS = 16


# ── 레이아웃 ──────────────────────────────────────────────────
@dataclass(frozen=True)
class BoundaryLayout:
    """
    회로 한 종류의 기하 설정.

    kind: fffa | afaa | fafa | aaaa | pbc_product | pbc_bell | reference_qubits
    L: 체인 길이, T: unitary layer 수, p: layer 당 사이트별 측정 확률
    y_over_t: 분석용 비등방 상수 (시뮬레이션에는 영향 없음)
    ref_segment: reference_qubits 전용 반열린 구간 [a, b)
    """

    kind: str
    L: int
    T: int
    p: float
    y_over_t: float = DEFAULT_Y_OVER_T
    ref_segment: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"알 수 없는 layout: {self.kind} (가능: {', '.join(KINDS)})")
        if self.L < 2:
            raise GeometryError(f"L ≥ 2 이어야 함: {self.L}")
        if self.T < 0:
            raise GeometryError(f"T ≥ 0 이어야 함: {self.T}")
        if not 0.0 <= self.p <= 1.0:
            raise GeometryError(f"p 는 [0, 1] 범위: {self.p}")
        if not self.y_over_t > 0:
            raise GeometryError(f"y_over_t 는 양수: {self.y_over_t}")
        if self.kind in INJECTING_KINDS:
            if self.L < 4 or self.L % 2:
                raise GeometryError(f"{self.kind} 는 짝수 L ≥ 4 필요: {self.L}")
            if self.T % 2:
                raise GeometryError(f"{self.kind} 는 짝수 T 필요 (주기 = 2 layer): {self.T}")
        if self.kind in PERIODIC_KINDS and self.L % 2:
            raise GeometryError(f"주기 경계는 짝수 L 필요: {self.L}")

        if self.kind == "reference_qubits":
            seg = self.ref_segment if self.ref_segment is not None else default_ref_segment(self.L)
            a, b = int(seg[0]), int(seg[1])
            if not 0 <= a < b <= self.L:
                raise GeometryError(f"ref_segment 는 0 ≤ a < b ≤ L: ({a}, {b})")
            object.__setattr__(self, "ref_segment", (a, b))
        elif self.ref_segment is not None:
            raise GeometryError("ref_segment 는 reference_qubits 전용")

    @property
    def periodic(self) -> bool:
        return self.kind in PERIODIC_KINDS

    @property
    def injects(self) -> bool:
        return self.kind in INJECTING_KINDS

    @property
    def default_frame(self) -> str:
        return "cylinder" if self.periodic else "rect"

    def qubit_count(self, t: int | None = None) -> int:
        """시간 t 직후의 tableau 크기 (방출된 큐비트 포함)."""
        t = self.T if t is None else t
        L = self.L
        if self.kind in ("fffa", "pbc_product"):
            return L
        if self.kind in ("fafa", "pbc_bell"):
            return 2 * L
        if self.kind == "reference_qubits":
            a, b = self.ref_segment
            return L + (b - a)
        injected = t + (t % 2)
        bulk = L - 2 if self.kind == "afaa" else 2 * (L - 2)
        return bulk + injected

    def tau(self, t: int) -> float:
        return self.y_over_t * t / self.L

    def coordinate(self, point: "Point", t: int) -> complex:
        """경계점 → 직사각형 좌표 x + i·(Y/T)·y."""
        half = self.L / 2
        s = self.y_over_t
        if point.edge == "top":
            return complex(point.offset - half, s * t)
        if point.edge == "bottom":
            return complex(point.offset - half, 0.0)
        x = -half if point.edge == "left" else half
        return complex(x, s * 2 * point.offset)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "L": self.L,
            "T": self.T,
            "p": self.p,
            "y_over_t": self.y_over_t,
            "ref_segment": list(self.ref_segment) if self.ref_segment else None,
        }


def default_ref_segment(L: int) -> tuple[int, int]:
    """체인 가운데 4 큐비트 (L < 4 이면 전체)."""
    if L < 4:
        return 0, L
    a = L // 2 - 2
    return a, a + 4


# ── 프로브 ────────────────────────────────────────────────────
@dataclass(frozen=True, order=True)
class Point:
    edge: str
    offset: int

    @classmethod
    def parse(cls, text: str) -> "Point":
        edge, sep, offset = text.strip().partition(":")
        if not sep or edge not in EDGES or not offset.isdigit():
            raise ScheduleError(f"경계점 형식 오류: {text!r} (예: top:3)")
        return cls(edge, int(offset))

    def __str__(self):
        return f"{self.edge}:{self.offset}"


@dataclass(frozen=True)
class Arc:
    """start 에서 stop 까지 ring 정방향으로 도는 경계 호."""

    start: Point
    stop: Point

    @classmethod
    def parse(cls, text: str) -> "Arc":
        left, sep, right = text.partition("-")
        if not sep:
            raise ScheduleError(f"구간 형식 오류: {text!r} (예: top:0-top:8)")
        return cls(Point.parse(left), Point.parse(right))

    def __str__(self):
        return f"{self.start}-{self.stop}"


@dataclass(frozen=True)
class Probe:
    observable: str
    segment: str
    frame: str | None = None

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(Arc.parse(part) for part in self.segment.split("|"))

    def to_dict(self) -> dict:
        out = {"observable": self.observable, "segment": self.segment}
        if self.frame:
            out["frame"] = self.frame
        return out


@dataclass(frozen=True)
class ProbeSchedule:
    """times × probes 격자. 키 순서 = 시간 오름차순, 같은 시간 안에서는 probes 순서."""

    times: tuple[int, ...]
    probes: tuple[Probe, ...]
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(sorted({int(t) for t in self.times})))
        object.__setattr__(self, "probes", tuple(self.probes))

    def __len__(self):
        return len(self.times) * len(self.probes)

    def keys(self) -> list[tuple[int, Probe]]:
        return [(t, probe) for t in self.times for probe in self.probes]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "times": list(self.times),
            "probes": [probe.to_dict() for probe in self.probes],
        }

    @classmethod
    def from_dict(cls, data: dict, T: int | None = None, even: bool = False) -> "ProbeSchedule":
        try:
            times = data["times"]
            probes = tuple(
                Probe(item["observable"], item["segment"], item.get("frame")) for item in data["probes"]
            )
        except (KeyError, TypeError) as e:
            raise ScheduleError(f"schedule 필드 누락/형식 오류: {e}") from e
        if isinstance(times, str):
            if T is None:
                raise ScheduleError(f"시간 격자 {times!r} 를 풀려면 T 가 필요")
            times = named_time_grid(times, T, even=even)
        return cls(tuple(times), probes, data.get("name", "custom"))


# ── 시간 격자 ─────────────────────────────────────────────────
def period_grid(T: int) -> tuple[int, ...]:
    return tuple(range(0, T + 1, 2))


def log_grid(T: int, points: int = 24, even: bool = False) -> tuple[int, ...]:
    if T < 1:
        return (0,)
    values = np.unique(np.round(np.geomspace(1, T, points)).astype(np.int64))
    if even:
        values = np.unique(np.minimum(2 * np.ceil(values / 2), T - T % 2).astype(np.int64))
    return tuple(int(v) for v in values)


def named_time_grid(name: str, T: int, even: bool = False) -> tuple[int, ...]:
    grids = {
        "final": lambda: (T,),
        "period": lambda: period_grid(T),
        "log": lambda: log_grid(T, even=even),
        "period+log": lambda: tuple(sorted(set(period_grid(T)) | set(log_grid(T, even=even)))),
        "all": lambda: tuple(range(T + 1)),
    }
    if name not in grids:
        raise ScheduleError(f"알 수 없는 시간 격자: {name!r} (가능: {', '.join(grids)})")
    return grids[name]()


# ── 경계 ring ────────────────────────────────────────────────
class BoundaryRing:
    """ring 위 cut 위치 계산. 실제 상태 또는 (layout, t) 로부터 기대 구조를 만든다."""

    def __init__(self, n_left: int, top: np.ndarray, n_right: int, bottom: np.ndarray):
        self.n_left = n_left
        self.n_right = n_right
        self.top_prefix = np.concatenate([[0], np.cumsum(top, dtype=np.int64)])
        self.bottom_suffix = np.concatenate([np.cumsum(bottom[::-1], dtype=np.int64)[::-1], [0]])
        self.n_top = int(self.top_prefix[-1])
        self.n_bottom = int(self.bottom_suffix[0])

    @property
    def n(self) -> int:
        return self.n_left + self.n_top + self.n_right + self.n_bottom

    @classmethod
    def expected(cls, layout: BoundaryLayout, t: int) -> "BoundaryRing":
        L = layout.L
        top = np.ones(L, dtype=bool)
        bottom = np.zeros(L, dtype=bool)
        sides = 0
        if layout.injects:
            sides = t // 2
            if t % 2 == 0:
                top[[0, L - 1]] = False
        if layout.kind in ("fafa", "pbc_bell"):
            bottom[:] = True
        elif layout.kind == "aaaa":
            bottom[1 : L - 1] = True
        elif layout.kind == "reference_qubits":
            a, b = layout.ref_segment
            bottom[a:b] = True
        return cls(sides, top, sides, bottom)

    def cut(self, point: Point) -> int:
        o = point.offset
        if point.edge == "left":
            return min(o, self.n_left)
        if point.edge == "top":
            return self.n_left + int(self.top_prefix[o])
        if point.edge == "right":
            return self.n_left + self.n_top + self.n_right - min(o, self.n_right)
        return self.n_left + self.n_top + self.n_right + int(self.bottom_suffix[o])

    def span(self, arc: Arc) -> tuple[int, int]:
        return self.cut(arc.start), self.cut(arc.stop)

    def positions(self, arc: Arc) -> np.ndarray:
        start, stop = self.span(arc)
        if start <= stop:
            return np.arange(start, stop)
        return np.concatenate([np.arange(start, self.n), np.arange(0, stop)])


# ── 스케줄 검증 ──────────────────────────────────────────────
def _arc_count(observable: str) -> int:
    return 2 if observable == "mutual_information" else 1


def _check_point(layout: BoundaryLayout, point: Point, t: int) -> None:
    if point.edge in ("top", "bottom"):
        if point.offset > layout.L:
            raise ScheduleError(f"{point}: offset 은 0..{layout.L}")
        return
    if layout.periodic:
        raise ScheduleError(f"{point}: 주기 경계에는 옆변이 없음")
    if 2 * point.offset > t:
        raise ScheduleError(f"{point}: t={t} 에는 아직 존재하지 않는 옆변 좌표")


def collapse_points(layout: BoundaryLayout, probe: Probe) -> tuple[str | None, tuple[Point, ...]]:
    """프로브별 collapse 종류와 사용할 경계점."""
    L = layout.L
    z1, z2, z3, z4 = Point("top", 0), Point("bottom", 0), Point("bottom", L), Point("top", L)
    arcs = probe.arcs
    obs = probe.observable
    if obs == "bipartite_entropy":
        corners = (z2, z3) if layout.injects else (z1, z4)
        return "three_point", (*corners, arcs[0].stop)
    if obs == "segment_entropy":
        return "two_point", (arcs[0].start, arcs[0].stop)
    if obs == "mutual_information":
        a, b = arcs
        return "four_point", (a.start, a.stop, b.start, b.stop)
    if obs == "bell_entropy":
        if (probe.frame or layout.default_frame) != "rect":
            return None, ()
        return "four_point", (z1, z2, z3, z4)
    arc = arcs[0]
    return "four_point", (z1, arc.stop, arc.start, z4)


@lru_cache(maxsize=256)
def _validated(layout: BoundaryLayout, schedule: ProbeSchedule) -> bool:
    if not schedule.times or not schedule.probes:
        raise ScheduleError("times 와 probes 는 비어 있을 수 없음")
    for t in schedule.times:
        if not 0 <= t <= layout.T:
            raise ScheduleError(f"프로브 시간 {t} 가 [0, {layout.T}] 밖")
        if layout.injects and t % 2:
            raise ScheduleError(f"{layout.kind} 는 주기 경계(짝수 시간)에서만 프로브 가능: t={t}")

    rings = {t: BoundaryRing.expected(layout, t) for t in schedule.times}
    last = schedule.times[-1]
    for i, probe in enumerate(schedule.probes):
        where = f"probe #{i} ({probe.observable} {probe.segment})"
        if probe.observable not in OBSERVABLES:
            raise ScheduleError(f"{where}: 알 수 없는 관측량")
        if probe.frame is not None and probe.frame not in FRAMES:
            raise ScheduleError(f"{where}: 알 수 없는 frame {probe.frame!r}")
        arcs = probe.arcs
        if len(arcs) != _arc_count(probe.observable):
            raise ScheduleError(f"{where}: 구간 수 {len(arcs)} ≠ {_arc_count(probe.observable)}")
        if probe.observable == "bell_entropy" and layout.kind not in ENVIRONMENT_KINDS:
            raise ScheduleError(f"{where}: {layout.kind} 에는 환경 큐비트가 없음")
        if probe.observable == "refQ_entropy" and layout.kind != "reference_qubits":
            raise ScheduleError(f"{where}: reference_qubits 전용")
        if probe.frame == "cylinder" and not layout.periodic:
            raise ScheduleError(f"{where}: cylinder frame 은 주기 경계 전용")

        kind, points = collapse_points(layout, probe)
        for t in schedule.times:
            try:
                for arc in arcs:
                    _check_point(layout, arc.start, t)
                    _check_point(layout, arc.stop, t)
                    if arc.start == arc.stop:
                        raise ScheduleError(f"빈 구간 {arc}")
                for point in points:
                    _check_point(layout, point, t)
            except ScheduleError as e:
                raise ScheduleError(f"{where} @ t={t}: {e}") from None
            if len(arcs) == 2:
                ring = rings[t]
                overlap = np.intersect1d(ring.positions(arcs[0]), ring.positions(arcs[1]))
                if overlap.size:
                    raise ScheduleError(f"{where} @ t={t}: 두 구간이 겹침")
            if t > 0 and kind is not None:
                coords = [layout.coordinate(pt, t) for pt in points]
                if len({(round(z.real, 9), round(z.imag, 9)) for z in coords}) != len(coords):
                    raise ScheduleError(f"{where} @ t={t}: collapse 점이 겹침")

        if last > 0 and kind is not None:
            try:
                collapse_for(layout, probe, last)
            except DegenerateProbeError as e:
                raise ScheduleError(f"{where}: {e}") from None
    return True


def validate_schedule(layout: BoundaryLayout, schedule: ProbeSchedule) -> None:
    """실패 시 probe 번호를 포함한 ScheduleError."""
    _validated(layout, schedule)


# ── collapse 좌표 ─────────────────────────────────────────────
@lru_cache(maxsize=4096)
def _rect_frame(L: float, Y: float) -> ConformalFrame:
    return ConformalFrame.for_rectangle(L, Y)


def frame_for(layout: BoundaryLayout, name: str | None, t: int):
    name = name or layout.default_frame
    Y = layout.y_over_t * t
    if name == "cylinder":
        return CylinderFrame(float(layout.L))
    if name == "strip":
        return StripFrame(Y)
    return _rect_frame(float(layout.L), Y)


def collapse_for(layout: BoundaryLayout, probe: Probe, t: int) -> CollapseCoordinate:
    """(t, probe) 의 collapse 좌표. 깊이 0 의 직사각형/띠는 정의되지 않으므로 NaN."""
    kind, points = collapse_points(layout, probe)
    name = probe.frame or layout.default_frame
    if kind is None or (t == 0 and name != "cylinder"):
        return CollapseCoordinate()
    frame = frame_for(layout, name, t)
    return collapse_coordinates(kind, [layout.coordinate(pt, t) for pt in points], frame)


@dataclass(frozen=True)
class RecordKey:
    """ObservableSeries 한 행의 좌표 부분."""

    t: int
    tau: float
    observable: str
    segment: str
    xi: float = math.nan
    eta: float = math.nan


def record_keys(layout: BoundaryLayout, schedule: ProbeSchedule) -> list[RecordKey]:
    validate_schedule(layout, schedule)
    keys = []
    for t, probe in schedule.keys():
        coord = collapse_for(layout, probe, t)
        keys.append(RecordKey(t, layout.tau(t), probe.observable, probe.segment, coord.xi, coord.eta))
    return keys


# ── 회로 상태 ─────────────────────────────────────────────────
def brickwork_pairs(L: int, layer: int, periodic: bool) -> np.ndarray:
    """layer(1부터) 의 게이트 위치 쌍 (G, 2). 홀수 layer 는 (0,1),(2,3),… 짝수는 (1,2),(3,4),…"""
    return _brickwork_pairs(L, layer % 2 == 1, periodic)


@lru_cache(maxsize=64)
def _brickwork_pairs(L: int, odd: bool, periodic: bool) -> np.ndarray:
    start = 0 if odd else 1
    pairs = [(i, i + 1) for i in range(start, L - 1, 2)]
    # L = 2 의 감기는 쌍은 (0, 1) 과 같다
    if periodic and not odd and L > 2:
        pairs.append((L - 1, 0))
    out = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    out.flags.writeable = False
    return out


@dataclass
class CircuitState:
    """한 realization 의 tableau 와 경계 bookkeeping. chain/bottom 의 -1 은 빈 자리."""

    layout: BoundaryLayout
    rng: np.random.Generator
    state: StabilizerTableau = field(init=False)
    chain: np.ndarray = field(init=False)
    bottom: np.ndarray = field(init=False)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    t: int = 0

    def __post_init__(self):
        L = self.layout.L
        kind = self.layout.kind
        self.chain = np.full(L, -1, dtype=np.int64)
        self.bottom = np.full(L, -1, dtype=np.int64)

        if kind in ("fffa", "pbc_product"):
            self.state = new_product_state(L)
            self.chain[:] = np.arange(L)
        elif kind in ("fafa", "pbc_bell"):
            self.state = new_bell_pairs(L)
            self.chain[:] = np.arange(L)
            self.bottom[:] = L + np.arange(L)
        elif kind == "afaa":
            self.state = new_product_state(L - 2)
            self.chain[1 : L - 1] = np.arange(L - 2)
        elif kind == "aaaa":
            self.state = new_bell_pairs(L - 2)
            self.chain[1 : L - 1] = np.arange(L - 2)
            self.bottom[1 : L - 1] = (L - 2) + np.arange(L - 2)
        else:
            a, b = self.layout.ref_segment
            k = b - a
            self.state = new_product_state(L + k)
            self.chain[:] = np.arange(L)
            self.bottom[a:b] = L + np.arange(k)
            sites = np.arange(a, b)
            self.state.apply_layer([CliffordGate.hadamard()] * k, sites[:, None])
            self.state.apply_layer([CliffordGate.cnot()] * k, np.column_stack([sites, L + np.arange(k)]))

    # -- 진행 ---------------------------------------------------
    def step(self) -> None:
        self.t += 1
        odd = self.t % 2 == 1
        if self.layout.injects and odd:
            self._inject()
        self._apply_gates()
        self._measure()
        if self.layout.injects and not odd:
            self._eject()

    def _inject(self) -> None:
        n = self.state.n
        self.state.append_fresh_qubit()
        self.state.append_fresh_qubit()
        self.chain[0] = n
        self.chain[-1] = n + 1

    def _eject(self) -> None:
        self.left.append(int(self.chain[0]))
        self.right.append(int(self.chain[-1]))
        self.chain[0] = self.chain[-1] = -1

    def _apply_gates(self) -> None:
        pairs = brickwork_pairs(self.layout.L, self.t, self.layout.periodic)
        targets = self.chain[pairs]
        targets = targets[(targets >= 0).all(axis=1)]
        if targets.shape[0] == 0:
            return
        indices = self.rng.integers(N_SYMPLECTIC, size=targets.shape[0])
        signs = self.rng.integers(N_SIGNS, size=targets.shape[0])
        gates = [clifford_from_index(int(i), int(s)) for i, s in zip(indices, signs)]
        self.state.apply_layer(gates, targets)

    def _measure(self) -> None:
        hits = np.flatnonzero(self.rng.random(self.layout.L) < self.layout.p)
        for pos in hits:
            qubit = self.chain[pos]
            if qubit >= 0:
                self.state.measure(int(qubit), self.rng)

    # -- 경계 --------------------------------------------------
    def ring(self) -> BoundaryRing:
        return BoundaryRing(len(self.left), self.chain >= 0, len(self.right), self.bottom >= 0)

    def ring_order(self) -> np.ndarray:
        """ring 순서의 tableau 인덱스."""
        bottom = self.bottom[::-1]
        return np.concatenate(
            [
                np.asarray(self.left, dtype=np.int64),
                self.chain[self.chain >= 0],
                np.asarray(self.right[::-1], dtype=np.int64),
                bottom[bottom >= 0],
            ]
        )

    def registry(self) -> dict[complex, int]:
        """큐비트 중심 좌표 (y 는 layer 단위) → tableau 인덱스."""
        half = self.layout.L / 2
        out: dict[complex, int] = {}
        for pos, q in enumerate(self.chain):
            if q >= 0:
                out[complex(pos + 0.5 - half, self.t)] = int(q)
        for pos, q in enumerate(self.bottom):
            if q >= 0:
                out[complex(pos + 0.5 - half, 0.0)] = int(q)
        for k, q in enumerate(self.left):
            out[complex(-half, 2 * k + 1)] = q
        for k, q in enumerate(self.right):
            out[complex(half, 2 * k + 1)] = q
        return out

    # -- 프로브 ------------------------------------------------
    def probe_bits(self, probes: tuple[Probe, ...]) -> np.ndarray:
        ring = self.ring()
        order = self.ring_order()
        if order.size != self.state.n:
            raise ScheduleError(f"ring 크기 {order.size} ≠ tableau 크기 {self.state.n}")
        clipped = clip_gauge(self.state, order)

        out = np.empty(len(probes), dtype=np.int64)
        for i, probe in enumerate(probes):
            arcs = probe.arcs
            if probe.observable != "mutual_information":
                out[i] = clipped.segment_bits(*ring.span(arcs[0]))
                continue
            (sa, ea), (sb, eb) = ring.span(arcs[0]), ring.span(arcs[1])
            s_a = clipped.segment_bits(sa, ea)
            s_b = clipped.segment_bits(sb, eb)
            n = ring.n
            if ea % n == sb % n:
                s_ab = clipped.segment_bits(sa, eb)
            elif eb % n == sa % n:
                s_ab = clipped.segment_bits(sb, ea)
            else:
                union = np.concatenate([ring.positions(arcs[0]), ring.positions(arcs[1])])
                s_ab = entropy_subset(self.state, order[union]).bits
            out[i] = s_a + s_b - s_ab
        return out


def run_realization(layout: BoundaryLayout, schedule: ProbeSchedule, seed) -> np.ndarray:
    """
    realization 하나를 실행하고 schedule.keys() 순서의 엔트로피(비트) 배열을 반환.
    seed: int | SeedSequence | Generator. 마지막 프로브 시간 이후 layer 는 실행하지 않는다.
    """
    validate_schedule(layout, schedule)
    circuit = CircuitState(layout, np.random.default_rng(seed))
    n_probes = len(schedule.probes)
    bits = np.empty(len(schedule), dtype=np.int64)

    for k, t in enumerate(schedule.times):
        while circuit.t < t:
            circuit.step()
        bits[k * n_probes : (k + 1) * n_probes] = circuit.probe_bits(schedule.probes)
    return bits


# ── preset ────────────────────────────────────────────────────
def _stride(L: int, parts: int = 32) -> int:
    return max(1, L // parts)


def _probes(observable: str, segments, frame: str | None = None) -> list[Probe]:
    return [Probe(observable, seg, frame) for seg in segments]


def _fffa_sweep(L, T, ref):
    s = _stride(L)
    return (T,), _probes("bipartite_entropy", (f"top:0-top:{x}" for x in range(s, L, s)))


def _fffa_mutual(L, T, ref):
    s = _stride(L, 16)
    segs = (f"top:0-top:{x}|top:{y}-top:{L}" for x in range(s, L, s) for y in range(x + s, L, s))
    return (T,), _probes("mutual_information", segs)


def _fffa_growth(L, T, ref):
    xs = sorted({x for x in (L // 8, L // 4, L // 2) if 0 < x < L})
    return period_grid(T), _probes("bipartite_entropy", (f"top:0-top:{x}" for x in xs))


def _afaa_probes(L, T, ref):
    s = _stride(L)
    top = [f"left:0-top:{x}" for x in range(max(s, 1), L, s)]
    half = T // 2
    side = [f"left:0-left:{o}" for o in range(1, half + 1, max(1, half // 16))]
    return (T,), _probes("bipartite_entropy", side + top)


def _bell(L, T, ref):
    return named_time_grid("period+log", T), _probes("bell_entropy", [f"top:0-top:{L}"])


def _mirror(L, T, ref):
    segs = []
    for width in sorted({w for w in (L // 8, L // 4, L // 2) if w > 0}):
        a = (L - width) // 2
        segs += [f"top:{a}-top:{a + width}", f"bottom:{a + width}-bottom:{a}"]
    return (T,), _probes("segment_entropy", segs)


def _aaaa_intervals(L, T, ref):
    s = _stride(L)
    segs = []
    for width in range(s, L - 1, s):
        a = (L - width) // 2
        segs.append(f"top:{a}-top:{a + width}")
    return (T,), _probes("segment_entropy", segs)


def _aaaa_mutual(L, T, ref):
    w = max(2, L // 16)
    s = _stride(L)
    top_top = [
        f"top:1-top:{1 + w}|top:{1 + w + d}-top:{1 + 2 * w + d}" for d in range(s, L - 1 - 2 * w, s)
    ]
    top_bottom = []
    for width in range(s, L - 1, s):
        a = (L - width) // 2
        top_bottom.append(f"top:{a}-top:{a + width}|bottom:{a + width}-bottom:{a}")
    return (T,), _probes("mutual_information", top_top + top_bottom)


def _lightcone(L, T, ref):
    times = tuple(t for t in (2, 4, 6, 8) if t <= T) or (T,)
    segs = []
    r = 1
    while 1 + 4 + r <= L - 1:
        segs.append(f"top:1-top:3|top:{3 + r}-top:{5 + r}")
        r *= 2
    return times, _probes("mutual_information", segs, frame="strip")


def _pbc_intervals(L, T, ref):
    s = _stride(L)
    return (T,), _probes("segment_entropy", (f"top:0-top:{x}" for x in range(s, L, s)))


def _reference(L, T, ref):
    a, b = ref
    return named_time_grid("period+log", T), _probes("refQ_entropy", [f"bottom:{b}-bottom:{a}"])


PRESETS = {
    "fffa_sweep": ("fffa", _fffa_sweep),
    "fffa_mutual": ("fffa", _fffa_mutual),
    "fffa_growth": ("fffa", _fffa_growth),
    "afaa_probes": ("afaa", _afaa_probes),
    "fafa_bell": ("fafa", _bell),
    "mirror": ("fafa", _mirror),
    "aaaa_intervals": ("aaaa", _aaaa_intervals),
    "aaaa_mutual": ("aaaa", _aaaa_mutual),
    "lightcone": ("aaaa", _lightcone),
    "pbc_intervals": ("pbc_product", _pbc_intervals),
    "pbc_bell_entropy": ("pbc_bell", _bell),
    "reference": ("reference_qubits", _reference),
}


def build_preset(name: str, L: int, T: int, ref_segment=None) -> tuple[str, ProbeSchedule]:
    """preset 이름 → (layout kind, schedule)."""
    if name not in PRESETS:
        raise ScheduleError(f"알 수 없는 preset: {name!r} (가능: {', '.join(PRESETS)})")
    kind, builder = PRESETS[name]
    ref = tuple(ref_segment) if ref_segment else default_ref_segment(L)
    times, probes = builder(L, T, ref)
    if not probes:
        raise ScheduleError(f"preset {name}: L={L} 에서 프로브가 없음")
    return kind, ProbeSchedule(tuple(times), tuple(probes), name)


def load_schedule(spec: str, L: int, T: int, ref_segment=None) -> tuple[str | None, ProbeSchedule]:
    """preset 이름 또는 JSON 파일 경로. JSON 의 kind 는 선택."""
    if spec in PRESETS:
        return build_preset(spec, L, T, ref_segment)
    path = Path(spec)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ScheduleError(f"preset 도 파일도 아님: {spec!r}") from None
    except json.JSONDecodeError as e:
        raise ScheduleError(f"{path}: JSON 파싱 실패 (line {e.lineno})") from e
    except OSError as e:
        # 디렉터리, 권한 없음 등: 설정 오류가 아니라 I/O 오류로 올린다
        raise OSError(e.errno, f"{path}: schedule 파일을 읽을 수 없음 ({e.strerror})") from e
    kind = data.get("kind")
    return kind, ProbeSchedule.from_dict(data, T, even=kind in INJECTING_KINDS)
