"""
percolation.py
역할: brickwork 격자 first-passage percolation 의 최소 cut (Haar 회로 Hartley 엔트로피 대응).

격자:
  - 노드 (row, x), row = 0..T (0 = 아래, T = 위), x = 0..L-1.
  - row r 의 가로 링크 = layer r+1 의 게이트 쌍 (circuits.brickwork_pairs 와 같은 패턴). row T 에는 없음.
  - 세로 링크 (r, x)-(r+1, x) 는 확률 p 로 끊어진다.
  - 남은 링크는 모두 용량 1. 끊어진 링크는 그래프에 넣지 않는다 (용량 0).
색칠:
  - top_bipartition: 윗변 [a, b) 빨강, 나머지 윗변 파랑, 다른 변은 자유.
  - top_vs_bottom: 윗변 전체 빨강, 아랫변 전체 파랑.
source/sink supernode 링크에는 capacity 속성을 주지 않는다 → networkx 에서 무한 용량.
"""

import logging
from dataclasses import dataclass, replace

import networkx as nx
import numpy as np
from networkx.algorithms.flow import edmonds_karp

from engine.circuits import BoundaryLayout, Probe, ProbeSchedule, brickwork_pairs
from engine.entropy import LN2
from engine.errors import GeometryError

logger = logging.getLogger(__name__)

COLORINGS = ("top_bipartition", "top_vs_bottom")
WRAPS = ("open", "periodic")
SOURCE = "source"
SINK = "sink"

# 색칠 × 경계 → 같은 경계 구조의 회로 layout (collapse 좌표 계산용)
ANALOG_KINDS = {
    ("top_bipartition", "open"): "fffa",
    ("top_bipartition", "periodic"): "pbc_product",
    ("top_vs_bottom", "open"): "fafa",
    ("top_vs_bottom", "periodic"): "pbc_bell",
}
PERCOLATION_Y_OVER_T = 1.0


@dataclass(frozen=True)
class CutResult:
    cost: int
    red_side: frozenset = frozenset()

    @property
    def nats(self) -> float:
        return self.cost * LN2


@dataclass(frozen=True, eq=False)
class PercolationInstance:
    """vertical[r, x]: (r, x)-(r+1, x) 링크가 살아 있으면 True."""

    L: int
    T: int
    p: float
    coloring: str
    wrap: str
    vertical: np.ndarray

    @property
    def periodic(self) -> bool:
        return self.wrap == "periodic"

    @property
    def broken_fraction(self) -> float:
        return float(1.0 - self.vertical.mean()) if self.vertical.size else 0.0

    def horizontal_pairs(self, row: int) -> np.ndarray:
        return brickwork_pairs(self.L, row + 1, self.periodic)

    def truncated(self, depth: int) -> "PercolationInstance":
        """아래 depth 개 row 층만 남긴 격자 (회로의 시간 depth 에 해당)."""
        if not 0 <= depth <= self.T:
            raise GeometryError(f"depth 는 0..{self.T}: {depth}")
        return replace(self, T=depth, vertical=self.vertical[:depth])

    def breaking(self, row: int, x: int) -> "PercolationInstance":
        """세로 링크 하나를 더 끊은 사본."""
        vertical = self.vertical.copy()
        vertical[row, x] = False
        return replace(self, vertical=vertical)

    def graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from((r, x) for r in range(self.T + 1) for x in range(self.L))
        for r in range(self.T):
            for a, b in self.horizontal_pairs(r):
                G.add_edge((r, int(a)), (r, int(b)), capacity=1)
            for x in np.flatnonzero(self.vertical[r]):
                G.add_edge((r, int(x)), (r + 1, int(x)), capacity=1)
        return G

    def analog_layout(self) -> BoundaryLayout:
        return BoundaryLayout(
            ANALOG_KINDS[(self.coloring, self.wrap)], self.L, self.T, self.p, y_over_t=PERCOLATION_Y_OVER_T
        )


def build_instance(
    L: int, T: int, p: float, coloring: str = "top_bipartition", wrap: str = "open", seed=None
) -> PercolationInstance:
    """seed: int | SeedSequence | Generator. 같은 seed → 같은 격자."""
    if L < 2 or L % 2:
        raise GeometryError(f"brickwork 격자는 짝수 L ≥ 2 필요: {L}")
    if T < 1:
        raise GeometryError(f"T ≥ 1 이어야 함: {T}")
    if not 0.0 <= p <= 1.0:
        raise GeometryError(f"p 는 [0, 1] 범위: {p}")
    if coloring not in COLORINGS:
        raise GeometryError(f"알 수 없는 색칠: {coloring} (가능: {', '.join(COLORINGS)})")
    if wrap not in WRAPS:
        raise GeometryError(f"wrap 은 open|periodic: {wrap}")
    rng = np.random.default_rng(seed)
    vertical = rng.random((T, L)) >= p
    return PercolationInstance(L, T, float(p), coloring, wrap, vertical)


def _top_segment(L: int, a: int, b: int) -> list[int]:
    if a <= b:
        return list(range(a, b))
    return list(range(a, L)) + list(range(0, b))


def terminals(instance: PercolationInstance, segment: tuple[int, int] | None = None):
    """(빨강 노드, 파랑 노드). top_bipartition 의 기본 구간은 [0, L/2)."""
    L, T = instance.L, instance.T
    top = [(T, x) for x in range(L)]
    if instance.coloring == "top_vs_bottom":
        return top, [(0, x) for x in range(L)]
    a, b = segment if segment is not None else (0, L // 2)
    red_x = set(_top_segment(L, a, b))
    return [(T, x) for x in sorted(red_x)], [(T, x) for x in range(L) if x not in red_x]


def min_cut(instance: PercolationInstance, red=None, blue=None) -> CutResult:
    """빨강과 파랑을 가르는 경로가 지나야 하는 최소 살아 있는 링크 수 (= 최대 유량)."""
    if red is None or blue is None:
        red, blue = terminals(instance)
    if not red or not blue:
        return CutResult(0)
    G = instance.graph()
    for node in red:
        G.add_edge(SOURCE, node)
    for node in blue:
        G.add_edge(node, SINK)
    value, (reachable, _) = nx.minimum_cut(G, SOURCE, SINK, flow_func=edmonds_karp)
    return CutResult(int(round(value)), frozenset(reachable - {SOURCE}))


def cut_for_probe(instance: PercolationInstance, probe: Probe) -> CutResult:
    """
    회로와 같은 프로브 기술자로 cut 계산.
      bipartite/segment_entropy "top:a-top:b" → 윗변 [a, b) 빨강
      bell_entropy                             → 윗변 vs 아랫변
    """
    arc = probe.arcs[0]
    if probe.observable == "bell_entropy":
        if instance.T == 0:
            # 깊이 0: 위아래가 같은 row → 모든 열이 Bell 쌍처럼 남는다
            return CutResult(instance.L)
        top_vs_bottom = replace(instance, coloring="top_vs_bottom")
        return min_cut(top_vs_bottom)
    if probe.observable not in ("bipartite_entropy", "segment_entropy"):
        raise GeometryError(f"percolation 에서 지원하지 않는 관측량: {probe.observable}")
    if arc.start.edge != "top" or arc.stop.edge != "top":
        raise GeometryError(f"percolation 프로브는 윗변 구간만: {probe.segment}")
    if instance.T == 0:
        return CutResult(0)
    red, blue = terminals(replace(instance, coloring="top_bipartition"), (arc.start.offset, arc.stop.offset))
    return min_cut(instance, red, blue)


def default_schedule(L: int, depths, coloring: str, wrap: str) -> ProbeSchedule:
    """top_bipartition: 깊이마다 윗변 절단 x 격자, top_vs_bottom: 깊이마다 Bell 대응."""
    if coloring == "top_vs_bottom":
        probes = (Probe("bell_entropy", f"top:0-top:{L}"),)
    else:
        observable = "segment_entropy" if wrap == "periodic" else "bipartite_entropy"
        stride = max(1, L // 32)
        probes = tuple(Probe(observable, f"top:0-top:{x}") for x in range(stride, L, stride))
    return ProbeSchedule(tuple(depths), probes, name=f"percolation_{coloring}_{wrap}")


def percolation_realization(
    L: int, p: float, coloring: str, wrap: str, schedule: ProbeSchedule, seed
) -> np.ndarray:
    """최대 깊이 격자 하나를 만들고 각 깊이로 잘라 schedule.keys() 순서의 cut 비용 배열을 반환."""
    depth = max(schedule.times)
    instance = build_instance(L, max(depth, 1), p, coloring, wrap, seed)
    n_probes = len(schedule.probes)
    out = np.empty(len(schedule), dtype=np.int64)
    for k, t in enumerate(schedule.times):
        sub = instance.truncated(t)
        for j, probe in enumerate(schedule.probes):
            out[k * n_probes + j] = cut_for_probe(sub, probe).cost
    return out
