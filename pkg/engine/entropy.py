"""
entropy.py
역할: stabilizer 상태의 부분계 얽힘 엔트로피와 상호정보량.

  - 값은 내부적으로 정수 비트(ln 2 단위)로 유지하고, nats 변환은 직렬화 시점에만 한다.
  - 임의 부분집합: 제한된 check matrix의 GF(2) rank − |A|.
  - 연속 구간: clipped gauge 로 한 번 정리한 뒤 O(1) 조회.
"""

import math
from dataclasses import dataclass

import numpy as np

from engine import gf2
from engine.errors import ArgumentError, QubitIndexError
from engine.stabilizer import StabilizerTableau

LN2 = math.log(2.0)


@dataclass(frozen=True, order=True)
class EntropyValue:
    """ln 2 단위 정수 엔트로피."""

    bits: int

    @property
    def nats(self) -> float:
        return self.bits * LN2


def _restricted_check_matrix(state: StabilizerTableau, qubits: np.ndarray) -> np.ndarray:
    """stabilizer 행을 qubits 열로 제한: 열 순서 (x_q0, z_q0, x_q1, z_q1, ...)."""
    stabs = slice(state.n, 2 * state.n)
    xs = gf2.column_bits(state.x[stabs], qubits)
    zs = gf2.column_bits(state.z[stabs], qubits)
    dense = np.empty((state.n, 2 * qubits.size), dtype=np.uint8)
    dense[:, 0::2] = xs
    dense[:, 1::2] = zs
    return dense


def _normalize_subset(state: StabilizerTableau, A) -> np.ndarray:
    qubits = np.unique(np.asarray(list(A), dtype=np.int64))
    if qubits.size and (qubits[0] < 0 or qubits[-1] >= state.n):
        raise QubitIndexError(f"부분계 인덱스 범위 초과 (n={state.n})")
    return qubits


def entropy_subset(state: StabilizerTableau, A) -> EntropyValue:
    """S(A) = rank(A 열로 제한한 생성원) − |A|. 비연속 A 도 가능."""
    qubits = _normalize_subset(state, A)
    if qubits.size == 0:
        return EntropyValue(0)
    # 순수 상태이므로 S(A) = S(Ā): 작은 쪽으로 계산
    if 2 * qubits.size > state.n:
        qubits = np.setdiff1d(np.arange(state.n), qubits)
        if qubits.size == 0:
            return EntropyValue(0)
    dense = _restricted_check_matrix(state, qubits)
    r = gf2.rank(gf2.pack_bits(dense), dense.shape[1])
    return EntropyValue(r - int(qubits.size))


def mutual_information(state: StabilizerTableau, A, B) -> EntropyValue:
    """I(A:B) = S(A) + S(B) − S(A∪B)."""
    a, b = set(A), set(B)
    if a & b:
        raise ArgumentError(f"A, B 가 겹침: {sorted(a & b)}")
    return EntropyValue(
        entropy_subset(state, a).bits + entropy_subset(state, b).bits - entropy_subset(state, a | b).bits
    )


# ── clipped gauge ─────────────────────────────────────────────
class ClippedTableau:
    """
    clipped gauge 로 정리된 생성원의 끝점 정보.

    left[g], right[g]: 생성원 g 의 지지(support) 양 끝 사이트 (ordering 상의 위치).
    contained[a, b]: a ≤ left, right ≤ b 인 생성원 수: 구간 [a, b] 안에 완전히 들어간 생성원.
    """

    def __init__(self, order: np.ndarray, left: np.ndarray, right: np.ndarray):
        self.order = order
        self.left = left
        self.right = right
        n = order.size
        self.left_end = np.bincount(left, minlength=n)
        self.right_end = np.bincount(right, minlength=n)

        counts = np.zeros((n, n), dtype=np.int32)
        np.add.at(counts, (left, right), 1)
        # l ≥ a 누적 (아래에서 위로), r ≤ b 누적 (왼쪽에서 오른쪽으로)
        self.contained = np.cumsum(np.cumsum(counts[::-1], axis=0)[::-1], axis=1)

    @property
    def n(self) -> int:
        return int(self.order.size)

    def interval_bits(self, a: int, b: int) -> int:
        """ordering 위치 a..b (양끝 포함) 구간의 엔트로피 (비트)."""
        if b < a:
            return 0
        return (b - a + 1) - int(self.contained[a, b])

    def segment_bits(self, start: int, stop: int) -> int:
        """
        반열린 구간 [start, stop). start > stop 이면 끝을 넘어 감기는(wrap) 호이며
        순수 상태의 여집합 [stop, start) 으로 계산한다.
        """
        if start == stop:
            return 0
        if start < stop:
            return self.interval_bits(start, stop - 1)
        return self.interval_bits(stop, start - 1)

    def crossing_bits(self, a: int, b: int) -> int:
        """½·(끝점 하나만 구간 안에 있는 생성원 수): 순수 상태에서 interval_bits 와 같다."""
        inside_l = (self.left >= a) & (self.left <= b)
        inside_r = (self.right >= a) & (self.right <= b)
        return int(np.count_nonzero(inside_l ^ inside_r)) // 2


def clip_gauge(state: StabilizerTableau, order=None) -> ClippedTableau:
    """
    생성원을 clipped gauge 로 정리.

    1) (x_0, z_0, x_1, z_1, ...) 열 순서로 왼쪽부터 row echelon → 사이트당 왼쪽 끝점 ≤ 2.
    2) 오른쪽 끝 열부터 같은 오른쪽 끝을 가진 행들 중 왼쪽 끝이 가장 큰 행을 pivot 으로
       나머지에 XOR → 왼쪽 끝점은 보존되고 사이트당 오른쪽 끝점 ≤ 2.
    """
    n = state.n
    order = np.arange(n) if order is None else np.asarray(order, dtype=np.int64)
    if order.size != n or np.unique(order).size != n or order.min() < 0 or order.max() >= n:
        raise ArgumentError("ordering 은 전체 큐비트의 순열이어야 함")

    n_cols = 2 * n
    R, pivots = gf2.row_echelon(gf2.pack_bits(_restricted_check_matrix(state, order)), n_cols)
    if len(pivots) != n:
        raise ArgumentError("순수 상태가 아님 (rank < n)")
    left_col = np.asarray(pivots, dtype=np.int64)

    high = gf2.highest_set_bit(R)
    fixed = np.zeros(n, dtype=bool)
    for col in range(n_cols - 1, -1, -1):
        rows = np.flatnonzero((high == col) & ~fixed)
        if rows.size == 0:
            continue
        pivot = rows[np.argmax(left_col[rows])]
        others = rows[rows != pivot]
        fixed[pivot] = True
        if others.size:
            R[others] ^= R[pivot]
            high[others] = gf2.highest_set_bit(R[others])

    return ClippedTableau(order, left_col // 2, high // 2)
