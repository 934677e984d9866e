"""
observables.py
역할: realization 결과(비트 배열)의 앙상블 누적과 ObservableSeries.

누적은 정수 합(Σbits, Σbits²)으로만 한다 → 완료 순서나 worker 수와 무관하게 같은 결과.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from engine.entropy import LN2
from engine.errors import ArgumentError


@dataclass(frozen=True)
class SeriesRecord:
    t: int
    tau: float
    observable: str
    segment: str
    xi: float
    eta: float
    count: int
    bits_sum: int
    bits_sq_sum: int

    @property
    def mean_bits(self) -> float:
        return self.bits_sum / self.count if self.count else math.nan

    @property
    def mean_nats(self) -> float:
        return self.mean_bits * LN2

    @property
    def stderr(self) -> float:
        """표본 표준편차 / √count (nats). count = 1 이면 0."""
        n = self.count
        if n < 2:
            return 0.0
        spread = n * self.bits_sq_sum - self.bits_sum * self.bits_sum
        variance = max(spread, 0) / (n * (n - 1))
        return LN2 * math.sqrt(variance / n)


class EnsembleAccumulator:
    """키별 정수 합 누적기. merge 로 부분 결과를 합칠 수 있다."""

    def __init__(self, size: int):
        self.count = 0
        self.bits_sum = np.zeros(size, dtype=np.int64)
        self.bits_sq_sum = np.zeros(size, dtype=np.int64)

    def add(self, bits: np.ndarray) -> None:
        bits = np.asarray(bits, dtype=np.int64)
        if bits.shape != self.bits_sum.shape:
            raise ArgumentError(f"결과 길이 {bits.shape} ≠ 키 수 {self.bits_sum.shape}")
        self.count += 1
        self.bits_sum += bits
        self.bits_sq_sum += bits * bits

    def merge(self, other: "EnsembleAccumulator") -> "EnsembleAccumulator":
        self.count += other.count
        self.bits_sum += other.bits_sum
        self.bits_sq_sum += other.bits_sq_sum
        return self


@dataclass
class ObservableSeries:
    metadata: dict
    records: list[SeriesRecord] = field(default_factory=list)

    @classmethod
    def from_accumulator(cls, keys, accumulator: EnsembleAccumulator, metadata: dict) -> "ObservableSeries":
        """keys: RecordKey 목록 (accumulator 와 같은 순서)."""
        if len(keys) != accumulator.bits_sum.size:
            raise ArgumentError("키 수와 누적기 크기가 다름")
        records = [
            SeriesRecord(
                t=key.t,
                tau=key.tau,
                observable=key.observable,
                segment=key.segment,
                xi=key.xi,
                eta=key.eta,
                count=accumulator.count,
                bits_sum=int(s),
                bits_sq_sum=int(sq),
            )
            for key, s, sq in zip(keys, accumulator.bits_sum, accumulator.bits_sq_sum)
        ]
        return cls(dict(metadata), records)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def count(self) -> int:
        return self.records[0].count if self.records else 0

    def select(self, observable: str | None = None, segment: str | None = None) -> list[SeriesRecord]:
        return [
            r
            for r in self.records
            if (observable is None or r.observable == observable) and (segment is None or r.segment == segment)
        ]
