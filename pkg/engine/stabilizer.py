"""
stabilizer.py
역할: Clifford 게이트와 단일 사이트 Pauli 측정 하의 stabilizer 상태 정확 시뮬레이션 (CHP 방식).

저장 구조:
  - x, z: (2n, W) uint64 비트 패킹 행렬. 0..n-1 행은 destabilizer, n..2n-1 행은 stabilizer.
  - r: (2n,) uint8 부호 비트 (0 → +1, 1 → −1).
  - 각 사이트 Pauli는 Hermitian 규약: (x, z) = (1, 1) 은 Y.
  - 두 Pauli 곱의 i 지수는 plus/minus 패턴의 popcount 차이로 계산 (np.bitwise_count).

게이트는 4^k 개 입력 패턴에 대한 변환 테이블로 컴파일되어
한 레이어의 모든 게이트를 벡터화해서 적용한다.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from engine import gf2
from engine.errors import ArgumentError, InvalidSizeError, QubitIndexError

ONE = gf2.ONE

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}


# ── i 지수 계산 ────────────────────────────────────────────────
def _product_exponent(xa, za, xb, zb) -> int:
    """
    Hermitian Pauli 곱 P_A · P_B = i^e · P_{A⊕B} 의 지수 e (bool/0-1 배열 버전).
    X·Y=iZ, Y·Z=iX, Z·X=iY 가 +1, 역순이 −1.
    """
    xa, za, xb, zb = (np.asarray(v, dtype=bool) for v in (xa, za, xb, zb))
    X_a, Y_a, Z_a = xa & ~za, xa & za, ~xa & za
    X_b, Y_b, Z_b = xb & ~zb, xb & zb, ~xb & zb
    plus = (X_a & Y_b) | (Y_a & Z_b) | (Z_a & X_b)
    minus = (X_a & Z_b) | (Y_a & X_b) | (Z_a & Y_b)
    return int(plus.sum()) - int(minus.sum())


def _word_exponent(xa, za, xb, zb) -> np.ndarray:
    """_product_exponent 의 비트 패킹 버전. 마지막 축(워드)을 합산해 행별 지수를 반환."""
    X_a, Y_a, Z_a = xa & ~za, xa & za, ~xa & za
    X_b, Y_b, Z_b = xb & ~zb, xb & zb, ~xb & zb
    plus = (X_a & Y_b) | (Y_a & Z_b) | (Z_a & X_b)
    minus = (X_a & Z_b) | (Y_a & X_b) | (Z_a & Y_b)
    return (
        np.bitwise_count(plus).sum(axis=-1, dtype=np.int64)
        - np.bitwise_count(minus).sum(axis=-1, dtype=np.int64)
    )


# ── PauliString ───────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class PauliString:
    """±(Hermitian Pauli 텐서곱). 허수 위상은 곱셈 중에만 내부적으로 다룬다."""

    x_bits: np.ndarray
    z_bits: np.ndarray
    phase: int = 1

    def __post_init__(self):
        x = np.asarray(self.x_bits, dtype=np.uint8) & 1
        z = np.asarray(self.z_bits, dtype=np.uint8) & 1
        if x.ndim != 1 or x.shape != z.shape:
            raise ArgumentError(f"x/z 비트 길이 불일치: {x.shape} vs {z.shape}")
        if self.phase not in (1, -1):
            raise ArgumentError(f"phase는 ±1 이어야 함: {self.phase}")
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)

    @property
    def n(self) -> int:
        return int(self.x_bits.shape[0])

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """'+XZIY', '-ZZ', 'XY' 형태 문자열 파싱."""
        phase = 1
        if label and label[0] in "+-":
            phase = -1 if label[0] == "-" else 1
            label = label[1:]
        try:
            bits = [_BITS[ch] for ch in label.upper()]
        except KeyError as e:
            raise ArgumentError(f"알 수 없는 Pauli 문자: {e.args[0]!r}") from e
        if not bits:
            raise ArgumentError("빈 Pauli 문자열")
        x, z = zip(*bits)
        return cls(np.array(x), np.array(z), phase)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    def label(self) -> str:
        sign = "+" if self.phase == 1 else "-"
        return sign + "".join(_LETTERS[(int(a), int(b))] for a, b in zip(self.x_bits, self.z_bits))

    def commutes_with(self, other: "PauliString") -> bool:
        if other.n != self.n:
            raise ArgumentError("큐비트 수가 다른 Pauli 비교")
        overlap = (self.x_bits & other.z_bits) ^ (self.z_bits & other.x_bits)
        return int(overlap.sum()) % 2 == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not self.commutes_with(other):
            raise ArgumentError(f"반교환 Pauli 곱은 Hermitian이 아님: {self.label()} · {other.label()}")
        e = _product_exponent(self.x_bits, self.z_bits, other.x_bits, other.z_bits) % 4
        phase = self.phase * other.phase * (1 if e == 0 else -1)
        return PauliString(self.x_bits ^ other.x_bits, self.z_bits ^ other.z_bits, phase)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.phase == other.phase
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __hash__(self):
        return hash(self.label())

    def __repr__(self):
        return f"PauliString({self.label()!r})"


# ── CliffordGate ──────────────────────────────────────────────
def _conjugation_table(images: tuple[PauliString, ...], arity: int) -> np.ndarray:
    """
    입력 패턴 (x1, z1, x2, z2, ...) → 출력 패턴 | (부호반전 << 2k) 테이블.
    σ(x, z) = i^{xz} X^x Z^z 로 풀어서 생성원 이미지를 순서대로 곱한다.
    """
    k2 = 2 * arity
    table = np.zeros(1 << k2, dtype=np.int64)
    for pattern in range(1 << k2):
        bits = [(pattern >> (k2 - 1 - j)) & 1 for j in range(k2)]
        ox = np.zeros(arity, dtype=np.uint8)
        oz = np.zeros(arity, dtype=np.uint8)
        exponent = 0
        for q in range(arity):
            xq, zq = bits[2 * q], bits[2 * q + 1]
            exponent += xq * zq
            for use, image in ((xq, images[2 * q]), (zq, images[2 * q + 1])):
                if not use:
                    continue
                exponent += 0 if image.phase == 1 else 2
                exponent += _product_exponent(ox, oz, image.x_bits, image.z_bits)
                ox = ox ^ image.x_bits
                oz = oz ^ image.z_bits
        if exponent % 2:
            raise ArgumentError("심플렉틱 조건을 만족하지 않는 게이트 이미지")
        out = 0
        for q in range(arity):
            out = (out << 2) | (int(ox[q]) << 1) | int(oz[q])
        table[pattern] = out | ((exponent % 4 == 2) << k2)
    return table


@dataclass(frozen=True, eq=False)
class CliffordGate:
    """
    1 또는 2 큐비트 Clifford 게이트.
    images = (X1 이미지, Z1 이미지, X2 이미지, Z2 이미지): 각각 부호 있는 PauliString.
    """

    arity: int
    images: tuple
    table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.arity not in (1, 2):
            raise ArgumentError(f"arity는 1 또는 2: {self.arity}")
        if len(self.images) != 2 * self.arity or any(img.n != self.arity for img in self.images):
            raise ArgumentError("images 개수/크기가 arity와 맞지 않음")
        for a in range(2 * self.arity):
            for b in range(a + 1, 2 * self.arity):
                expected = (a // 2 == b // 2)  # 같은 큐비트의 X, Z 이미지끼리만 반교환
                if self.images[a].commutes_with(self.images[b]) == expected:
                    raise ArgumentError("게이트 이미지가 교환 관계를 보존하지 않음")
        object.__setattr__(self, "images", tuple(self.images))
        object.__setattr__(self, "table", _conjugation_table(self.images, self.arity))

    @classmethod
    def hadamard(cls) -> "CliffordGate":
        return cls(1, (PauliString.from_label("Z"), PauliString.from_label("X")))

    @classmethod
    def phase(cls) -> "CliffordGate":
        return cls(1, (PauliString.from_label("Y"), PauliString.from_label("Z")))

    @classmethod
    def cnot(cls) -> "CliffordGate":
        # control 1 → target 2
        return cls(
            2,
            tuple(PauliString.from_label(s) for s in ("XX", "ZI", "IX", "ZZ")),
        )

    def symplectic_matrix(self) -> np.ndarray:
        """행 j = 생성원 j 이미지의 (x1, z1, x2, z2, ...) 벡터."""
        rows = []
        for img in self.images:
            rows.append(np.column_stack([img.x_bits, img.z_bits]).reshape(-1))
        return np.array(rows, dtype=np.uint8)


# ── 균일 랜덤 2큐비트 Clifford (canonical symplectic enumeration) ──
def _inner(v: np.ndarray, w: np.ndarray) -> int:
    """(x1, z1, x2, z2, ...) 순서 벡터의 심플렉틱 내적."""
    return int((v[0::2] * w[1::2] + w[0::2] * v[1::2]).sum() % 2)


def _transvection(k: np.ndarray, v: np.ndarray) -> np.ndarray:
    return (v + _inner(k, v) * k) % 2


def _int_to_bits(i: int, n: int) -> np.ndarray:
    return np.array([(i >> j) & 1 for j in range(n)], dtype=np.int64)


def _find_transvection(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x 를 y 로 보내는 transvection 두 개 (영벡터는 항등)."""
    size = x.size
    out = np.zeros((2, size), dtype=np.int64)
    if np.array_equal(x, y):
        return out
    if _inner(x, y) == 1:
        out[0] = (x + y) % 2
        return out

    z = np.zeros(size, dtype=np.int64)
    for ii in range(0, size, 2):
        if (x[ii] + x[ii + 1]) != 0 and (y[ii] + y[ii + 1]) != 0:
            z[ii] = (x[ii] + y[ii]) % 2
            z[ii + 1] = (x[ii + 1] + y[ii + 1]) % 2
            if (z[ii] + z[ii + 1]) == 0:
                z[ii + 1] = 1
                if x[ii] != x[ii + 1]:
                    z[ii] = 1
            out[0] = (x + z) % 2
            out[1] = (y + z) % 2
            return out

    # x만 0이 아닌 쌍, y만 0이 아닌 쌍을 각각 하나씩 사용
    for ii in range(0, size, 2):
        if (x[ii] + x[ii + 1]) != 0 and (y[ii] + y[ii + 1]) == 0:
            if x[ii] == x[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = x[ii]
                z[ii] = x[ii + 1]
            break
    for ii in range(0, size, 2):
        if (x[ii] + x[ii + 1]) == 0 and (y[ii] + y[ii + 1]) != 0:
            if y[ii] == y[ii + 1]:
                z[ii + 1] = 1
            else:
                z[ii + 1] = y[ii]
                z[ii] = y[ii + 1]
            break
    out[0] = (x + z) % 2
    out[1] = (y + z) % 2
    return out


def symplectic_group_order(n: int) -> int:
    """|Sp(2n, 2)| = 2^{n²} ∏ (4^j − 1). n=2 → 720."""
    order = 2 ** (n * n)
    for j in range(1, n + 1):
        order *= 4**j - 1
    return order


@lru_cache(maxsize=None)
def _symplectic_cached(index: int, n: int) -> bytes:
    nn = 2 * n
    s = (1 << nn) - 1
    k = (index % s) + 1
    index //= s

    f1 = _int_to_bits(k, nn)
    e1 = np.zeros(nn, dtype=np.int64)
    e1[0] = 1
    T = _find_transvection(e1, f1)

    bits = _int_to_bits(index % (1 << (nn - 1)), nn - 1)
    eprime = e1.copy()
    for j in range(2, nn):
        eprime[j] = bits[j - 1]
    h0 = _transvection(T[0], eprime)
    h0 = _transvection(T[1], h0)
    if bits[0] == 1:
        f1 = f1 * 0

    g = np.eye(nn, dtype=np.int64)
    if n != 1:
        g[2:, 2:] = symplectic_from_index(index >> (nn - 1), n - 1)
    for j in range(nn):
        row = _transvection(T[0], g[j])
        row = _transvection(T[1], row)
        row = _transvection(h0, row)
        g[j] = _transvection(f1, row)
    return g.astype(np.uint8).tobytes()


def symplectic_from_index(index: int, n: int = 2) -> np.ndarray:
    """
    index ∈ [0, |Sp(2n, 2)|) → 심플렉틱 행렬 (행 j = 기저 j의 이미지).
    순서 (x1, z1, x2, z2, ...). n=2 에서 720개 전부 서로 다르다.
    """
    nn = 2 * n
    return np.frombuffer(_symplectic_cached(int(index), n), dtype=np.uint8).reshape(nn, nn).copy()


@lru_cache(maxsize=None)
def clifford_from_index(index: int, signs: int) -> CliffordGate:
    """(심플렉틱 인덱스, 4비트 부호) → 2큐비트 Clifford. 720 × 16 = 11520 개."""
    g = symplectic_from_index(index, 2)
    images = []
    for j in range(4):
        phase = -1 if (signs >> j) & 1 else 1
        images.append(PauliString(g[j, 0::2], g[j, 1::2], phase))
    return CliffordGate(2, tuple(images))


def sample_two_qubit_clifford(rng: np.random.Generator) -> CliffordGate:
    """2큐비트 Clifford 군(위상 무시)에서 균일 샘플."""
    index = int(rng.integers(720))
    signs = int(rng.integers(16))
    return clifford_from_index(index, signs)


# ── StabilizerTableau ─────────────────────────────────────────
class StabilizerTableau:
    """
    destabilizer 를 포함한 비트 패킹 stabilizer tableau.
    한 번에 한 worker만 소유한다 (공유 변경 없음). pickle 로 프로세스 간 전달 가능.
    """

    def __init__(self, n: int, x: np.ndarray, z: np.ndarray, r: np.ndarray):
        self.n = n
        self.x = x
        self.z = z
        self.r = r

    # -- 생성 ---------------------------------------------------
    @classmethod
    def _empty(cls, n: int) -> "StabilizerTableau":
        width = gf2.n_words(n)
        return cls(
            n,
            np.zeros((2 * n, width), dtype=np.uint64),
            np.zeros((2 * n, width), dtype=np.uint64),
            np.zeros(2 * n, dtype=np.uint8),
        )

    def _set_bit(self, block: np.ndarray, row: int, qubit: int) -> None:
        block[row, qubit >> 6] |= ONE << np.uint64(qubit & 63)

    def copy(self) -> "StabilizerTableau":
        return StabilizerTableau(self.n, self.x.copy(), self.z.copy(), self.r.copy())

    # -- 조회 ---------------------------------------------------
    def _row(self, row: int) -> PauliString:
        x = gf2.unpack_bits(self.x[row], self.n)[0]
        z = gf2.unpack_bits(self.z[row], self.n)[0]
        return PauliString(x, z, -1 if self.r[row] else 1)

    def generators(self) -> list[PauliString]:
        return [self._row(self.n + i) for i in range(self.n)]

    def destabilizers(self) -> list[PauliString]:
        return [self._row(i) for i in range(self.n)]

    def x_bit(self, row, qubit: int):
        return (self.x[row, qubit >> 6] >> np.uint64(qubit & 63)) & ONE

    def _check_qubits(self, targets) -> np.ndarray:
        targets = np.asarray(targets, dtype=np.int64).reshape(-1)
        if targets.size and (targets.min() < 0 or targets.max() >= self.n):
            raise QubitIndexError(f"타깃 범위 초과: {targets.tolist()} (n={self.n})")
        if np.unique(targets).size != targets.size:
            raise QubitIndexError(f"중복 타깃: {targets.tolist()}")
        return targets

    # -- 게이트 -------------------------------------------------
    def apply_layer(self, gates: list[CliffordGate], targets: list) -> "StabilizerTableau":
        """
        같은 arity 게이트 여러 개를 한 번에 적용. 모든 타깃은 서로 달라야 한다.
        각 행의 타깃 비트 패턴을 테이블로 치환하고 바뀐 비트만 워드에 XOR.
        """
        if not gates:
            return self
        arity = gates[0].arity
        if any(g.arity != arity for g in gates):
            raise ArgumentError("한 레이어 안의 게이트 arity가 섞여 있음")
        qubits = np.asarray(targets, dtype=np.int64).reshape(len(gates), -1)
        if qubits.shape[1] != arity:
            raise ArgumentError(f"arity {arity} 게이트에 타깃 {qubits.shape[1]}개")
        flat = self._check_qubits(qubits)

        k2 = 2 * arity
        tables = np.stack([g.table for g in gates])                     # (G, 4^k)
        shifts = (qubits & 63).astype(np.uint64)
        xb = (self.x[:, qubits >> 6] >> shifts) & ONE                    # (2n, G, k)
        zb = (self.z[:, qubits >> 6] >> shifts) & ONE

        pattern = np.zeros(xb.shape[:2], dtype=np.int64)
        for q in range(arity):
            pattern = (pattern << 2) | (xb[..., q].astype(np.int64) << 1) | zb[..., q].astype(np.int64)
        out = tables[np.arange(len(gates))[None, :], pattern]           # (2n, G)

        flips = (out >> k2) & 1
        self.r ^= (np.bitwise_xor.reduce(flips, axis=1) & 1).astype(np.uint8)

        new_x = np.empty_like(xb)
        new_z = np.empty_like(zb)
        for q in range(arity):
            shift = 2 * (arity - 1 - q)
            new_x[..., q] = ((out >> (shift + 1)) & 1).astype(np.uint64)
            new_z[..., q] = ((out >> shift) & 1).astype(np.uint64)

        rows = self.x.shape[0]
        self.x ^= _scatter_bits((xb ^ new_x).reshape(rows, -1), flat, self.x.shape[1])
        self.z ^= _scatter_bits((zb ^ new_z).reshape(rows, -1), flat, self.z.shape[1])
        return self

    # -- 측정 ---------------------------------------------------
    def _anticommuting_rows(self, rows: np.ndarray, px: np.ndarray, pz: np.ndarray) -> np.ndarray:
        overlap = (self.x[rows] & pz) ^ (self.z[rows] & px)
        return (np.bitwise_count(overlap).sum(axis=1) & 1).astype(bool)

    def _stabilizer_product(self, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
        """
        (서로 교환하는) 행들의 곱 → (x, z, 부호 ±1).
        누적 XOR prefix 와 다음 행 사이의 i 지수를 한 번에 합산.
        """
        width = self.x.shape[1]
        if rows.size == 0:
            return np.zeros(width, np.uint64), np.zeros(width, np.uint64), 1
        xs, zs = self.x[rows], self.z[rows]
        px = np.bitwise_xor.accumulate(xs, axis=0)
        pz = np.bitwise_xor.accumulate(zs, axis=0)
        exponent = 2 * int(self.r[rows].sum())
        if rows.size > 1:
            exponent += int(_word_exponent(px[:-1], pz[:-1], xs[1:], zs[1:]).sum())
        sign = 1 if exponent % 4 == 0 else -1
        return px[-1], pz[-1], sign

    def measure(self, site: int, rng: np.random.Generator) -> int:
        """Z_site 측정. 결과 ±1."""
        self._check_qubits([site])
        n = self.n
        xcol = self.x_bit(slice(None), site).astype(bool)
        stab_hits = np.flatnonzero(xcol[n:])

        if stab_hits.size == 0:
            # 결정적 결과: Z_site = ± ∏ stabilizer_{n+i}  (destabilizer i 가 X 성분을 가질 때)
            destab = np.flatnonzero(xcol[:n])
            _, _, sign = self._stabilizer_product(destab + n)
            return sign

        p = n + int(stab_hits[0])
        hits = np.flatnonzero(xcol)
        hits = hits[hits != p]
        if hits.size:
            g = _word_exponent(self.x[p], self.z[p], self.x[hits], self.z[hits])
            phase = (2 * self.r[hits].astype(np.int64) + 2 * int(self.r[p]) + g) % 4
            self.r[hits] = (phase >> 1).astype(np.uint8)
            self.x[hits] ^= self.x[p]
            self.z[hits] ^= self.z[p]

        self.x[p - n] = self.x[p]
        self.z[p - n] = self.z[p]
        self.r[p - n] = self.r[p]

        outcome_bit = int(rng.integers(2))
        self.x[p] = 0
        self.z[p] = 0
        self._set_bit(self.z, p, site)
        self.r[p] = outcome_bit
        return 1 - 2 * outcome_bit

    def expectation(self, pauli: PauliString) -> int:
        """⟨P⟩ ∈ {+1, −1, 0}."""
        if pauli.n != self.n:
            raise ArgumentError("큐비트 수 불일치")
        px = gf2.pack_bits(pauli.x_bits[None, :])[0]
        pz = gf2.pack_bits(pauli.z_bits[None, :])[0]
        stabs = np.arange(self.n, 2 * self.n)
        if self._anticommuting_rows(stabs, px, pz).any():
            return 0
        destab = np.flatnonzero(self._anticommuting_rows(np.arange(self.n), px, pz))
        _, _, sign = self._stabilizer_product(destab + self.n)
        return sign * pauli.phase

    # -- 큐비트 추가 -------------------------------------------
    def append_fresh_qubit(self) -> "StabilizerTableau":
        """|0⟩ 큐비트 하나를 끝에 추가 (in-place)."""
        n = self.n
        new_n = n + 1
        width = gf2.n_words(new_n)
        x = np.zeros((2 * new_n, width), dtype=np.uint64)
        z = np.zeros((2 * new_n, width), dtype=np.uint64)
        r = np.zeros(2 * new_n, dtype=np.uint8)
        old_width = self.x.shape[1]

        x[:n, :old_width] = self.x[:n]
        z[:n, :old_width] = self.z[:n]
        r[:n] = self.r[:n]
        x[new_n : new_n + n, :old_width] = self.x[n:]
        z[new_n : new_n + n, :old_width] = self.z[n:]
        r[new_n : new_n + n] = self.r[n:]

        self.n, self.x, self.z, self.r = new_n, x, z, r
        self._set_bit(self.x, n, n)              # destabilizer X_new
        self._set_bit(self.z, new_n + n, n)      # stabilizer Z_new
        return self

    # -- 불변식 ------------------------------------------------
    def check_invariants(self) -> None:
        """교환 관계, rank, destabilizer 짝 검증. 위반 시 ArgumentError."""
        n = self.n
        xs, zs = self.x, self.z
        overlap = (xs[:, None, :] & zs[None, :, :]) ^ (zs[:, None, :] & xs[None, :, :])
        sym = (np.bitwise_count(overlap).sum(axis=2) & 1).astype(np.uint8)
        expected = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        expected[np.arange(n), np.arange(n) + n] = 1
        expected[np.arange(n) + n, np.arange(n)] = 1
        if not np.array_equal(sym, expected):
            raise ArgumentError("stabilizer/destabilizer 교환 관계 위반")
        check = np.hstack([xs[n:], zs[n:]])
        if gf2.rank(check, check.shape[1] * gf2.WORD_BITS) != n:
            raise ArgumentError("stabilizer 생성원이 GF(2) 독립이 아님")

    def __repr__(self):
        return f"StabilizerTableau(n={self.n})"


def _scatter_bits(bits: np.ndarray, qubits: np.ndarray, width: int) -> np.ndarray:
    """(rows, k) 0/1 비트를 서로 다른 큐비트 위치의 워드 마스크로 모은다."""
    order = np.argsort(qubits, kind="stable")
    q = qubits[order]
    shifted = bits[:, order].astype(np.uint64) << (q & 63).astype(np.uint64)
    words, starts = np.unique(q >> 6, return_index=True)
    delta = np.zeros((bits.shape[0], width), dtype=np.uint64)
    # 큐비트가 모두 다르므로 같은 워드 안의 합 = OR
    delta[:, words] = np.add.reduceat(shifted, starts, axis=1)
    return delta


# ── 모듈 수준 operation ────────────────────────────────────────
def new_product_state(n: int) -> StabilizerTableau:
    """|0…0⟩. stabilizer i = +Z_i, destabilizer i = X_i."""
    if n < 1:
        raise InvalidSizeError(f"n ≥ 1 이어야 함: {n}")
    state = StabilizerTableau._empty(n)
    for i in range(n):
        state._set_bit(state.x, i, i)
        state._set_bit(state.z, n + i, i)
    return state


def new_bell_pairs(L: int) -> StabilizerTableau:
    """
    L개 Bell pair (시스템 i ↔ 환경 L+i).
    stabilizer 2i = X_i X_{L+i}, 2i+1 = Z_i Z_{L+i}; destabilizer Z_{L+i}, X_i.
    """
    if L < 1:
        raise InvalidSizeError(f"L ≥ 1 이어야 함: {L}")
    n = 2 * L
    state = StabilizerTableau._empty(n)
    for i in range(L):
        xx, zz = n + 2 * i, n + 2 * i + 1
        state._set_bit(state.x, xx, i)
        state._set_bit(state.x, xx, L + i)
        state._set_bit(state.z, zz, i)
        state._set_bit(state.z, zz, L + i)
        state._set_bit(state.z, 2 * i, L + i)
        state._set_bit(state.x, 2 * i + 1, i)
    return state


def apply_gate(state: StabilizerTableau, gate: CliffordGate, targets) -> StabilizerTableau:
    return state.apply_layer([gate], [list(np.atleast_1d(targets))])


def measure_pauli(state: StabilizerTableau, site: int, rng: np.random.Generator, basis: str = "Z") -> int:
    if basis != "Z":
        raise ArgumentError(f"지원하지 않는 측정 basis: {basis}")
    return state.measure(site, rng)


def append_fresh_qubit(state: StabilizerTableau) -> StabilizerTableau:
    return state.append_fresh_qubit()
