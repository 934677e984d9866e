"""
gf2.py
역할: uint64 워드로 비트 패킹한 GF(2) 행렬 연산.

비트 배치:
  - 열 j는 워드 j >> 6 의 비트 j & 63 에 저장 (little-endian).
  - 한 행 = (W,) uint64, 행렬 = (rows, W) uint64.
  - 소거는 한 pivot 열마다 해당 비트를 가진 모든 행에 대해 한 번에 XOR: 행 단위 numpy 벡터화.
"""

import numpy as np

WORD_BITS = 64
ONE = np.uint64(1)

# 바이트 값 → 최상위/최하위 set bit 위치 (0이면 -1)
_BYTE_HIGH = np.array([int(v).bit_length() - 1 for v in range(256)], dtype=np.int64)
_BYTE_LOW = np.array([(v & -v).bit_length() - 1 for v in range(256)], dtype=np.int64)


def n_words(n_bits: int) -> int:
    """n_bits 개 열을 담는 데 필요한 워드 수."""
    return max(1, (n_bits + WORD_BITS - 1) // WORD_BITS)


def pack_bits(dense: np.ndarray) -> np.ndarray:
    """0/1 행렬 (rows, cols) → 비트 패킹 (rows, W) uint64."""
    dense = np.atleast_2d(np.asarray(dense, dtype=np.uint8) & 1)
    rows, cols = dense.shape
    width = n_words(cols)
    packed = np.packbits(dense, axis=1, bitorder="little")
    buf = np.zeros((rows, width * 8), dtype=np.uint8)
    buf[:, : packed.shape[1]] = packed
    return buf.view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, n_cols: int) -> np.ndarray:
    """비트 패킹 (rows, W) → 0/1 행렬 (rows, n_cols) uint8."""
    words = np.atleast_2d(np.ascontiguousarray(words, dtype="<u8"))
    as_bytes = words.view(np.uint8)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :n_cols]


def column_bits(words: np.ndarray, cols) -> np.ndarray:
    """지정 열들의 비트만 추출: (rows, len(cols)) uint8."""
    cols = np.asarray(cols, dtype=np.int64)
    shifts = (cols & (WORD_BITS - 1)).astype(np.uint64)
    return ((words[:, cols >> 6] >> shifts) & ONE).astype(np.uint8)


def highest_set_bit(words: np.ndarray) -> np.ndarray:
    """행마다 가장 높은 set bit의 열 번호. 영행(zero row)은 -1."""
    words = np.atleast_2d(np.ascontiguousarray(words, dtype="<u8"))
    as_bytes = words.view(np.uint8)
    nonzero = as_bytes != 0
    has_bit = nonzero.any(axis=1)
    last = as_bytes.shape[1] - 1 - np.argmax(nonzero[:, ::-1], axis=1)
    values = as_bytes[np.arange(as_bytes.shape[0]), last]
    return np.where(has_bit, last * 8 + _BYTE_HIGH[values], -1)


def lowest_set_bit(words: np.ndarray) -> np.ndarray:
    """행마다 가장 낮은 set bit의 열 번호. 영행은 -1."""
    words = np.atleast_2d(np.ascontiguousarray(words, dtype="<u8"))
    as_bytes = words.view(np.uint8)
    nonzero = as_bytes != 0
    has_bit = nonzero.any(axis=1)
    first = np.argmax(nonzero, axis=1)
    values = as_bytes[np.arange(as_bytes.shape[0]), first]
    return np.where(has_bit, first * 8 + _BYTE_LOW[values], -1)


def row_echelon(words: np.ndarray, n_cols: int) -> tuple[np.ndarray, list[int]]:
    """
    GF(2) 행 사다리꼴 (row echelon): 복사본에서 수행.

    Returns:
        (R, pivot_cols): R의 앞 len(pivot_cols) 행이 pivot 행이고,
        pivot 행 i의 최하위 set bit = pivot_cols[i].
    """
    R = np.array(words, dtype=np.uint64, copy=True)
    n_rows = R.shape[0]
    pivot_cols: list[int] = []
    rank = 0

    for col in range(n_cols):
        if rank == n_rows:
            break
        w = col >> 6
        column = (R[rank:, w] >> np.uint64(col & 63)) & ONE
        hits = np.flatnonzero(column)
        if hits.size == 0:
            continue

        pivot = rank + hits[0]
        if pivot != rank:
            R[[rank, pivot]] = R[[pivot, rank]]

        # hits[0]이 가장 작은 인덱스이므로 swap 후에도 나머지 hit 행의 위치는 그대로
        others = rank + hits[1:]
        if others.size:
            R[others, w:] ^= R[rank, w:]

        pivot_cols.append(col)
        rank += 1

    return R, pivot_cols


def rank(words: np.ndarray, n_cols: int) -> int:
    """GF(2) rank."""
    if words.shape[0] == 0 or n_cols == 0:
        return 0
    _, pivot_cols = row_echelon(words, n_cols)
    return len(pivot_cols)
