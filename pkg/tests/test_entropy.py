"""
test_entropy.py
역할: 부분계 엔트로피를 상태벡터 Schmidt rank 와 비교하고,
      clipped gauge 구간 조회가 임의 부분집합 계산과 일치하는지 검증.
"""

import numpy as np
import pytest

from engine import gf2
from engine.entropy import LN2, clip_gauge, entropy_subset, mutual_information
from engine.errors import ArgumentError, QubitIndexError
from engine.stabilizer import clifford_from_index, new_bell_pairs, new_product_state
from tests.test_stabilizer import run_both


def schmidt_bits(psi: np.ndarray, n: int, subset) -> int:
    """|ψ⟩ 를 A | Ā 로 나눈 Schmidt rank 의 log2."""
    subset = sorted(subset)
    rest = [q for q in range(n) if q not in subset]
    matrix = psi.reshape([2] * n).transpose(subset + rest).reshape(1 << len(subset), -1)
    singular = np.linalg.svd(matrix, compute_uv=False)
    count = int(np.sum(singular > 1e-8))
    return int(round(np.log2(count)))


def random_state(n: int, seed: int, layers: int = 6):
    """brickwork 랜덤 2큐비트 Clifford + 가끔 측정 (상태벡터 없이)."""
    rng = np.random.default_rng(seed)
    state = new_product_state(n)
    for layer in range(layers):
        pairs = [(i, i + 1) for i in range(layer % 2, n - 1, 2)]
        gates = [clifford_from_index(int(rng.integers(720)), int(rng.integers(16))) for _ in pairs]
        state.apply_layer(gates, pairs)
        for q in range(n):
            if rng.random() < 0.15:
                state.measure(q, rng)
    return state


# ── gf2 ──────────────────────────────────────────────────────

def test_gf2_rank_small():
    dense = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]], dtype=np.uint8)
    assert gf2.rank(gf2.pack_bits(dense), 3) == 2
    assert gf2.rank(gf2.pack_bits(np.eye(70, dtype=np.uint8)), 70) == 70


def test_gf2_pack_unpack():
    dense = (np.random.default_rng(0).random((5, 130)) < 0.5).astype(np.uint8)
    assert np.array_equal(gf2.unpack_bits(gf2.pack_bits(dense), 130), dense)


# ── 엔트로피 oracle ───────────────────────────────────────────

@pytest.mark.parametrize("seed", range(5))
def test_entropy_matches_schmidt_rank(seed):
    n = 5
    state, psi = run_both(n, seed, steps=60)
    for mask in range(1, 1 << n):
        subset = [q for q in range(n) if (mask >> q) & 1]
        assert entropy_subset(state, subset).bits == schmidt_bits(psi, n, subset)


def test_entropy_value_units():
    value = entropy_subset(new_bell_pairs(3), [0, 1, 2])
    assert value.bits == 3
    assert value.nats == pytest.approx(3 * LN2)


def test_product_state_has_no_entropy():
    state = new_product_state(4)
    assert entropy_subset(state, [0, 2]).bits == 0
    assert entropy_subset(state, []).bits == 0


def test_mutual_information_bell_pair():
    """시스템 0 과 환경 3 은 Bell 쌍 → I = 2 비트."""
    state = new_bell_pairs(3)
    assert mutual_information(state, [0], [3]).bits == 2
    assert mutual_information(state, [0], [4]).bits == 0


def test_mutual_information_overlap_rejected():
    with pytest.raises(ArgumentError):
        mutual_information(new_product_state(3), [0, 1], [1, 2])


def test_subset_out_of_range():
    with pytest.raises(QubitIndexError):
        entropy_subset(new_product_state(3), [3])


# ── clipped gauge ─────────────────────────────────────────────

@pytest.mark.parametrize("seed", range(8))
def test_clipped_intervals_match_subsets(seed):
    n = 12
    state = random_state(n, seed)
    clipped = clip_gauge(state)
    for a in range(n):
        for b in range(a, n):
            expected = entropy_subset(state, range(a, b + 1)).bits
            assert clipped.interval_bits(a, b) == expected
            assert clipped.crossing_bits(a, b) == expected


@pytest.mark.parametrize("seed", range(4))
def test_clipped_with_permuted_order(seed):
    """ordering 을 바꾸면 구간은 ordering 위치 기준."""
    n = 10
    state = random_state(n, seed)
    order = np.random.default_rng(100 + seed).permutation(n)
    clipped = clip_gauge(state, order)
    for a in range(n):
        for b in range(a, n):
            assert clipped.interval_bits(a, b) == entropy_subset(state, order[a : b + 1]).bits


def test_segment_bits_wraps_around():
    """start > stop 인 반열린 구간은 여집합과 같은 값."""
    state = random_state(8, 11)
    clipped = clip_gauge(state)
    assert clipped.segment_bits(6, 2) == entropy_subset(state, [6, 7, 0, 1]).bits
    assert clipped.segment_bits(3, 3) == 0


def test_clip_gauge_rejects_bad_order():
    with pytest.raises(ArgumentError):
        clip_gauge(new_product_state(3), [0, 0, 1])
