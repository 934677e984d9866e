"""
test_stabilizer.py
역할: stabilizer tableau 를 작은 n 의 상태벡터 시뮬레이션과 비교해 검증.
      H / S / CNOT 는 행렬이 알려져 있으므로 같은 회로를 두 방식으로 돌리고,
      측정 결과는 tableau 가 고른 값으로 상태벡터를 사영한다.
"""

import itertools

import numpy as np
import pytest
from scipy import stats

from engine.errors import ArgumentError, InvalidSizeError, QubitIndexError
from engine.stabilizer import (
    CliffordGate,
    PauliString,
    apply_gate,
    clifford_from_index,
    measure_pauli,
    new_bell_pairs,
    new_product_state,
    sample_two_qubit_clifford,
    symplectic_from_index,
    symplectic_group_order,
)

_I = np.eye(2, dtype=complex)
_PAULI = {
    (0, 0): _I,
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])


# ── 상태벡터 헬퍼 (큐비트 0 = kron 의 가장 왼쪽) ─────────────────

def dense_pauli(pauli: PauliString) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for x, z in zip(pauli.x_bits, pauli.z_bits):
        out = np.kron(out, _PAULI[(int(x), int(z))])
    return pauli.phase * out


def single(n: int, q: int, gate: np.ndarray) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for k in range(n):
        out = np.kron(out, gate if k == q else _I)
    return out


def cnot(n: int, control: int, target: int) -> np.ndarray:
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        c = (b >> (n - 1 - control)) & 1
        out[b ^ (c << (n - 1 - target)), b] = 1
    return out


def z_projector(n: int, q: int, outcome: int) -> np.ndarray:
    return (np.eye(1 << n) + outcome * single(n, q, _PAULI[(0, 1)])) / 2


def dense_clifford(gate: CliffordGate) -> np.ndarray:
    """
    images 로부터 유니터리 복원 (전역 위상 제외).
    U|0…0⟩ 는 Z 이미지들의 공통 +1 고유벡터, U|b⟩ = ∏ (X_j 이미지)^b_j · U|0…0⟩.
    """
    k = gate.arity
    dim = 1 << k
    projector = np.eye(dim, dtype=complex)
    for j in range(k):
        projector = projector @ (np.eye(dim) + dense_pauli(gate.images[2 * j + 1])) / 2
    v0 = projector[:, np.argmax(np.linalg.norm(projector, axis=0))]
    v0 = v0 / np.linalg.norm(v0)
    out = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        col = v0
        for j in range(k):
            if (b >> (k - 1 - j)) & 1:
                col = dense_pauli(gate.images[2 * j]) @ col
        out[:, b] = col
    return out


def embed(n: int, unitary: np.ndarray, targets) -> np.ndarray:
    """targets 큐비트(순서대로 게이트의 1, 2번)에 작용하는 n 큐비트 행렬."""
    k = len(targets)
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        s = 0
        rest = col
        for j, q in enumerate(targets):
            bit = (col >> (n - 1 - q)) & 1
            s |= bit << (k - 1 - j)
            rest &= ~(1 << (n - 1 - q))
        for s2 in range(1 << k):
            row = rest
            for j, q in enumerate(targets):
                row |= ((s2 >> (k - 1 - j)) & 1) << (n - 1 - q)
            out[row, col] += unitary[s2, s]
    return out


def run_both(n: int, seed: int, steps: int = 40):
    """같은 랜덤 H/S/CNOT/측정 회로를 tableau 와 상태벡터에 적용."""
    rng = np.random.default_rng(seed)
    state = new_product_state(n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1

    for _ in range(steps):
        op = rng.integers(4)
        if op == 0:
            q = int(rng.integers(n))
            apply_gate(state, CliffordGate.hadamard(), q)
            psi = single(n, q, _H) @ psi
        elif op == 1:
            q = int(rng.integers(n))
            apply_gate(state, CliffordGate.phase(), q)
            psi = single(n, q, _S) @ psi
        elif op == 2:
            c, t = (int(v) for v in rng.choice(n, size=2, replace=False))
            apply_gate(state, CliffordGate.cnot(), [c, t])
            psi = cnot(n, c, t) @ psi
        else:
            q = int(rng.integers(n))
            outcome = measure_pauli(state, q, rng)
            psi = z_projector(n, q, outcome) @ psi
            norm = np.linalg.norm(psi)
            # tableau 가 고른 결과는 상태벡터에서도 확률이 0 이 아니어야 함
            assert norm > 1e-9
            psi = psi / norm
    return state, psi


# ── PauliString ────────────────────────────────────────────────

def test_pauli_label_roundtrip():
    assert PauliString.from_label("-XZIY").label() == "-XZIY"
    assert PauliString.from_label("zz").label() == "+ZZ"


def test_pauli_product_tracks_sign():
    """X·Z = −iY 이므로 XX·ZZ = −YY."""
    product = PauliString.from_label("XX") * PauliString.from_label("ZZ")
    assert product.label() == "-YY"


def test_pauli_anticommuting_product_rejected():
    with pytest.raises(ArgumentError):
        PauliString.from_label("X") * PauliString.from_label("Z")


@pytest.mark.parametrize("label", ["", "+", "XQ"])
def test_pauli_bad_label(label):
    with pytest.raises(ArgumentError):
        PauliString.from_label(label)


# ── 2큐비트 Clifford 열거 ──────────────────────────────────────

def test_symplectic_enumeration_is_complete():
    """인덱스 0..719 가 서로 다른 심플렉틱 행렬 720개를 만든다."""
    assert symplectic_group_order(2) == 720
    omega = np.kron(np.eye(2, dtype=int), np.array([[0, 1], [1, 0]]))
    seen = set()
    for index in range(720):
        g = symplectic_from_index(index, 2).astype(int)
        assert np.array_equal((g @ omega @ g.T) % 2, omega)
        seen.add(g.tobytes())
    assert len(seen) == 720


def test_all_gate_indices_are_distinct():
    """(심플렉틱 720) × (부호 16) = 11520 개 게이트의 이미지가 모두 다르다."""
    seen = {
        tuple(img.label() for img in clifford_from_index(index, signs).images)
        for index in range(720)
        for signs in range(16)
    }
    assert len(seen) == 720 * 16


def test_sampled_gates_are_uniform():
    """심플렉틱 인덱스 720 칸, 부호 16 칸 모두 χ² 검정 통과."""
    lookup = {
        tuple(img.label() for img in clifford_from_index(index, signs).images): (index, signs)
        for index in range(720)
        for signs in range(16)
    }
    rng = np.random.default_rng(2024)
    draws = 72_000
    index_counts = np.zeros(720, dtype=int)
    sign_counts = np.zeros(16, dtype=int)
    for _ in range(draws):
        index, signs = lookup[tuple(img.label() for img in sample_two_qubit_clifford(rng).images)]
        index_counts[index] += 1
        sign_counts[signs] += 1
    assert stats.chisquare(index_counts).pvalue > 1e-4
    assert stats.chisquare(sign_counts).pvalue > 1e-4


def test_sampling_is_deterministic_under_seed():
    def draw(seed):
        rng = np.random.default_rng(seed)
        return [tuple(img.label() for img in sample_two_qubit_clifford(rng).images) for _ in range(50)]

    assert draw(11) == draw(11)
    assert draw(11) != draw(12)


@pytest.mark.parametrize("index, signs", [(0, 0), (1, 3), (200, 8), (719, 15)])
def test_dense_clifford_reproduces_images(index, signs):
    """테스트 헬퍼 점검: U P U† 가 게이트 이미지와 일치."""
    gate = clifford_from_index(index, signs)
    U = dense_clifford(gate)
    assert np.allclose(U.conj().T @ U, np.eye(4), atol=1e-12)
    for generator, image in zip(("XI", "ZI", "IX", "IZ"), gate.images):
        conjugated = U @ dense_pauli(PauliString.from_label(generator)) @ U.conj().T
        assert np.allclose(conjugated, dense_pauli(image), atol=1e-12)


def test_random_gate_conjugates_product_state():
    """|00⟩ 의 stabilizer Z1, Z2 는 게이트 이미지 그대로 바뀐다."""
    for index, signs in [(0, 0), (17, 5), (431, 15), (719, 9)]:
        gate = clifford_from_index(index, signs)
        state = new_product_state(2)
        apply_gate(state, gate, [0, 1])
        assert state.generators() == [gate.images[1], gate.images[3]]
        state.check_invariants()


# ── tableau vs 상태벡터 ────────────────────────────────────────

@pytest.mark.parametrize("seed", range(6))
def test_tableau_matches_statevector(seed):
    n = 4
    state, psi = run_both(n, seed)
    state.check_invariants()
    for g in state.generators():
        assert np.allclose(dense_pauli(g) @ psi, psi, atol=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_random_gate_layers_match_statevector(seed):
    """게이트 여러 개를 한 apply_layer 로 적용한 결과가 상태벡터 회로와 같다."""
    n = 5
    state, psi = run_both(n, seed, steps=20)
    rng = np.random.default_rng(100 + seed)
    for _ in range(4):
        perm = [int(q) for q in rng.permutation(n)]
        pairs = [perm[0:2], perm[2:4]]
        gates = [clifford_from_index(int(rng.integers(720)), int(rng.integers(16))) for _ in pairs]
        state.apply_layer(gates, pairs)
        for gate, pair in zip(gates, pairs):
            psi = embed(n, dense_clifford(gate), pair) @ psi
        q = int(rng.integers(n))
        outcome = state.measure(q, rng)
        psi = z_projector(n, q, outcome) @ psi
        assert np.linalg.norm(psi) > 1e-9
        psi = psi / np.linalg.norm(psi)

    state.check_invariants()
    for g in state.generators():
        assert np.allclose(dense_pauli(g) @ psi, psi, atol=1e-9)


@pytest.mark.parametrize("seed", range(3))
def test_expectation_matches_statevector(seed):
    n = 3
    state, psi = run_both(n, seed)
    for letters in itertools.product("IXYZ", repeat=n):
        pauli = PauliString.from_label("".join(letters))
        expected = np.vdot(psi, dense_pauli(pauli) @ psi).real
        assert state.expectation(pauli) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_born_rule_frequencies(seed):
    """측정 확률은 상태벡터의 Born 확률 (0, 1/2, 1) 과 맞는다."""
    n, shots = 3, 400
    state, psi = run_both(n, seed)
    rng = np.random.default_rng(seed)
    for q in range(n):
        prob_plus = float(np.linalg.norm(z_projector(n, q, 1) @ psi) ** 2)
        plus = sum(state.copy().measure(q, rng) == 1 for _ in range(shots))
        if prob_plus == pytest.approx(0.5, abs=1e-9):
            assert stats.binomtest(plus, shots, 0.5).pvalue > 1e-4
        else:
            assert plus == round(prob_plus) * shots


@pytest.mark.parametrize("environment_first", [False, True])
def test_bell_pair_outcomes_agree(environment_first):
    """시스템 i 와 환경 L+i 측정값은 항상 같고, 각각은 공정한 동전."""
    L, trials = 3, 500
    rng = np.random.default_rng(5)
    ones = 0
    for _ in range(trials):
        state = new_bell_pairs(L)
        for i in range(L):
            first, second = (L + i, i) if environment_first else (i, L + i)
            a = state.measure(first, rng)
            assert state.measure(second, rng) == a
            ones += a == -1
    assert stats.binomtest(ones, trials * L, 0.5).pvalue > 1e-4


def test_measurement_outcome_is_stable():
    """같은 사이트를 다시 측정하면 결정적으로 같은 값."""
    rng = np.random.default_rng(3)
    state = new_product_state(2)
    apply_gate(state, CliffordGate.hadamard(), 0)
    first = state.measure(0, rng)
    assert all(state.measure(0, rng) == first for _ in range(5))
    assert state.expectation(PauliString.from_label("ZI")) == first


# ── 초기 상태 / 큐비트 추가 ────────────────────────────────────

def test_bell_pairs_stabilizers():
    state = new_bell_pairs(2)
    assert state.expectation(PauliString.from_label("XIXI")) == 1
    assert state.expectation(PauliString.from_label("IZIZ")) == 1
    assert state.expectation(PauliString.from_label("ZIII")) == 0
    state.check_invariants()


def test_append_fresh_qubit():
    state = new_bell_pairs(1)
    state.append_fresh_qubit()
    assert state.n == 3
    assert state.expectation(PauliString.from_label("IIZ")) == 1
    assert state.expectation(PauliString.from_label("XXI")) == 1
    state.check_invariants()


def test_append_crosses_word_boundary():
    """64 큐비트 → 65 큐비트: 워드 수가 늘어나도 기존 stabilizer 유지."""
    state = new_product_state(64)
    apply_gate(state, CliffordGate.hadamard(), 63)
    state.append_fresh_qubit()
    apply_gate(state, CliffordGate.cnot(), [63, 64])
    label = ["I"] * 65
    label[63] = label[64] = "X"
    assert state.expectation(PauliString.from_label("".join(label))) == 1
    state.check_invariants()


# ── 에러 처리 ──────────────────────────────────────────────────

def test_invalid_sizes():
    with pytest.raises(InvalidSizeError):
        new_product_state(0)
    with pytest.raises(InvalidSizeError):
        new_bell_pairs(0)


def test_bad_targets():
    state = new_product_state(3)
    with pytest.raises(QubitIndexError):
        apply_gate(state, CliffordGate.cnot(), [1, 1])
    with pytest.raises(QubitIndexError):
        apply_gate(state, CliffordGate.hadamard(), 3)
    with pytest.raises(QubitIndexError):
        state.measure(-1, np.random.default_rng(0))


def test_only_z_basis_measurement():
    with pytest.raises(ArgumentError):
        measure_pauli(new_product_state(1), 0, np.random.default_rng(0), basis="X")
