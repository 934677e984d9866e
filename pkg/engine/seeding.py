"""
seeding.py
역할: master seed 에서 realization 별 독립 난수 스트림을 만든다.

SeedSequence(entropy=master, spawn_key=(i, ...)) 는 master 와 카운터를 해시로 섞으므로
같은 (master, i) 는 호스트·worker 수와 무관하게 같은 스트림을 준다.
"""

import numpy as np

from engine.errors import ArgumentError


def _check_master(master_seed: int) -> int:
    master_seed = int(master_seed)
    if master_seed < 0:
        raise ArgumentError(f"master seed 는 0 이상: {master_seed}")
    return master_seed


def realization_seed(master_seed: int, index: int, *sub: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=_check_master(master_seed), spawn_key=(int(index), *map(int, sub)))


def realization_rng(master_seed: int, index: int, *sub: int) -> np.random.Generator:
    """realization index (와 선택적 하위 카운터) 의 PCG64 generator."""
    return np.random.default_rng(realization_seed(master_seed, index, *sub))
