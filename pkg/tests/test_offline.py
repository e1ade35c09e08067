import numpy as np
import pytest

from gridfrechet.frechet import FreeSpaceMatrix
from gridfrechet.offline import (
    ChunkConfig,
    UpdateOp,
    offline_bruteforce,
    offline_grid_reachability,
)

from oracles import offline_answers


def test_examples_n3(backend):
    zeros = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    assert offline_grid_reachability(zeros, [((1, 1), 1)], backend=backend) == [False]
    ups = [((1, 1), 1), ((2, 2), 1), ((3, 3), 1)]
    assert offline_grid_reachability(zeros, ups, backend=backend) == [False, False, True]
    assert offline_bruteforce(zeros, ups) == [False, False, True]


def test_bruteforce_trivial_cases():
    ones = FreeSpaceMatrix(np.ones((2, 2), dtype=np.uint8))
    assert offline_bruteforce(ones, []) == []
    assert offline_bruteforce(ones, [((1, 1), 0)]) == [False]


def test_idempotent_update_changes_nothing(backend):
    rng = np.random.default_rng(83)
    bits = (rng.random((5, 5)) < 0.5).astype(np.uint8)
    m = FreeSpaceMatrix(bits)
    ups = []
    for _ in range(20):
        x, y = (int(v) for v in rng.integers(1, 6, size=2))
        ups.append(((x, y), int(rng.integers(0, 2))))
    base = offline_grid_reachability(m, ups, backend=backend)
    # re-setting any bit to its current value must not alter later answers
    k = int(rng.integers(0, len(ups)))
    cur = bits.copy()
    for (x, y), b in ups[:k]:
        cur[x - 1, y - 1] = b
    x, y = (int(v) for v in rng.integers(1, 6, size=2))
    noop = ((x, y), int(cur[x - 1, y - 1]))
    spliced = ups[:k] + [noop] + ups[k:]
    got = offline_grid_reachability(m, spliced, backend=backend)
    assert got[:k] == base[:k]
    assert got[k + 1 :] == base[k:]


def test_matches_per_prefix_oracle(backend):
    rng = np.random.default_rng(89)
    for trial in range(40):
        n = int(rng.choice([3, 5, 9]))
        bits = (rng.random((n, n)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
        u = int(rng.integers(1, 60))
        ups = [
            ((int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))), int(rng.integers(0, 2)))
            for _ in range(u)
        ]
        k = int(rng.integers(1, u + 1))
        got = offline_grid_reachability(
            FreeSpaceMatrix(bits), ups, ChunkConfig(k), backend=backend
        )
        expect = offline_answers(bits, ups)
        assert got == expect, (trial, n, k)
        assert offline_bruteforce(FreeSpaceMatrix(bits), ups) == expect
        assert len(got) == u


def test_answers_insensitive_to_chunk_size(backend):
    rng = np.random.default_rng(97)
    bits = (rng.random((5, 5)) < 0.4).astype(np.uint8)
    ups = [
        ((int(rng.integers(1, 6)), int(rng.integers(1, 6))), int(rng.integers(0, 2)))
        for _ in range(40)
    ]
    m = FreeSpaceMatrix(bits)
    base = offline_grid_reachability(m, ups, ChunkConfig(1), backend=backend)
    for k in (2, 3, 7, 40, 64):
        assert offline_grid_reachability(m, ups, ChunkConfig(k), backend=backend) == base


def test_query_prefixes_subset(backend):
    rng = np.random.default_rng(101)
    bits = (rng.random((5, 5)) < 0.5).astype(np.uint8)
    ups = [
        ((int(rng.integers(1, 6)), int(rng.integers(1, 6))), int(rng.integers(0, 2)))
        for _ in range(30)
    ]
    m = FreeSpaceMatrix(bits)
    full = offline_grid_reachability(m, ups, ChunkConfig(4), backend=backend)
    wanted = [1, 7, 8, 15, 30]
    sub = offline_grid_reachability(m, ups, ChunkConfig(4), backend=backend, query_prefixes=wanted)
    assert sub == [full[i - 1] for i in wanted]


def test_update_validation():
    m = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        offline_grid_reachability(m, [((0, 1), 1)])
    with pytest.raises(ValueError):
        offline_grid_reachability(m, [((1, 4), 1)])
    with pytest.raises(ValueError):
        offline_grid_reachability(m, [UpdateOp((1, 1), 2)])
    with pytest.raises(ValueError):
        ChunkConfig(0)


def test_empty_update_list(backend):
    m = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    assert offline_grid_reachability(m, [], backend=backend) == []
