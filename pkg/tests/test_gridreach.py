"""Grid reachability structure vs brute-force reach/overlay oracles."""

import numpy as np
import pytest

from gridfrechet.frechet import FreeSpaceMatrix
from gridfrechet.gridreach import (
    GridPosition,
    ReachDS,
    build_block_tree,
    construct_ds,
    pad_matrix,
    position_keys,
    reach_query,
    update_ds,
)
from gridfrechet.gridreach.reference import ReferenceEngine, base_block_info, merge_block_info

from oracles import chain_closure, overlay_path_exists, reach_set_in_rect, reaches_in_rect

INF = float("inf")


def rect_of(blk):
    return (blk.i0, blk.i1, blk.j0, blk.j1)


def random_terminals(rng, n, count):
    pts = {(int(x), int(y)) for x, y in rng.integers(1, n + 1, size=(count, 2))}
    return pts


# ---------------------------------------------------------------- leaves


def test_leaf_all_free_covers_every_output():
    m = FreeSpaceMatrix(np.ones((3, 3), dtype=np.uint8))
    leaf = build_block_tree(3)[3]  # some 2x2 leaf
    info = base_block_info(leaf, m)
    p = leaf.inputs()[1]  # the (i0, j0) corner sits at rank 1
    outs = [q for q in leaf.outputs() if reaches_in_rect(m.bits, rect_of(leaf), p, q)]
    inds = [position_keys(q, 3)[0] for q in outs]
    assert info.fwd_interval[p] == (min(inds), max(inds))
    assert len(outs) == 3


def test_leaf_all_blocked_keeps_diagonal_step():
    m = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    leaf = build_block_tree(3)[3]
    corner = GridPosition(leaf.i0, leaf.j0)
    far = GridPosition(leaf.i1, leaf.j1)
    assert reaches_in_rect(m.bits, rect_of(leaf), corner, far)
    info = base_block_info(leaf, m)
    a, z = info.fwd_interval[corner]
    assert a <= position_keys(far, 3)[0] <= z


def test_leaf_self_reach():
    m = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    for leaf in (b for b in build_block_tree(3) if b.is_leaf):
        info = base_block_info(leaf, m)
        for p in leaf.inputs():
            if p in set(leaf.outputs()):
                a, z = info.fwd_interval[p]
                assert a <= position_keys(p, 3)[0] <= z


def test_leaf_matches_reach_oracle_random():
    rng = np.random.default_rng(47)
    tree = build_block_tree(5)
    for _ in range(100):
        bits = (rng.random((5, 5)) < 0.5).astype(np.uint8)
        m = FreeSpaceMatrix(bits)
        leaf = tree[int(rng.integers(15, 31))]
        terminals = {GridPosition(int(x), int(y)) for x, y in
                     rng.integers(0, 2, size=(2, 2)) + [[leaf.i0, leaf.j0]]}
        info = base_block_info(leaf, m, terminals)
        for p in list(leaf.inputs()) + sorted(terminals):
            reach = reach_set_in_rect(bits, rect_of(leaf), p)
            inds = [position_keys(q, 5)[0] for q in leaf.outputs() if tuple(q) in reach]
            expect = (min(inds), max(inds)) if inds else (INF, -INF)
            assert info.fwd_interval[p] == expect


# ---------------------------------------------------------------- merges


def build_info_tree(m, terminals=()):
    eng = ReferenceEngine(m.bits, terminals)
    return eng


def test_root_merge_examples_n3():
    ones = FreeSpaceMatrix(np.ones((3, 3), dtype=np.uint8))
    eng = build_info_tree(ones)
    assert eng.info[0].fwd_interval[GridPosition(1, 1)] == (-9, 13)

    zeros = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    eng = build_info_tree(zeros)
    assert eng.info[0].fwd_interval[GridPosition(1, 1)] == (INF, -INF)
    assert eng.info[0].fwd_level[GridPosition(3, 3)] == 4


def test_merge_rejects_mismatched_children():
    m = FreeSpaceMatrix(np.ones((5, 5), dtype=np.uint8))
    eng = build_info_tree(m)
    tree = build_block_tree(5)
    with pytest.raises(ValueError):
        merge_block_info(tree[0], eng.info[3], eng.info[4], m)


def characterization_holds(eng, bits, n):
    """Cor 4.6 / 4.7: interval membership + level threshold == brute reach."""
    for b, blk in enumerate(eng.blocks):
        info = eng.info[b]
        rect = rect_of(blk)
        sources = set(blk.inputs()) | eng.block_terminals[b]
        outs = blk.outputs()
        for p in sources:
            reach = reach_set_in_rect(bits, rect, p)
            a, z = info.fwd_interval[p]
            for q in outs:
                ind_q, _, _ = position_keys(q, n)
                lhs = tuple(q) in reach
                rhs = (a <= ind_q <= z) and (info.fwd_level[q] <= position_keys(p, n)[1])
                if lhs != rhs:
                    return False, (b, p, q, "fwd")
        targets = set(outs) | eng.block_terminals[b]
        ins = blk.inputs()
        rev_reach = {p: reach_set_in_rect(bits, rect, p) for p in ins}
        for q in targets:
            a, z = info.rev_interval[q]
            for p in ins:
                ind_p, _, _ = position_keys(p, n)
                lhs = tuple(q) in rev_reach[p]
                rhs = (a <= ind_p <= z) and (info.rev_level[p] <= position_keys(q, n)[2])
                if lhs != rhs:
                    return False, (b, p, q, "rev")
    return True, None


def test_characterization_random_small():
    rng = np.random.default_rng(53)
    for trial in range(60):
        n = int(rng.choice([3, 5]))
        bits = (rng.random((n, n)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
        terminals = random_terminals(rng, n, int(rng.integers(0, 4)))
        eng = ReferenceEngine(bits, terminals)
        ok, witness = characterization_holds(eng, bits, n)
        assert ok, f"trial {trial}: {witness}"


# ---------------------------------------------------------------- queries


def test_construct_examples(backend):
    ones = pad_matrix(FreeSpaceMatrix(np.ones((5, 5), dtype=np.uint8)))
    t = {(1, 1), (5, 5)}
    ds = construct_ds(ones, t, backend=backend)
    assert reach_query(ds, {(1, 1), (5, 5)})

    zeros = pad_matrix(FreeSpaceMatrix(np.zeros((5, 5), dtype=np.uint8)))
    ds = construct_ds(zeros, t, backend=backend)
    assert not reach_query(ds, {(1, 1), (5, 5)})

    diag = pad_matrix(FreeSpaceMatrix(np.eye(5, dtype=np.uint8)))
    ds = construct_ds(diag, t, backend=backend)
    assert reach_query(ds, {(1, 1), (5, 5)})


def test_reach_query_terminal_hopping(backend):
    zeros = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    ds = construct_ds(zeros, {(1, 1), (2, 2), (3, 3)}, backend=backend)
    assert not reach_query(ds, {(1, 1), (3, 3)})
    assert reach_query(ds, {(1, 1), (2, 2), (3, 3)})


def test_reach_query_rejects_non_terminal(backend):
    zeros = FreeSpaceMatrix(np.zeros((3, 3), dtype=np.uint8))
    ds = construct_ds(zeros, {(1, 1)}, backend=backend)
    with pytest.raises(ValueError):
        reach_query(ds, {(2, 2)})


def test_reach_query_against_overlay_oracle(backend):
    rng = np.random.default_rng(59)
    for trial in range(150):
        n = int(rng.choice([3, 5, 9]))
        bits = (rng.random((n, n)) < rng.uniform(0.2, 0.8)).astype(np.uint8)
        terminals = random_terminals(rng, n, int(rng.integers(0, 7))) | {(1, 1), (n, n)}
        for t in terminals:
            bits[t[0] - 1, t[1] - 1] = 0
        ds = construct_ds(FreeSpaceMatrix(bits), terminals, backend=backend)
        for _ in range(4):
            f = {t for t in terminals if rng.random() < 0.5}
            expect = overlay_path_exists(bits, f)
            assert reach_query(ds, f) == expect, (trial, n, sorted(terminals), sorted(f))


def test_reach_operation_against_chain_oracle():
    rng = np.random.default_rng(61)
    for trial in range(60):
        n = 9
        bits = (rng.random((n, n)) < rng.uniform(0.25, 0.75)).astype(np.uint8)
        terminals = random_terminals(rng, n, 6) | {(1, 1), (n, n)}
        eng = ReferenceEngine(bits, terminals)
        f = {t for t in eng.terminals if rng.random() < 0.7}
        s = {t for t in f if rng.random() < 0.4}
        if not s and f:
            s = {next(iter(f))}
        got = eng.reach(0, s, f)
        expect = chain_closure(bits, (1, n, 1, n), s, f)
        assert got == expect, (trial, sorted(s), sorted(f))


def test_reach_empty_f_and_singleton():
    bits = np.zeros((5, 5), dtype=np.uint8)
    eng = ReferenceEngine(bits, {(3, 3)})
    assert eng.reach(0, set(), set()) == set()
    assert eng.reach(0, {(3, 3)}, {(3, 3)}) == {(3, 3)}


def test_single_step_reach_against_oracle():
    rng = np.random.default_rng(67)
    n = 9
    tree = build_block_tree(n)
    for trial in range(80):
        bits = (rng.random((n, n)) < rng.uniform(0.3, 0.8)).astype(np.uint8)
        blk = tree[0]
        mid = set(blk.mid_positions())
        lo_b, hi_b = tree[1], tree[2]
        s_cand = [p for p in {(int(a), int(b)) for a, b in rng.integers(1, n + 1, size=(4, 2))}
                  if lo_b.contains(p) and p not in mid]
        f_cand = [p for p in {(int(a), int(b)) for a, b in rng.integers(1, n + 1, size=(4, 2))}
                  if hi_b.contains(p) and p not in mid]
        if not s_cand or not f_cand:
            continue
        eng = ReferenceEngine(bits, set(s_cand) | set(f_cand))
        got = eng.single_step_reach(0, set(s_cand), set(f_cand))
        expect = set()
        for t in f_cand:
            for s in s_cand:
                reach = reach_set_in_rect(bits, rect_of(blk), s)
                if tuple(t) in reach:
                    expect.add(GridPosition(*t))
                    break
        assert got == expect, (trial, s_cand, f_cand)


def test_single_step_reach_trivial_cases():
    bits = np.zeros((5, 5), dtype=np.uint8)
    eng = ReferenceEngine(bits, {(1, 2), (4, 5)})
    assert eng.single_step_reach(0, set(), {(4, 5)}) == set()
    # fully blocked splitting boundary: no crossing possible beyond one step
    assert eng.info[0].mid_free == []
    assert eng.single_step_reach(0, {(1, 2)}, {(4, 5)}) == set()


# ---------------------------------------------------------------- updates


def summaries_equal(ds_a, ds_b):
    for b in range(len(build_block_tree(ds_a.n))):
        if ds_a.block_summary(b) != ds_b.block_summary(b):
            return False
    return True


def test_update_matches_fresh_construct(backend):
    rng = np.random.default_rng(71)
    for trial in range(40):
        n = int(rng.choice([5, 9]))
        bits = (rng.random((n, n)) < 0.5).astype(np.uint8)
        t0 = random_terminals(rng, n, 3) | {(1, 1), (n, n)}
        ds = construct_ds(FreeSpaceMatrix(bits), t0, backend=backend)
        cur = bits.copy()
        for _step in range(3):
            flips = {(int(x), int(y)) for x, y in rng.integers(1, n + 1, size=(int(rng.integers(1, 11)), 2))}
            delta = []
            for x, y in flips:
                nb = 1 - int(cur[x - 1, y - 1])
                cur[x - 1, y - 1] = nb
                delta.append(((x, y), nb))
            t_new = random_terminals(rng, n, 3) | {(1, 1), (n, n)}
            update_ds(ds, delta, t_new)
            fresh = construct_ds(FreeSpaceMatrix(cur), t_new, backend=backend)
            assert summaries_equal(ds, fresh), trial
            f = {t for t in t_new if rng.random() < 0.5} | {(1, 1)}
            assert reach_query(ds, f) == reach_query(fresh, f)


def test_update_noop_keeps_summaries(backend):
    bits = (np.random.default_rng(73).random((9, 9)) < 0.5).astype(np.uint8)
    t = {(1, 1), (9, 9), (4, 5)}
    ds = construct_ds(FreeSpaceMatrix(bits), t, backend=backend)
    before = [ds.block_summary(b) for b in range(7)]
    update_ds(ds, [], t)
    after = [ds.block_summary(b) for b in range(7)]
    assert before == after


def test_update_far_block_untouched_pure():
    # flipping one bit far away must not rebuild an unrelated block's info
    bits = np.zeros((9, 9), dtype=np.uint8)
    eng = ReferenceEngine(bits, {(1, 1), (9, 9)})
    tree = build_block_tree(9)
    far = next(
        b for b, blk in enumerate(tree)
        if blk.is_leaf and not blk.contains((2, 2))
        and not blk.contains((1, 1)) and not blk.contains((9, 9))
    )
    before = eng.info[far]
    eng.update([((2, 2), 1)], {(1, 1), (9, 9)})
    assert eng.info[far] is before


def test_update_dirty_count_bound(backend):
    rng = np.random.default_rng(79)
    for _ in range(20):
        n = 17
        bits = (rng.random((n, n)) < 0.5).astype(np.uint8)
        t0 = random_terminals(rng, n, 4) | {(1, 1), (n, n)}
        ds = construct_ds(FreeSpaceMatrix(bits), t0, backend=backend)
        flips = {(int(x), int(y)) for x, y in rng.integers(1, n + 1, size=(6, 2))}
        t1 = random_terminals(rng, n, 4) | {(1, 1), (n, n)}
        cur = ds.matrix_bits.copy()
        delta = []
        for x, y in flips:
            nb = 1 - int(cur[x - 1, y - 1])
            delta.append(((x, y), nb))
        update_ds(ds, delta, t1)
        x_size = len(flips | t0 | t1)
        by_level = ds.dirty_by_level()
        kappa = (n - 1).bit_length() - 1
        for lv, cnt in by_level.items():
            assert cnt <= min(2**lv, 4 * x_size)
        assert ds.last_dirty_count <= sum(min(2**lv, 4 * x_size) for lv in range(2 * kappa + 1))
