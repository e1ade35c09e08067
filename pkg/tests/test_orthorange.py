import math

import numpy as np
import pytest

from gridfrechet.orthorange import (
    DecrementalReporter,
    KeyedEntry,
    build_minmax,
    range_max,
    range_min,
    report_and_delete,
)

INF = math.inf


def scan_min(entries, box):
    vals = [v for k, v in entries if all(lo <= c <= hi for c, (lo, hi) in zip(k, box))]
    return min(vals) if vals else INF


def scan_max(entries, box):
    vals = [v for k, v in entries if all(lo <= c <= hi for c, (lo, hi) in zip(k, box))]
    return max(vals) if vals else -INF


def test_empty_index_conventions():
    ix = build_minmax([])
    assert range_min(ix, ((-INF, INF), (-INF, INF))) == INF
    assert range_max(ix, ((-INF, INF), (-INF, INF))) == -INF


def test_single_entry():
    ix = build_minmax([((1, 1), 5)])
    assert range_min(ix, ((0, 2), (0, 2))) == 5
    assert range_max(ix, ((0, 2), (0, 2))) == 5
    assert range_min(ix, ((2, 3), (0, 2))) == INF
    assert range_min(ix, ((1, 1), (1, 1))) == 5


def test_half_open_box():
    ix = build_minmax([((1, 1), 5), ((2, 3), 2)])
    assert range_min(ix, ((2, INF), (-INF, INF))) == 2


def test_min_max_against_scan():
    rng = np.random.default_rng(23)
    for _ in range(60):
        m = int(rng.integers(0, 60))
        entries = [
            (tuple(rng.integers(-20, 20, size=2)), int(rng.integers(-100, 100))) for _ in range(m)
        ]
        ix = build_minmax(entries)
        for _ in range(30):
            lo1, hi1 = sorted(rng.integers(-25, 25, size=2))
            lo2, hi2 = sorted(rng.integers(-25, 25, size=2))
            box = [
                (float(lo1), float(hi1)),
                (float(lo2), float(hi2)),
            ]
            # exercise every open/closed combination of bounds
            for d in range(2):
                if rng.random() < 0.3:
                    box[d] = (-INF, box[d][1])
                if rng.random() < 0.3:
                    box[d] = (box[d][0], INF)
            box = tuple(box)
            assert range_min(ix, box) == scan_min(entries, box)
            assert range_max(ix, box) == scan_max(entries, box)


def test_large_random_min_matches_scan():
    rng = np.random.default_rng(29)
    entries = [
        (tuple(rng.integers(-1000, 1000, size=2)), int(rng.integers(-10**6, 10**6)))
        for _ in range(1000)
    ]
    ix = build_minmax(entries)
    for _ in range(200):
        lo1, hi1 = sorted(rng.integers(-1100, 1100, size=2))
        lo2, hi2 = sorted(rng.integers(-1100, 1100, size=2))
        box = ((lo1, hi1), (lo2, hi2))
        assert range_min(ix, box) == scan_min(entries, box)


def test_reporter_examples():
    rep = DecrementalReporter([])
    assert report_and_delete(rep, ((-INF, INF), (-INF, INF), (-INF, INF))) == set()
    rep = DecrementalReporter([KeyedEntry((1, 2, 3), 42)])
    box = ((0, 2), (0, 3), (0, 4))
    assert report_and_delete(rep, box) == {42}
    assert report_and_delete(rep, box) == set()


def test_reporter_against_live_scan():
    rng = np.random.default_rng(31)
    for _ in range(40):
        m = int(rng.integers(1, 200))
        entries = [
            (tuple(rng.integers(-15, 15, size=3)), i) for i in range(m)
        ]
        rep = DecrementalReporter(entries)
        live = dict(enumerate(entries))
        total_reported = 0
        for _ in range(12):
            box = []
            for _d in range(3):
                lo, hi = sorted(rng.integers(-18, 18, size=2))
                box.append((float(lo), float(hi)))
            if rng.random() < 0.4:
                box[0] = (-INF, box[0][1])
                box[1] = (box[1][0], INF)
                box[2] = (box[2][0], INF)
            box = tuple(box)
            expected = {
                v
                for i, (k, v) in list(live.items())
                if all(lo <= c <= hi for c, (lo, hi) in zip(k, box))
            }
            got = rep.report_and_delete(box)
            assert got == expected
            for i in list(live):
                if live[i][1] in got:
                    del live[i]
            total_reported += len(got)
        assert total_reported <= m
