"""Scoring against exhaustive oracles: assignment, arrow matching, head path."""

import math
import random

import pytest

from gazebench.annotation import Marker, ToolKind
from gazebench.filters import GazeSample
from gazebench.scoring import (
    MATCH_THRESHOLD,
    head_path_deg,
    score_peg,
    score_thread,
)
from gazebench.tasks import Level, TaskKind, TaskSpec

from .oracles import brute_force_assignment, haversine_deg


def peg_spec(targets, green=(1.2, 0.8)):
    return TaskSpec(TaskKind.PEG_TRANSFER, Level.EASY, 0, tuple(targets), green)


def thread_spec(holes):
    return TaskSpec(TaskKind.THREAD_PASSING, Level.EASY, 0, tuple(holes))


def circle(i, center, r=0.04, locked=False):
    return Marker(i, ToolKind.CIRCLE, center, (center[0] + r, center[1]), locked=locked)


def arrow(i, head, tail):
    return Marker(i, ToolKind.ARROW, head, tail)


# -- peg ---------------------------------------------------------------------------


def test_perfect_circles_score_perfectly():
    targets = [(0.2, 0.2), (0.5, 0.5), (0.9, 0.3)]
    markers = [circle(i, t) for i, t in enumerate(targets)]
    s = score_peg(markers, peg_spec(targets))
    assert s.precision_mean == pytest.approx(0.0, abs=1e-12)
    assert s.accuracy == 1.0


def test_no_markers_gives_null_precision_zero_accuracy():
    s = score_peg([], peg_spec([(0.2, 0.2)]))
    assert s.precision_mean is None
    assert s.accuracy == 0.0


def test_missing_markers_reduce_accuracy():
    targets = [(0.2, 0.2), (0.6, 0.6)]
    s = score_peg([circle(1, (0.2, 0.2))], peg_spec(targets))
    assert s.accuracy == 0.5
    assert s.precision_mean == pytest.approx(0.0, abs=1e-12)


def test_off_target_markers_counted_by_threshold():
    targets = [(0.2, 0.2)]
    near = [circle(1, (0.2 + MATCH_THRESHOLD * 0.9, 0.2))]
    far = [circle(1, (0.2 + MATCH_THRESHOLD * 1.5, 0.2))]
    assert score_peg(near, peg_spec(targets)).accuracy == 1.0
    assert score_peg(far, peg_spec(targets)).accuracy == 0.0


def test_wrong_marker_kind_never_matches():
    targets = [(0.2, 0.2)]
    markers = [arrow(1, (0.2, 0.2), (0.3, 0.2))]
    s = score_peg(markers, peg_spec(targets))
    assert s.precision_mean is None and s.accuracy == 0.0


def test_locked_reference_marker_excluded():
    targets = [(0.2, 0.2)]
    markers = [circle(1, (1.2, 0.8), locked=True), circle(2, (0.2, 0.2))]
    s = score_peg(markers, peg_spec(targets))
    assert s.accuracy == 1.0
    assert s.precision_mean == pytest.approx(0.0, abs=1e-12)


def test_marker_order_invariance():
    rng = random.Random(5)
    targets = [(rng.uniform(0.1, 1.4), rng.uniform(0.1, 0.9)) for _ in range(5)]
    markers = [circle(i, (t[0] + rng.uniform(-0.03, 0.03), t[1])) for i, t in enumerate(targets)]
    s1 = score_peg(markers, peg_spec(targets))
    shuffled = list(markers)
    rng.shuffle(shuffled)
    s2 = score_peg(shuffled, peg_spec(targets))
    assert s1.precision_mean == pytest.approx(s2.precision_mean, abs=1e-12)
    assert s1.accuracy == s2.accuracy


def test_translation_invariance():
    rng = random.Random(6)
    targets = [(rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)) for _ in range(4)]
    markers = [circle(i, (t[0] + 0.01, t[1] - 0.02)) for i, t in enumerate(targets)]
    s1 = score_peg(markers, peg_spec(targets))
    dx, dy = 0.1, -0.05
    targets2 = [(u + dx, v + dy) for u, v in targets]
    markers2 = [circle(i, (m.a[0] + dx, m.a[1] + dy)) for i, m in enumerate(markers)]
    s2 = score_peg(markers2, peg_spec(targets2))
    assert s1.precision_mean == pytest.approx(s2.precision_mean, abs=1e-12)
    assert s1.accuracy == s2.accuracy


def test_assignment_cost_matches_brute_force_on_random_layouts():
    rng = random.Random(123)
    for _ in range(50):
        n_t = rng.randrange(1, 7)
        n_m = rng.randrange(1, 7)
        targets = [(rng.uniform(0, 1.5), rng.uniform(0, 1)) for _ in range(n_t)]
        markers = [
            circle(i, (rng.uniform(0, 1.5), rng.uniform(0, 1))) for i in range(n_m)
        ]
        s = score_peg(markers, peg_spec(targets))
        cost = [
            [math.hypot(t[0] - m.a[0], t[1] - m.a[1]) for m in markers] for t in targets
        ]
        best_total, assign = brute_force_assignment(cost)
        k = min(n_t, n_m)
        assert s.precision_mean == pytest.approx(best_total / k, abs=1e-9)
        hits = sum(
            1 for i, j in enumerate(assign) if j is not None and cost[i][j] <= MATCH_THRESHOLD
        )
        assert s.accuracy == pytest.approx(hits / n_t, abs=1e-12)


# -- thread -------------------------------------------------------------------------


def test_perfect_arrows_match_every_pair():
    holes = [(0.2, 0.2), (0.5, 0.2), (0.8, 0.5)]
    markers = [arrow(i, holes[i + 1], holes[i]) for i in range(len(holes) - 1)]
    s = score_thread(markers, thread_spec(holes))
    assert s.accuracy == 1.0
    assert s.precision_mean == pytest.approx(0.0, abs=1e-12)


def test_reversed_arrow_does_not_match():
    holes = [(0.2, 0.2), (0.5, 0.2)]
    good = [arrow(1, holes[1], holes[0])]
    reversed_ = [arrow(1, holes[0], holes[1])]  # head on the origin hole
    assert score_thread(good, thread_spec(holes)).accuracy == 1.0
    assert score_thread(reversed_, thread_spec(holes)).accuracy == 0.0


def test_arrow_angle_tolerance():
    holes = [(0.2, 0.2), (0.6, 0.2)]
    # Head on target, tail rotated by ~25 degrees: inside the 30 deg cone.
    ok_tail = (0.6 - 0.4 * math.cos(math.radians(25)), 0.2 + 0.4 * math.sin(math.radians(25)))
    bad_tail = (0.6 - 0.4 * math.cos(math.radians(40)), 0.2 + 0.4 * math.sin(math.radians(40)))
    assert score_thread([arrow(1, holes[1], ok_tail)], thread_spec(holes)).accuracy == 1.0
    assert score_thread([arrow(1, holes[1], bad_tail)], thread_spec(holes)).accuracy == 0.0


def test_thread_matching_equals_exhaustive_oracle():
    rng = random.Random(321)
    for _ in range(60):
        n = rng.randrange(2, 6)
        holes = []
        while len(holes) < n:
            p = (rng.uniform(0.1, 1.4), rng.uniform(0.1, 0.9))
            if all(math.hypot(p[0] - q[0], p[1] - q[1]) > 0.15 for q in holes):
                holes.append(p)
        markers = []
        mid = 0
        for i in range(n - 1):
            if rng.random() < 0.8:
                jitter = lambda p: (p[0] + rng.uniform(-0.04, 0.04), p[1] + rng.uniform(-0.04, 0.04))
                markers.append(arrow(mid, jitter(holes[i + 1]), jitter(holes[i])))
                mid += 1
        for _ in range(rng.randrange(0, 2)):  # decoys
            markers.append(
                arrow(mid, (rng.uniform(0, 1.5), rng.uniform(0, 1)), (rng.uniform(0, 1.5), rng.uniform(0, 1)))
            )
            mid += 1
        s = score_thread(markers, thread_spec(holes))

        # Oracle: enumerate all injective pair->arrow maps, maximize matched
        # count then minimize summed head distance over valid matches only.
        pairs = list(zip(holes, holes[1:]))

        def valid(pair, m):
            (o, d) = pair
            dist = math.hypot(m.a[0] - d[0], m.a[1] - d[1])
            if dist > MATCH_THRESHOLD:
                return None
            v1 = (m.a[0] - m.b[0], m.a[1] - m.b[1])
            v2 = (d[0] - o[0], d[1] - o[1])
            n1, n2 = math.hypot(*v1), math.hypot(*v2)
            if n1 == 0 or n2 == 0:
                return None
            cosang = (v1[0] * v2[0] + v1[1] * v2[1]) / (n1 * n2)
            if math.degrees(math.acos(max(-1, min(1, cosang)))) > 30:
                return None
            return dist

        from itertools import permutations

        best = (0, 0.0)  # (count, -total) maximized
        n_p, n_a = len(pairs), len(markers)
        if n_a:
            choices = list(range(n_a)) + [None] * n_p
            for perm in set(permutations(choices, n_p)):
                used = [j for j in perm if j is not None]
                if len(used) != len(set(used)):
                    continue
                count, total = 0, 0.0
                for i, j in enumerate(perm):
                    if j is None:
                        continue
                    d = valid(pairs[i], markers[j])
                    if d is None:
                        continue
                    count += 1
                    total += d
                if count > best[0] or (count == best[0] and count and -total > best[1]):
                    best = (count, -total)
        expect_acc = best[0] / len(pairs)
        assert s.accuracy == pytest.approx(expect_acc, abs=1e-12)
        if best[0]:
            assert s.precision_mean == pytest.approx(-best[1] / best[0], abs=1e-9)
        else:
            assert s.precision_mean is None


# -- head path -----------------------------------------------------------------------


def samples(dirs):
    return [GazeSample(float(i + 1), y, p) for i, (y, p) in enumerate(dirs)]


def test_constant_trace_zero_path():
    assert head_path_deg(samples([(0.3, 0.1)] * 10)) == 0.0


def test_two_samples_ten_degrees_apart():
    path = head_path_deg(samples([(0.0, 0.0), (math.radians(10), 0.0)]))
    assert path == pytest.approx(10.0, abs=1e-9)


def test_empty_trace_rejected():
    with pytest.raises(ValueError):
        head_path_deg([])


def test_single_sample_zero_path():
    assert head_path_deg(samples([(0.1, 0.2)])) == 0.0


def test_random_trace_matches_haversine_oracle():
    rng = random.Random(777)
    dirs = [
        (rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi / 2, math.pi / 2))
        for _ in range(400)
    ]
    expect = sum(haversine_deg(a, b) for a, b in zip(dirs, dirs[1:]))
    assert head_path_deg(samples(dirs)) == pytest.approx(expect, abs=1e-9)
