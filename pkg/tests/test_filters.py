"""Reticle filter behavior against independent oracles and spec'd examples."""

import math

import pytest
from hypothesis import given, strategies as st

from gazebench.angles import wrap_angle
from gazebench.filters import (
    CONDITION_MODES,
    Average,
    GazeSample,
    Immediate,
    NonMonotonicSampleError,
    ReticleFilter,
    Scaled,
    mode_from_dict,
    mode_to_dict,
)

from .oracles import mean_direction

yaw_st = st.floats(-math.pi + 1e-9, math.pi, allow_nan=False)
pitch_st = st.floats(-math.pi / 2, math.pi / 2, allow_nan=False)


def trace(directions, t0=1.0, dt=1.0):
    return [GazeSample(t0 + i * dt, y, p) for i, (y, p) in enumerate(directions)]


# -- init ---------------------------------------------------------------------


def test_init_immediate_holds_no_state():
    f = ReticleFilter(Immediate(), (0.0, 0.0))
    assert f.window_len == 0
    assert f.output == (0.0, 0.0)


def test_init_scaled_reticle_starts_on_head():
    f = ReticleFilter(Scaled(0.5), (0.1, 0.0))
    assert f.output == (0.1, 0.0)


def test_init_average_window_seeded_with_initial_head():
    f = ReticleFilter(Average(10), (0.0, 0.0))
    assert f.window_len == 1


def test_average_zero_window_rejected():
    with pytest.raises(ValueError):
        Average(0)


def test_scaled_ratio_validated():
    with pytest.raises(ValueError):
        Scaled(0.0)
    with pytest.raises(ValueError):
        Scaled(1.5)


def test_condition_modes_are_the_five_interface_conditions():
    assert CONDITION_MODES == (
        Immediate(),
        Average(10),
        Average(30),
        Scaled(0.8),
        Scaled(0.5),
    )


def test_mode_dict_round_trip():
    for mode in CONDITION_MODES:
        assert mode_from_dict(mode_to_dict(mode)) == mode


# -- push ----------------------------------------------------------------------


def test_scaled_half_ratio_moves_half_the_head_step():
    # A +10 degree head step under 50% scaling moves the reticle +5 degrees.
    f = ReticleFilter(Scaled(0.5), (0.0, 0.0))
    out = f.push(GazeSample(1.0, math.radians(10.0), 0.0))
    assert out[0] == pytest.approx(math.radians(5.0), abs=1e-12)
    f8 = ReticleFilter(Scaled(0.8), (0.0, 0.0))
    out8 = f8.push(GazeSample(1.0, math.radians(10.0), 0.0))
    assert out8[0] == pytest.approx(math.radians(8.0), abs=1e-12)


def test_average_constant_input_converges_exactly():
    d = (0.3, -0.2)
    f = ReticleFilter(Average(5), (0.0, 0.0))
    for s in trace([d] * 5):
        out = f.push(s)
    assert out[0] == pytest.approx(d[0], abs=1e-12)
    assert out[1] == pytest.approx(d[1], abs=1e-12)


def test_average_three_sample_example():
    # Oracle: circular mean of [0, 3, 6] degrees is exactly 3 degrees.
    yaws = [0.0, math.radians(3.0), math.radians(6.0)]
    expect_yaw, expect_pitch = mean_direction(yaws, [0.0, 0.0, 0.0])
    assert expect_yaw == pytest.approx(math.radians(3.0), abs=1e-12)

    f = ReticleFilter(Average(3), (yaws[0], 0.0))
    f.push(GazeSample(1.0, yaws[1], 0.0))
    out = f.push(GazeSample(2.0, yaws[2], 0.0))
    assert out[0] == pytest.approx(expect_yaw, abs=1e-12)
    assert out[1] == pytest.approx(expect_pitch, abs=1e-12)


def test_non_monotonic_timestamp_rejected():
    f = ReticleFilter(Immediate())
    f.push(GazeSample(5.0, 0.0, 0.0))
    with pytest.raises(NonMonotonicSampleError):
        f.push(GazeSample(5.0, 0.1, 0.0))
    with pytest.raises(NonMonotonicSampleError):
        f.push(GazeSample(4.0, 0.1, 0.0))


def test_average_rejects_time_before_seed():
    f = ReticleFilter(Average(3), (0.0, 0.0))
    with pytest.raises(NonMonotonicSampleError):
        f.push(GazeSample(0.0, 0.1, 0.0))


# -- recenter ---------------------------------------------------------------------


def test_recenter_snaps_reticle_to_head():
    f = ReticleFilter(Scaled(0.5), (0.0, 0.0))
    f.push(GazeSample(1.0, 0.4, 0.0))
    assert f.output == pytest.approx((0.2, 0.0))
    f.recenter()
    assert f.output == pytest.approx((0.4, 0.0), abs=1e-15)


def test_recenter_after_init_is_identity():
    f = ReticleFilter(Scaled(0.8), (0.25, -0.1))
    f.recenter()
    assert f.output == (0.25, -0.1)


def test_recenter_noop_elsewhere(caplog):
    f = ReticleFilter(Immediate(), (0.1, 0.1))
    f.push(GazeSample(1.0, 0.3, 0.0))
    before = f.output
    with caplog.at_level("WARNING"):
        f.recenter()
    assert f.output == before
    assert any("recenter" in r.message for r in caplog.records)


@given(
    ratio=st.sampled_from([0.8, 0.5]),
    deltas=st.lists(st.floats(-0.05, 0.05, allow_nan=False), min_size=1, max_size=40),
)
def test_recenter_after_constant_deltas_matches_head(ratio, deltas):
    # Replay oracle: after any pushes then recenter, reticle == last head exactly.
    f = ReticleFilter(Scaled(ratio), (0.0, 0.0))
    yaw = 0.0
    for i, d in enumerate(deltas):
        yaw += d
        f.push(GazeSample(1.0 + i, yaw, 0.0))
    f.recenter()
    assert f.output[0] == pytest.approx(wrap_angle(yaw), abs=1e-12)


# -- properties ----------------------------------------------------------------------


@given(dirs=st.lists(st.tuples(yaw_st, pitch_st), min_size=1, max_size=60))
def test_immediate_is_exact_identity(dirs):
    f = ReticleFilter(Immediate())
    for s in trace(dirs):
        assert f.push(s) == s.direction


@given(
    n=st.integers(1, 30),
    dirs=st.lists(st.tuples(yaw_st, pitch_st), min_size=1, max_size=60),
)
def test_average_matches_list_mean_oracle(n, dirs):
    f = ReticleFilter(Average(n), (0.0, 0.0))
    window = [(0.0, 0.0)]
    for s in trace(dirs):
        out = f.push(s)
        window.append(s.direction)
        window = window[-n:]
        expect = mean_direction([w[0] for w in window], [w[1] for w in window])
        assert out[0] == pytest.approx(expect[0], abs=1e-9)
        assert out[1] == pytest.approx(expect[1], abs=1e-9)
        assert f.window_len <= n


@given(
    ratio=st.floats(0.1, 1.0, allow_nan=False),
    steps=st.lists(st.floats(-0.2, 0.2, allow_nan=False), min_size=1, max_size=80),
)
def test_scaled_total_displacement_ratio_pure_yaw(ratio, steps):
    f = ReticleFilter(Scaled(ratio), (0.0, 0.0))
    yaw = 0.0
    head_total = 0.0
    reticle_total = 0.0
    prev_out = f.output
    for i, d in enumerate(steps):
        yaw = wrap_angle(yaw + d)
        head_total += abs(d)
        out = f.push(GazeSample(1.0 + i, yaw, 0.0))
        reticle_total += abs(wrap_angle(out[0] - prev_out[0]))
        prev_out = out
    assert reticle_total == pytest.approx(ratio * head_total, abs=1e-9)


@given(
    n=st.integers(1, 20),
    before=st.tuples(yaw_st, pitch_st),
    after=st.tuples(yaw_st, pitch_st),
)
def test_average_step_response_settles_after_n_pushes(n, before, after):
    f = ReticleFilter(Average(n), before)
    samples = trace([after] * n)
    for s in samples:
        out = f.push(s)
    assert out[0] == pytest.approx(after[0], abs=1e-9)
    assert out[1] == pytest.approx(after[1], abs=1e-9)


@given(
    dirs=st.lists(st.tuples(st.floats(-0.7, 0.7), pitch_st), min_size=1, max_size=50)
)
def test_average_output_within_window_envelope(dirs):
    # With yaws far from the seam and spanning < 90 deg, the circular mean
    # stays inside the [min, max] envelope of the window.
    n = 8
    f = ReticleFilter(Average(n), dirs[0])
    window = [dirs[0]]
    for s in trace(dirs[1:] if len(dirs) > 1 else []):
        out = f.push(s)
        window.append(s.direction)
        window = window[-n:]
        yaws = [w[0] for w in window]
        pitches = [w[1] for w in window]
        assert min(yaws) - 1e-12 <= out[0] <= max(yaws) + 1e-12
        assert min(pitches) - 1e-12 <= out[1] <= max(pitches) + 1e-12


def test_average_survives_the_pi_seam():
    # Samples straddling +-pi must average near the seam, not near zero.
    f = ReticleFilter(Average(2), (math.pi - 0.01, 0.0))
    out = f.push(GazeSample(1.0, -math.pi + 0.01, 0.0))
    assert abs(abs(out[0]) - math.pi) < 0.02


@given(
    mode_i=st.integers(0, len(CONDITION_MODES) - 1),
    dirs=st.lists(st.tuples(yaw_st, pitch_st), min_size=1, max_size=40),
)
def test_replay_is_bit_identical(mode_i, dirs):
    mode = CONDITION_MODES[mode_i]
    f1 = ReticleFilter(mode, (0.0, 0.0))
    f2 = ReticleFilter(mode, (0.0, 0.0))
    o1 = [f1.push(s) for s in trace(dirs)]
    o2 = [f2.push(s) for s in trace(dirs)]
    assert o1 == o2
