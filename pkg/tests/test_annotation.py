"""Annotation state machine: creation, editing, sketching, clears, captures."""

import json
import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gazebench.annotation import (
    Annotator,
    Armed,
    DraggingCreate,
    DraggingEdit,
    Handle,
    Idle,
    MENU_OPTIONS,
    MenuOpen,
    Marker,
    PICK_RADIUS,
    Sketching,
    SketchStroke,
    ToolKind,
    ToolStateError,
    ZERO_LENGTH_EPS,
)

point_st = st.tuples(st.floats(0.0, 1.5), st.floats(0.0, 1.0))


def make_circle(annot, center, radius_point, kind=ToolKind.CIRCLE):
    annot.open_menu()
    annot.choose_kind(kind)
    annot.left_press(center)
    annot.left_release(radius_point)


# -- menu ------------------------------------------------------------------------


def test_menu_open_choose_arm():
    a = Annotator()
    assert isinstance(a.state, Idle)
    a.open_menu()
    assert isinstance(a.state, MenuOpen)
    a.choose_kind(ToolKind.CIRCLE)
    assert a.state == Armed(ToolKind.CIRCLE)


def test_menu_has_exactly_four_options():
    assert len(MENU_OPTIONS) == 4
    assert set(MENU_OPTIONS) == {
        ToolKind.LINE, ToolKind.ARROW, ToolKind.CIRCLE, ToolKind.SKETCH,
    }


def test_choose_outside_menu_rejected():
    a = Annotator()
    with pytest.raises(ToolStateError):
        a.choose_kind(ToolKind.LINE)


def test_menu_reopen_from_armed_allows_tool_switch():
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.LINE)
    a.open_menu()
    a.choose_kind(ToolKind.ARROW)
    assert a.state == Armed(ToolKind.ARROW)


def test_menu_cannot_open_mid_drag():
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.LINE)
    a.left_press((0.2, 0.2))
    with pytest.raises(ToolStateError):
        a.open_menu()


# -- create ----------------------------------------------------------------------


def test_press_armed_starts_create_drag():
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.LINE)
    a.left_press((0.2, 0.2))
    assert a.state == DraggingCreate(ToolKind.LINE, (0.2, 0.2), (0.2, 0.2))


def test_circle_geometry_from_press_release():
    a = Annotator()
    make_circle(a, (0.5, 0.5), (0.5, 0.7))
    (m,) = a.markers
    assert m.kind is ToolKind.CIRCLE
    assert m.a == (0.5, 0.5)
    assert m.radius == pytest.approx(0.2)


def test_arrow_head_is_the_press_anchor():
    a = Annotator()
    make_circle(a, (0.3, 0.3), (0.6, 0.3), kind=ToolKind.ARROW)
    (m,) = a.markers
    assert m.a == (0.3, 0.3)  # arrowhead
    assert m.b == (0.6, 0.3)  # tail


def test_tool_stays_armed_after_create():
    a = Annotator()
    make_circle(a, (0.5, 0.5), (0.5, 0.7))
    assert a.state == Armed(ToolKind.CIRCLE)


def test_zero_length_marker_discarded():
    a = Annotator()
    make_circle(a, (0.5, 0.5), (0.5, 0.5 + ZERO_LENGTH_EPS / 2))
    assert a.markers == []


def test_press_on_empty_area_while_idle_is_noop():
    a = Annotator()
    a.left_press((0.4, 0.4))
    assert isinstance(a.state, Idle)
    assert a.markers == []


def test_duplicate_press_ignored():
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.LINE)
    a.left_press((0.2, 0.2))
    state = a.state
    a.left_press((0.9, 0.9))
    assert a.state == state


def test_release_without_press_rejected():
    a = Annotator()
    with pytest.raises(ToolStateError):
        a.left_release((0.1, 0.1))


# -- edit ------------------------------------------------------------------------


def disarm(annot):
    """Back to Idle through the public path: reopen the menu and cancel."""
    annot.open_menu()
    annot.close_menu()


def test_press_near_center_handle_starts_edit():
    a = Annotator()
    make_circle(a, (0.5, 0.5), (0.5, 0.7))
    disarm(a)
    a.left_press((0.51, 0.5))  # 0.01 away, pick radius 0.02
    assert isinstance(a.state, DraggingEdit)
    assert a.state.handle is Handle.CIRCLE_CENTER


def test_nearest_handle_wins():
    # Oracle: brute-force nearest handle over all marker handles.
    rng = random.Random(42)
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.LINE)
    for _ in range(6):
        p1 = (rng.uniform(0.1, 1.4), rng.uniform(0.1, 0.9))
        p2 = (p1[0] + rng.uniform(0.05, 0.2), p1[1] + rng.uniform(0.05, 0.2))
        a.left_press(p1)
        a.left_release(p2)
    press = (0.7, 0.5)
    handles = [
        (math.hypot(pos[0] - press[0], pos[1] - press[1]), m.id, handle)
        for m in a.markers
        for handle, pos in m.handle_positions()
    ]
    dist, marker_id, handle = min(handles)
    disarm(a)
    a.left_press(press)
    if dist <= PICK_RADIUS:
        assert a.state == DraggingEdit(marker_id, handle, press)
    else:
        assert isinstance(a.state, Idle)


def test_edit_p2_leaves_p1_unchanged():
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.LINE)
    a.left_press((0.2, 0.6))
    a.left_release((0.6, 0.6))
    disarm(a)
    a.left_press((0.6, 0.6))
    assert isinstance(a.state, DraggingEdit)
    a.drag_update((0.7, 0.6))
    a.left_release((0.8, 0.6))
    (m,) = a.markers
    assert m.a == (0.2, 0.6)
    assert m.b == (0.8, 0.6)
    assert isinstance(a.state, Idle)


@given(a_pt=point_st, b_pt=point_st, c_pt=point_st)
def test_create_then_edit_equals_direct_create(a_pt, b_pt, c_pt):
    def far(p, q):
        return math.hypot(p[0] - q[0], p[1] - q[1]) > 2 * ZERO_LENGTH_EPS

    if not (far(a_pt, b_pt) and far(a_pt, c_pt) and far(b_pt, c_pt)):
        return
    edited = Annotator()
    make_circle(edited, a_pt, b_pt, kind=ToolKind.LINE)
    disarm(edited)
    edited.left_press(b_pt)
    edited.left_release(c_pt)

    direct = Annotator()
    make_circle(direct, a_pt, c_pt, kind=ToolKind.LINE)

    (m1,) = edited.markers
    (m2,) = direct.markers
    assert m1.a == pytest.approx(m2.a, abs=1e-9)
    assert m1.b == pytest.approx(m2.b, abs=1e-9)


def test_locked_markers_are_not_editable():
    a = Annotator()
    a.add_marker(ToolKind.CIRCLE, (0.5, 0.5), (0.54, 0.5), locked=True)
    a.left_press((0.5, 0.5))
    assert isinstance(a.state, Idle)


# -- sketch ----------------------------------------------------------------------


def test_sketch_accumulates_spaced_points():
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.SKETCH)
    a.left_press((0.1, 0.1))
    assert isinstance(a.state, Sketching)
    for i in range(1, 20):
        a.drag_update((0.1 + i * 0.01, 0.1))
    a.left_release((0.4, 0.1))
    (s,) = a.strokes
    assert len(s.points) >= 2
    for p, q in zip(s.points, s.points[1:]):
        assert math.hypot(p[0] - q[0], p[1] - q[1]) >= 0.004 - 1e-12


def test_single_point_sketch_discarded():
    a = Annotator()
    a.open_menu()
    a.choose_kind(ToolKind.SKETCH)
    a.left_press((0.1, 0.1))
    a.left_release((0.1, 0.1))
    assert a.strokes == []
    assert a.state == Armed(ToolKind.SKETCH)


# -- clears ----------------------------------------------------------------------


def test_clear_markers_keeps_sketch():
    a = Annotator()
    make_circle(a, (0.5, 0.5), (0.5, 0.7))
    make_circle(a, (0.9, 0.5), (0.9, 0.6))
    a.open_menu()
    a.choose_kind(ToolKind.SKETCH)
    a.left_press((0.1, 0.1))
    a.drag_update((0.2, 0.1))
    a.left_release((0.3, 0.1))
    assert (len(a.markers), len(a.strokes)) == (2, 1)
    a.clear_markers()
    assert (len(a.markers), len(a.strokes)) == (0, 1)
    a.clear_sketch()
    assert (len(a.markers), len(a.strokes)) == (0, 0)


def test_clears_idempotent_and_commute():
    a1 = Annotator()
    a2 = Annotator()
    for a in (a1, a2):
        make_circle(a, (0.5, 0.5), (0.5, 0.7))
        a.open_menu()
        a.choose_kind(ToolKind.SKETCH)
        a.left_press((0.1, 0.1))
        a.drag_update((0.25, 0.1))
        a.left_release((0.4, 0.1))
    a1.clear_markers(); a1.clear_sketch()
    a2.clear_sketch(); a2.clear_markers()
    assert a1.markers == a2.markers == []
    assert a1.strokes == a2.strokes == []
    a1.clear_markers(); a1.clear_sketch()
    assert a1.markers == [] and a1.strokes == []


def test_clear_markers_spares_locked_reference():
    a = Annotator()
    a.add_marker(ToolKind.CIRCLE, (0.3, 0.3), (0.34, 0.3), locked=True)
    make_circle(a, (0.5, 0.5), (0.5, 0.7))
    a.clear_markers()
    assert len(a.markers) == 1 and a.markers[0].locked


# -- serialization / capture -------------------------------------------------------


def test_layer_round_trip_lossless():
    a = Annotator()
    make_circle(a, (0.5, 0.51234567890123), (0.5, 0.7))
    make_circle(a, (0.31, 0.3), (0.61, 0.3), kind=ToolKind.ARROW)
    a.open_menu()
    a.choose_kind(ToolKind.SKETCH)
    a.left_press((0.1, 0.1))
    a.drag_update((0.2, 0.15))
    a.left_release((0.3, 0.2))

    layer = a.serialize_layer()
    layer2 = json.loads(json.dumps(layer))
    b = Annotator()
    b.load_layer(layer2)
    assert b.serialize_layer() == layer
    assert [m.a for m in b.markers] == [m.a for m in a.markers]


def test_screenshot_without_frame_records_layer():
    a = Annotator()
    make_circle(a, (0.5, 0.5), (0.5, 0.7))
    rec = a.screenshot(1234.0)
    assert rec.t_ms == 1234.0
    assert len(rec.layer["markers"]) == 1
    assert rec.frame_ref is None and rec.image is None


def test_screenshot_is_deterministic_on_frozen_layer():
    a = Annotator()
    make_circle(a, (0.5, 0.5), (0.5, 0.7))
    r1 = a.screenshot(1.0)
    r2 = a.screenshot(2.0)
    assert json.dumps(r1.layer, sort_keys=True) == json.dumps(r2.layer, sort_keys=True)


def test_rasterized_circle_rim_matches_midpoint_oracle():
    # Oracle: classic midpoint circle pixel walk, independent of the
    # parametric rasterizer under test.
    def midpoint_circle(cx, cy, r):
        pixels = set()
        x, y, err = r, 0, 1 - r
        while x >= y:
            for dx, dy in (
                (x, y), (y, x), (-y, x), (-x, y),
                (-x, -y), (-y, -x), (y, -x), (x, -y),
            ):
                pixels.add((cx + dx, cy + dy))
            y += 1
            if err < 0:
                err += 2 * y + 1
            else:
                x -= 1
                err += 2 * (y - x) + 1
        return pixels

    a = Annotator()
    aspect = 1.0
    make_circle(a, (0.5, 0.5), (0.5, 0.75))
    frame = np.zeros((400, 400), dtype=np.uint8)
    rec = a.screenshot(0.0, frame=frame, aspect=aspect)
    drawn = int((rec.image > 0).sum())
    expect = len(midpoint_circle(round(0.5 * 399), round(0.5 * 399), round(0.25 * 399)))
    assert drawn == pytest.approx(expect, rel=0.05)


# -- fuzzing -----------------------------------------------------------------------


def test_random_event_fuzz_preserves_invariants():
    rng = random.Random(1337)
    a = Annotator()
    pressed = False
    for _ in range(5000):
        op = rng.randrange(8)
        point = (rng.uniform(0, 1.5), rng.uniform(0, 1.0))
        try:
            if op == 0 and not pressed:
                a.left_press(point)
                pressed = True
            elif op == 1 and pressed:
                a.left_release(point)
                pressed = False
            elif op == 2:
                a.drag_update(point)
            elif op == 3:
                a.open_menu()
            elif op == 4:
                a.choose_kind(rng.choice(list(ToolKind)))
            elif op == 5:
                a.clear_markers()
            elif op == 6:
                a.clear_sketch()
            elif op == 7:
                a.screenshot(0.0)
        except ToolStateError:
            pass
        # Invariants: drag states only while the button is down; no handle
        # pointing at a deleted marker; counts never negative.
        if not pressed:
            assert not isinstance(a.state, (DraggingCreate, DraggingEdit, Sketching))
        if isinstance(a.state, DraggingEdit):
            assert any(m.id == a.state.marker_id for m in a.markers)
        assert len(a.markers) >= 0 and len(a.strokes) >= 0
