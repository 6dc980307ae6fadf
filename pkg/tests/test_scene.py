"""Layout, ray hit testing and follow-head mode."""

import math
import random

import pytest
from hypothesis import given, strategies as st

from gazebench.angles import wrap_angle
from gazebench.scene import Panel, PanelKind, layout_default

uv_st = st.floats(0.001, 0.999)


# -- default layout -------------------------------------------------------------


def test_video_panel_front_and_center(default_scene):
    video = default_scene.panel_by_kind(PanelKind.VIDEO)
    assert video.center_dir == (0.0, 0.0)


def test_image_panel_directly_below_video(default_scene):
    video = default_scene.panel_by_kind(PanelKind.VIDEO)
    image = default_scene.panel_by_kind(PanelKind.IMAGE)
    assert image.center_dir[1] < video.center_dir[1]
    assert image.center_dir[0] == video.center_dir[0]


def test_help_panels_to_the_right(default_scene):
    video = default_scene.panel_by_kind(PanelKind.VIDEO)
    for kind in (PanelKind.HELP_LEFT, PanelKind.HELP_RIGHT):
        help_panel = default_scene.panel_by_kind(kind)
        assert help_panel.center_dir[0] > video.center_dir[0]
        assert not help_panel.interactive


def test_interactive_flags(default_scene):
    assert default_scene.panel_by_kind(PanelKind.VIDEO).interactive
    assert default_scene.panel_by_kind(PanelKind.IMAGE).interactive


def test_validate_requires_video_and_image(default_scene):
    default_scene.validate()
    default_scene.panels = [p for p in default_scene.panels if p.kind != PanelKind.IMAGE]
    with pytest.raises(ValueError):
        default_scene.validate()


def test_panel_dimensions_validated():
    with pytest.raises(ValueError):
        Panel("x", PanelKind.VIDEO, (0, 0), width=0.0, height=1.0)


def test_panels_never_overlap_in_default_layout(default_scene):
    # Scan a fine angular grid; no direction may fall inside two panels.
    for yaw_deg in range(-30, 61):
        for pitch_deg in range(-40, 21):
            d = (math.radians(yaw_deg), math.radians(pitch_deg))
            hits = 0
            for panel in default_scene.panels:
                sub = type(default_scene)(panels=[panel])
                if sub.ray_hit(d) is not None:
                    hits += 1
            assert hits <= 1, f"overlap at {yaw_deg, pitch_deg}"


# -- ray hits ----------------------------------------------------------------------


def test_center_ray_hits_video_center(default_scene):
    hit = default_scene.ray_hit((0.0, 0.0))
    assert hit is not None and hit.panel_id == "video"
    assert hit.u == pytest.approx(0.5, abs=1e-12)
    assert hit.v == pytest.approx(0.5, abs=1e-12)


def test_ray_far_from_panels_misses(default_scene):
    assert default_scene.ray_hit((math.pi / 2, 0.0)) is None
    assert default_scene.ray_hit((0.0, math.pi / 2)) is None
    assert default_scene.ray_hit((math.pi, 0.0)) is None


@given(u=uv_st, v=uv_st, panel_id=st.sampled_from(["video", "image", "help_left", "help_right"]))
def test_uv_round_trip(u, v, panel_id):
    scene = layout_default()
    d = scene.uv_to_dir(panel_id, u, v)
    hit = scene.ray_hit(d)
    assert hit is not None and hit.panel_id == panel_id
    assert hit.u == pytest.approx(u, abs=1e-6)
    assert hit.v == pytest.approx(v, abs=1e-6)


def test_hit_is_pure(default_scene):
    d = (0.1, -0.05)
    assert default_scene.ray_hit(d) == default_scene.ray_hit(d)


# -- follow mode -------------------------------------------------------------------


def test_follow_shifts_all_panels_rigidly(default_scene):
    before = {p.id: default_scene.world_dir(p) for p in default_scene.panels}
    default_scene.set_follow(True, (0.0, 0.0))
    default_scene.update_head((math.radians(30), 0.0))
    for p in default_scene.panels:
        after = default_scene.world_dir(p)
        assert after[0] == pytest.approx(before[p.id][0] + math.radians(30), abs=1e-12)
        assert after[1] == pytest.approx(before[p.id][1], abs=1e-12)


def test_follow_enable_disable_without_motion_is_identity(default_scene):
    anchor = default_scene.anchor
    default_scene.set_follow(True, (0.2, 0.1))
    default_scene.set_follow(False, (0.2, 0.1))
    assert default_scene.anchor == anchor
    assert not default_scene.follow_mode


def test_follow_preserves_offsets_through_random_path(default_scene):
    # Replay oracle: the head-to-panel separation angles measured at enable
    # must equal those measured at disable, for every panel.
    from .oracles import haversine_deg

    rng = random.Random(7)
    head = (0.05, -0.02)

    def separations():
        return [haversine_deg(head, default_scene.world_dir(p)) for p in default_scene.panels]

    at_enable = separations()
    default_scene.set_follow(True, head)
    for _ in range(500):
        head = (
            wrap_angle(head[0] + rng.uniform(-0.1, 0.1)),
            max(-1.2, min(1.2, head[1] + rng.uniform(-0.1, 0.1))),
        )
        default_scene.update_head(head)
    default_scene.set_follow(False, head)
    at_disable = separations()
    for a, b in zip(at_enable, at_disable):
        assert b == pytest.approx(a, abs=1e-9)


def test_follow_keeps_hit_uv_constant_with_immediate_reticle(default_scene):
    # With the reticle equal to the head (immediate mode), follow mode makes
    # the reticle-to-panel relationship invariant.
    rng = random.Random(3)
    head = (0.1, -0.1)
    default_scene.update_head(head)
    default_scene.set_follow(True, head)
    first = default_scene.ray_hit(head)
    assert first is not None
    for _ in range(200):
        head = (
            wrap_angle(head[0] + rng.uniform(-0.2, 0.2)),
            max(-1.0, min(1.0, head[1] + rng.uniform(-0.2, 0.2))),
        )
        default_scene.update_head(head)
        hit = default_scene.ray_hit(head)
        assert hit is not None and hit.panel_id == first.panel_id
        assert hit.u == pytest.approx(first.u, abs=1e-9)
        assert hit.v == pytest.approx(first.v, abs=1e-9)
