"""Shared fixtures and hypothesis profiles."""
import os
from datetime import timedelta

import pytest
from hypothesis import HealthCheck, Verbosity, settings

settings.register_profile(
    "ci", deadline=timedelta(milliseconds=2000), suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("dev", max_examples=25)
settings.register_profile("debug", max_examples=25, verbosity=Verbosity.verbose)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture
def default_scene():
    from gazebench.scene import layout_default

    return layout_default()
