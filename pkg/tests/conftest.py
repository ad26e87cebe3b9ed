"""Shared test configuration.

Hypothesis is pinned to a deterministic, time-unbounded profile so the
suite gives the same verdict on slow CI boxes as on a workstation.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "swimcollide",
    deadline=None,
    max_examples=50,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("swimcollide")
