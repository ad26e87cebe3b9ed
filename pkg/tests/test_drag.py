"""Wall models, the blended drag law, and the coefficient cache."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, strategies as st

from swimcollide.drag import (
    SERIES_GAP_FLOOR,
    BoundaryCondition,
    Provenance,
    cache_clear,
    coefficients,
    kappa_pass,
    kappa_pass_provenance,
    kappa_prop,
    net_propulsion,
)
from swimcollide.errors import DomainError
from swimcollide.series import passive_drag

NO_SLIP = BoundaryCondition.no_slip()
NAVIER = BoundaryCondition.navier(0.1)


class TestBoundaryCondition:
    def test_constructors(self):
        assert NO_SLIP.kind == "no_slip" and NO_SLIP.beta == 0.0
        assert NAVIER.kind == "navier" and NAVIER.beta == 0.1
        assert NAVIER.slips and not NO_SLIP.slips
        assert not BoundaryCondition.navier(0.0).slips

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kind": "slippery"},
            {"kind": "navier", "beta": -0.1},
            {"kind": "navier", "beta": float("inf")},
            {"kind": "no_slip", "beta": 0.2},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            BoundaryCondition(**kwargs)


class TestPassiveBlend:
    def test_matches_series_above_slip_length(self):
        for h in (0.1, 0.5, 2.0):
            assert kappa_pass(h, NAVIER) == pytest.approx(
                passive_drag(h), rel=1e-14
            )

    def test_continuous_at_slip_length(self):
        beta = NAVIER.beta
        above = kappa_pass(beta * (1.0 + 1e-9), NAVIER)
        below = kappa_pass(beta * (1.0 - 1e-9), NAVIER)
        assert below == pytest.approx(above, rel=1e-7)

    def test_logarithmic_below_slip_length(self):
        # In the slip-regularized regime the drag grows like log(beta / h)
        # with the slope set by the anchor value at h = beta.
        anchor = kappa_pass(NAVIER.beta, NAVIER)
        hs = np.geomspace(1e-6, 1e-2, 9)
        ks = np.array([kappa_pass(h, NAVIER) for h in hs])
        slope = np.polyfit(np.log(1.0 / hs), ks, 1)[0]
        assert slope == pytest.approx(anchor, rel=1e-12)

    def test_zero_slip_length_is_no_slip(self):
        zero = BoundaryCondition.navier(0.0)
        for h in (1e-7, 1e-3, 0.5):
            assert kappa_pass(h, zero) == kappa_pass(h, NO_SLIP)

    @given(st.floats(min_value=1e-3, max_value=1.0))
    def test_small_slip_limit_recovers_no_slip(self, h):
        tiny = BoundaryCondition.navier(1e-12)
        rel = abs(kappa_pass(h, tiny) - kappa_pass(h, NO_SLIP)) / kappa_pass(
            h, NO_SLIP
        )
        assert rel < 1e-8

    def test_slip_reduces_drag_in_the_gap(self):
        assert kappa_pass(1e-4, NAVIER) < kappa_pass(1e-4, NO_SLIP)

    def test_no_slip_continuation_below_floor(self):
        floor = SERIES_GAP_FLOOR
        anchor = kappa_pass(floor, NO_SLIP)
        assert kappa_pass(floor / 10.0, NO_SLIP) == pytest.approx(
            anchor * 10.0, rel=1e-12
        )
        # Continuous across the floor.
        assert kappa_pass(floor * (1.0 - 1e-12), NO_SLIP) == pytest.approx(
            anchor, rel=1e-9
        )

    def test_provenance(self):
        assert kappa_pass_provenance(0.5, NAVIER) is Provenance.EXACT_SERIES
        assert kappa_pass_provenance(0.01, NAVIER) is Provenance.ASYMPTOTIC_MODEL
        assert kappa_pass_provenance(0.01, NO_SLIP) is Provenance.EXACT_SERIES
        assert (
            kappa_pass_provenance(SERIES_GAP_FLOOR / 2.0, NO_SLIP)
            is Provenance.ASYMPTOTIC_MODEL
        )

    def test_rejects_nonpositive_gap(self):
        with pytest.raises(DomainError):
            kappa_pass(0.0, NO_SLIP)


class TestPropulsionFactor:
    def test_frozen_below_floor(self):
        at_floor = kappa_prop(SERIES_GAP_FLOOR, 1.0, NO_SLIP)
        assert kappa_prop(SERIES_GAP_FLOOR / 100.0, 1.0, NO_SLIP) == at_floor

    def test_same_for_both_wall_models(self):
        assert kappa_prop(0.1, 1.0, NAVIER) == kappa_prop(0.1, 1.0, NO_SLIP)

    def test_model_override(self):
        calls = []

        def fixed(h, lam, bc, truncation):
            calls.append((h, lam))
            return 0.25

        assert kappa_prop(0.5, 1.0, NO_SLIP, model=fixed) == 0.25
        assert calls == [(0.5, 1.0)]

    @given(
        st.floats(min_value=1e-3, max_value=2.0),
        st.floats(min_value=0.05, max_value=5.0),
        st.floats(min_value=0.0, max_value=10.0),
    )
    def test_net_propulsion_nonnegative(self, h, lam, f_p):
        drive = net_propulsion(h, lam, f_p, NO_SLIP)
        assert drive >= 0.0
        assert drive == pytest.approx(
            f_p * (1.0 - kappa_prop(h, lam, NO_SLIP)), rel=1e-12
        )


class TestCoefficients:
    def test_combined_provenance(self):
        assert coefficients(0.5, 1.0, NAVIER).provenance is Provenance.EXACT_SERIES
        assert (
            coefficients(0.01, 1.0, NAVIER).provenance
            is Provenance.ASYMPTOTIC_MODEL
        )
        assert (
            coefficients(SERIES_GAP_FLOOR / 2.0, 1.0, NO_SLIP).provenance
            is Provenance.ASYMPTOTIC_MODEL
        )

    def test_fields(self):
        c = coefficients(0.5, 1.0, NO_SLIP)
        assert c.h == 0.5
        assert c.kappa_pass == kappa_pass(0.5, NO_SLIP)
        assert c.kappa_prop == kappa_prop(0.5, 1.0, NO_SLIP)


class TestCache:
    def test_memoization_is_transparent(self):
        cache_clear()
        cold = kappa_pass(0.321, NO_SLIP)
        warm = kappa_pass(0.321, NO_SLIP)
        cache_clear()
        recold = kappa_pass(0.321, NO_SLIP)
        assert cold == warm == recold

    def test_thread_safety(self):
        cache_clear()
        hs = np.geomspace(1e-3, 1.0, 40)
        expected = [kappa_pass(h, NO_SLIP) for h in hs]
        cache_clear()

        def worker(h):
            return kappa_pass(h, NO_SLIP)

        with ThreadPoolExecutor(max_workers=8) as pool:
            for _ in range(3):
                got = list(pool.map(worker, hs))
                assert got == expected
