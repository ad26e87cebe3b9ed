"""Encounter dynamics: integrator, events, quadrature, bounds, probes."""

import numpy as np
import pytest

from swimcollide.drag import BoundaryCondition, cache_clear
from swimcollide.dynamics import (
    Mode,
    QuadratureReport,
    SwimmerScenario,
    TerminationKind,
    Trajectory,
    TrajectoryPoint,
    collision_time_quadrature,
    default_h_floor,
    noslip_lower_bound_fit,
    rhs,
    simulate,
    threshold_speed_probe,
)
from swimcollide.errors import DomainError, InvalidRegimeError, StiffnessError

NO_SLIP = BoundaryCondition.no_slip()
NAVIER = BoundaryCondition.navier(0.1)


def active(bc, **kw):
    return SwimmerScenario(mode=Mode.ACTIVE, bc=bc, **{"h0": 0.5, **kw})


def forced(bc, **kw):
    return SwimmerScenario(
        mode=Mode.PASSIVE_FORCED, bc=bc, **{"h0": 0.5, "f_ext": 1.0, **kw}
    )


class TestScenarioValidation:
    def test_accepts_reference_cases(self):
        active(NAVIER)
        forced(NO_SLIP, mass=0.1, s0=1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"mode": "active", "bc": NO_SLIP, "h0": 0.5},
            {"mode": Mode.ACTIVE, "bc": NO_SLIP, "h0": 0.0},
            {"mode": Mode.ACTIVE, "bc": NO_SLIP, "h0": 0.5, "s0": -1.0},
            {"mode": Mode.ACTIVE, "bc": NO_SLIP, "h0": 0.5, "mass": -0.1},
            {"mode": Mode.ACTIVE, "bc": NO_SLIP, "h0": 0.5, "lam": 0.0},
            {"mode": Mode.ACTIVE, "bc": NO_SLIP, "h0": 0.5, "f_p": -1.0},
            {"mode": Mode.PASSIVE_FORCED, "bc": NO_SLIP, "h0": 0.5, "f_ext": 0.0},
        ],
    )
    def test_rejections(self, kwargs):
        with pytest.raises(DomainError):
            SwimmerScenario(**kwargs)

    def test_default_floors(self):
        assert default_h_floor(NAVIER) == 1e-9
        assert default_h_floor(NO_SLIP) == 1e-7
        assert default_h_floor(BoundaryCondition.navier(0.0)) == 1e-7


class TestRhs:
    def test_massless_state_is_gap_only(self):
        out = rhs(active(NAVIER), np.array([0.5]))
        assert out.shape == (1,) and out[0] < 0.0

    def test_inertial_state_is_gap_and_rate(self):
        sc = forced(NAVIER, mass=0.5, s0=1.0)
        out = rhs(sc, np.array([0.5, -1.0]))
        assert out.shape == (2,)
        assert out[0] == -1.0
        # Drag opposes the motion, external force pushes inward.
        assert out[1] == pytest.approx(
            (38.42773471532934 - 1.0) / 0.5, rel=1e-9
        )


class TestMasslessCollision:
    TRAJ = simulate(active(NAVIER), t_max=200.0)

    def test_terminates_at_contact(self):
        assert self.TRAJ.termination is TerminationKind.COLLISION
        assert self.TRAJ.t_coll == pytest.approx(98.997668309298305, rel=1e-6)
        assert self.TRAJ.t_coll == self.TRAJ.t_end

    def test_endpoint_sits_on_the_floor(self):
        last = self.TRAJ.points[-1]
        assert abs(last.h - self.TRAJ.h_floor) <= 1e-9 * self.TRAJ.h_floor

    def test_recorded_rate_matches_recorded_coefficients(self):
        # For a massless swimmer the rate is algebraic in the coefficients,
        # so every recorded point must satisfy the balance identity exactly.
        sc = self.TRAJ.scenario
        for p in self.TRAJ.points:
            expect = -sc.f_p * (1.0 - p.kappa_prop) / p.kappa_pass
            assert p.hdot == pytest.approx(expect, rel=1e-12)

    def test_gap_is_strictly_decreasing(self):
        h = self.TRAJ.columns()["h"]
        assert np.all(np.diff(h) < 0.0)

    def test_point_density_in_the_gap(self):
        cols = self.TRAJ.columns()
        h = cols["h"]
        small = h < 0.1
        ratios = h[:-1][small[:-1] & small[1:]] / h[1:][small[:-1] & small[1:]]
        assert np.all(np.log(ratios) <= 0.105)

    def test_columns_and_summaries(self):
        cols = self.TRAJ.columns()
        assert set(cols) == {"t", "h", "hdot", "kappa_pass", "kappa_prop"}
        assert self.TRAJ.min_h == cols["h"].min()
        assert self.TRAJ.t_end == cols["t"][-1]

    def test_determinism(self):
        cache_clear()
        again = simulate(active(NAVIER), t_max=200.0)
        assert again.points == self.TRAJ.points
        assert again.t_coll == self.TRAJ.t_coll


class TestNoSlipStall:
    TRAJ = simulate(active(NO_SLIP), t_max=50.0)

    def test_never_reaches_floor(self):
        assert self.TRAJ.termination is TerminationKind.HORIZON_REACHED
        assert self.TRAJ.t_coll is None
        assert self.TRAJ.min_h > self.TRAJ.h_floor
        assert self.TRAJ.t_end == pytest.approx(50.0, rel=1e-12)

    def test_exponential_lower_bound_certificate(self):
        bound = noslip_lower_bound_fit(self.TRAJ)
        assert bound.c2 > 0.0
        cols = self.TRAJ.columns()
        floor_vals = bound.evaluate(cols["t"])
        assert np.all(cols["h"] >= floor_vals * (1.0 - 1e-12))

    def test_decay_rate_scales_with_forcing(self):
        # The stall rate is proportional to the squeezing force: the
        # late-time log-slope is force over the lubrication constant.
        slow = noslip_lower_bound_fit(
            simulate(forced(NO_SLIP, h0=0.3), t_max=40.0)
        )
        fast = noslip_lower_bound_fit(
            simulate(forced(NO_SLIP, h0=0.3, f_ext=2.0), t_max=40.0)
        )
        assert 1.8 <= fast.c2 / slow.c2 <= 2.2


class TestBoundFitValidation:
    @staticmethod
    def synthetic(hs):
        points = tuple(
            TrajectoryPoint(t=float(i), h=float(h), hdot=0.0, kappa_pass=1.0, kappa_prop=0.0)
            for i, h in enumerate(hs)
        )
        return Trajectory(
            scenario=forced(NO_SLIP),
            h_floor=1e-7,
            points=points,
            termination=TerminationKind.HORIZON_REACHED,
            t_coll=None,
        )

    def test_rejects_short_runs(self):
        with pytest.raises(InvalidRegimeError):
            noslip_lower_bound_fit(self.synthetic([0.5, 0.4, 0.3]))

    def test_rejects_reopening_gap(self):
        hs = [0.5 * 0.9**i for i in range(10)]
        hs[6] = hs[5] * 1.5
        with pytest.raises(InvalidRegimeError):
            noslip_lower_bound_fit(self.synthetic(hs))


class TestInertialDynamics:
    def test_coasting_is_monotone(self):
        # No forcing at all: drag only ever spends the initial momentum.
        sc = active(NO_SLIP, f_p=0.0, mass=0.5, s0=1.0)
        traj = simulate(sc, t_max=0.05)
        cols = traj.columns()
        assert np.all(np.diff(cols["h"]) < 0.0)
        speeds = -cols["hdot"]
        assert np.all(np.diff(speeds) <= 1e-11 * speeds[:-1])

    def test_inertial_collision(self):
        sc = forced(NAVIER, mass=0.1, s0=1.0)
        traj = simulate(sc, t_max=200.0)
        assert traj.termination is TerminationKind.COLLISION
        last = traj.points[-1]
        assert abs(last.h - traj.h_floor) <= 1e-6 * traj.h_floor


class TestSimulateGuards:
    def test_start_below_floor(self):
        with pytest.raises(InvalidRegimeError):
            simulate(active(NAVIER, h0=1e-10), t_max=1.0)

    def test_bad_horizon(self):
        with pytest.raises(DomainError):
            simulate(active(NAVIER), t_max=0.0)

    def test_step_budget_reported(self):
        with pytest.raises(StiffnessError) as exc:
            simulate(active(NAVIER), t_max=200.0, max_steps=10)
        assert exc.value.t is not None

    def test_massless_speed_reversal(self):
        # A propulsion factor above one flips the net force outward; the
        # massless gap rate turns positive immediately.
        traj = simulate(
            active(NAVIER),
            t_max=10.0,
            prop_model=lambda h, lam, bc, tr: 1.5,
        )
        assert traj.termination is TerminationKind.SPEED_REVERSED


class TestQuadrature:
    def test_matches_simulation(self):
        sc = active(NAVIER)
        rep = collision_time_quadrature(sc)
        traj = simulate(sc, t_max=200.0)
        assert isinstance(rep, QuadratureReport)
        assert rep.time_to_floor == pytest.approx(traj.t_coll, rel=1e-3)
        assert rep.abserr < 1e-6 * rep.time_to_floor
        assert not rep.diverged

    def test_noslip_tail_diverges(self):
        rep = collision_time_quadrature(forced(NO_SLIP, h0=0.3))
        assert rep.diverged
        assert rep.tail_exponent == pytest.approx(-1.0, abs=0.05)

    def test_needs_massless_scenario(self):
        with pytest.raises(InvalidRegimeError):
            collision_time_quadrature(forced(NAVIER, mass=0.1))

    def test_floor_must_be_below_start(self):
        with pytest.raises(DomainError):
            collision_time_quadrature(active(NAVIER), h_floor=1.0)

    def test_rejects_outward_drive(self):
        with pytest.raises(InvalidRegimeError):
            collision_time_quadrature(
                active(NAVIER), prop_model=lambda h, lam, bc, tr: 1.5
            )


class TestThresholdProbe:
    def test_massless_is_single_probe(self):
        rep = threshold_speed_probe(active(NAVIER), s_max=10.0, t_max=200.0)
        assert rep.all_collide and rep.bracketed
        assert rep.critical_s0 is None
        assert len(rep.probes) == 1

    def test_noslip_never_brackets(self):
        sc = forced(NO_SLIP, h0=0.3, mass=0.5)
        rep = threshold_speed_probe(sc, s_max=50.0, t_max=5.0, h_floor=1e-7)
        assert not rep.all_collide and not rep.bracketed
        assert rep.critical_s0 is None
        assert len(rep.probes) == 2

    def test_inertial_threshold_is_bisected(self):
        sc = forced(NAVIER, mass=1.0)
        rep = threshold_speed_probe(sc, s_max=100.0, t_max=2.0, s_tol=0.05)
        assert not rep.all_collide and rep.bracketed
        assert 0.0 < rep.critical_s0 < 100.0
        # The reported threshold separates the outcomes.
        import dataclasses

        lo = simulate(
            dataclasses.replace(sc, s0=rep.critical_s0 * 0.9), t_max=2.0
        )
        hi = simulate(
            dataclasses.replace(sc, s0=rep.critical_s0 * 1.1), t_max=2.0
        )
        assert lo.termination is not TerminationKind.COLLISION
        assert hi.termination is TerminationKind.COLLISION

    def test_rejects_bad_speed_bound(self):
        with pytest.raises(DomainError):
            threshold_speed_probe(active(NAVIER), s_max=0.0, t_max=1.0)
