"""Head-on approach dynamics of the mirror swimmer pair.

The half-gap h(t) obeys the axial force balance on either body,

    m h'' = -kappa_pass(h) h' - F(h),

where F is the net inward forcing: f_p (1 - kappa_prop(h, lam)) for an
active pusher pair, or a constant f_ext for a passive externally pushed
pair. The massless limit m = 0 reduces to the algebraic speed law
h' = -F / kappa_pass.

Massless scenarios integrate with an embedded Dormand-Prince 5(4) pair with
two extra controls tuned to the near-contact asymptotics: the step is capped
so the gap shrinks by at most a fixed factor per step once h < 0.1 (the drag
varies on the log h scale there), and once the floor crossing is bracketed
the crossing time is localized on the dense cubic interpolant. Trajectories
are recorded at every accepted step.

Inertial scenarios (m > 0) are stiff: the speed relaxes toward the force
balance on the fast scale m / kappa_pass, which near contact is orders of
magnitude below the approach time. They integrate with an L-stable implicit
Radau method, and the trajectory is densified from the dense interpolant so
the same recording guarantees hold as for the explicit path.
"""

import dataclasses
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad, solve_ivp

from . import drag
from .drag import BoundaryCondition
from .errors import DomainError, InvalidRegimeError, StiffnessError
from .series import SeriesTruncation

__all__ = [
    "Mode",
    "TerminationKind",
    "SwimmerScenario",
    "TrajectoryPoint",
    "Trajectory",
    "default_h_floor",
    "rhs",
    "simulate",
    "QuadratureReport",
    "collision_time_quadrature",
    "ExponentialBound",
    "noslip_lower_bound_fit",
    "ProbeReport",
    "threshold_speed_probe",
]


class Mode(Enum):
    ACTIVE = "active"
    PASSIVE_FORCED = "passive_forced"


class TerminationKind(Enum):
    COLLISION = "collision"
    HORIZON_REACHED = "horizon_reached"
    SPEED_REVERSED = "speed_reversed"


@dataclass(frozen=True)
class SwimmerScenario:
    """One head-on encounter.

    h0 is the initial half-gap and s0 = -h'(0) >= 0 the initial approach
    speed (ignored when mass = 0, where the speed is algebraic). Active
    scenarios carry the thrust f_p and tip offset lam; passive ones a
    constant squeezing force f_ext > 0.
    """

    mode: Mode
    bc: BoundaryCondition
    h0: float
    s0: float = 0.0
    mass: float = 0.0
    f_p: float = 1.0
    lam: float = 1.0
    f_ext: float = 0.0

    def __post_init__(self):
        if not isinstance(self.mode, Mode):
            raise DomainError(f"mode must be a Mode member, got {self.mode!r}")
        if not np.isfinite(self.h0) or self.h0 <= 0.0:
            raise DomainError(f"initial half-gap must be positive, got {self.h0}")
        if not np.isfinite(self.s0) or self.s0 < 0.0:
            raise DomainError(f"initial approach speed must be >= 0, got {self.s0}")
        if not np.isfinite(self.mass) or self.mass < 0.0:
            raise DomainError(f"mass must be >= 0, got {self.mass}")
        if not np.isfinite(self.lam) or self.lam <= 0.0:
            raise DomainError(f"tip offset must be positive, got {self.lam}")
        if self.mode is Mode.ACTIVE:
            if not np.isfinite(self.f_p) or self.f_p < 0.0:
                raise DomainError(f"thrust must be >= 0, got {self.f_p}")
        else:
            if not np.isfinite(self.f_ext) or self.f_ext <= 0.0:
                raise DomainError(
                    f"passive scenarios need a positive squeezing force, got {self.f_ext}"
                )


@dataclass(frozen=True)
class TrajectoryPoint:
    """State and coefficients at one accepted step.

    kappa_prop is reported as 0 for passive scenarios, where no propulsion
    factor enters the dynamics.
    """

    t: float
    h: float
    hdot: float
    kappa_pass: float
    kappa_prop: float


@dataclass(frozen=True)
class Trajectory:
    scenario: SwimmerScenario
    h_floor: float
    points: tuple
    termination: TerminationKind
    t_coll: float  # None unless termination is COLLISION

    @property
    def t_end(self):
        return self.points[-1].t

    @property
    def min_h(self):
        return min(p.h for p in self.points)

    def columns(self):
        """Column arrays keyed t, h, hdot, kappa_pass, kappa_prop."""
        names = ("t", "h", "hdot", "kappa_pass", "kappa_prop")
        return {k: np.array([getattr(p, k) for p in self.points]) for k in names}


def default_h_floor(bc):
    """Contact floor below which the gap counts as closed.

    Slip permits an actual finite-time contact, so the slip floor sits far
    below the no-slip stall scale.
    """
    return 1e-9 if bc.slips else 1e-7


def _force_and_coefficients(scenario, h, truncation, prop_model):
    h_eval = max(float(h), 1e-15)
    kp = drag.kappa_pass(h_eval, scenario.bc, truncation)
    if scenario.mode is Mode.ACTIVE:
        kpr = drag.kappa_prop(h_eval, scenario.lam, scenario.bc, truncation, prop_model)
        force = scenario.f_p * (1.0 - kpr)
    else:
        kpr = 0.0
        force = scenario.f_ext
    return force, kp, kpr


def rhs(scenario, y, truncation=None, prop_model=None):
    """Time derivative of the state.

    State is (h,) for massless scenarios and (h, hdot) otherwise.
    """
    force, kp, _ = _force_and_coefficients(scenario, y[0], truncation, prop_model)
    if scenario.mass == 0.0:
        return np.array([-force / kp])
    return np.array([y[1], (-kp * y[1] - force) / scenario.mass])


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = _B5 - np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)

_LN_GAP_CAP = 0.05  # max fractional gap change per step once h < 0.1
_LN_GAP_ONSET = 0.1


def _hermite_gap(h0, hd0, h1, hd1, dt, s):
    s2 = s * s
    s3 = s2 * s
    return (
        (2 * s3 - 3 * s2 + 1) * h0
        + (s3 - 2 * s2 + s) * dt * hd0
        + (-2 * s3 + 3 * s2) * h1
        + (s3 - s2) * dt * hd1
    )


def simulate(
    scenario,
    t_max,
    h_floor=None,
    rtol=1e-8,
    atol=1e-12,
    truncation=None,
    prop_model=None,
    max_steps=400000,
):
    """Integrate the encounter until contact, reversal, or the time horizon.

    Returns a Trajectory whose termination reports which happened. The
    contact event satisfies |h - h_floor| < 1e-10 at the reported time.
    Identical inputs produce bitwise identical trajectories. For inertial
    scenarios max_steps bounds the right-hand-side evaluation count at 25
    per nominal step.
    """
    truncation = truncation or SeriesTruncation()
    t_max = float(t_max)
    if not np.isfinite(t_max) or t_max <= 0.0:
        raise DomainError(f"time horizon must be positive, got {t_max}")
    floor = default_h_floor(scenario.bc) if h_floor is None else float(h_floor)
    if not np.isfinite(floor) or floor <= 0.0:
        raise DomainError(f"gap floor must be positive, got {floor}")
    if scenario.h0 <= floor:
        raise InvalidRegimeError(
            f"initial half-gap {scenario.h0} is not above the floor {floor}"
        )
    if scenario.mass != 0.0:
        return _simulate_inertial(
            scenario, t_max, floor, rtol, atol, truncation, prop_model, max_steps
        )

    def full_rhs(y):
        force, kp, kpr = _force_and_coefficients(scenario, y[0], truncation, prop_model)
        return np.array([-force / kp]), force, kp, kpr

    y = np.array([scenario.h0])
    t = 0.0
    k1, force, kp, kpr = full_rhs(y)
    hdot = k1[0]
    points = [TrajectoryPoint(0.0, y[0], hdot, kp, kpr)]

    def reversed_now(hd, f):
        return hd > 0.0

    if reversed_now(hdot, force):
        return Trajectory(
            scenario=scenario,
            h_floor=floor,
            points=tuple(points),
            termination=TerminationKind.SPEED_REVERSED,
            t_coll=None,
        )

    # initial step: conservative fraction of the gap-change and horizon scales
    dt = t_max / 100.0
    if hdot != 0.0:
        dt = min(dt, 0.02 * y[0] / abs(hdot))
    dt = min(dt, t_max)

    n_steps = 0
    while True:
        n_steps += 1
        if n_steps > max_steps:
            raise StiffnessError(
                f"step budget {max_steps} exhausted at t = {t}", t=t, state=y
            )

        h_now = y[0]
        hdot_now = k1[0]
        dt = min(dt, t_max - t)
        if hdot_now != 0.0 and h_now < _LN_GAP_ONSET:
            dt = min(dt, _LN_GAP_CAP * h_now / abs(hdot_now))
        if hdot_now < 0.0 and h_now > floor:
            # bounded overshoot past the floor keeps the crossing inside one step
            dt = min(dt, 1.4 * (h_now - floor) / abs(hdot_now))
        if dt <= 1e-15 * max(1.0, t) or t + dt == t:
            raise StiffnessError(f"step size underflow at t = {t}", t=t, state=y)

        ks = [k1]
        clipped = False
        for i in range(1, 7):
            yi = y + dt * sum(a * k for a, k in zip(_A[i], ks))
            if yi[0] < 1e-15:
                clipped = True  # stage dipped to the clamp; grow cautiously
            ks.append(full_rhs(yi)[0])
        y5 = y + dt * sum(b * k for b, k in zip(_B5, ks))
        err_vec = dt * sum(e * k for e, k in zip(_E, ks))
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))

        if err > 1.0 or not np.all(np.isfinite(y5)):
            if not np.all(np.isfinite(y5)):
                dt *= 0.2
            else:
                dt *= max(0.2, 0.9 * err ** -0.2)
            continue

        # accepted; stage 7 is the FSAL derivative at the new state
        t_new = t + dt
        k_new, force_new, kp_new, kpr_new = full_rhs(y5)
        hdot_new = k_new[0]

        if y5[0] <= floor:
            h0v, h1v = y[0], y5[0]
            hd0 = k1[0]
            hd1 = hdot_new
            # 80 halvings put the crossing time at rounding precision, far
            # inside the 1e-12 localization contract
            a, b = 0.0, 1.0
            for _ in range(80):
                mid = 0.5 * (a + b)
                if _hermite_gap(h0v, hd0, h1v, hd1, dt, mid) > floor:
                    a = mid
                else:
                    b = mid
            s_ev = b
            t_ev = t + s_ev * dt
            h_ev = _hermite_gap(h0v, hd0, h1v, hd1, dt, s_ev)
            force_ev, kp_ev, kpr_ev = _force_and_coefficients(
                scenario, h_ev, truncation, prop_model
            )
            # The massless rate is algebraic in the gap; evaluating the
            # balance at h_ev keeps the endpoint consistent with every other
            # recorded point.
            hd_ev = -force_ev / kp_ev
            points.append(TrajectoryPoint(t_ev, h_ev, hd_ev, kp_ev, kpr_ev))
            return Trajectory(
                scenario=scenario,
                h_floor=floor,
                points=tuple(points),
                termination=TerminationKind.COLLISION,
                t_coll=t_ev,
            )

        points.append(TrajectoryPoint(t_new, y5[0], hdot_new, kp_new, kpr_new))

        if reversed_now(hdot_new, force_new):
            return Trajectory(
                scenario=scenario,
                h_floor=floor,
                points=tuple(points),
                termination=TerminationKind.SPEED_REVERSED,
                t_coll=None,
            )
        if t_new >= t_max * (1.0 - 1e-14):
            return Trajectory(
                scenario=scenario,
                h_floor=floor,
                points=tuple(points),
                termination=TerminationKind.HORIZON_REACHED,
                t_coll=None,
            )

        t = t_new
        y = y5
        k1 = k_new
        grow = 0.9 * err ** -0.2 if err > 0.0 else 5.0
        dt = dt * min(5.0, max(0.2, grow))
        if clipped:
            dt *= 0.5


def _simulate_inertial(
    scenario, t_max, floor, rtol, atol, truncation, prop_model, max_steps
):
    """Stiff branch of simulate for m > 0, on an implicit Radau method.

    The speed equation has the fast eigenvalue -kappa_pass / m, which an
    explicit pair must resolve for the whole run even though the solution
    hugs the quasi-steady balance; the L-stable method steps on the slow
    manifold instead. Contact and reversal are terminal events, and recorded
    points are densified from the interpolant so consecutive points satisfy
    the same log-gap spacing bound as the explicit path.
    """
    eval_budget = 25 * max_steps
    evals = 0

    def fun(t, y):
        nonlocal evals
        evals += 1
        if evals > eval_budget:
            raise StiffnessError(
                f"evaluation budget {eval_budget} exhausted at t = {t}",
                t=float(t),
                state=np.asarray(y, dtype=float),
            )
        force, kp, _ = _force_and_coefficients(scenario, y[0], truncation, prop_model)
        return [y[1], (-kp * y[1] - force) / scenario.mass]

    def contact(t, y):
        return y[0] - floor

    contact.terminal = True
    contact.direction = -1.0

    def reversal(t, y):
        # Outward motion clearly above the noise floor of the tolerance.
        return y[1] - atol

    reversal.terminal = True
    reversal.direction = 1.0

    sol = solve_ivp(
        fun,
        (0.0, t_max),
        [scenario.h0, -scenario.s0],
        method="Radau",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=(contact, reversal),
    )
    if sol.status == -1:
        raise StiffnessError(
            f"implicit integration failed: {sol.message}",
            t=float(sol.t[-1]),
            state=sol.y[:, -1],
        )

    if sol.status == 1 and len(sol.t_events[0]):
        termination = TerminationKind.COLLISION
        t_coll = float(sol.t_events[0][0])
    elif sol.status == 1:
        termination = TerminationKind.SPEED_REVERSED
        t_coll = None
    else:
        termination = TerminationKind.HORIZON_REACHED
        t_coll = None

    def point_at(t, h, hd):
        _, kp, kpr = _force_and_coefficients(scenario, h, truncation, prop_model)
        return TrajectoryPoint(float(t), float(h), float(hd), kp, kpr)

    points = [point_at(sol.t[0], sol.y[0, 0], sol.y[1, 0])]
    for i in range(1, len(sol.t)):
        t0, t1 = sol.t[i - 1], sol.t[i]
        h0v, h1v = sol.y[0, i - 1], sol.y[0, i]
        if min(h0v, h1v) < _LN_GAP_ONSET and h0v > 0.0 and h1v > 0.0:
            n_sub = int(np.ceil(abs(np.log(h0v / h1v)) / _LN_GAP_CAP))
        else:
            n_sub = 1
        for j in range(1, n_sub):
            tj = t0 + (t1 - t0) * j / n_sub
            hj, hdj = sol.sol(tj)
            points.append(point_at(tj, hj, hdj))
        points.append(point_at(t1, sol.y[0, i], sol.y[1, i]))

    return Trajectory(
        scenario=scenario,
        h_floor=floor,
        points=tuple(points),
        termination=termination,
        t_coll=t_coll,
    )


@dataclass(frozen=True)
class QuadratureReport:
    """Collision-time integral and its near-floor behavior."""

    time_to_floor: float
    abserr: float
    tail_exponent: float
    diverged: bool
    h_floor: float


def collision_time_quadrature(scenario, h_floor=None, truncation=None, prop_model=None):
    """Time to close the gap from h0 to the floor by direct quadrature.

    Valid for massless scenarios only, where the approach speed is the
    algebraic U(h) = F(h) / kappa_pass(h) and

        T = integral over h in [floor, h0] of dh / U(h).

    The integrand is evaluated on the log-gap substitution, which removes
    most of the near-floor mass. diverged reports whether the local
    power-law exponent of 1 / U at the floor is -0.9 or steeper, the
    signature of a floor-to-contact time that grows without bound as the
    floor is lowered (the no-slip stall); kappa values come from the same
    model as the dynamics, so the report matches what simulate would do.
    """
    if scenario.mass != 0.0:
        raise InvalidRegimeError("quadrature form of the collision time needs mass = 0")
    truncation = truncation or SeriesTruncation()
    floor = default_h_floor(scenario.bc) if h_floor is None else float(h_floor)
    if not np.isfinite(floor) or floor <= 0.0 or floor >= scenario.h0:
        raise DomainError(f"gap floor must lie in (0, h0), got {floor}")

    def speed(h):
        force, kp, _ = _force_and_coefficients(scenario, h, truncation, prop_model)
        return force / kp

    for h in np.geomspace(floor, scenario.h0, 25):
        if speed(h) <= 0.0:
            raise InvalidRegimeError(
                f"approach speed is not positive at h = {h}; no collision course"
            )

    value, abserr = quad(
        lambda u: np.exp(u) / speed(np.exp(u)),
        np.log(floor),
        np.log(scenario.h0),
        limit=400,
        epsabs=0.0,
        epsrel=1e-10,
    )
    inv_u = lambda h: 1.0 / speed(h)
    p = float(
        (np.log(inv_u(floor)) - np.log(inv_u(10.0 * floor)))
        / (np.log(floor) - np.log(10.0 * floor))
    )
    return QuadratureReport(
        time_to_floor=float(value),
        abserr=float(abserr),
        tail_exponent=p,
        diverged=p <= -0.9,
        h_floor=floor,
    )


@dataclass(frozen=True)
class ExponentialBound:
    """Pointwise certificate h(t) >= c1 exp(-c2 t) extracted from a run."""

    c1: float
    c2: float
    rms_log_residual: float

    def evaluate(self, t):
        return self.c1 * np.exp(-self.c2 * np.asarray(t, dtype=float))


def noslip_lower_bound_fit(trajectory):
    """Fit the stalling tail and certify an exponential lower bound.

    The decay rate c2 is the least-squares slope of log h over the later
    half of the run; c1 is then chosen as min_i h_i exp(c2 t_i), which makes
    the bound hold at every recorded point by construction. Requires a
    trajectory whose gap is positive and non-increasing.
    """
    cols = trajectory.columns()
    t = cols["t"]
    h = cols["h"]
    if len(t) < 8:
        raise InvalidRegimeError("too few points to fit a decay rate")
    if np.any(h <= 0.0):
        raise InvalidRegimeError("gap must stay positive")
    if np.any(np.diff(h) > 1e-12 * h[:-1]):
        raise InvalidRegimeError("gap is not non-increasing; no stall to bound")

    tail = t >= 0.5 * (t[0] + t[-1])
    if np.count_nonzero(tail) < 4:
        tail = np.zeros_like(t, dtype=bool)
        tail[len(t) // 2 :] = True
    slope, intercept = np.polyfit(t[tail], np.log(h[tail]), 1)
    c2 = -float(slope)
    if c2 <= 0.0:
        raise InvalidRegimeError(f"fitted decay rate is not positive ({c2})")
    c1 = float(np.min(h * np.exp(c2 * t)))
    resid = np.log(h[tail]) - (intercept + slope * t[tail])
    return ExponentialBound(
        c1=c1, c2=c2, rms_log_residual=float(np.sqrt(np.mean(resid**2)))
    )


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of the initial-speed threshold search."""

    all_collide: bool
    bracketed: bool
    critical_s0: float  # None when no threshold exists in [0, s_max]
    probes: tuple  # (s0, termination value) pairs in evaluation order


def threshold_speed_probe(
    scenario,
    s_max,
    t_max,
    s_tol=1e-2,
    h_floor=None,
    truncation=None,
    prop_model=None,
):
    """Search for the initial approach speed that first reaches contact.

    Massless scenarios have no speed memory, so a single run decides. With
    inertia the collision predicate is monotone in s0 and the threshold is
    bisected to width s_tol; all_collide reports that s0 = 0 already reaches
    contact, and bracketed = False that even s_max does not.
    """
    s_max = float(s_max)
    if not np.isfinite(s_max) or s_max <= 0.0:
        raise DomainError(f"probe speed bound must be positive, got {s_max}")

    def collides(s0):
        probe = dataclasses.replace(scenario, s0=s0)
        traj = simulate(
            probe,
            t_max,
            h_floor=h_floor,
            truncation=truncation,
            prop_model=prop_model,
        )
        return traj.termination is TerminationKind.COLLISION, traj.termination

    probes = []
    if scenario.mass == 0.0:
        hit, kind = collides(scenario.s0)
        probes.append((scenario.s0, kind.value))
        return ProbeReport(
            all_collide=hit, bracketed=hit, critical_s0=None, probes=tuple(probes)
        )

    hit0, kind0 = collides(0.0)
    probes.append((0.0, kind0.value))
    if hit0:
        return ProbeReport(
            all_collide=True, bracketed=True, critical_s0=0.0, probes=tuple(probes)
        )
    hit1, kind1 = collides(s_max)
    probes.append((s_max, kind1.value))
    if not hit1:
        return ProbeReport(
            all_collide=False, bracketed=False, critical_s0=None, probes=tuple(probes)
        )
    lo, hi = 0.0, s_max
    while hi - lo > s_tol:
        mid = 0.5 * (lo + hi)
        hit, kind = collides(mid)
        probes.append((mid, kind.value))
        if hit:
            hi = mid
        else:
            lo = mid
    return ProbeReport(
        all_collide=False,
        bracketed=True,
        critical_s0=0.5 * (lo + hi),
        probes=tuple(probes),
    )
