"""Blow-up-robust integration of scalar Riccati equations.

The equation y' = c0(t) - c2(t) * y**2 with c2 > 0 can only escape to
-infinity.  The integrator therefore follows y with an embedded
Dormand-Prince 4(5) pair while y >= -1 and switches to the inverse
chart v = 1/y (which obeys the regular equation v' = c2 - c0 * v**2)
once y < -1.  A pole of y is a regular upcrossing of v through zero and
is reported as a tight time bracket, never as a point.

Also provided: the integral upper bounds on the blow-up time (with and
without the (1 - 1/(1+eps)**2) deflation) and an exact constant
coefficient oracle used by the test suite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .errors import (
    CoefficientError,
    DomainError,
    HypothesisError,
    NoBoundError,
    ToleranceError,
)

# Sentinel returned by the closed-form oracle past the pole.
BLOWN_UP = float("-inf")

# Dormand-Prince 5(4) tableau.
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


@dataclass
class RiccatiProblem:
    """Coefficient source t -> (c0(t), c2(t)) with c2 > 0, plus the
    initial value.  The callable must be pure."""

    coeff_source: Callable[[float], tuple]
    y0: float
    t0: float = 0.0

    def coeffs(self, t: float):
        c0, c2 = self.coeff_source(t)
        if not (c2 > 0.0):
            raise CoefficientError(f"c2(t={t:.6g}) = {c2:.6g} is not positive")
        return float(c0), float(c2)


class OutcomeKind(enum.Enum):
    GLOBAL = "global"
    BLOWUP = "blowup"


@dataclass
class RiccatiOutcome:
    kind: OutcomeKind
    t_end: Optional[float] = None
    y_end: Optional[float] = None
    t_star_lo: Optional[float] = None
    t_star_hi: Optional[float] = None
    trajectory: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))


def _rhs(prob: RiccatiProblem, chart: str, t: float, val: float) -> float:
    c0, c2 = prob.coeffs(t)
    if chart == "y":
        return c0 - c2 * val * val
    return c2 - c0 * val * val


def _dp_step(prob, chart, t, val, h):
    """One Dormand-Prince step; returns (val5, err_estimate)."""
    k = np.empty(7)
    k[0] = _rhs(prob, chart, t, val)
    for i in range(1, 7):
        vi = val + h * sum(a * k[j] for j, a in enumerate(_DP_A[i]))
        k[i] = _rhs(prob, chart, t + _DP_C[i] * h, vi)
    val5 = val + h * float(_DP_B5 @ k)
    val4 = val + h * float(_DP_B4 @ k)
    return val5, abs(val5 - val4)


def _refine_event(prob, t_a, v_a, t_b, width_target):
    """Bisect the upcrossing of v through 0 inside [t_a, t_b].

    Each trial integrates the regular v equation from (t_a, v_a) with
    fixed RK4 substeps; v has a single transversal upcrossing because
    v' = c2 > 0 at any zero.
    """

    def v_at(t_query):
        m = 64
        h = (t_query - t_a) / m
        t, v = t_a, v_a
        for _ in range(m):
            k1 = _rhs(prob, "v", t, v)
            k2 = _rhs(prob, "v", t + 0.5 * h, v + 0.5 * h * k1)
            k3 = _rhs(prob, "v", t + 0.5 * h, v + 0.5 * h * k2)
            k4 = _rhs(prob, "v", t + h, v + h * k3)
            v += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        return v

    lo, hi = t_a, t_b
    while hi - lo > width_target:
        mid = 0.5 * (lo + hi)
        if v_at(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return lo, hi


def integrate(prob: RiccatiProblem, t_end: float, tol: float = 1e-9) -> RiccatiOutcome:
    """Adaptive integration over [t0, t_end] with blow-up detection.

    Local error per step is kept at or below tol (mixed absolute and
    relative).  Blow-up is reported as a bracket [t_star_lo, t_star_hi]
    containing the pole.
    """
    if not (1e-12 < tol < 1e-2):
        raise DomainError(f"tol must lie in (1e-12, 1e-2), got {tol}")
    if not (t_end > prob.t0):
        raise DomainError("t_end must exceed t0")

    t = prob.t0
    if prob.y0 < -1.0:
        chart, val = "v", 1.0 / prob.y0
    else:
        chart, val = "y", prob.y0
    traj = [(t, prob.y0)]

    span = t_end - prob.t0
    h = min(1e-2, span / 10.0)
    err_prev = 1.0
    safety, min_h_factor = 0.9, 1e-14
    while t < t_end:
        h = min(h, t_end - t)
        val_new, err = _dp_step(prob, chart, t, val, h)
        # error-per-unit-step control: accumulated error over the whole
        # span stays at the order of tol
        scale = tol * (1.0 + max(abs(val), abs(val_new))) * (h / span)
        ratio = err / scale
        if ratio <= 1.0:
            if chart == "v" and val_new >= 0.0:
                width = max(5e-14, 1e-8 * max(t + h, 1e-3))
                lo, hi = _refine_event(prob, t, val, t + h, 0.25 * width)
                # pad by the target width so the refinement's own
                # integration error cannot push the pole outside
                return RiccatiOutcome(
                    kind=OutcomeKind.BLOWUP,
                    t_star_lo=max(t, lo - 0.5 * width),
                    t_star_hi=hi + 0.5 * width,
                    trajectory=np.array(traj),
                )
            t += h
            val = val_new
            if chart == "y" and val < -1.0:
                chart, val = "v", 1.0 / val
            elif chart == "v" and val <= -1.0:
                chart, val = "y", 1.0 / val
            traj.append((t, val if chart == "y" else 1.0 / val))
            # PI step-size controller (fourth-order in h under
            # per-unit-step scaling)
            grow = safety * ratio ** -0.25 * err_prev**0.04 if ratio > 0 else 5.0
            h *= min(5.0, max(0.2, grow))
            err_prev = max(ratio, 1e-10)
        else:
            h *= max(0.2, safety * ratio**-0.25)
        if h < min_h_factor * max(1.0, abs(t)):
            raise ToleranceError(
                f"step size underflow at t={t:.6g} without a pole crossing"
            )
    return RiccatiOutcome(
        kind=OutcomeKind.GLOBAL,
        t_end=t,
        y_end=val if chart == "y" else 1.0 / val,
        trajectory=np.array(traj),
    )


# ---------------------------------------------------------------------
# integral upper bounds on the blow-up time
# ---------------------------------------------------------------------

def _crossing_time(
    prob: RiccatiProblem,
    target: float,
    t_max: float,
    check_c0_nonpositive: bool,
    ratio_guard: Optional[Callable[[float], bool]] = None,
) -> float:
    """First t with int_{t0}^{t} c2 ds >= target, by windowed quadrature
    and bisection inside the crossing window."""
    t, acc = prob.t0, 0.0
    sup_ratio = 0.0
    while t < t_max:
        dt = min(max(0.05, 0.05 * max(t, 1.0)), t_max - t)
        for probe in (t, t + dt):
            c0, c2 = prob.coeffs(probe)
            if check_c0_nonpositive and c0 > 0.0:
                raise HypothesisError(f"c0(t={probe:.6g}) = {c0:.6g} is positive")
            sup_ratio = max(sup_ratio, math.sqrt(max(c0, 0.0) / c2))
            if ratio_guard is not None and ratio_guard(sup_ratio):
                raise HypothesisError(
                    "initial value does not clear -(1+eps)*sup sqrt(c0/c2)"
                )
        inc, _ = quad(lambda s: prob.coeffs(s)[1], t, t + dt, epsrel=1e-11, limit=200)
        if acc + inc >= target:
            lo, hi = t, t + dt
            while hi - lo > 1e-12 * max(1.0, hi):
                mid = 0.5 * (lo + hi)
                part, _ = quad(
                    lambda s: prob.coeffs(s)[1], t, mid, epsrel=1e-11, limit=200
                )
                if acc + part >= target:
                    hi = mid
                else:
                    lo = mid
            return hi
        acc += inc
        t += dt
    raise NoBoundError(
        f"integral of c2 reached only {acc:.6g} < {target:.6g} by t={t_max:.6g}"
    )


def blowup_time_upper_bound_case1(
    prob: RiccatiProblem,
    a2_integral: Optional[Callable[[float], float]] = None,
    t_max: float = 1e4,
) -> float:
    """Upper bound on the blow-up time when c0 <= 0 and y0 < 0: the
    first t with int c2 >= -1/y0.

    a2_integral, if given, must return the cumulative integral of c2
    from t0; otherwise the integral is computed by quadrature.  Raises
    NoBoundError if the threshold is never reached before t_max.
    """
    if not (prob.y0 < 0.0):
        raise HypothesisError(f"case-1 bound needs y0 < 0, got {prob.y0}")
    target = -1.0 / prob.y0
    if a2_integral is not None:
        return _crossing_from_callable(prob, a2_integral, target, t_max)
    return _crossing_time(prob, target, t_max, check_c0_nonpositive=True)


def blowup_time_upper_bound_case2(
    prob: RiccatiProblem,
    eps: float,
    a2_integral: Optional[Callable[[float], float]] = None,
    t_max: float = 1e4,
) -> float:
    """Upper bound allowing c0 > 0, for y0 < -(1+eps)*sup sqrt(c0/c2):
    the first t with (1 - 1/(1+eps)**2) * int c2 >= -1/y0.

    The sup of sqrt(c0/c2) is sampled along the quadrature windows; a
    violation of the hypothesis raises HypothesisError.
    """
    if not (eps > 0.0):
        raise DomainError(f"eps must be positive, got {eps}")
    if not (prob.y0 < 0.0):
        raise HypothesisError(f"case-2 bound needs y0 < 0, got {prob.y0}")
    deflation = 1.0 - 1.0 / (1.0 + eps) ** 2
    target = (-1.0 / prob.y0) / deflation

    def guard(sup_ratio):
        return prob.y0 >= -(1.0 + eps) * sup_ratio

    if a2_integral is not None:
        # hypothesis check against a coarse sample of the coefficients
        for probe in np.linspace(prob.t0, min(t_max, prob.t0 + 100.0), 101):
            c0, c2 = prob.coeffs(float(probe))
            if guard(math.sqrt(max(c0, 0.0) / c2)):
                raise HypothesisError(
                    "initial value does not clear -(1+eps)*sup sqrt(c0/c2)"
                )
        return _crossing_from_callable(prob, a2_integral, target, t_max)
    return _crossing_time(
        prob, target, t_max, check_c0_nonpositive=False, ratio_guard=guard
    )


def _crossing_from_callable(prob, a2_integral, target, t_max):
    """Monotone bisection on a caller-supplied cumulative integral."""
    if a2_integral(t_max) < target:
        raise NoBoundError(
            f"supplied integral reaches only {a2_integral(t_max):.6g} "
            f"< {target:.6g} by t={t_max:.6g}"
        )
    lo, hi = prob.t0, t_max
    while hi - lo > 1e-12 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if a2_integral(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------
# constant-coefficient oracle
# ---------------------------------------------------------------------

def oracle_pole_time(c0_const: float, c2_const: float, y0: float) -> Optional[float]:
    """Exact blow-up time of y' = c0 - c2*y**2, or None if global."""
    if not (c2_const > 0.0):
        raise CoefficientError("oracle requires c2 > 0")
    if c0_const == 0.0:
        return -1.0 / (c2_const * y0) if y0 < 0.0 else None
    if c0_const > 0.0:
        m = math.sqrt(c0_const / c2_const)
        if y0 >= -m:
            return None
        k = math.sqrt(c0_const * c2_const)
        shift = math.atanh(m / y0)  # in (-inf, 0)
        return -shift / k
    m = math.sqrt(-c0_const / c2_const)
    k = math.sqrt(-c0_const * c2_const)
    delta = math.atan(-y0 / m)
    return (0.5 * math.pi - delta) / k


def closed_form_oracle(c0_const: float, c2_const: float, y0: float, t: float):
    """Exact solution of y' = c0 - c2*y**2 at time t (constant
    coefficients); returns the BLOWN_UP sentinel at or past the pole."""
    pole = oracle_pole_time(c0_const, c2_const, y0)
    if pole is not None and t >= pole:
        return BLOWN_UP
    if c0_const == 0.0:
        return y0 / (1.0 + c2_const * y0 * t)
    if c0_const > 0.0:
        m = math.sqrt(c0_const / c2_const)
        k = math.sqrt(c0_const * c2_const)
        if y0 == m or y0 == -m:
            return y0
        if abs(y0) < m:
            return m * math.tanh(k * t + math.atanh(y0 / m))
        return m / math.tanh(k * t + math.atanh(m / y0))
    m = math.sqrt(-c0_const / c2_const)
    k = math.sqrt(-c0_const * c2_const)
    delta = math.atan(-y0 / m)
    return -m * math.tan(k * t + delta)
