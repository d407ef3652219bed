"""A-priori bound calculators.

Invariant-region constant for certified initial data, the Y/Q ceilings
on the decoupled gradient variables, the time-dependent density floor
for 1 < gamma < 3 (both damping branches), and the blow-up threshold
constants N and N1 for gamma > 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .core import Branch, DampingLaw, GasModel
from .errors import DomainError, RangeError, RegimeError
from .fields import FieldState


@dataclass(frozen=True)
class InitialBound:
    """Uniform bound c0 on |u0| and 1/tau0, with the derived
    invariant-region bound c0_tilde = max{c0 + c0**theta,
    (c0 + c0**theta)**(1/theta)}."""

    c0: float
    c0_tilde: float


@dataclass(frozen=True)
class RiccatiCeilings:
    """Y = max{1, sup_x y(x,0)} and Q = max{1, sup_x q(x,0)}."""

    y_cap: float
    q_cap: float

    def __post_init__(self):
        if self.y_cap < 1.0 or self.q_cap < 1.0:
            raise DomainError("ceilings are floored at 1 by definition")


@dataclass(frozen=True)
class DensityFloor:
    """Amplitude constant, validity onset, and branch of the density
    lower bound."""

    k0: float
    t_min: float
    branch: Branch


def invariant_region_bound(gm: GasModel, c0: float) -> InitialBound:
    """Invariant-region constant for data with |u0| <= c0, 1/tau0 <= c0."""
    if not (c0 > 0.0):
        raise DomainError(f"c0 must be positive, got {c0}")
    base = c0 + c0**gm.theta
    c0_tilde = max(base, base ** (1.0 / gm.theta))
    return InitialBound(c0=c0, c0_tilde=c0_tilde)


def certified_initial_bound(field: FieldState) -> InitialBound:
    """Tightest certified c0 for a sampled field: max of sup|u0| and
    sup 1/tau0 over the grid."""
    c0 = max(float(np.max(np.abs(field.u))), float(np.max(1.0 / field.tau)))
    return invariant_region_bound(field.gas, c0)


def riccati_ceilings(field: FieldState) -> RiccatiCeilings:
    """Grid suprema of y(x,0) and q(x,0), floored at 1."""
    if field.t != 0.0:
        raise DomainError("ceilings are defined from the initial field (t = 0)")
    y_cap = max(1.0, float(np.max(field.y())))
    q_cap = max(1.0, float(np.max(field.q())))
    return RiccatiCeilings(y_cap=y_cap, q_cap=q_cap)


def _require_sub_gamma(gm: GasModel):
    if not (1.0 < gm.gamma < 3.0):
        raise DomainError(
            f"density floor requires 1 < gamma < 3, got gamma={gm.gamma}"
        )


def _require_floor_regime(gm: GasModel, dl: DampingLaw):
    _require_sub_gamma(gm)
    if dl.branch is Branch.GENERIC:
        threshold = dl.alpha * (gm.gamma - 1.0) / (gm.gamma - 3.0)
        if not (dl.lam >= threshold):
            raise DomainError(
                "density floor (generic branch) requires "
                f"lambda >= alpha(g-1)/(g-3) = {threshold:.6g}, got {dl.lam}"
            )


def density_floor_constant(
    gm: GasModel, dl: DampingLaw, ceilings: RiccatiCeilings
) -> float:
    """K0 of the density lower bound."""
    _require_floor_regime(gm, dl)
    g = gm.gamma
    p_lo = (g - 3.0) / (2.0 * (g - 1.0))
    bracket = (
        gm.phi_coef ** (-p_lo)
        * (ceilings.y_cap + ceilings.q_cap)
        * (3.0 - g) / (2.0 * (g - 1.0))
        * gm.k_c
    )
    return bracket ** (-4.0 / (3.0 - g))


def density_floor(
    gm: GasModel,
    dl: DampingLaw,
    ceilings: RiccatiCeilings,
    t: float,
    t_min: float = 0.0,
) -> float:
    """Time-dependent lower bound on density, valid for t > t_min.

    Generic branch:  K0 * t**(-4/(3-g))
                     * exp(-2 a (3g-1) (1+t)**(1-lam) / ((3-g)**2 (1-lam)))
    Critical branch: K0 * t**(-4/(3-g)) * (1+t)**(-2 a (3g-1)/(3-g)**2)
    """
    k0 = density_floor_constant(gm, dl, ceilings)
    if not (t > t_min):
        raise RangeError(f"floor is only valid for t > t_min = {t_min:.6g}")
    g, a = gm.gamma, dl.alpha
    power = t ** (-4.0 / (3.0 - g))
    if dl.branch is Branch.CRITICAL:
        decay = (1.0 + t) ** (-2.0 * a * (3.0 * g - 1.0) / (3.0 - g) ** 2)
    else:
        lam = dl.lam
        log_decay = (
            -2.0 * a * (3.0 * g - 1.0) * (1.0 + t) ** (1.0 - lam)
            / ((3.0 - g) ** 2 * (1.0 - lam))
        )
        if abs(log_decay) > 700.0:
            raise RangeError("floor decay exponent exceeds double range")
        decay = math.exp(log_decay)
    return k0 * power * decay


def _onset_lhs(gm: GasModel, dl: DampingLaw, ceilings: RiccatiCeilings, t: float):
    """Dominating term of the phi estimate whose crossing defines t_min."""
    g, a = gm.gamma, dl.alpha
    coef = (3.0 - g) / (4.0 * (g - 1.0)) * gm.k_c * (ceilings.y_cap + ceilings.q_cap)
    if dl.branch is Branch.CRITICAL:
        factor = (1.0 + t) ** (a * (3.0 * g - 1.0) / (2.0 * (3.0 - g)))
    else:
        lam = dl.lam
        log_f = (
            a * (3.0 * g - 1.0) * (1.0 + t) ** (1.0 - lam)
            / (2.0 * (3.0 - g) * (1.0 - lam))
        )
        if log_f > 700.0:
            return math.inf
        factor = math.exp(log_f)
    return coef * t * factor


def initial_phi_term_sup(field: FieldState) -> float:
    """sup_x of phi(x,0)**((g-3)/(2(g-1))), the term the onset must
    dominate."""
    g = field.gas.gamma
    p_lo = (g - 3.0) / (2.0 * (g - 1.0))
    return float(np.max(field.phi() ** p_lo))


def density_floor_onset(
    gm: GasModel,
    dl: DampingLaw,
    ceilings: RiccatiCeilings,
    phi0_sup: float,
) -> float:
    """Constructive validity onset T of the density floor.

    phi0_sup is the supremum over the initial data of
    phi(x,0)**((g-3)/(2(g-1))) (see initial_phi_term_sup).  Returns the
    first time at which the growing term of the phi estimate reaches
    phi0_sup, after which doubling its coefficient absorbs the initial
    term.  Solved by monotone bisection to absolute 1e-9.
    """
    _require_floor_regime(gm, dl)
    if not (phi0_sup > 0.0):
        raise DomainError("phi0_sup must be positive")
    # bracket the crossing by doubling; lhs is continuous, increasing,
    # 0 at t=0 and unbounded
    hi = 1e-6
    while _onset_lhs(gm, dl, ceilings, hi) < phi0_sup:
        hi *= 2.0
        if hi > 1e18:
            raise RangeError("density-floor onset did not bracket")
    lo = 0.0
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if _onset_lhs(gm, dl, ceilings, mid) >= phi0_sup:
            hi = mid
        else:
            lo = mid
    return hi


def make_density_floor(
    gm: GasModel, dl: DampingLaw, ceilings: RiccatiCeilings, phi0_sup: float
) -> DensityFloor:
    """Bundle the floor constant with its validity onset."""
    return DensityFloor(
        k0=density_floor_constant(gm, dl, ceilings),
        t_min=density_floor_onset(gm, dl, ceilings, phi0_sup),
        branch=dl.branch,
    )


# ---------------------------------------------------------------------
# blow-up threshold constants for gamma > 3
# ---------------------------------------------------------------------

def k1_constant(gm: GasModel, ib: InitialBound) -> float:
    """K1 = K_c(g+1)/(2(g-1)) * phi_coef**(-(g-3)/(2(g-1)))
    * c0_tilde**((3-g)/4)."""
    g = gm.gamma
    p_lo = (g - 3.0) / (2.0 * (g - 1.0))
    return (
        gm.k_c * (g + 1.0) / (2.0 * (g - 1.0))
        * gm.phi_coef ** (-p_lo)
        * ib.c0_tilde ** ((3.0 - g) / 4.0)
    )


def k2_closed_form(gm: GasModel, dl: DampingLaw) -> float:
    """Closed-form K2 for 0 <= lambda < 1 (valid down to lambda = 0)."""
    g, a, lam = gm.gamma, dl.alpha, dl.lam
    if a == 0.0:
        return math.inf
    return (
        2.0 * (g - 3.0) / (a * (3.0 * g - 1.0))
        * math.exp(-a * (3.0 * g - 1.0) / (2.0 * (g - 3.0) * (1.0 - lam)))
    )


def k2_integral(gm: GasModel, dl: DampingLaw) -> float:
    """K2 for lambda <= 0 by adaptive quadrature of
    int_0^inf exp(-a(3g-1)(1+s)**(1-lam) / (2(g-3)(1-lam))) ds.

    The integrand decays superexponentially for gamma > 3 and
    1 - lambda >= 1; the tail is truncated where it falls below 1e-16
    of its initial value.
    """
    g, a, lam = gm.gamma, dl.alpha, dl.lam
    if a == 0.0:
        return math.inf
    rate = a * (3.0 * g - 1.0) / (2.0 * (g - 3.0) * (1.0 - lam))

    def integrand(s):
        return math.exp(-rate * (1.0 + s) ** (1.0 - lam))

    f0 = integrand(0.0)
    upper = 1.0
    while integrand(upper) > 1e-16 * f0:
        upper *= 2.0
        if upper > 1e12:
            break
    val, _ = quad(integrand, 0.0, upper, epsrel=1e-11, epsabs=0.0, limit=400)
    return val


def k3_constant(gm: GasModel, dl: DampingLaw) -> float:
    """K3 of the a0/a2 ratio bound."""
    g, a = gm.gamma, dl.alpha
    return (
        2.0 * a * (g - 1.0) ** 2
        / (gm.k_c**2 * (g - 3.0) ** 2 * (g + 1.0))
        * gm.phi_coef ** ((g - 3.0) / (g - 1.0))
    )


def threshold_N(gm: GasModel, dl: DampingLaw, ib: InitialBound) -> float:
    """Blow-up threshold N for gamma > 3 and lambda outside the gap
    between 1 and alpha(g-1)/(g-3).

    lambda < min{1, a(g-1)/(g-3)}:  N = 1/(K1*K2).
    lambda > max{1, a(g-1)/(g-3)}:  N = K4 = sqrt(K3 * c0_tilde**((g-3)/2)
                                                  * lambda * (g-3)).
    Raises RegimeError inside the gap and on its boundary curves.
    """
    g, a, lam = gm.gamma, dl.alpha, dl.lam
    if not (g > 3.0):
        raise RegimeError(f"threshold N requires gamma > 3, got {g}")
    ratio = a * (g - 1.0) / (g - 3.0)
    lo, hi = min(1.0, ratio), max(1.0, ratio)
    if lam < lo:
        if a == 0.0:
            return 0.0
        k1 = k1_constant(gm, ib)
        k2 = k2_closed_form(gm, dl) if lam >= 0.0 else k2_integral(gm, dl)
        return 1.0 / (k1 * k2)
    if lam > hi:
        k3 = k3_constant(gm, dl)
        return math.sqrt(k3 * ib.c0_tilde ** ((g - 3.0) / 2.0) * lam * (g - 3.0))
    raise RegimeError(
        f"lambda = {lam} is inside the gap [{lo:.6g}, {hi:.6g}] "
        "where no blow-up threshold is available"
    )


def threshold_N1(gm: GasModel, dl: DampingLaw, ib: InitialBound) -> float:
    """Blow-up threshold N1 for the critical branch (lambda = 1,
    gamma > 3, alpha >= (g-3)/(g-1)): N1 = 1/(K1*K5) with
    K5 = 2(g-3)/(a(3g-1) - 2(g-3))."""
    g, a = gm.gamma, dl.alpha
    if not (g > 3.0):
        raise RegimeError(f"threshold N1 requires gamma > 3, got {g}")
    if dl.branch is not Branch.CRITICAL:
        raise RegimeError("threshold N1 requires lambda = 1 exactly")
    if not (a >= (g - 3.0) / (g - 1.0)):
        raise RegimeError(
            f"threshold N1 requires alpha >= (g-3)/(g-1) = {(g - 3.0) / (g - 1.0):.6g}"
        )
    denom = a * (3.0 * g - 1.0) - 2.0 * (g - 3.0)
    if not (denom > 0.0):
        raise RegimeError("threshold N1 requires alpha(3g-1) > 2(g-3)")
    k5 = 2.0 * (g - 3.0) / denom
    return 1.0 / (k1_constant(gm, ib) * k5)
