"""Pointwise algebra of the damped p-system.

Pressure law, the integrated sound-speed variable phi, derived gas
constants, Riemann invariants, the gradient variables y/q that decouple
the characteristic ODEs, and the Riccati coefficients for both damping
branches (decay exponent != 1 and == 1).

All functions accept scalars or numpy arrays in the field slots and are
pure; every type here is an immutable value.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RangeError

# Largest |log| we are willing to exponentiate before declaring overflow.
_LOG_CAP = 700.0


class Branch(enum.Enum):
    GENERIC = "generic"    # decay exponent != 1
    CRITICAL = "critical"  # decay exponent == 1


@dataclass(frozen=True)
class GasModel:
    """Adiabatic exponent, pressure constant, and the derived constants.

    p = big_k * tau**(-gamma).  The derived constants satisfy
    k_p = (gamma-1)/(2*gamma) * k_c and k_tau * k_c = (gamma-1)/2.
    gamma == 3 is rejected: every coefficient formula downstream divides
    by gamma - 3.
    """

    gamma: float
    big_k: float
    theta: float = field(init=False)
    k_tau: float = field(init=False)
    k_p: float = field(init=False)
    k_c: float = field(init=False)
    phi_coef: float = field(init=False)  # 2*sqrt(K*gamma)/(gamma-1)

    def __post_init__(self):
        g, k = self.gamma, self.big_k
        if not (g > 1.0):
            raise DomainError(f"gamma must exceed 1, got {g}")
        if g == 3.0:
            raise DomainError("gamma == 3 is outside the model (division by gamma-3)")
        if not (k > 0.0):
            raise DomainError(f"big_k must be positive, got {k}")
        phi_coef = 2.0 * math.sqrt(k * g) / (g - 1.0)
        k_tau = phi_coef ** (2.0 / (g - 1.0))
        object.__setattr__(self, "theta", (g - 1.0) / 2.0)
        object.__setattr__(self, "phi_coef", phi_coef)
        object.__setattr__(self, "k_tau", k_tau)
        object.__setattr__(self, "k_p", k * k_tau ** (-g))
        object.__setattr__(self, "k_c", math.sqrt(k * g) * k_tau ** (-(g + 1.0) / 2.0))


def derive_constants(gamma: float, big_k: float) -> GasModel:
    """Build a GasModel, validating gamma > 1, gamma != 3, big_k > 0."""
    return GasModel(gamma=gamma, big_k=big_k)


@dataclass(frozen=True)
class DampingLaw:
    """Damping magnitude alpha >= 0 and decay exponent lam.

    The branch flag is decided by exact equality lam == 1; callers who
    want near-critical behaviour pass lam = 1 +- eps explicitly.
    """

    alpha: float
    lam: float
    branch: Branch = field(init=False)

    def __post_init__(self):
        if not (self.alpha >= 0.0):
            raise DomainError(f"alpha must be nonnegative, got {self.alpha}")
        if not math.isfinite(self.lam):
            raise DomainError(f"lambda must be finite, got {self.lam}")
        branch = Branch.CRITICAL if self.lam == 1.0 else Branch.GENERIC
        object.__setattr__(self, "branch", branch)


@dataclass(frozen=True)
class PointState:
    """Specific volume, velocity and time at one Lagrangian point."""

    tau: float
    u: float
    t: float = 0.0

    def __post_init__(self):
        if not (self.tau > 0.0):
            raise DomainError(f"tau must be positive (no vacuum), got {self.tau}")
        if not (self.t >= 0.0):
            raise DomainError(f"t must be nonnegative, got {self.t}")


@dataclass(frozen=True)
class GradientPoint:
    """Riemann-invariant gradients A = w_x and B = z_x at one point."""

    a_w: float
    b_z: float

    def __post_init__(self):
        if not (math.isfinite(self.a_w) and math.isfinite(self.b_z)):
            raise DomainError("gradient components must be finite")


def phi_of_tau(gm: GasModel, tau):
    """phi = 2 sqrt(K gamma)/(gamma-1) * tau**(-(gamma-1)/2), monotone
    decreasing in tau."""
    if np.any(np.asarray(tau) <= 0.0):
        raise DomainError("tau must be positive")
    return gm.phi_coef * tau ** (-gm.theta)


def tau_of_phi(gm: GasModel, phi):
    """Inverse of phi_of_tau: tau = k_tau * phi**(-2/(gamma-1))."""
    if np.any(np.asarray(phi) <= 0.0):
        raise DomainError("phi must be positive")
    return gm.k_tau * phi ** (-2.0 / (gm.gamma - 1.0))


def pressure(gm: GasModel, tau):
    """p = K * tau**(-gamma)."""
    if np.any(np.asarray(tau) <= 0.0):
        raise DomainError("tau must be positive")
    return gm.big_k * tau ** (-gm.gamma)


def sound_speed(gm: GasModel, tau):
    """Lagrangian sound speed c = sqrt(K gamma) * tau**(-(gamma+1)/2)."""
    if np.any(np.asarray(tau) <= 0.0):
        raise DomainError("tau must be positive")
    return math.sqrt(gm.big_k * gm.gamma) * tau ** (-(gm.gamma + 1.0) / 2.0)


def sound_speed_of_phi(gm: GasModel, phi):
    """Same speed through the phi route: c = k_c * phi**((gamma+1)/(gamma-1))."""
    if np.any(np.asarray(phi) <= 0.0):
        raise DomainError("phi must be positive")
    return gm.k_c * phi ** ((gm.gamma + 1.0) / (gm.gamma - 1.0))


def riemann_invariants(gm: GasModel, p: PointState):
    """(w, z) = (u + phi, u - phi)."""
    phi = phi_of_tau(gm, p.tau)
    return p.u + phi, p.u - phi


def gradient_from_physical(gm: GasModel, tau, u_x, tau_x) -> GradientPoint:
    """A = w_x = u_x - c*tau_x and B = z_x = u_x + c*tau_x
    (phi_x = -c * tau_x by the chain rule)."""
    c = sound_speed(gm, tau)
    return GradientPoint(a_w=float(u_x - c * tau_x), b_z=float(u_x + c * tau_x))


# exponents of phi that recur in the gradient-variable algebra
def _p_hi(gm: GasModel) -> float:
    return (gm.gamma + 1.0) / (2.0 * (gm.gamma - 1.0))


def _p_lo(gm: GasModel) -> float:
    return (gm.gamma - 3.0) / (2.0 * (gm.gamma - 1.0))


def log_time_factor(gm: GasModel, dl: DampingLaw, t):
    """Log of the integrating-factor multiplier in y, q, and the Riccati
    coefficients.

    Generic branch: alpha(3g-1)/(2(g-3)(1-lam)) * (1+t)**(1-lam).
    Critical branch: alpha(3g-1)/(2(g-3)) * log(1+t).
    """
    g, a = gm.gamma, dl.alpha
    if np.any(np.asarray(t) < 0.0):
        raise DomainError("t must be nonnegative")
    if dl.branch is Branch.CRITICAL:
        return a * (3.0 * g - 1.0) / (2.0 * (g - 3.0)) * np.log1p(t)
    lam = dl.lam
    return (
        a * (3.0 * g - 1.0) / (2.0 * (g - 3.0) * (1.0 - lam))
        * (1.0 + t) ** (1.0 - lam)
    )


def _checked_exp(log_val):
    if np.any(np.abs(np.asarray(log_val)) > _LOG_CAP):
        raise RangeError(
            "time factor exponent exceeds double-precision range "
            f"(|log| > {_LOG_CAP:g})"
        )
    return np.exp(log_val)


def _tilde_gradient(gm: GasModel, dl: DampingLaw, phi, grad, t):
    """Shared prefactor of y and q before the time multiplier."""
    if np.any(np.asarray(phi) <= 0.0):
        raise DomainError("phi must be positive")
    g, a, lam = gm.gamma, dl.alpha, dl.lam
    shift = a * (g - 1.0) / (gm.k_c * (g - 3.0) * (1.0 + t) ** lam)
    return phi ** _p_hi(gm) * grad - shift * phi ** _p_lo(gm)


def y_variable(gm: GasModel, dl: DampingLaw, phi, a_w, t):
    """Decoupled gradient variable along forward characteristics.

    y = (phi**((g+1)/(2(g-1))) * A
         - alpha(g-1)/(K_c (g-3) (1+t)**lam) * phi**((g-3)/(2(g-1))))
        * exp(log_time_factor).
    """
    return _tilde_gradient(gm, dl, phi, a_w, t) * _checked_exp(
        log_time_factor(gm, dl, t)
    )


def q_variable(gm: GasModel, dl: DampingLaw, phi, b_z, t):
    """Mirror of y_variable with B = z_x in the gradient slot."""
    return _tilde_gradient(gm, dl, phi, b_z, t) * _checked_exp(
        log_time_factor(gm, dl, t)
    )


def riccati_coefficients(gm: GasModel, dl: DampingLaw, phi, t):
    """(c0, c2) of the Riccati equation y' = c0 - c2*y**2 along a
    characteristic.  c2 > 0 always; the sign of c0 encodes the regime.

    Numerator of c0:
      lam*alpha*(g-1)*(g-3)*(1+t)**(lam-1) - alpha**2*(g-1)**2,
    divided by K_c*(g-3)**2*(1+t)**(2 lam), times phi**((g-3)/(2(g-1)))
    and the time factor.  The critical branch is the lam = 1
    specialisation with a power-law time factor.
    """
    if np.any(np.asarray(phi) <= 0.0):
        raise DomainError("phi must be positive")
    g, a, lam = gm.gamma, dl.alpha, dl.lam
    log_mu = log_time_factor(gm, dl, t)
    mu = _checked_exp(log_mu)
    num0 = (
        lam * a * (g - 1.0) * (g - 3.0) * (1.0 + t) ** (lam - 1.0)
        - a * a * (g - 1.0) ** 2
    )
    c0 = (
        num0 / (gm.k_c * (g - 3.0) ** 2 * (1.0 + t) ** (2.0 * lam))
        * phi ** _p_lo(gm) * mu
    )
    c2 = (
        gm.k_c * (g + 1.0) / (2.0 * (g - 1.0))
        * phi ** (-_p_lo(gm)) / mu
    )
    return c0, c2
