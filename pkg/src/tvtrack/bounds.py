"""Tracking-error bounds, contraction constants, and regime conditions.

Everything here is closed-form arithmetic on the smoothness constants.
The envelopes are rigorous upper bounds on the tracking error of the
prediction-correction solvers, so simulations must never exceed them;
the harness checks exactly that.

Notation used throughout:

    rho    per-gradient-step contraction, max{|1-gamma m|, |1-gamma L|}
    sigma  per-prediction inflation, 1 + h (c0 c1 / m^2 + c2 / m)
    Gamma  one-period Euler truncation bound,
           (h^2/2) (c0^2 c1 / m^3 + 2 c0 c2 / m^2 + c3 / m)
    Gamma2 crude prediction drift bound, 2 h c0 / m
    delta1 = c0 c1 / m^2 + c2 / m
    delta2 = c0^2 c1 / (2 m^3) + c0 c2 / m^2 + c3 / (2 m)
    Q      = 2 m / c1 (Newton contraction radius scale)

Solvers using the backward-difference time derivative pay an extra
h c3 / (2 m) per prediction, which doubles the c3 term in Gamma and
replaces delta2 by delta2' = delta2 + c3 / (2 m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleRegime, QuadraticProblem
from .objective import SmoothnessConstants


def contraction_factor(gamma: float, m: float, L: float) -> float:
    """Distance contraction of one gradient step with stepsize gamma."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if not (0 < m <= L):
        raise ValueError("need 0 < m <= L")
    return max(abs(1.0 - gamma * m), abs(1.0 - gamma * L))


def prediction_inflation(h: float, c: SmoothnessConstants) -> float:
    """sigma: worst-case error growth of one prediction step."""
    return 1.0 + h * (c.c0 * c.c1 / c.m**2 + c.c2 / c.m)


def truncation_bound(h: float, c: SmoothnessConstants,
                     approximate: bool = False) -> float:
    """Gamma: bound on the one-period Euler discretization error.

    With ``approximate`` the c3 term is doubled, accounting for the
    backward-difference estimate of the gradient's time derivative.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    c3_coeff = 2.0 if approximate else 1.0
    return (h * h / 2.0) * (
        c.c0**2 * c.c1 / c.m**3
        + 2.0 * c.c0 * c.c2 / c.m**2
        + c3_coeff * c.c3 / c.m
    )


def drift_sensitivity(c: SmoothnessConstants) -> float:
    """delta1: how fast the prediction direction varies with x."""
    return c.c0 * c.c1 / c.m**2 + c.c2 / c.m


def delta2(c: SmoothnessConstants, approximate: bool = False) -> float:
    d = c.c0**2 * c.c1 / (2 * c.m**3) + c.c0 * c.c2 / c.m**2 + c.c3 / (2 * c.m)
    if approximate:
        d += c.c3 / (2 * c.m)
    return d


def max_h_for_oh2(tau: int, gamma: float, c: SmoothnessConstants) -> float:
    """Largest sampling period for which rho^tau sigma < 1.

    Below this threshold the tracking error floor is O(h^2) instead of
    O(h). Returns +inf when the condition is vacuous (delta1 = 0).
    """
    rho = contraction_factor(gamma, c.m, c.L)
    if rho >= 1:
        raise ValueError("need rho < 1 (gamma < 2/L)")
    d1 = drift_sensitivity(c)
    if d1 == 0.0:
        return math.inf
    return (rho ** (-tau) - 1.0) / d1


@dataclass(frozen=True)
class TrackingEnvelope:
    """Per-sample error bounds and their asymptotic values.

    ``per_k_oh`` holds for any sampling period; ``per_k_oh2`` is the
    tighter bound available when rho^tau sigma < 1 (None otherwise),
    with matching asymptotes.
    """

    per_k_oh: np.ndarray
    per_k_oh2: np.ndarray | None
    asymptotic_oh: float
    asymptotic_oh2: float | None


def gradient_tracking_envelope(ks, tau: int, h: float, gamma: float,
                               c: SmoothnessConstants, initial_err: float,
                               approximate: bool = False) -> TrackingEnvelope:
    """Error envelopes for the gradient-corrected solvers.

    ``approximate`` selects the backward-difference variant (doubled c3).
    ``ks`` may be an int or an array of sample indices.
    """
    rho = contraction_factor(gamma, c.m, c.L)
    if rho >= 1:
        raise ValueError("envelopes require rho < 1 (gamma < 2/L)")
    ks = np.asarray(ks, dtype=float)
    rt = rho**tau
    gam = truncation_bound(h, c, approximate=approximate)
    gam2 = 2.0 * h * c.c0 / c.m
    per_oh = rt**ks * initial_err + rt * (gam2 + gam) * (1 - rt**ks) / (1 - rt)
    asy_oh = 2.0 * c.c0 * rt * h / (c.m * (1 - rt))
    sigma = prediction_inflation(h, c)
    if rt * sigma < 1.0:
        q = rt * sigma
        per_oh2 = q**ks * initial_err + rt * gam * (1 - q**ks) / (1 - q)
        asy_oh2 = rt * gam / (1 - q)
    else:
        per_oh2 = None
        asy_oh2 = None
    return TrackingEnvelope(per_oh, per_oh2, asy_oh, asy_oh2)


@dataclass(frozen=True)
class NewtonCheck:
    """Admissibility and floor of the Newton-corrected solvers."""

    admissible: bool
    h_max: float
    floor: float


def newton_tracking_check(c_loc: float, tau: int, h: float,
                          c: SmoothnessConstants,
                          approximate: bool = False) -> NewtonCheck:
    """Sampling-period condition and error floor of Newton correction.

    ``c_loc`` scales the locality requirement |x_0 - x*(t_0)| <= c_loc h^2.
    The floor decays as h^(4 tau) once h is below the admissibility
    threshold. Raises QuadraticProblem when c1 = 0: Newton is then exact
    and the floor reduces to the truncation error alone.
    """
    if c_loc <= 0:
        raise ValueError("c must be positive")
    if c.c1 == 0.0:
        raise QuadraticProblem("c1 = 0: Newton correction is exact")
    q = 2.0 * c.m / c.c1
    d1 = drift_sensitivity(c)
    d2 = delta2(c, approximate=approximate)
    h_max = min(
        1.0,
        (q ** (2 * tau - 1) * c_loc / ((1 + d1) * c_loc + d2) ** (2 * tau))
        ** (1.0 / (4 * tau - 2)),
    )
    sigma = prediction_inflation(h, c)
    floor = q ** (-(2 * tau - 1)) * (sigma * c_loc + d2) ** (2 * tau) * h ** (4 * tau)
    return NewtonCheck(admissible=h <= h_max, h_max=h_max, floor=floor)


@dataclass(frozen=True)
class HybridConstants:
    """Admissible switch constants for the gradient-then-Newton strategy."""

    c_min: float
    m: float
    h: float

    def switch_threshold(self, c_loc: float) -> float:
        """Gradient-norm level below which Newton correction takes over."""
        return self.m * c_loc * self.h**2


def hybrid_constants(tau: int, gamma: float, h: float,
                     c: SmoothnessConstants) -> HybridConstants:
    """Smallest admissible hybrid constant c for given (tau, gamma, h).

    c must exceed the gradient solver's asymptotic floor coefficient so
    the switch condition is eventually reached.
    """
    rho = contraction_factor(gamma, c.m, c.L)
    rt = rho**tau
    sigma = prediction_inflation(h, c)
    if rt * sigma >= 1.0:
        raise InadmissibleRegime(
            f"rho^tau sigma = {rt * sigma:.4f} >= 1; no h^2 floor to switch at"
        )
    c_min = rt * delta2(c) / (1.0 - rt * sigma)
    return HybridConstants(c_min=c_min, m=c.m, h=h)


@dataclass(frozen=True)
class BoundReport:
    """Every constant a run's bound checks need, in one audit-friendly bag.

    ``q`` is None for quadratic problems (c1 = 0), serialized as the
    string "quadratic". Envelope fields are None when their regime
    condition fails.
    """

    rho: float
    sigma: float
    gamma_trunc: float
    gamma2: float
    delta1: float
    delta2: float
    delta2_prime: float
    q: float | None
    h_max_oh2: float
    h_max_newton: float | None
    asymptotic_oh: float
    asymptotic_oh2: float | None
    newton_floor: float | None

    def as_json_dict(self) -> dict:
        def enc(v):
            if v is None or math.isnan(v):
                return None
            if math.isinf(v):
                return "inf"
            return v

        return {
            "rho": self.rho,
            "sigma": self.sigma,
            "gamma_trunc": self.gamma_trunc,
            "gamma2": self.gamma2,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "delta2_prime": self.delta2_prime,
            "Q": "quadratic" if self.q is None else enc(self.q),
            "h_max_oh2": enc(self.h_max_oh2),
            "h_max_newton": enc(self.h_max_newton),
            "asymptotic_oh": self.asymptotic_oh,
            "asymptotic_oh2": enc(self.asymptotic_oh2),
            "newton_floor": enc(self.newton_floor),
        }


def bound_report(c: SmoothnessConstants, gamma: float, tau: int, h: float,
                 c_loc: float | None = None) -> BoundReport:
    """Evaluate every bound constant for one solver configuration."""
    rho = contraction_factor(gamma, c.m, c.L)
    sigma = prediction_inflation(h, c)
    rt = rho**tau
    gam = truncation_bound(h, c)
    gam2 = 2.0 * h * c.c0 / c.m
    d1 = drift_sensitivity(c)
    d2 = delta2(c)
    d2p = delta2(c, approximate=True)
    quadratic = c.c1 == 0.0
    h_max_newton = None
    newton_floor = None
    if c_loc is not None and not quadratic:
        chk = newton_tracking_check(c_loc, tau, h, c)
        h_max_newton = chk.h_max
        newton_floor = chk.floor
    asy_oh = 2.0 * c.c0 * rt * h / (c.m * (1 - rt)) if rho < 1 else math.inf
    asy_oh2 = rt * gam / (1 - rt * sigma) if rho < 1 and rt * sigma < 1 else None
    return BoundReport(
        rho=rho,
        sigma=sigma,
        gamma_trunc=gam,
        gamma2=gam2,
        delta1=d1,
        delta2=d2,
        delta2_prime=d2p,
        q=None if quadratic else 2.0 * c.m / c.c1,
        h_max_oh2=max_h_for_oh2(tau, gamma, c) if rho < 1 else math.nan,
        h_max_newton=h_max_newton,
        asymptotic_oh=asy_oh,
        asymptotic_oh2=asy_oh2,
        newton_floor=newton_floor,
    )
