"""Built-in benchmark objectives.

Three families: a scalar periodic problem with a logistic penalty, a
planar target-tracking problem with a base-station penalty, and drifting
quadratics used for exactness tests (their prediction step is exact when
the drift is affine in time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .objective import SmoothnessConstants, TimeVaryingObjective

# Defaults for the planar tracking problem. The bundled bound constants
# (m=1.01, L=3.45, c0=3.16, c1=0.06, c2=0, c3=0.10) must hold as valid
# bounds over the position domain; these penalty parameters keep them
# valid with positive margin while the optimal path still traverses the
# domain at the scale of the reference trajectory.
TRACKING_MU1 = 1.0e5
TRACKING_MU2 = 5.0e-6
TRACKING_BASE = (100.0, 100.0)
TRACKING_OMEGA = 0.01
TRACKING_DOMAIN = ((-150.0, 150.0), (-150.0, 150.0))

TRACKING_CONSTANTS = SmoothnessConstants(
    m=1.01, L=3.45, c0=3.16, c1=0.06, c2=0.0, c3=0.10
)


@dataclass(frozen=True)
class ScalarProblemParams:
    """Parameters of the scalar problem: angular rate omega [rad/s],
    logistic weight kappa and slope mu (both dimensionless)."""

    omega: float = 0.02 * math.pi
    kappa: float = 7.5
    mu: float = 1.75

    def __post_init__(self):
        if self.kappa < 0 or self.mu < 0:
            raise ValueError("kappa and mu must be nonnegative")


@dataclass(frozen=True)
class ReferencePath:
    """A smooth reference curve y(t) with its first two time derivatives."""

    position: Callable[[float], np.ndarray]
    velocity: Callable[[float], np.ndarray]
    acceleration: Callable[[float], np.ndarray]


def lissajous_path(radius: float = 100.0, omega: float = TRACKING_OMEGA) -> ReferencePath:
    """The built-in reference path y(t) = radius * (cos(w t), sin(3 w t))."""

    def position(t: float) -> np.ndarray:
        return np.array([radius * math.cos(omega * t),
                         radius * math.sin(3 * omega * t)])

    def velocity(t: float) -> np.ndarray:
        return np.array([-radius * omega * math.sin(omega * t),
                         3 * radius * omega * math.cos(3 * omega * t)])

    def acceleration(t: float) -> np.ndarray:
        return np.array([-radius * omega**2 * math.cos(omega * t),
                         -9 * radius * omega**2 * math.sin(3 * omega * t)])

    return ReferencePath(position, velocity, acceleration)


@dataclass(frozen=True)
class TrackingProblemParams:
    """Parameters of the planar tracking problem: penalty weight mu1 [m^2],
    penalty rate mu2 [1/m^2], base station position [m], path angular rate
    omega [rad/s] and the axis-aligned position domain [m]."""

    mu1: float = TRACKING_MU1
    mu2: float = TRACKING_MU2
    base: tuple[float, float] = TRACKING_BASE
    omega: float = TRACKING_OMEGA
    domain: tuple[tuple[float, float], tuple[float, float]] = TRACKING_DOMAIN

    def __post_init__(self):
        if self.mu1 < 0 or self.mu2 < 0:
            raise ValueError("mu1 and mu2 must be nonnegative")
        for coord, (lo, hi) in zip(self.base, self.domain):
            if not (lo <= coord <= hi):
                raise ValueError("base station must lie inside the domain")


def make_scalar_problem(params: ScalarProblemParams = ScalarProblemParams()
                        ) -> TimeVaryingObjective:
    """f(x; t) = (x - cos(w t))^2 / 2 + kappa * log(1 + exp(mu x)).

    The quadratic term chases a periodic target while the softplus term
    penalizes large x. All derivatives are analytic; the attached
    constants are the exact suprema over x in R:
    m = 1, L = 1 + kappa mu^2 / 4, c0 = w, c1 = kappa mu^3 sqrt(3)/18,
    c2 = 0, c3 = w^2.
    """
    w, kappa, mu = params.omega, params.kappa, params.mu

    def sigmoid(z: float) -> float:
        if z >= 0:
            return 1.0 / (1.0 + math.exp(-z))
        e = math.exp(z)
        return e / (1.0 + e)

    def softplus(z: float) -> float:
        if z > 30:
            return z + math.log1p(math.exp(-z))
        return math.log1p(math.exp(z))

    def value(x, t):
        d = x[0] - math.cos(w * t)
        return 0.5 * d * d + kappa * softplus(mu * x[0])

    def gradient(x, t):
        return np.array([x[0] - math.cos(w * t) + kappa * mu * sigmoid(mu * x[0])])

    def hessian(x, t):
        s = sigmoid(mu * x[0])
        return np.array([[1.0 + kappa * mu * mu * s * (1.0 - s)]])

    def mixed_tx(x, t):
        return np.array([w * math.sin(w * t)])

    def mixed_ttx(x, t):
        return np.array([w * w * math.cos(w * t)])

    constants = SmoothnessConstants(
        m=1.0,
        L=1.0 + kappa * mu * mu / 4.0,
        c0=w,
        c1=kappa * mu**3 * math.sqrt(3.0) / 18.0,
        c2=0.0,
        c3=w * w,
    )
    return TimeVaryingObjective(
        dim=1, value=value, gradient=gradient, hessian=hessian,
        mixed_tx=mixed_tx, mixed_ttx=mixed_ttx, constants=constants,
    )


def make_tracking_problem(params: TrackingProblemParams = TrackingProblemParams(),
                          path: ReferencePath | None = None,
                          constants: SmoothnessConstants | None = None,
                          ) -> TimeVaryingObjective:
    """f(x; t) = (|x - y(t)|^2 + mu1 exp(mu2 |x - b|^2)) / 2.

    Chases the reference path y(t) while an exponential penalty keeps the
    decision variable near the base station b. With the default path the
    time derivatives of the gradient are analytic (-ydot, -yddot). The
    attached constants are bounds valid over ``params.domain``.
    """
    if path is None:
        path = lissajous_path(omega=params.omega)
    mu1, mu2 = params.mu1, params.mu2
    b = np.asarray(params.base, dtype=float)
    eye = np.eye(2)

    def value(x, t):
        d = x - path.position(t)
        u = x - b
        return 0.5 * (d @ d + mu1 * math.exp(mu2 * (u @ u)))

    def gradient(x, t):
        u = x - b
        return (x - path.position(t)) + mu1 * mu2 * math.exp(mu2 * (u @ u)) * u

    def hessian(x, t):
        u = x - b
        e = mu1 * mu2 * math.exp(mu2 * (u @ u))
        return eye + e * (eye + 2.0 * mu2 * np.outer(u, u))

    def mixed_tx(x, t):
        return -path.velocity(t)

    def mixed_ttx(x, t):
        return -path.acceleration(t)

    return TimeVaryingObjective(
        dim=2, value=value, gradient=gradient, hessian=hessian,
        mixed_tx=mixed_tx, mixed_ttx=mixed_ttx,
        constants=TRACKING_CONSTANTS if constants is None else constants,
    )


def problem_from_dict(spec: dict) -> TimeVaryingObjective:
    """Build a benchmark objective from a plain-dict description.

    Used by the CLI config loader and by sweep workers, which rebuild
    objectives instead of pickling closures. Supported kinds:

    - {"kind": "scalar", "omega": ..., "kappa": ..., "mu": ...}
    - {"kind": "tracking", "mu1": ..., "mu2": ..., "base": [x, y],
       "omega": ..., "domain": [[lo, hi], [lo, hi]]}
    - {"kind": "quadratic", "n": ..., "drift": "affine"|"sine",
       "rate"/"amplitude": [...], "offset"/"freq": [...]}
    """
    spec = dict(spec)
    kind = spec.pop("kind")
    if kind == "scalar":
        return make_scalar_problem(ScalarProblemParams(**spec))
    if kind == "tracking":
        if "base" in spec:
            spec["base"] = tuple(spec["base"])
        if "domain" in spec:
            spec["domain"] = tuple(tuple(pair) for pair in spec["domain"])
        return make_tracking_problem(TrackingProblemParams(**spec))
    if kind == "quadratic":
        n = int(spec.pop("n"))
        shape = spec.pop("drift", "affine")
        if shape == "affine":
            rate = np.asarray(spec.pop("rate", [1.0] * n), dtype=float)
            offset = np.asarray(spec.pop("offset", [0.0] * n), dtype=float)
            return make_quadratic_problem(
                n,
                drift=lambda t: offset + rate * t,
                drift_rate=lambda t: rate,
                drift_accel=lambda t: np.zeros(n),
            )
        if shape == "sine":
            amp = np.asarray(spec.pop("amplitude", [1.0] * n), dtype=float)
            freq = np.asarray(spec.pop("freq", [1.0] * n), dtype=float)
            return make_quadratic_problem(
                n,
                drift=lambda t: amp * np.sin(freq * t),
                drift_rate=lambda t: amp * freq * np.cos(freq * t),
                drift_accel=lambda t: -amp * freq**2 * np.sin(freq * t),
            )
        raise ValueError(f"unknown quadratic drift {shape!r}")
    raise ValueError(f"unknown problem kind {kind!r}")


def make_quadratic_problem(n: int,
                           drift: Callable[[float], np.ndarray],
                           drift_rate: Callable[[float], np.ndarray],
                           drift_accel: Callable[[float], np.ndarray],
                           horizon: tuple[float, float] = (0.0, 100.0),
                           ) -> TimeVaryingObjective:
    """f(x; t) = |x - drift(t)|^2 / 2 with identity Hessian.

    The optimizer is drift(t) itself, so prediction is exact for affine
    drifts and every bound constant is available in closed form:
    m = L = 1, c1 = c2 = 0, c0 and c3 are suprema of |drift_rate| and
    |drift_accel| sampled densely over ``horizon``.
    """
    eye = np.eye(n)

    def value(x, t):
        d = x - drift(t)
        return 0.5 * float(d @ d)

    def gradient(x, t):
        return x - drift(t)

    def hessian(x, t):
        return eye

    def mixed_tx(x, t):
        return -drift_rate(t)

    def mixed_ttx(x, t):
        return -drift_accel(t)

    ts = np.linspace(horizon[0], horizon[1], 20001)
    c0 = max(float(np.linalg.norm(drift_rate(t))) for t in ts)
    c3 = max(float(np.linalg.norm(drift_accel(t))) for t in ts)
    constants = SmoothnessConstants(m=1.0, L=1.0, c0=c0, c1=0.0, c2=0.0, c3=c3)
    return TimeVaryingObjective(
        dim=n, value=value, gradient=gradient, hessian=hessian,
        mixed_tx=mixed_tx, mixed_ttx=mixed_ttx, constants=constants,
    )
