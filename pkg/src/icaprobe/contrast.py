"""Contrast nonlinearities and the orthonormalized K construction.

A chosen nonlinearity G is corrected by a quadratic polynomial and
normalized,

    K(x) = (G(x) + alpha x^2 + beta x + gamma) / delta,

so that K is orthogonal to 1, x, x^2 under the standard normal weight and
has unit Gaussian norm.  The closed forms are

    alpha = (1/2) (E[G(Z)] - E[Z^2 G(Z)])
    beta  = -E[Z G(Z)]
    gamma = (1/2) (E[Z^2 G(Z)] - 3 E[G(Z)])
    delta = +-sqrt(E[(G + alpha x^2 + beta x + gamma)(Z)^2])

with the sign of delta chosen so K is bounded below (its growing tail is
nonnegative).  From K come the sample constraint value c = mean K(y), the
final fastICA contrast (mean G(y) - E[G(Z)])^2, the fourth-moment contrast,
and the Taylor-level negentropy (1/2)||c||^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateGError
from .quadrature import QuadratureRule, gaussian_weighted_rule
from .rng import ReproducibleStream

#: Grid used when the tail test cannot decide the sign of delta.
_SIGN_GRID = np.linspace(-12.0, 12.0, 4001)


@dataclass(frozen=True)
class GFunction:
    """A contrast nonlinearity with first and second derivatives."""

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    deriv2: Callable[[np.ndarray], np.ndarray]
    quadratic_growth: bool = True  # |G(x)| <= B (1 + x^2)


def logcosh(alpha: float = 1.0) -> GFunction:
    """G(x) = (1/alpha) log cosh(alpha x), alpha in [1, 2]."""
    if not 1.0 <= alpha <= 2.0:
        raise ValueError(f"logcosh alpha must be in [1, 2], got {alpha!r}")
    a = float(alpha)

    def value(x):
        x = np.asarray(x, dtype=float)
        # log cosh(ax) = |ax| + log((1 + exp(-2|ax|)) / 2), overflow-safe
        ax = np.abs(a * x)
        return (ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)) / a

    return GFunction(
        name=f"logcosh({a:g})",
        value=value,
        deriv=lambda x: np.tanh(a * np.asarray(x, dtype=float)),
        deriv2=lambda x: a * (1.0 - np.tanh(a * np.asarray(x, dtype=float)) ** 2),
    )


def negexp() -> GFunction:
    """G(x) = -exp(-x^2 / 2)."""

    def value(x):
        x = np.asarray(x, dtype=float)
        return -np.exp(-0.5 * x * x)

    def deriv(x):
        x = np.asarray(x, dtype=float)
        return x * np.exp(-0.5 * x * x)

    def deriv2(x):
        x = np.asarray(x, dtype=float)
        return (1.0 - x * x) * np.exp(-0.5 * x * x)

    return GFunction(name="negexp", value=value, deriv=deriv, deriv2=deriv2)


def quartic() -> GFunction:
    """G(x) = x^4; admitted for the kurtosis-style contrast and K checks."""
    return GFunction(
        name="quartic",
        value=lambda x: np.asarray(x, dtype=float) ** 4,
        deriv=lambda x: 4.0 * np.asarray(x, dtype=float) ** 3,
        deriv2=lambda x: 12.0 * np.asarray(x, dtype=float) ** 2,
        quadratic_growth=False,
    )


GFAMILIES = {"logcosh": logcosh, "negexp": negexp, "quartic": quartic}


@dataclass(frozen=True)
class KFunction:
    """Orthonormalized correction of a GFunction."""

    g: GFunction
    alpha: float
    beta: float
    gamma: float
    delta: float

    def numerator(self, x):
        x = np.asarray(x, dtype=float)
        return self.g.value(x) + self.alpha * x * x + self.beta * x + self.gamma

    def __call__(self, x):
        return self.numerator(x) / self.delta

    @property
    def tail_degree(self) -> int:
        """Polynomial degree of K's growth at infinity."""
        return 2 if self.g.quadratic_growth else 4

    @property
    def tail_coeff(self) -> float:
        """Coefficient of the tail-dominant power of K."""
        return (self.alpha if self.g.quadratic_growth else 1.0) / self.delta


def _delta_sign(numerator, grid=_SIGN_GRID) -> float:
    """Sign making the growing tail of K nonnegative (K bounded below).

    When the tails disagree in sign (odd-dominated numerator), fall back to
    the sign giving the larger minimum over the reference grid.
    """
    n_plus = float(numerator(30.0))
    n_minus = float(numerator(-30.0))
    if n_plus > 0 and n_minus > 0:
        return 1.0
    if n_plus < 0 and n_minus < 0:
        return -1.0
    vals = numerator(grid)
    return 1.0 if float(vals.min() + vals.max()) >= 0.0 else -1.0


def build_k(g: GFunction, rule: QuadratureRule | None = None) -> KFunction:
    """Construct the K function for g under the given Gaussian rule."""
    if rule is None:
        rule = gaussian_weighted_rule()
    x, w = rule.nodes, rule.weights
    gv = g.value(x)
    m0 = float(w @ gv)
    m1 = float(w @ (x * gv))
    m2 = float(w @ (x * x * gv))
    alpha = 0.5 * (m0 - m2)
    beta = -m1
    gamma = 0.5 * (m2 - 3.0 * m0)

    def numerator(t):
        t = np.asarray(t, dtype=float)
        return g.value(t) + alpha * t * t + beta * t + gamma

    norm_sq = float(w @ numerator(x) ** 2)
    if norm_sq < 1e-14:
        raise DegenerateGError(
            f"{g.name}: G is absorbed by the quadratic correction (norm^2 = "
            f"{norm_sq:.2e}); K would be 0/0"
        )
    delta = _delta_sign(numerator) * math.sqrt(norm_sq)
    return KFunction(g=g, alpha=alpha, beta=beta, gamma=gamma, delta=delta)


def c_value(y, k: KFunction) -> float:
    """Empirical constraint value, the sample mean of K(y)."""
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise ValueError("sample must be nonempty")
    if not np.all(np.isfinite(y)):
        raise ValueError("sample must be finite")
    return float(np.mean(k(y)))


def gaussian_expectation(g: GFunction, rule: QuadratureRule | None = None) -> float:
    """E[G(Z)] for Z ~ N(0, 1), by Gaussian quadrature."""
    if rule is None:
        rule = gaussian_weighted_rule()
    return rule.apply(g.value)


@dataclass(frozen=True)
class MonteCarloBaseline:
    """Gaussian reference term of the contrast as (1/L) sum G(z_j)."""

    n_draws: int
    seed: int

    def __post_init__(self):
        if self.n_draws < 1:
            raise ValueError("n_draws must be >= 1")

    def sample(self) -> np.ndarray:
        return ReproducibleStream(self.seed).normals(self.n_draws)


def fastica_contrast(
    y,
    g: GFunction,
    baseline: str | MonteCarloBaseline = "quadrature",
    rule: QuadratureRule | None = None,
) -> float:
    """The final sample contrast (mean G(y) - B)^2.

    B is E[G(Z)] by deterministic quadrature (default) or a Monte-Carlo
    Gaussian sample mean in the literal mode.
    """
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise ValueError("sample must be nonempty")
    if isinstance(baseline, MonteCarloBaseline):
        b = float(np.mean(g.value(baseline.sample())))
    elif baseline == "quadrature":
        b = gaussian_expectation(g, rule)
    else:
        raise ValueError(f"unknown baseline {baseline!r}")
    return float((np.mean(g.value(y)) - b) ** 2)


def kurtosis_contrast(y) -> float:
    """|mean(y^4) - 3|, the fourth-moment contrast."""
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise ValueError("sample must be nonempty")
    return float(abs(np.mean(y**4) - 3.0))


def hat_j_from_c(c) -> float:
    """Taylor-level negentropy (1/2)||c||^2."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    return 0.5 * float(c @ c)
