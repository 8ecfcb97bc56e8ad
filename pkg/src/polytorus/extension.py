"""Twisted radial extensions and product Poisson kernels.

Fixing a boundary point and sliding a single complex parameter xi along the
curve (xi^{m_1} z_1, xi^{m_2} z_2, ...) turns a function of infinitely many
variables into a function of one disc variable.  On coefficients this is a
multiplier: the term at nu picks up r^{sum m_j |nu_j|} e^{i t sum m_j nu_j}
for xi = r e^{it}.  The default scheme is m_j = j.

Multipliers are computed in exponent-log form to dodge pow underflow for
large weighted degrees; coefficients that fall below 1e-300 are dropped.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

from .errors import ConfigError, DomainError
from .radial import DIAGONAL, RadialScheme
from .series import FourierSeries, TorusPoint, evaluate

_XI_TOL = 1e-12
_DROP = 1e-300


def twist(series: FourierSeries, xi: complex, scheme: RadialScheme = DIAGONAL) -> FourierSeries:
    """Coefficient multiplier realising evaluation along the xi-curve.

    For xi = r e^{it}, each coefficient is multiplied by
    r^{w} e^{i t s} with w the scheme-weighted degree and s the scheme
    signature of its multi-index.  |xi| = 1 is allowed (finite support).
    """
    xi = complex(xi)
    r = abs(xi)
    if r > 1.0 + _XI_TOL:
        raise DomainError(f"|xi| = {r} > 1")
    r = min(r, 1.0)
    t = cmath.phase(xi) if xi != 0 else 0.0
    logr = math.log(r) if r > 0.0 else None
    out = {}
    for nu, a in series.items():
        w = nu.weighted_degree(scheme)
        if w == 0:
            out[nu] = a
            continue
        if logr is None:
            continue  # r = 0 kills every nonconstant term
        mag = math.exp(w * logr)
        if mag < _DROP:
            continue
        out[nu] = a * mag * cmath.exp(1j * t * nu.signature(scheme))
    return FourierSeries(out)


def radial_section(
    series: FourierSeries, r: float, theta, scheme: RadialScheme = DIAGONAL
) -> complex:
    """f_r(theta): the twisted series at real xi = r, read at the boundary point."""
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r = {r} outside [0, 1]")
    point = theta if isinstance(theta, TorusPoint) else TorusPoint(theta)
    return evaluate(twist(series, r, scheme), point)


def wiener_bound(xi: complex, min_factors: int = 1, tol: float = 1e-10) -> float:
    """Product bound prod_j (1+|xi|^j)/(1-|xi|^j) for the twisted coefficient-sum norm.

    The number of factors is at least ``min_factors`` and large enough that
    the neglected log-tail sum_{j>J} 2|xi|^j/(1-|xi|) stays below ``tol``.
    """
    q = abs(complex(xi))
    if q >= 1.0:
        raise DomainError(f"|xi| = {q} >= 1: the bound diverges")
    if q == 0.0:
        return 1.0
    # tail: 2 q^{J+1} / (1-q)^2 < tol
    need = math.log(tol * (1.0 - q) ** 2 / 2.0) / math.log(q)
    J = max(int(min_factors), int(math.ceil(need)), 1)
    j = np.arange(1, J + 1, dtype=float)
    qj = np.exp(j * math.log(q))
    return float(np.prod((1.0 + qj) / (1.0 - qj)))


def product_poisson_kernel(
    r: float, theta: Sequence[float], scheme: RadialScheme = DIAGONAL
) -> float:
    """prod_n (1 - r^{2 m_n}) / (1 - 2 r^{m_n} cos theta_n + r^{2 m_n}).

    Strictly positive for r < 1; the denominator is evaluated in the
    cancellation-free form (1-rho)^2 + 4 rho sin^2(theta/2).
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r = {r} outside [0, 1)")
    th = np.asarray(theta, dtype=float)
    if th.size == 0:
        return 1.0
    m = scheme.exponents(th.size).astype(float)
    rho = np.exp(m * math.log(r)) if r > 0.0 else np.zeros_like(m)
    one = 1.0 - rho
    den = one * one + 4.0 * rho * np.sin(th / 2.0) ** 2
    return float(np.prod(one * (1.0 + rho) / den))


def dyadic_radius_grid(count: int = 40) -> np.ndarray:
    """Default maximal-function grid r_k = 1 - 2^-k, k = 1..count."""
    if count < 1:
        raise ConfigError("grid size must be >= 1")
    return 1.0 - 2.0 ** -np.arange(1, count + 1, dtype=float)


def radial_sections_on_grid(
    series: FourierSeries, theta, r_grid: np.ndarray, scheme: RadialScheme = DIAGONAL
) -> np.ndarray:
    """Vectorised f_r(theta) over a radius grid (one coefficient pass)."""
    grid = np.asarray(r_grid, dtype=float)
    if grid.size == 0:
        raise ConfigError("radius grid must be nonempty")
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise DomainError("grid radii must lie in [0, 1]")
    angles = theta.angles if isinstance(theta, TorusPoint) else tuple(float(a) for a in theta)
    vals = np.zeros(grid.size, dtype=complex)
    logr = np.log(np.maximum(grid, 1e-320))
    for nu, a in series.items():
        w = nu.weighted_degree(scheme)
        phase = sum(e * angles[j - 1] for j, e in nu.entries) if nu.entries else 0.0
        if w == 0:
            vals += a
            continue
        mags = np.where(grid > 0.0, np.exp(w * logr), 0.0)
        vals += a * cmath.exp(1j * phase) * mags
    return vals


def radial_maximal(
    series: FourierSeries,
    theta,
    r_grid: np.ndarray | None = None,
    scheme: RadialScheme = DIAGONAL,
) -> float:
    """Grid proxy for sup_r |f_r(theta)|; nondecreasing under grid refinement."""
    if r_grid is None:
        r_grid = dyadic_radius_grid()
    return float(np.abs(radial_sections_on_grid(series, theta, r_grid, scheme)).max())
