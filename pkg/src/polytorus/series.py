"""Sparse multivariate Fourier series on the infinite torus.

A series is a finitely supported map from multi-indices to complex
coefficients; it is the shared representation of trigonometric polynomials
and (via their coefficients) of measures.  Evaluation inside the polydisc
follows the polyharmonic convention: the monomial at nu contributes
coeff * prod_j rho_j^{|nu_j|} e^{i nu_j theta_j}, so conjugate-analytic
terms pick up rho^{|nu|} rather than blowing up.

The canonical text form is one line per term, ``j1:e1,j2:e2 -> re,im``,
sorted by multi-index, floats printed with 17 significant digits so the
round trip is bit exact.  The empty multi-index is written ``-``.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .bohr import EMPTY_INDEX, MultiIndex
from .errors import ConfigError, DomainError

_ABS_TOL = 1e-12  # slack for |z| <= 1 checks against rounding in exp(i theta)


class SpectrumClass(enum.Enum):
    """Spectrum hypotheses, ordered from tightest to loosest.

    ANALYTIC: all exponents nonnegative. PM_ANALYTIC: every term is
    one-signed (all exponents >= 0 or all <= 0).  BIG: every term has
    nonnegative exponent sum.  GENERAL: anything else.
    """

    ANALYTIC = "analytic"
    PM_ANALYTIC = "pm_analytic"
    BIG = "big"
    GENERAL = "general"


@dataclass(frozen=True)
class TorusPoint:
    """Finite tuple of angles, reduced mod 2*pi; the implicit tail is 0."""

    angles: tuple[float, ...]

    def __init__(self, angles: Iterable[float]):
        object.__setattr__(
            self, "angles", tuple(float(a) % (2.0 * np.pi) for a in angles)
        )

    def __len__(self) -> int:
        return len(self.angles)

    def to_polydisc(self) -> "PolydiscPoint":
        return PolydiscPoint([cmath.exp(1j * a) for a in self.angles])


@dataclass(frozen=True)
class PolydiscPoint:
    """Finite tuple of complex coordinates with |z_j| <= 1; tail is 0."""

    coords: tuple[complex, ...]

    def __init__(self, coords: Iterable[complex]):
        cs = tuple(complex(c) for c in coords)
        for k, c in enumerate(cs):
            if abs(c) > 1.0 + _ABS_TOL:
                raise DomainError(f"|z_{k+1}| = {abs(c)} > 1")
        object.__setattr__(self, "coords", cs)

    def __len__(self) -> int:
        return len(self.coords)


def _as_coords(z) -> tuple[complex, ...]:
    if isinstance(z, PolydiscPoint):
        return z.coords
    if isinstance(z, TorusPoint):
        return z.to_polydisc().coords
    return PolydiscPoint(z).coords


class FourierSeries:
    """Immutable sparse Fourier series; zero coefficients are never stored."""

    __slots__ = ("_terms", "_dim")

    def __init__(self, terms: Mapping[MultiIndex, complex] | Iterable[tuple[MultiIndex, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[MultiIndex, complex] = {}
        for nu, a in items:
            if not isinstance(nu, MultiIndex):
                nu = MultiIndex(nu)
            a = complex(a)
            if nu in clean:
                a = clean[nu] + a
            if a == 0:
                clean.pop(nu, None)
            else:
                clean[nu] = a
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_dim", max((nu.max_coordinate for nu in clean), default=0))

    def __setattr__(self, name, value):
        raise AttributeError("FourierSeries is immutable")

    @classmethod
    def constant(cls, c: complex) -> "FourierSeries":
        return cls({EMPTY_INDEX: c})

    @classmethod
    def monomial(cls, pairs: Iterable[tuple[int, int]], coeff: complex = 1.0) -> "FourierSeries":
        return cls({MultiIndex(pairs): coeff})

    # -- mapping access ------------------------------------------------------

    @property
    def dim(self) -> int:
        """Smallest m with all support in the first m coordinates."""
        return self._dim

    def coefficient(self, nu: MultiIndex) -> complex:
        return self._terms.get(nu, 0j)

    @property
    def constant_term(self) -> complex:
        return self._terms.get(EMPTY_INDEX, 0j)

    def items(self) -> Iterator[tuple[MultiIndex, complex]]:
        return iter(self._terms.items())

    def support(self) -> list[MultiIndex]:
        return sorted(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, FourierSeries) and self._terms == other._terms

    def __repr__(self) -> str:
        return f"FourierSeries({len(self._terms)} terms, dim {self._dim})"

    # -- algebra -------------------------------------------------------------

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        out = dict(self._terms)
        for nu, a in other._terms.items():
            out[nu] = out.get(nu, 0) + a
        return FourierSeries(out)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "FourierSeries":
        return FourierSeries({nu: scalar * a for nu, a in self._terms.items()})

    def __mul__(self, other: "FourierSeries") -> "FourierSeries":
        out: dict[MultiIndex, complex] = {}
        for nu, a in self._terms.items():
            for mu, b in other._terms.items():
                k = nu + mu
                out[k] = out.get(k, 0) + a * b
        return FourierSeries(out)

    def map_coefficients(self, fn) -> "FourierSeries":
        return FourierSeries({nu: fn(nu, a) for nu, a in self._terms.items()})


# -- operations ---------------------------------------------------------------


def abschnitt(series: FourierSeries, m: int) -> FourierSeries:
    """Keep exactly the terms supported in the first m coordinates."""
    if m < 1:
        raise ConfigError(f"abschnitt order {m} must be >= 1")
    if m >= series.dim:
        return series
    return FourierSeries({nu: a for nu, a in series.items() if nu.max_coordinate <= m})


def spectrum_class(series: FourierSeries) -> SpectrumClass:
    """Tightest spectrum class containing every term of the series."""
    analytic = True
    pm = True
    big = True
    for nu, _ in series.items():
        nonneg = nu.is_nonnegative or not nu.entries
        if not nonneg:
            analytic = False
            if not nu.is_nonpositive:
                pm = False
        if nu.diagonal_sum < 0:
            big = False
    if analytic:
        return SpectrumClass.ANALYTIC
    if pm:
        return SpectrumClass.PM_ANALYTIC
    if big:
        return SpectrumClass.BIG
    return SpectrumClass.GENERAL


def evaluate(series: FourierSeries, z) -> complex:
    """Polyharmonic evaluation at a point of the closed polydisc.

    Coordinates beyond the given point are zero; a term with a nonzero
    exponent on an absent coordinate vanishes.
    """
    coords = _as_coords(z)
    m = len(coords)
    total = 0j
    for nu, a in series.items():
        val = a
        for j, e in nu.entries:
            if j > m:
                val = 0j
                break
            zj = coords[j - 1]
            val *= zj**e if e > 0 else zj.conjugate() ** (-e)
            if val == 0:
                break
        total += val
    return total


def evaluate_batch(series: FourierSeries, coords: np.ndarray) -> np.ndarray:
    """Vectorised boundary/interior evaluation.

    ``coords`` has shape (samples, m) of complex coordinates with m >=
    series.dim; returns the (samples,) array of values.
    """
    coords = np.asarray(coords, dtype=complex)
    if coords.ndim == 1:
        coords = coords[None, :]
    out = np.zeros(coords.shape[0], dtype=complex)
    for nu, a in series.items():
        term = np.full(coords.shape[0], a, dtype=complex)
        for j, e in nu.entries:
            col = coords[:, j - 1]
            term = term * (col**e if e > 0 else np.conj(col) ** (-e))
        out += term
    return out


def wiener_norm(series: FourierSeries) -> float:
    """Sum of absolute coefficient values."""
    return float(sum(abs(a) for _, a in series.items()))


def l2_norm(series: FourierSeries) -> float:
    """Parseval norm sqrt(sum |coeff|^2)."""
    return float(np.sqrt(sum(abs(a) ** 2 for _, a in series.items())))


def lp_norm_mc(
    series: FourierSeries, p: float, samples: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Monte Carlo L^p(T^infty) norm estimate with delta-method standard error.

    Returns (estimate, stderr); deterministic for a fixed generator state.
    """
    if p <= 0:
        raise ConfigError(f"p = {p} must be positive")
    if samples < 2:
        raise ConfigError("at least 2 samples are required")
    m = max(series.dim, 1)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(samples, m))
    vals = np.abs(evaluate_batch(series, np.exp(1j * theta))) ** p
    mean = float(vals.mean())
    se_mean = float(vals.std(ddof=1) / np.sqrt(samples))
    if mean == 0.0:
        return 0.0, 0.0
    est = mean ** (1.0 / p)
    return est, se_mean * est / (p * mean)


def diagonal_restriction(series: FourierSeries, theta) -> FourierSeries:
    """One-variable series of t -> F(e^{i(theta_1+t)}, e^{i(theta_2+t)}, ...).

    The coefficient at frequency k collects all terms whose exponent sum is
    k, rotated by the base point theta.  The result lives in coordinate 1.
    """
    angles = theta.angles if isinstance(theta, TorusPoint) else tuple(float(a) for a in theta)
    if series.dim > len(angles):
        raise ConfigError(f"need at least {series.dim} angles, got {len(angles)}")
    out: dict[MultiIndex, complex] = {}
    for nu, a in series.items():
        phase = sum(e * angles[j - 1] for j, e in nu.entries)
        k = nu.diagonal_sum
        key = MultiIndex([(1, k)]) if k != 0 else EMPTY_INDEX
        out[key] = out.get(key, 0) + a * cmath.exp(1j * phase)
    return FourierSeries(out)


# -- canonical text form -------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def index_to_text(nu: MultiIndex) -> str:
    return ",".join(f"{j}:{e}" for j, e in nu.entries) or "-"


def index_from_text(text: str) -> MultiIndex:
    text = text.strip()
    if text in ("", "-"):
        return EMPTY_INDEX
    pairs = []
    for chunk in text.split(","):
        j, _, e = chunk.partition(":")
        pairs.append((int(j), int(e)))
    return MultiIndex(pairs)


def to_text(series: FourierSeries) -> str:
    """Canonical, bit-exact serialisation (one term per line, sorted)."""
    lines = []
    for nu in series.support():
        a = series.coefficient(nu)
        lines.append(f"{index_to_text(nu)} -> {_fmt(a.real)},{_fmt(a.imag)}")
    return "\n".join(lines) + ("\n" if lines else "")


def from_text(text: str) -> FourierSeries:
    terms: dict[MultiIndex, complex] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, tail = line.partition("->")
        if not sep:
            raise ConfigError(f"malformed series line: {line!r}")
        re_s, _, im_s = tail.strip().partition(",")
        nu = index_from_text(head)
        terms[nu] = terms.get(nu, 0) + complex(float(re_s), float(im_s or 0.0))
    return FourierSeries(terms)
