"""Explicit functions and measures used by the divergence experiments.

Three ingredients live here.

* A smooth even bump psi (plateau 1 on |t| <= 1/4, support |t| < 1/2) and
  the positive harmonic extensions u_n of the shrunken boundary bumps
  psi(t / delta_n) with delta_n = 1/((n+2) ln^2(n+2)), together with their
  harmonic conjugates.  Two evaluation routes are provided: a per-n cached
  cosine series (coefficients from an FFT of the boundary data) and a
  direct Poisson-integral quadrature that vectorises over coordinates and
  stays accurate arbitrarily close to the boundary.  The quadrature route
  is what the experiments use; the series route is the reference the tests
  check it against.

* The non-vanishing bounded product f(z) = prod_n exp(-u_n(z_n) - i
  conj_u_n(z_n)), plus the two simpler model functions: the lacunary sum
  g(z) = sum z_n/n and the bounded non-analytic product
  u(z) = prod (1 + i (z_n + conj z_n) / (2n)).

* A finite-depth lacunary Riesz product measure prod_{j<=J} (1 + cos(q^j
  theta)), represented through its Fourier coefficients 2^{-#digits} at
  balanced q-ary frequencies, with an O(J) evaluator for its radial
  Poisson means based on a level recursion for the analytic part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DomainError

# ---------------------------------------------------------------------------
# bump profile


@dataclass(frozen=True)
class BumpProfile:
    """Smooth even cutoff: 1 on |t| <= plateau, 0 beyond support.

    The transition uses the standard exp(-1/x) blend, so the profile is
    infinitely smooth; ``steepness`` rescales the blend argument without
    moving the plateau or the support.
    """

    plateau: float = 0.25
    support: float = 0.5
    steepness: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.plateau < self.support:
            raise ConfigError("need 0 < plateau < support")
        if self.steepness <= 0.0:
            raise ConfigError("steepness must be positive")


DEFAULT_BUMP = BumpProfile()


def _blend(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0.0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def psi(t, profile: BumpProfile = DEFAULT_BUMP):
    """Evaluate the bump; accepts scalars or arrays, returns matching shape."""
    arr = np.abs(np.asarray(t, dtype=float))
    u = (arr - profile.plateau) / (profile.support - profile.plateau) * profile.steepness
    a = _blend(np.clip(u, 0.0, None))
    b = _blend(np.clip(profile.steepness - u, 0.0, None))
    with np.errstate(invalid="ignore"):
        ramp = np.where(arr <= profile.plateau, 0.0, np.where(arr >= profile.support, 1.0, a / (a + b)))
    out = 1.0 - ramp
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def delta_n(n: int) -> float:
    """Bump half-scale for coordinate n: 1/((n+2) ln^2(n+2))."""
    if n < 1:
        raise ConfigError("coordinate index must be >= 1")
    return 1.0 / ((n + 2) * math.log(n + 2) ** 2)


# ---------------------------------------------------------------------------
# cosine-series route (cached coefficients)

_GRID_CAP = 2**22
_K_CAP = 2**20


def _default_cutoff(n: int) -> int:
    return min(2048 * max(1, math.ceil(1.0 / delta_n(n))), _K_CAP)


@lru_cache(maxsize=512)
def _bump_cosine_coeffs(n: int, K: int, profile: BumpProfile) -> np.ndarray:
    """c_0..c_K of the boundary bump psi(t/delta_n), by FFT quadrature.

    The stored tail is trimmed where it falls below 1e-18 of the mass.
    """
    d = delta_n(n)
    grid = min(4096 * max(1, math.ceil(1.0 / d)), _GRID_CAP)
    grid = max(grid, 4 * K if 4 * K <= _GRID_CAP else grid)
    t = np.arange(grid) * (2.0 * np.pi / grid)
    t = np.where(t > np.pi, t - 2.0 * np.pi, t)
    vals = psi(t / d, profile)
    spec = np.fft.rfft(vals)
    c = 2.0 * spec.real / grid
    c[0] *= 0.5
    c = c[: K + 1]
    floor = 1e-18 * max(abs(c[0]), 1e-30)
    keep = np.nonzero(np.abs(c) > floor)[0]
    if keep.size:
        c = c[: keep[-1] + 1]
    return c


def u_n_fourier(n: int, K: int | None = None, profile: BumpProfile = DEFAULT_BUMP) -> np.ndarray:
    """Cosine coefficients of the boundary data of u_n (c_0 is the mean)."""
    if K is None:
        K = _default_cutoff(n)
    if K < 1:
        raise ConfigError("cutoff K must be >= 1")
    return _bump_cosine_coeffs(int(n), int(K), profile)


def _series_eval(c: np.ndarray, rho: float, t, kind: str) -> np.ndarray:
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    k = np.arange(len(c), dtype=float)
    damp = c if rho >= 1.0 else c * np.where(k == 0, 1.0, np.exp(k * math.log(rho)) if rho > 0 else 0.0)
    ang = np.outer(ts, k)
    if kind == "u":
        out = np.cos(ang) @ damp
    else:
        out = np.sin(ang) @ damp
    return out


def u_n_value(n: int, rho: float, t, K: int | None = None, profile: BumpProfile = DEFAULT_BUMP):
    """u_n(rho e^{it}) through the cached cosine series: c_0 + sum c_k rho^k cos(kt)."""
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho = {rho} outside [0, 1)")
    out = _series_eval(u_n_fourier(n, K, profile), rho, t, "u")
    return float(out[0]) if np.ndim(t) == 0 else out


def u_n_conjugate(n: int, rho: float, t, K: int | None = None, profile: BumpProfile = DEFAULT_BUMP):
    """Conjugate function sum c_k rho^k sin(kt), normalised to vanish at 0."""
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho = {rho} outside [0, 1)")
    out = _series_eval(u_n_fourier(n, K, profile), rho, t, "conj")
    return float(out[0]) if np.ndim(t) == 0 else out


def u_n_boundary(n: int, t, profile: BumpProfile = DEFAULT_BUMP):
    """Boundary value of u_n: the bump itself."""
    return psi(np.asarray(t, dtype=float) / delta_n(n), profile)


def u_n_conjugate_boundary(n: int, t, K: int | None = None, profile: BumpProfile = DEFAULT_BUMP):
    """Boundary conjugate via the cosine series at rho = 1 (smooth data)."""
    out = _series_eval(u_n_fourier(n, K, profile), 1.0, t, "conj")
    return float(out[0]) if np.ndim(t) == 0 else out


# ---------------------------------------------------------------------------
# Poisson-quadrature route (vectorised over coordinates)

_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)
_PANEL_X, _PANEL_W = np.polynomial.legendre.leggauss(12)
_PANELS = 44  # geometric panels per side, in units of 1 - rho


def _wrap(x: np.ndarray) -> np.ndarray:
    return (x + np.pi) % (2.0 * np.pi) - np.pi


def _poisson(rho: np.ndarray, x: np.ndarray) -> np.ndarray:
    one = 1.0 - rho
    return (one * (1.0 + rho)) / (one * one + 4.0 * rho * np.sin(x / 2.0) ** 2)


def _conj_kernel(rho: np.ndarray, x: np.ndarray) -> np.ndarray:
    one = 1.0 - rho
    return (2.0 * rho * np.sin(x)) / (one * one + 4.0 * rho * np.sin(x / 2.0) ** 2)


def bump_harmonic_batch(
    n: np.ndarray,
    rho: np.ndarray,
    t: np.ndarray,
    kind: str = "u",
    profile: BumpProfile = DEFAULT_BUMP,
) -> np.ndarray:
    """u_n(rho e^{it}) (or its conjugate) by direct Poisson quadrature.

    All three arguments broadcast to a common shape.  Far from the kernel
    spike a 64-node Gauss rule over the bump support suffices; when the
    evaluation point sits inside/near the support and rho is close to 1,
    geometric panels scaled by 1 - rho resolve the spike.  Values of u are
    clamped at 0 (the integrand is nonnegative).
    """
    n, rho, t = np.broadcast_arrays(
        np.asarray(n, dtype=float), np.asarray(rho, dtype=float), np.asarray(t, dtype=float)
    )
    if rho.size and (rho.min() < 0.0 or rho.max() >= 1.0):
        raise DomainError("rho must lie in [0, 1)")
    shape = n.shape
    n = n.ravel()
    rho = rho.ravel()
    tt = _wrap(t.ravel().copy())
    d = 1.0 / ((n + 2.0) * np.log(n + 2.0) ** 2)
    h = 1.0 - rho
    out = np.empty_like(d)

    near = (np.abs(tt) < 0.75 * d) & (h < 0.25 * d)
    far = ~near

    if far.any():
        dd = d[far]
        sigma = 0.5 * dd[:, None] * _GL_X[None, :]  # nodes over [-d/2, d/2]
        ker = _poisson if kind == "u" else _conj_kernel
        vals = ker(rho[far][:, None], tt[far][:, None] - sigma) * psi(
            sigma / dd[:, None], profile
        )
        out[far] = (0.5 * dd / (2.0 * np.pi)) * (vals @ _GL_W)

    if near.any():
        dd = d[near]
        hh = h[near]
        tn = tt[near]
        # geometric panels [h 2^k, h 2^{k+1}] on both sides of the spike,
        # clipped to the widest span we ever need (|t| + 0.75 d)
        span = np.abs(tn) + 0.75 * dd
        edges = hh[:, None] * 2.0 ** np.arange(0, _PANELS + 1)[None, :]
        edges = np.minimum(edges, span[:, None])
        edges = np.concatenate([np.zeros((len(dd), 1)), edges], axis=1)
        lo = edges[:, :-1]
        hi = edges[:, 1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        # nodes: (points, panels, gauss)
        x = mid[:, :, None] + half[:, :, None] * _PANEL_X[None, None, :]
        w = half[:, :, None] * _PANEL_W[None, None, :]
        acc = np.zeros(len(dd))
        ker = _poisson if kind == "u" else _conj_kernel
        for sign in (1.0, -1.0):
            s = tn[:, None, None] - sign * x
            vals = ker(rho[near][:, None, None], sign * x) * psi(s / dd[:, None, None], profile)
            acc += (vals * w).sum(axis=(1, 2))
        out[near] = acc / (2.0 * np.pi)

    if kind == "u":
        np.maximum(out, 0.0, out=out)
    return out.reshape(shape)


def bump_max_over_radii(
    n: np.ndarray,
    t: np.ndarray,
    radii: np.ndarray,
    profile: BumpProfile = DEFAULT_BUMP,
) -> tuple[np.ndarray, np.ndarray]:
    """Per coordinate: max of u_n(r e^{it}) over the radius grid, and its argmax.

    This is the term oracle the adaptive approach paths maximise.
    """
    n = np.asarray(n, dtype=float)
    t = np.asarray(t, dtype=float)
    radii = np.asarray(radii, dtype=float)
    best = np.full(n.shape, -np.inf)
    best_r = np.zeros(n.shape)
    for r in radii:
        vals = bump_harmonic_batch(n, np.full(n.shape, r), t, "u", profile)
        take = vals > best
        best = np.where(take, vals, best)
        best_r = np.where(take, r, best_r)
    return best, best_r


# ---------------------------------------------------------------------------
# the bounded non-vanishing product and the two model examples


@dataclass(frozen=True)
class CounterexampleParams:
    """Truncation controls for the bump product: number of factors and the
    optional cosine cutoff used by the series route."""

    factors: int
    cutoff: int | None = None
    profile: BumpProfile = DEFAULT_BUMP

    def __post_init__(self):
        if self.factors < 1:
            raise ConfigError("need at least one factor")


def counterexample_log_factor(
    n: int, z: complex, params: CounterexampleParams
) -> complex:
    """-log f_n(z) = u_n(z) + i conj_u_n(z) at a single coordinate."""
    rho = abs(z)
    t = math.atan2(z.imag, z.real)
    if rho > 1.0 + 1e-12:
        raise DomainError(f"|z_{n}| = {rho} > 1")
    if rho >= 1.0 - 1e-12:
        u = float(u_n_boundary(n, t, params.profile))
        v = float(u_n_conjugate_boundary(n, t, params.cutoff, params.profile))
    else:
        arr_n = np.array([n], dtype=float)
        u = float(bump_harmonic_batch(arr_n, np.array([rho]), np.array([t]), "u", params.profile)[0])
        v = float(bump_harmonic_batch(arr_n, np.array([rho]), np.array([t]), "conj", params.profile)[0])
    return complex(u, v)


def counterexample_f(z, params: CounterexampleParams) -> complex:
    """prod_{n <= N} exp(-u_n(z_n) - i conj_u_n(z_n)); bounded by 1, never 0."""
    zs = [complex(c) for c in z]
    if len(zs) > params.factors:
        raise ConfigError(f"point has {len(zs)} coordinates, params allow {params.factors}")
    total = 0j
    for k, c in enumerate(zs, start=1):
        total += counterexample_log_factor(k, c, params)
    # absent coordinates are 0; u_n(0) is the coefficient mean c_0(n)
    for k in range(len(zs) + 1, params.factors + 1):
        total += counterexample_mean(k, params.profile)
    return complex(np.exp(-total))


_MEAN_CACHE: dict[BumpProfile, np.ndarray] = {}


def counterexample_means(count: int, profile: BumpProfile = DEFAULT_BUMP) -> np.ndarray:
    """c_0(n) for n = 1..count: the bump means, i.e. u_n at the origin."""
    cached = _MEAN_CACHE.get(profile)
    if cached is None or cached.size < count:
        ns = np.arange(1, count + 1, dtype=float)
        cached = bump_harmonic_batch(ns, np.zeros(count), np.zeros(count), "u", profile)
        _MEAN_CACHE[profile] = cached
    return cached[:count]


def counterexample_mean(n: int, profile: BumpProfile = DEFAULT_BUMP) -> float:
    return float(counterexample_means(n, profile)[n - 1])


def counterexample_log_abs_batch(
    radii: np.ndarray, theta: np.ndarray, profile: BumpProfile = DEFAULT_BUMP
) -> np.ndarray:
    """-log |f| summed over coordinates, vectorised: rows are points.

    ``radii`` and ``theta`` have shape (points, N); coordinate n is read
    from column n-1.  Radii equal to 1 use the boundary bump directly.
    """
    radii = np.asarray(radii, dtype=float)
    theta = np.asarray(theta, dtype=float)
    pts, N = radii.shape
    ns = np.broadcast_to(np.arange(1, N + 1, dtype=float), radii.shape)
    out = np.zeros(pts)
    interior = radii < 1.0 - 1e-12
    if interior.any():
        vals = np.zeros_like(radii)
        vals[interior] = bump_harmonic_batch(
            ns[interior], radii[interior], theta[interior], "u", profile
        )
        out += vals.sum(axis=1)
    if (~interior).any():
        d = 1.0 / ((ns + 2.0) * np.log(ns + 2.0) ** 2)
        bvals = np.where(~interior, psi(_wrap(theta) / d, profile), 0.0)
        out += bvals.sum(axis=1)
    return out


def example_g(z) -> complex:
    """Lacunary linear sum g(z) = sum_n z_n / n over the given coordinates."""
    return complex(sum(complex(c) / (k + 1) for k, c in enumerate(z)))


def example_u(z) -> complex:
    """Bounded non-analytic product prod_n (1 + i (z_n + conj z_n) / (2n))."""
    out = complex(1.0)
    for k, c in enumerate(z, start=1):
        c = complex(c)
        out *= 1.0 + 1j * (c + c.conjugate()) / (2.0 * k)
    return out


# ---------------------------------------------------------------------------
# finite-depth lacunary Riesz product


@dataclass(frozen=True)
class RieszProductMeasure:
    """prod_{j=1..depth} (1 + cos(base^j theta)): a unit-mass nonnegative
    trigonometric density whose deep-depth limit is the classical singular
    measure.  base >= 3 keeps balanced digit representations unique."""

    base: int = 3
    depth: int = 12

    def __post_init__(self):
        if self.base < 3:
            raise ConfigError("base must be >= 3 for unique balanced digits")
        if self.depth < 0:
            raise ConfigError("depth must be >= 0")

    @property
    def max_frequency(self) -> int:
        return sum(self.base**j for j in range(1, self.depth + 1))


def riesz_coeff(measure: RieszProductMeasure, k: int) -> float:
    """Fourier coefficient at integer frequency k: 2^{-#nonzero digits}.

    Frequencies outside the balanced representation k = sum eps_j base^j
    (eps_j in {-1,0,1}, 1 <= j <= depth) have coefficient 0.
    """
    k = abs(int(k))
    if k == 0:
        return 1.0
    q = measure.base
    digits = 0
    j = 0
    while k:
        k, rem = divmod(k, q)
        if rem > q // 2:
            rem -= q
            k += 1
        if rem not in (-1, 0, 1):
            return 0.0
        if rem != 0:
            if j == 0 or j > measure.depth:
                return 0.0  # no base^0 factor; depth bound
            digits += 1
        j += 1
    if j - 1 > measure.depth:
        return 0.0
    return 0.5**digits


def riesz_density(measure: RieszProductMeasure, theta) -> np.ndarray:
    """Pointwise density prod (1 + cos(base^j theta))."""
    th = np.asarray(theta, dtype=float)
    out = np.ones_like(th)
    for j in range(1, measure.depth + 1):
        out = out * (1.0 + np.cos(float(measure.base**j) * th))
    return out


def measure_radial_value(measure: RieszProductMeasure, r, theta: float) -> np.ndarray | float:
    """Radial Poisson mean sum_k c_k r^{|k|} e^{ik theta} (real by symmetry).

    Evaluated in O(depth) per radius through a two-term recursion for the
    analytic part A(zeta) = sum_{k>=0} c_k zeta^k and its degree-reversal,
    driven by zeta = r e^{i theta}; the value is 2 Re A - 1.
    """
    scalar = np.ndim(r) == 0
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    if rr.size and (rr.min() < 0.0 or rr.max() >= 1.0):
        raise DomainError("r must lie in [0, 1)")
    theta = float(theta)
    logr = np.log(np.maximum(rr, 1e-320))

    def zpow(k: int) -> np.ndarray:
        if k == 0:
            return np.ones_like(rr, dtype=complex)
        mag = np.where(rr > 0.0, np.exp(k * logr), 0.0)
        return mag * np.exp(1j * (k * theta))

    A = np.ones_like(rr, dtype=complex)
    R = np.ones_like(rr, dtype=complex)
    B = 0
    for j in range(1, measure.depth + 1):
        f = measure.base**j
        zf = zpow(f)
        zfB = zpow(f - B)
        zB = zpow(B)
        A, R = (
            A * (1.0 + 0.5 * zf) + 0.5 * zfB * (R - zB),
            (zf + 0.5) * R + 0.5 * zB * (A - 1.0),
        )
        B += f
    vals = 2.0 * A.real - 1.0
    return float(vals[0]) if scalar else vals
