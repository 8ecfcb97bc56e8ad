"""Radial approach schemes, step-size sequences, and approach paths.

A radial scheme assigns each coordinate j a positive integer exponent m_j;
the associated approach to a boundary point scales coordinate j by r^{m_j}.
Admissibility means A(r) = sum_j r^{m_j} converges for every r < 1, which
holds for the built-in kinds by construction: Diagonal (m_j = j), Power
(m_j = ceil(j^alpha)), and Explicit tables that fall back to the diagonal
rule beyond their horizon.

The step-size machinery builds increasing radius sequences whose gaps obey
r_{k+1} - r_k <= (1 - r_{k+1})^2 / A'(r_{k+1}), the condition under which
the product-kernel ratio between consecutive radii stays uniformly bounded.
Approach paths (head / explicit block / zero tail per step) encode the
adversarial constructions used by the divergence experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ConfigError, DomainError, ResourceError

# ---------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class RadialScheme:
    """Coordinate exponents (m_j) defining a radial approach."""

    kind: str
    alpha: float = 1.0
    table: tuple[int, ...] = ()

    @classmethod
    def diagonal(cls) -> "RadialScheme":
        return cls("diagonal")

    @classmethod
    def power(cls, alpha: float) -> "RadialScheme":
        if alpha <= 0:
            raise ConfigError(f"power exponent {alpha} must be positive")
        return cls("power", alpha=float(alpha))

    @classmethod
    def explicit(cls, table: Iterable[int]) -> "RadialScheme":
        tab = tuple(int(m) for m in table)
        if any(m < 1 for m in tab):
            raise ConfigError("explicit exponents must be positive integers")
        return cls("explicit", table=tab)

    @classmethod
    def parse(cls, text: str) -> "RadialScheme":
        text = text.strip().lower()
        if text == "diagonal":
            return cls.diagonal()
        if text.startswith("power:"):
            return cls.power(float(text.split(":", 1)[1]))
        if text.startswith("explicit:"):
            return cls.explicit(int(x) for x in text.split(":", 1)[1].split(","))
        raise ConfigError(f"unknown scheme {text!r}")

    def exponent(self, j: int) -> int:
        if j < 1:
            raise ConfigError(f"coordinate {j} must be >= 1")
        if self.kind == "diagonal":
            return j
        if self.kind == "power":
            return int(math.ceil(j**self.alpha))
        if j <= len(self.table):
            return self.table[j - 1]
        return j  # explicit tables inherit the diagonal tail

    def exponents(self, count: int) -> np.ndarray:
        return np.array([self.exponent(j) for j in range(1, count + 1)], dtype=np.int64)

    def describe(self) -> str:
        if self.kind == "diagonal":
            return "diagonal"
        if self.kind == "power":
            return f"power:{self.alpha:g}"
        return "explicit:" + ",".join(str(m) for m in self.table)


DIAGONAL = RadialScheme.diagonal()


# ---------------------------------------------------------------------------
# admissibility


def _poly_geometric_tail(gamma: float, r: float, start: int) -> float:
    """Certified bound for sum_{v >= start} v^gamma r^v (requires decay)."""
    ratio = (1.0 + 1.0 / start) ** gamma * r
    if ratio >= 1.0:
        return math.inf
    return start**gamma * r**start / (1.0 - ratio)


def admissibility_A(scheme: RadialScheme, r: float, tol: float = 1e-12) -> tuple[float, float]:
    """(A(r), A'(r)) with neglected tails certified below tol.

    Diagonal and explicit-with-diagonal-tail schemes use closed forms; power
    schemes sum terms until a geometric majorant of the tail drops below tol.
    """
    if not 0.0 <= r < 1.0:
        raise DomainError(f"r = {r} outside [0, 1)")
    if r == 0.0:
        # 0^0 = 1 convention: only exponents equal to 1 contribute to A'
        ones = sum(1 for j in range(1, len(scheme.table) + 2) if scheme.exponent(j) == 1)
        return 0.0, float(ones if scheme.kind != "diagonal" else 1)
    if scheme.kind == "diagonal":
        return r / (1.0 - r), 1.0 / (1.0 - r) ** 2
    if scheme.kind == "explicit":
        horizon = len(scheme.table)
        a = sum(r**m for m in scheme.table)
        ap = sum(m * r ** (m - 1) for m in scheme.table)
        # diagonal tail j > horizon, closed forms
        a += r ** (horizon + 1) / (1.0 - r)
        ap += ((horizon + 1) * r**horizon * (1.0 - r) + r ** (horizon + 1)) / (1.0 - r) ** 2
        return a, ap
    # power scheme: certified truncation
    alpha = scheme.alpha
    beta = max(1.0 / alpha - 1.0, 0.0)  # value-multiplicity growth exponent
    mult = (1.0 / alpha) if alpha < 1.0 else 0.0
    a = 0.0
    ap = 0.0
    j = 1
    chunk = 64
    while True:
        js = np.arange(j, j + chunk)
        ms = np.ceil(js.astype(float) ** alpha).astype(np.int64)
        terms = np.exp(ms * math.log(r))
        a += float(terms.sum())
        ap += float((ms * terms / r).sum())
        j += chunk
        v = int(math.ceil(j**alpha))
        tail_a = _poly_geometric_tail(beta, r, v) * mult + _poly_geometric_tail(0.0, r, v)
        tail_ap = (_poly_geometric_tail(beta + 1.0, r, v) * mult + _poly_geometric_tail(1.0, r, v)) / r
        if tail_a < tol and tail_ap < tol:
            return a, ap
        if j > 10_000_000:
            raise ResourceError("admissibility sum did not certify its tail")


def _aprime_grid(scheme: RadialScheme, radii: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Vectorised A'(r) over an array of radii (same truncation logic)."""
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0:
        return np.zeros(0)
    rmax = float(radii.max())
    if not 0.0 <= rmax < 1.0:
        raise DomainError("radii must lie in [0, 1)")
    if scheme.kind == "diagonal":
        return 1.0 / (1.0 - radii) ** 2
    # find a uniform truncation certified at rmax
    count = 64
    while True:
        v = scheme.exponent(count + 1)
        beta = max(1.0 / scheme.alpha - 1.0, 0.0) if scheme.kind == "power" else 0.0
        mult = (1.0 / scheme.alpha) if scheme.kind == "power" and scheme.alpha < 1.0 else 0.0
        tail = (_poly_geometric_tail(beta + 1.0, rmax, v) * mult + _poly_geometric_tail(1.0, rmax, v)) / max(rmax, 1e-9)
        if tail < tol or count > 4_000_000:
            break
        count *= 2
    ms = np.array([float(scheme.exponent(j)) for j in range(1, count + 1)])
    out = np.zeros_like(radii)
    logr = np.log(np.maximum(radii, 1e-320))
    for lo in range(0, count, 512):
        block = ms[lo : lo + 512]
        out += (block[None, :] * np.exp((block[None, :] - 1.0) * logr[:, None])).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# step-size sequences


def mz_default_sequence(count: int) -> np.ndarray:
    """The reference sequence r_k = 1 - k^(-1/3), k = 1..count."""
    if count < 1:
        raise ConfigError("count must be >= 1")
    k = np.arange(1, count + 1, dtype=float)
    return 1.0 - k ** (-1.0 / 3.0)


def build_mz_sequence(
    scheme: RadialScheme,
    stop: float,
    *,
    safety: float = 0.999,
    max_steps: int = 20_000_000,
    return_rounds: bool = False,
):
    """Increasing radius sequence obeying the kernel-ratio step condition.

    Starts at 1/2 and repeatedly targets the midpoint toward 1: if the whole
    midpoint jump respects the step bound b = (1-r')^2/A'(r') it is taken in
    one step, otherwise the gap is filled with equal steps of size
    ``safety * b`` (the safety factor keeps the post-hoc float check of the
    bound strictly on the right side).  Emits radii until ``stop`` is
    passed.  Each full round shrinks 1 - r by at least a factor 3/4.
    """
    if not 0.5 < stop < 1.0:
        raise ConfigError(f"stop = {stop} must lie in (1/2, 1)")
    if not 0.0 < safety <= 1.0:
        raise ConfigError("safety factor must be in (0, 1]")
    blocks: list[np.ndarray] = [np.array([0.5])]
    last = 0.5
    total = 1
    while last <= stop:
        target = (1.0 + last) / 2.0
        _, aprime = admissibility_A(scheme, target)
        bound = (1.0 - target) ** 2 / aprime
        gap = target - last
        if gap <= bound:
            block = np.array([target])
        else:
            step = safety * bound
            fill = int(math.floor(gap / step))
            block = last + step * np.arange(1, fill + 1)
            rem = target - float(block[-1])
            if rem > 0.25 * step:
                # land exactly on the round target; the remainder step is
                # below the bound, and ending on the midpoint guarantees the
                # 3/4 gap decay per round
                block = np.append(block, target)
        total += block.size
        if total > max_steps:
            raise ResourceError(
                f"step sequence exceeded {max_steps} steps before reaching {stop}; "
                f"reached {last:.6f} (sparser schemes make far larger steps)"
            )
        blocks.append(block)
        last = float(block[-1])
    out = np.concatenate(blocks)
    if return_rounds:
        starts = np.cumsum([0] + [b.size for b in blocks[:-1]])
        return out, starts
    return out


def step_condition_margin(scheme: RadialScheme, radii: np.ndarray, chunk: int = 16384) -> float:
    """max over consecutive pairs of gap * A'(r_next) / (1 - r_next)^2.

    A value <= 1 certifies the step condition for every pair.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2:
        return 0.0
    worst = 0.0
    for lo in range(0, radii.size - 1, chunk):
        nxt = radii[lo + 1 : lo + 1 + chunk]
        gap = nxt - radii[lo : lo + nxt.size]
        ap = _aprime_grid(scheme, nxt)
        worst = max(worst, float((gap * ap / (1.0 - nxt) ** 2).max()))
    return worst


# ---------------------------------------------------------------------------
# kernel ratio


def _one_minus_pow(r: float | np.ndarray, m: np.ndarray) -> np.ndarray:
    """1 - r^m computed stably (expm1 in log form)."""
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        logr = np.where(r > 0, np.log(np.maximum(r, 1e-320)), -np.inf)
    return -np.expm1(np.where(np.isneginf(logr) & (m == 0), 0.0, m * logr))


def kernel_ratio(r: float, r_k: float, theta: Sequence[float], scheme: RadialScheme = DIAGONAL) -> float:
    """Ratio of product Poisson kernels P_r(theta) / P_{r_k}(theta).

    Computed factorwise as the two-product decomposition (radial factors
    times angular factors) so nearly cancelling terms divide before they
    multiply out.
    """
    for x, name in ((r, "r"), (r_k, "r_k")):
        if not 0.0 <= x < 1.0:
            raise DomainError(f"{name} = {x} outside [0, 1)")
    th = np.asarray(theta, dtype=float)
    m = scheme.exponents(th.size).astype(float)
    rm = np.exp(m * math.log(r)) if r > 0 else np.where(m == 0, 1.0, 0.0)
    rkm = np.exp(m * math.log(r_k)) if r_k > 0 else np.where(m == 0, 1.0, 0.0)
    s2 = np.sin(th / 2.0) ** 2
    radial = _one_minus_pow(r, 2.0 * m) / _one_minus_pow(r_k, 2.0 * m)
    angular = ((1.0 - rkm) ** 2 + 4.0 * rkm * s2) / ((1.0 - rm) ** 2 + 4.0 * rm * s2)
    return float(np.prod(radial) * np.prod(angular))


# ---------------------------------------------------------------------------
# approach paths


@dataclass(frozen=True)
class PathStep:
    """One radius vector: head_len coordinates at head_radius, then an
    explicit block of radii, then zeros."""

    head_len: int
    head_radius: float
    block: tuple[float, ...]

    def radius(self, n: int) -> float:
        if n <= self.head_len:
            return self.head_radius
        if n <= self.head_len + len(self.block):
            return self.block[n - self.head_len - 1]
        return 0.0

    @property
    def span(self) -> int:
        return self.head_len + len(self.block)

    def radii(self, count: int) -> np.ndarray:
        out = np.zeros(count)
        h = min(self.head_len, count)
        out[:h] = self.head_radius
        b = np.asarray(self.block)[: max(count - self.head_len, 0)]
        out[self.head_len : self.head_len + b.size] = b
        return out


@dataclass(frozen=True)
class ApproachPath:
    """A finite sequence of radius vectors approaching the boundary."""

    steps: tuple[PathStep, ...]

    @property
    def span(self) -> int:
        return max((s.span for s in self.steps), default=0)

    @property
    def monotone(self) -> bool:
        """True iff each coordinate's radius is nondecreasing along the path."""
        for n in range(1, self.span + 1):
            prev = -1.0
            for step in self.steps:
                cur = step.radius(n)
                if cur < prev - 1e-15:
                    return False
                prev = cur
        return True

    def __len__(self) -> int:
        return len(self.steps)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def path_to_text(path: ApproachPath) -> str:
    """One step per line: ``head_len head_radius | b1,b2,...`` (bit exact)."""
    lines = []
    for s in path.steps:
        block = ",".join(_fmt(b) for b in s.block)
        lines.append(f"{s.head_len} {_fmt(s.head_radius)} | {block}")
    return "\n".join(lines) + ("\n" if lines else "")


def path_from_text(text: str) -> ApproachPath:
    steps = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, block = line.partition("|")
        if not sep:
            raise ConfigError(f"malformed path line: {line!r}")
        h_len, h_rad = head.split()
        blocks = tuple(float(b) for b in block.strip().split(",") if b.strip())
        steps.append(PathStep(int(h_len), float(h_rad), blocks))
    return ApproachPath(tuple(steps))


BLOCK_WIDTH_CAP = 20


def block_path(
    boundaries: Sequence[int],
    head_rule: Callable[[int], float] | None = None,
    alphabet: tuple[float, float] = (0.0, 0.5),
    width_cap: int = BLOCK_WIDTH_CAP,
) -> ApproachPath:
    """Point-independent enumeration path over the given coordinate blocks.

    Block k freezes the first m_{k-1} coordinates at head_rule(m_{k-1})
    (default 1 - 1/m) and enumerates every alphabet tuple on the middle
    block (m_{k-1}, m_k]; later coordinates stay at zero.  Enumeration is
    exponential in the block width, hence the hard cap; wider blocks are
    served in closed form by the divergence experiment instead.
    """
    bounds = [int(b) for b in boundaries]
    if not bounds or any(b < 1 for b in bounds) or any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
        raise ConfigError("block boundaries must be strictly increasing positive integers")
    if head_rule is None:
        head_rule = lambda m: 1.0 - 1.0 / m
    lo, hi = sorted(alphabet)
    steps: list[PathStep] = []
    prev = 0
    for m in bounds:
        width = m - prev
        if width > width_cap:
            raise ConfigError(
                f"block width {width} exceeds the enumeration cap {width_cap} "
                f"(2^{width} steps); use the closed-form/sampled evaluation for wide blocks"
            )
        head_radius = head_rule(prev) if prev > 0 else 0.0
        head_len = prev
        for code in range(2**width):
            block = tuple(hi if (code >> (width - 1 - i)) & 1 else lo for i in range(width))
            steps.append(PathStep(head_len, head_radius, block))
        prev = m
    return ApproachPath(tuple(steps))


def next_block_boundary(
    start: int,
    p0: float,
    samples: int,
    rng: np.random.Generator,
    *,
    weight: Callable[[np.ndarray], np.ndarray] | None = None,
    target: float = 1.0,
    cap: int = 10**6,
) -> int:
    """Smallest N with empirical P( sum_{start < n <= N} w_n |cos theta_n| >= target ) >= p0."""
    if not 0.0 <= p0 < 1.0:
        raise ConfigError(f"p0 = {p0} must lie in [0, 1)")
    if samples < 100:
        raise ConfigError("at least 100 samples are required")
    if weight is None:
        weight = lambda n: 1.0 / n
    if p0 == 0.0:
        return start + 1  # vacuous threshold
    n = start
    sums = np.zeros(samples)
    while True:
        width = max(8, n // 2)
        if n + width > cap:
            width = cap - n
            if width <= 0:
                raise ResourceError(f"block boundary search passed the cap {cap}")
        cols = np.arange(n + 1, n + width + 1, dtype=float)
        draws = np.abs(np.cos(rng.uniform(0.0, 2.0 * np.pi, size=(samples, width))))
        cum = sums[:, None] + np.cumsum(draws * weight(cols)[None, :], axis=1)
        frac = (cum >= target).mean(axis=0)
        hits = np.nonzero(frac >= p0)[0]
        if hits.size:
            return n + int(hits[0]) + 1
        sums = cum[:, -1]
        n += width


def choose_blocks_mc(
    p0: float,
    samples: int,
    rng: np.random.Generator,
    *,
    count: int = 4,
    start: int = 1,
    weight: Callable[[np.ndarray], np.ndarray] | None = None,
    cap: int = 10**6,
) -> list[int]:
    """Greedy chain of block boundaries, each chosen by next_block_boundary."""
    bounds = []
    m = start
    for _ in range(count):
        m = next_block_boundary(m, p0, samples, rng, weight=weight, cap=cap)
        bounds.append(m)
    return bounds


@dataclass(frozen=True)
class AdaptivePathResult:
    """Adaptive path plus the bookkeeping of what each block achieved."""

    path: ApproachPath
    boundaries: tuple[int, ...]
    block_sums: tuple[float, ...]
    targets: tuple[float, ...]
    reached: bool
    chosen_radii: np.ndarray = field(repr=False, default=None)


def default_radius_grid(count: int = 30) -> np.ndarray:
    """Dyadic grid 1 - 2^-i, i = 1..count."""
    return 1.0 - 2.0 ** -np.arange(1, count + 1, dtype=float)


def adaptive_block_path(
    oracle,
    theta: np.ndarray,
    levels: int,
    *,
    level_base: float = 4.0,
    radius_grid: np.ndarray | None = None,
    coord_cap: int = 100_000,
    head_radius: float = 1.0 - 1e-6,
    chunk: int = 8192,
) -> AdaptivePathResult:
    """Point-dependent path accumulating oracle mass in geometric blocks.

    ``oracle(n_array, theta_array, radii)`` returns, per coordinate, the
    maximum of the coordinate term over the radius grid together with the
    maximising radius.  Coordinates are scanned in order; block l closes
    once its running sum reaches level_base^l, and the scan stops at
    coord_cap, reporting partial sums rather than failing.  The emitted
    steps freeze completed blocks at ``head_radius`` (radii are perturbed
    away from 1 so evaluation stays inside the polydisc).
    """
    theta = np.asarray(theta, dtype=float)
    if theta.size < coord_cap:
        raise ConfigError(f"theta must cover coord_cap = {coord_cap} coordinates")
    if radius_grid is None:
        radius_grid = default_radius_grid()
    radius_grid = np.minimum(np.asarray(radius_grid, dtype=float), head_radius)
    targets = [level_base ** (l + 1) for l in range(levels)]
    boundaries: list[int] = []
    block_sums: list[float] = []
    chosen: list[np.ndarray] = []
    running = 0.0
    level = 0
    n = 0
    while level < levels and n < coord_cap:
        hi = min(n + chunk, coord_cap)
        ns = np.arange(n + 1, hi + 1)
        vals, radii = oracle(ns, theta[n:hi], radius_grid)
        chosen.append(np.asarray(radii, dtype=float))
        cum = running + np.cumsum(vals)
        # close as many blocks as this chunk completes; a block's sum is the
        # cumulative total minus everything the earlier blocks absorbed
        offset = 0
        while level < levels:
            need = sum(block_sums) + targets[level]
            idx = np.nonzero(cum[offset:] >= need)[0]
            if idx.size == 0:
                break
            cut = offset + int(idx[0])
            boundaries.append(n + cut + 1)
            block_sums.append(float(cum[cut]) - sum(block_sums))
            level += 1
            offset = cut + 1
            if offset >= cum.size:
                break
        running = float(cum[-1])
        n = hi
    reached = level >= levels
    if not reached:
        boundaries.append(n)
        block_sums.append(running - sum(block_sums))
    radii_all = np.concatenate(chosen) if chosen else np.zeros(0)
    # steps: zones head (frozen) / active block (chosen radii) / zero tail
    nu = [0] + boundaries
    steps = []
    for k in range(len(nu) - 1):
        lo, hi_b = nu[k], nu[k + 1]
        block = tuple(np.minimum(radii_all[lo:hi_b], head_radius).tolist())
        steps.append(PathStep(lo, head_radius, block))
    return AdaptivePathResult(
        path=ApproachPath(tuple(steps)),
        boundaries=tuple(boundaries),
        block_sums=tuple(block_sums),
        targets=tuple(targets),
        reached=reached,
        chosen_radii=radii_all,
    )
