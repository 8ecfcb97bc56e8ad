"""Seeded Monte Carlo experiments with reproducible, emittable results.

Every experiment draws its per-sample randomness from a counter-based
substream keyed by (seed, sample index), so results are bit-identical no
matter how samples are scheduled across workers.  Results carry per-sample
records, summary quantiles (min / median / p90 / max), estimates with
standard errors, and pass/fail decisions computed only from the recorded
numbers; the full configuration is echoed into every result.

Emission formats: CSV with one row per sample (sample_index, input_hash,
metric columns, floats at 17 significant digits) and a JSON summary.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import extension, radial, special
from .bohr import MultiIndex
from .errors import ConfigError, DomainError
from .series import (
    FourierSeries,
    SpectrumClass,
    abschnitt,
    evaluate_batch,
    from_text,
    spectrum_class,
    to_text,
    wiener_norm,
)

# ---------------------------------------------------------------------------
# deterministic sampling


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for one sample: Philox keyed by (seed, index)."""
    key = np.array([np.uint64(seed & (2**64 - 1)), np.uint64(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_torus(m: int, rng: np.random.Generator) -> np.ndarray:
    """One uniform point of T^m as an angle vector."""
    if m < 1:
        raise ConfigError("dimension must be >= 1")
    return rng.uniform(0.0, 2.0 * np.pi, size=m)


def torus_samples(seed: int, samples: int, m: int) -> np.ndarray:
    """(samples, m) matrix; row i comes from substream(seed, i)."""
    out = np.empty((samples, m))
    for i in range(samples):
        out[i] = sample_torus(m, substream(seed, i))
    return out


def parallel_map(fn: Callable[[int], Mapping[str, float]], count: int, workers: int = 1) -> list:
    """Order-stable parallel map over sample indices (results by index)."""
    if workers <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(count)))


def random_series(
    rng: np.random.Generator,
    terms: int = 6,
    dim: int = 4,
    max_exp: int = 2,
    spectrum: str = "analytic",
    scale: float = 1.0,
    ensure_constant: float | None = None,
) -> FourierSeries:
    """Random sparse polynomial with a prescribed spectrum class.

    ``spectrum``: analytic (nonnegative exponents), pm (each term
    one-signed), or general.  Coefficients are complex gaussian, scaled so
    the coefficient-sum norm is about ``scale``.
    """
    out: dict[MultiIndex, complex] = {}
    attempts = 0
    while len(out) < terms and attempts < 50 * terms:
        attempts += 1
        support = rng.integers(1, dim + 1)
        coords = rng.choice(np.arange(1, dim + 1), size=support, replace=False)
        exps = rng.integers(1, max_exp + 1, size=support)
        if spectrum == "pm":
            sign = -1 if rng.uniform() < 0.5 else 1
            exps = sign * exps
        elif spectrum == "general":
            signs = np.where(rng.uniform(size=support) < 0.5, -1, 1)
            exps = signs * exps
        nu = MultiIndex(zip(coords.tolist(), exps.tolist()))
        out[nu] = complex(rng.normal(), rng.normal())
    total = sum(abs(a) for a in out.values())
    if total > 0:
        out = {nu: a * scale / total for nu, a in out.items()}
    if ensure_constant is not None:
        out[MultiIndex()] = complex(ensure_constant)
    return FourierSeries(out)


# ---------------------------------------------------------------------------
# results


@dataclass
class ExperimentResult:
    """Per-sample metrics plus derived summaries, decisions, and the config echo."""

    kind: str
    config: dict
    seed: int
    metrics: dict[str, np.ndarray]
    input_hashes: list[str]
    estimates: dict[str, float] = field(default_factory=dict)
    stderrs: dict[str, float] = field(default_factory=dict)
    passes: dict[str, bool] = field(default_factory=dict)
    notes: dict[str, object] = field(default_factory=dict)

    @property
    def samples(self) -> int:
        return len(self.input_hashes)

    def summary(self) -> dict:
        out = {}
        for name in sorted(self.metrics):
            v = np.asarray(self.metrics[name], dtype=float)
            out[name] = {
                "min": float(v.min()),
                "median": float(np.median(v)),
                "p90": float(np.percentile(v, 90)),
                "max": float(v.max()),
            }
        return out

    def to_csv_text(self) -> str:
        names = sorted(self.metrics)
        lines = [",".join(["sample_index", "input_hash"] + names)]
        for i in range(self.samples):
            row = [str(i), self.input_hashes[i]]
            row += [format(float(self.metrics[n][i]), ".17g") for n in names]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        doc = {
            "kind": self.kind,
            "config": self.config,
            "seed": self.seed,
            "samples": self.samples,
            "summary": self.summary(),
            "estimates": self.estimates,
            "stderrs": self.stderrs,
            "pass": self.passes,
            "notes": self.notes,
        }
        return json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj)}")


def _hash_input(arr: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(arr).tobytes()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# experiments


def fatou_experiment(
    series: FourierSeries,
    epsilons: Sequence[float],
    samples: int,
    seed: int,
    scheme: radial.RadialScheme = radial.DIAGONAL,
    workers: int = 1,
) -> ExperimentResult:
    """Boundary approach error max_theta |f_{1-eps}(theta) - f(theta)| per epsilon.

    Checks the coefficient bound max error <= wiener_norm * W * eps (W the
    largest weighted degree) and fits the log-log error slope.
    """
    eps = [float(e) for e in epsilons]
    if any(not 0.0 < e < 1.0 for e in eps):
        raise ConfigError("epsilons must lie in (0, 1)")
    m = max(series.dim, 1)
    theta = torus_samples(seed, samples, m)
    hashes = [_hash_input(theta[i]) for i in range(samples)]
    z = np.exp(1j * theta)
    boundary = evaluate_batch(series, z)
    weights = np.array([nu.weighted_degree(scheme) for nu, _ in series.items()], dtype=float)
    coeffs = np.array([a for _, a in series.items()], dtype=complex)
    phases = np.ones((samples, len(coeffs)), dtype=complex)
    for t, (nu, _) in enumerate(series.items()):
        col = np.ones(samples, dtype=complex)
        for j, e in nu.entries:
            zz = z[:, j - 1]
            col *= zz**e if e > 0 else np.conj(zz) ** (-e)
        phases[:, t] = col
    metrics: dict[str, np.ndarray] = {}
    max_err = []
    for e in eps:
        damp = (1.0 - e) ** weights - 1.0
        err = np.abs(phases @ (coeffs * damp))
        metrics[f"err_eps_{e:g}"] = err
        max_err.append(float(err.max()))
    W = float(weights.max()) if weights.size else 0.0
    wn = wiener_norm(series)
    bounds = [wn * W * e for e in eps]
    bound_ok = all(me <= b + 1e-15 for me, b in zip(max_err, bounds))
    slope = float("nan")
    if len(eps) >= 2 and all(me > 0 for me in max_err):
        slope = float(np.polyfit(np.log(eps), np.log(max_err), 1)[0])
    result = ExperimentResult(
        kind="fatou",
        config={
            "series": to_text(series),
            "epsilons": eps,
            "samples": samples,
            "scheme": scheme.describe(),
            "workers": workers,
        },
        seed=seed,
        metrics=metrics,
        input_hashes=hashes,
        estimates={"slope": slope, **{f"max_err_eps_{e:g}": me for e, me in zip(eps, max_err)}},
        passes={"coefficient_bound": bound_ok},
        notes={"bounds": bounds, "wiener_norm": wn, "max_weighted_degree": W},
    )
    return result


def weak_type_experiment(
    measure: special.RieszProductMeasure | FourierSeries,
    lambdas: Sequence[float],
    samples: int,
    seed: int,
    r_grid: np.ndarray | None = None,
    workers: int = 1,
) -> ExperimentResult:
    """Empirical tail of the grid radial maximal function against 1/lambda decay.

    Works on the coordinate-1 lift of a Riesz product (fast recursion) or on
    any series with a one-signed spectrum.  Reports binomial standard errors
    per level and the fitted log-log tail slope.
    """
    lam = np.asarray(sorted(float(x) for x in lambdas))
    if lam.size < 2 or lam[0] <= 0:
        raise ConfigError("need at least two positive lambda levels")
    if isinstance(measure, special.RieszProductMeasure):
        if r_grid is None:
            depth_scale = measure.base ** float(-measure.depth)
            kmax = int(np.ceil(-np.log2(depth_scale))) + 4
            r_grid = extension.dyadic_radius_grid(kmax)
        def mhat(i: int) -> dict:
            th = sample_torus(1, substream(seed, i))
            vals = special.measure_radial_value(measure, r_grid, th[0])
            return {"mhat": float(np.abs(vals).max()), "_hash": _hash_input(th)}
        tv = 1.0
    else:
        if spectrum_class(measure) not in (SpectrumClass.ANALYTIC, SpectrumClass.PM_ANALYTIC):
            raise ConfigError("weak-type experiment needs a one-signed spectrum")
        if r_grid is None:
            r_grid = extension.dyadic_radius_grid()
        m = max(measure.dim, 1)
        def mhat(i: int) -> dict:
            th = sample_torus(m, substream(seed, i))
            vals = extension.radial_sections_on_grid(measure, th, r_grid)
            return {"mhat": float(np.abs(vals).max()), "_hash": _hash_input(th)}
        tv = wiener_norm(measure)
    rows = parallel_map(mhat, samples, workers)
    m_vals = np.array([r["mhat"] for r in rows])
    hashes = [r["_hash"] for r in rows]
    tail = np.array([(m_vals > l).mean() for l in lam])
    tail_se = np.sqrt(np.maximum(tail * (1.0 - tail), 1e-12) / samples)
    mask = tail > 0
    slope = float("nan")
    if mask.sum() >= 2:
        slope = float(np.polyfit(np.log(lam[mask]), np.log(tail[mask]), 1)[0])
    grid_list = [float(x) for x in np.asarray(r_grid)]
    cfg_measure = (
        {"riesz": {"base": measure.base, "depth": measure.depth}}
        if isinstance(measure, special.RieszProductMeasure)
        else {"series": to_text(measure)}
    )
    return ExperimentResult(
        kind="weak_type",
        config={"measure": cfg_measure, "lambdas": lam.tolist(), "samples": samples,
                "r_grid": grid_list, "workers": workers},
        seed=seed,
        metrics={"mhat": m_vals},
        input_hashes=hashes,
        estimates={"tail_slope": slope},
        stderrs={f"tail_{l:g}": float(se) for l, se in zip(lam, tail_se)},
        passes={},
        notes={"tail": tail.tolist(), "tv_norm": tv},
    )


def log_integrability_experiment(
    series: FourierSeries,
    samples: int,
    seed: int,
    quadrature: int = 4096,
    norm_samples: int = 20000,
    workers: int = 1,
) -> ExperimentResult:
    """Two-sided bounds for the disc-parameter mean of log(1/|f|).

    For each sampled boundary point theta, the one-variable polynomial
    g(xi) = f at the xi-curve through theta is integrated over |xi| = 1:
    the mean of log(1/|g|) must not exceed log(1/|f(0-coefficient)|) and
    must stay above minus the Monte Carlo L1 norm (with 3 SE slack).
    """
    if spectrum_class(series) is not SpectrumClass.ANALYTIC:
        raise ConfigError("log-integrability experiment needs an analytic series")
    a0 = series.constant_term
    if a0 == 0:
        raise ConfigError(
            "the 0-coefficient vanishes; shifted evaluation points are unsupported"
        )
    # group coefficients by twist signature: g(xi) = sum_s b_s(theta) xi^s
    sig = np.array([nu.signature() for nu, _ in series.items()])
    coeffs = np.array([a for _, a in series.items()], dtype=complex)
    m = max(series.dim, 1)
    tgrid = np.arange(quadrature) * (2.0 * np.pi / quadrature)
    phase_t = np.exp(1j * np.outer(tgrid, sig))  # (Q, terms)

    rng_norm = substream(seed, 2**32)
    theta_norm = rng_norm.uniform(0, 2 * np.pi, size=(norm_samples, m))
    vals_norm = np.abs(evaluate_batch(series, np.exp(1j * theta_norm)))
    l1_est = float(vals_norm.mean())
    l1_se = float(vals_norm.std(ddof=1) / np.sqrt(norm_samples))

    upper = float(np.log(1.0 / abs(a0)))

    def one(i: int) -> dict:
        th = sample_torus(m, substream(seed, i))
        rot = np.ones(len(coeffs), dtype=complex)
        for t, (nu, _) in enumerate(series.items()):
            rot[t] = np.exp(1j * sum(e * th[j - 1] for j, e in nu.entries))
        gvals = phase_t @ (coeffs * rot)
        integrand = np.log(1.0 / np.maximum(np.abs(gvals), 1e-300))
        val = float(integrand.mean())
        return {"log_integral": val, "_hash": _hash_input(th)}

    rows = parallel_map(one, samples, workers)
    vals = np.array([r["log_integral"] for r in rows])
    hashes = [r["_hash"] for r in rows]
    quad_tol = 1e-9 * max(1.0, abs(upper))
    lower = -(l1_est + 3.0 * l1_se)
    ok_upper = bool((vals <= upper + 1e-6 + quad_tol).all())
    ok_lower = bool((vals >= lower - 1e-12).all())
    return ExperimentResult(
        kind="log_int",
        config={"series": to_text(series), "samples": samples, "quadrature": quadrature,
                "norm_samples": norm_samples, "workers": workers},
        seed=seed,
        metrics={"log_integral": vals},
        input_hashes=hashes,
        estimates={"l1_norm": l1_est, "upper_bound": upper, "lower_bound": lower},
        stderrs={"l1_norm": l1_se},
        passes={"upper": ok_upper, "lower": ok_lower, "both": ok_upper and ok_lower},
    )


def mz_experiment(
    measure: special.RieszProductMeasure,
    samples: int,
    seed: int,
    radii: np.ndarray | None = None,
    dip_threshold: float = 0.2,
    per_decade: int = 12,
    workers: int = 1,
) -> ExperimentResult:
    """Radial trajectories of a lacunary product measure along a step sequence.

    Default radii subsample r_k = 1 - k^{-1/3} geometrically in k up to the
    usable resolution r <= 1 - base^{-depth}.  Records each trajectory's
    minimum, final value, and the largest consecutive kernel ratio; the dip
    fraction is the share of samples whose minimum falls below the
    threshold.
    """
    if radii is None:
        rmax = 1.0 - float(measure.base) ** (-measure.depth)
        kmax = (1.0 - rmax) ** -3.0
        ks = np.unique(np.round(10 ** np.linspace(0.0, np.log10(kmax), int(np.log10(kmax) * per_decade) + 1)))
        radii = 1.0 - ks ** (-1.0 / 3.0)
        radii = radii[radii <= rmax]
        radii = np.unique(np.concatenate([[0.0], radii]))
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) <= 0) or radii.min() < 0 or radii.max() >= 1:
        raise ConfigError("radii must be strictly increasing in [0, 1)")

    def one(i: int) -> dict:
        th = sample_torus(1, substream(seed, i))
        traj = np.asarray(special.measure_radial_value(measure, radii, th[0]))
        ratios = [
            radial.kernel_ratio((radii[k] + radii[k + 1]) / 2.0, radii[k], [th[0]])
            for k in range(0, len(radii) - 1, max(1, len(radii) // 16))
        ]
        return {
            "traj_min": float(traj.min()),
            "traj_final": float(traj[-1]),
            "max_kernel_ratio": float(max(ratios)),
            "_hash": _hash_input(th),
        }

    rows = parallel_map(one, samples, workers)
    hashes = [r.pop("_hash") for r in rows]
    metrics = {k: np.array([r[k] for r in rows]) for k in rows[0]}
    dip = float((metrics["traj_min"] < dip_threshold).mean())
    return ExperimentResult(
        kind="mz",
        config={"measure": {"riesz": {"base": measure.base, "depth": measure.depth}},
                "samples": samples, "radii_count": int(len(radii)),
                "dip_threshold": dip_threshold, "workers": workers},
        seed=seed,
        metrics=metrics,
        input_hashes=hashes,
        estimates={"dip_fraction": dip},
        stderrs={"dip_fraction": float(np.sqrt(max(dip * (1 - dip), 1e-12) / samples))},
        passes={},
        notes={"usable_rmax": 1.0 - float(measure.base) ** (-measure.depth)},
    )


def divergence_experiment_g(
    boundaries: Sequence[int],
    samples: int,
    seed: int,
    osc_threshold: float = 0.4,
    workers: int = 1,
) -> ExperimentResult:
    """Trailing oscillation of Re g along the enumeration path, in closed form.

    Along a block, Re g is a constant (frozen head) plus a {0, 1/2}-weighted
    subset sum of cos(theta_n)/n over the middle block, so the extreme
    values over the enumerated tuples are attained at the sign-adapted
    subsets and need no explicit enumeration.  The oscillation statistic is
    max - min over the last two blocks' value sets.
    """
    bounds = [int(b) for b in boundaries]
    if len(bounds) < 2:
        raise ConfigError("need at least two blocks")
    N = bounds[-1]

    def one(i: int) -> dict:
        th = sample_torus(N, substream(seed, i))
        c = np.cos(th) / np.arange(1, N + 1)

        def block_extremes(prev: int, m: int) -> tuple[float, float]:
            head = (1.0 - 1.0 / prev) * c[:prev].sum() if prev > 0 else 0.0
            mid = c[prev:m]
            return head + 0.5 * mid[mid < 0].sum(), head + 0.5 * mid[mid > 0].sum()

        lo1, hi1 = block_extremes(bounds[-3] if len(bounds) >= 3 else 0, bounds[-2])
        lo2, hi2 = block_extremes(bounds[-2], bounds[-1])
        osc = max(hi1, hi2) - min(lo1, lo2)
        return {
            "trailing_osc": float(osc),
            "boundary_re_g": float(c.sum()),
            "_hash": _hash_input(th),
        }

    rows = parallel_map(one, samples, workers)
    hashes = [r.pop("_hash") for r in rows]
    metrics = {k: np.array([r[k] for r in rows]) for k in rows[0]}
    frac = float((metrics["trailing_osc"] >= osc_threshold).mean())
    return ExperimentResult(
        kind="divergence",
        config={"target": "example_g", "blocks": bounds, "samples": samples,
                "osc_threshold": osc_threshold, "workers": workers},
        seed=seed,
        metrics=metrics,
        input_hashes=hashes,
        estimates={"osc_fraction": frac},
        stderrs={"osc_fraction": float(np.sqrt(max(frac * (1 - frac), 1e-12) / samples))},
        passes={},
    )


def divergence_experiment_f(
    factors: int,
    levels: int,
    samples: int,
    seed: int,
    coord_cap: int = 100_000,
    boundary_threshold: float = 0.1,
    decay_threshold: float = float(np.exp(-4.0)),
    workers: int = 1,
) -> ExperimentResult:
    """Adaptive-path decay of the bump product versus its boundary modulus.

    Per sample: build the point-dependent adaptive path from the bump term
    oracle, evaluate -log|f| along its steps, record the achieved block
    sums and min |f|; the boundary reference is the finite product over the
    first ``factors`` coordinates.
    """

    def one(i: int) -> dict:
        rng = substream(seed, i)
        th = sample_torus(coord_cap, rng)
        res = radial.adaptive_block_path(
            special.bump_max_over_radii, th, levels, coord_cap=coord_cap
        )
        # -log|f| along each step: frozen head + active block + zero tail
        min_abs = 1.0
        mean_cache = special.counterexample_means(min(res.path.span, coord_cap))
        for step in res.path.steps:
            span = step.span
            ns = np.arange(1, span + 1, dtype=float)
            rr = step.radii(span)
            logsum = float(
                special.bump_harmonic_batch(ns, np.minimum(rr, 1.0 - 1e-9), th[:span], "u").sum()
            )
            logsum += float(mean_cache[span:].sum()) if span < mean_cache.size else 0.0
            min_abs = min(min_abs, float(np.exp(-logsum)))
        bvals = special.psi(
            (np.mod(th[:factors] + np.pi, 2 * np.pi) - np.pi)
            / np.array([special.delta_n(k) for k in range(1, factors + 1)])
        )
        boundary_abs = float(np.exp(-bvals.sum()))
        return {
            "min_abs_f": min_abs,
            "boundary_abs_f": boundary_abs,
            "achieved_mass": float(sum(res.block_sums)),
            "levels_reached": float(len([b for b, t in zip(res.block_sums, res.targets) if b >= t])),
            "_hash": _hash_input(th[:64]),
        }

    rows = parallel_map(one, samples, workers)
    hashes = [r.pop("_hash") for r in rows]
    metrics = {k: np.array([r[k] for r in rows]) for k in rows[0]}
    decay_frac = float((metrics["min_abs_f"] <= decay_threshold).mean())
    boundary_frac = float((metrics["boundary_abs_f"] >= boundary_threshold).mean())
    return ExperimentResult(
        kind="divergence",
        config={"target": "counterexample_f", "factors": factors, "levels": levels,
                "coord_cap": coord_cap, "samples": samples,
                "decay_threshold": decay_threshold,
                "boundary_threshold": boundary_threshold, "workers": workers},
        seed=seed,
        metrics=metrics,
        input_hashes=hashes,
        estimates={"decay_fraction": decay_frac, "boundary_fraction": boundary_frac},
        passes={},
    )


def divergence_experiment_path(
    target: str,
    path: radial.ApproachPath,
    samples: int,
    seed: int,
    workers: int = 1,
) -> ExperimentResult:
    """Evaluate a target literally along an explicit (materialised) path."""
    if target not in ("example_g", "example_u"):
        raise ConfigError(f"unsupported explicit-path target {target!r}")
    span = path.span

    def one(i: int) -> dict:
        th = sample_torus(max(span, 1), substream(seed, i))
        z = np.exp(1j * th[:span])
        vals = []
        for step in path.steps:
            zz = step.radii(span) * z
            vals.append(special.example_g(zz) if target == "example_g" else special.example_u(zz))
        vals = np.array(vals)
        re = vals.real
        return {
            "osc_re": float(re.max() - re.min()) if len(vals) else 0.0,
            "final_abs": float(np.abs(vals[-1])) if len(vals) else 0.0,
            "_hash": _hash_input(th),
        }

    rows = parallel_map(one, samples, workers)
    hashes = [r.pop("_hash") for r in rows]
    metrics = {k: np.array([r[k] for r in rows]) for k in rows[0]}
    return ExperimentResult(
        kind="divergence",
        config={"target": target, "path_steps": len(path.steps), "samples": samples,
                "workers": workers},
        seed=seed,
        metrics=metrics,
        input_hashes=hashes,
    )


def abschnitt_check(
    series: FourierSeries,
    p: float,
    m_list: Sequence[int],
    samples: int,
    seed: int,
    workers: int = 1,
) -> ExperimentResult:
    """Monte Carlo ||A_m F||_p across truncation orders with common random numbers.

    The same boundary samples feed every m, so the comparison across m is a
    paired one; estimates stabilise exactly once m reaches dim(F).
    """
    ms = [int(m) for m in m_list]
    if any(m2 <= m1 for m1, m2 in zip(ms, ms[1:])) or not ms:
        raise ConfigError("m list must be strictly increasing and nonempty")
    dim = max(series.dim, 1)
    theta = torus_samples(seed, samples, dim)
    hashes = [_hash_input(theta[i]) for i in range(samples)]
    z = np.exp(1j * theta)
    metrics = {}
    estimates = {}
    stderrs = {}
    for m in ms:
        vals = np.abs(evaluate_batch(abschnitt(series, m), z)) ** p
        metrics[f"abs_p_m{m}"] = vals
        mean = float(vals.mean())
        se = float(vals.std(ddof=1) / np.sqrt(samples))
        estimates[f"norm_m{m}"] = mean ** (1.0 / p) if mean > 0 else 0.0
        stderrs[f"norm_m{m}"] = se * estimates[f"norm_m{m}"] / (p * mean) if mean > 0 else 0.0
    return ExperimentResult(
        kind="abschnitt",
        config={"series": to_text(series), "p": p, "m_list": ms, "samples": samples,
                "workers": workers},
        seed=seed,
        metrics=metrics,
        input_hashes=hashes,
        estimates=estimates,
        stderrs=stderrs,
    )


# ---------------------------------------------------------------------------
# config-document dispatch


def _series_from_config(cfg: dict, seed: int) -> FourierSeries:
    if "text" in cfg:
        return from_text(cfg["text"])
    if "random" in cfg:
        params = dict(cfg["random"])
        rng = substream(seed, 2**40)
        return random_series(rng, **params)
    raise ConfigError("series config needs 'text' or 'random'")


def run_config(config: dict, seed: int | None = None, workers: int = 1) -> ExperimentResult:
    """Run the experiment described by a JSON-style config document."""
    cfg = dict(config)
    kind = cfg.get("kind")
    if seed is None:
        seed = cfg.get("seed")
    if seed is None:
        raise ConfigError("an explicit seed is required")
    seed = int(seed)
    samples = int(cfg.get("samples", 0))
    if samples < 1:
        raise ConfigError("sample count must be >= 1")
    if kind == "fatou":
        series = _series_from_config(cfg["series"], seed)
        return fatou_experiment(series, cfg.get("epsilons", [1e-1, 1e-2, 1e-3, 1e-4]),
                                samples, seed, workers=workers)
    if kind == "weak_type":
        meas_cfg = cfg["measure"]
        if "riesz" in meas_cfg:
            meas = special.RieszProductMeasure(**meas_cfg["riesz"])
        else:
            meas = _series_from_config(meas_cfg, seed)
        lam = cfg.get("lambdas", np.geomspace(1, 50, 20).tolist())
        return weak_type_experiment(meas, lam, samples, seed, workers=workers)
    if kind == "log_int":
        series = _series_from_config(cfg["series"], seed)
        return log_integrability_experiment(series, samples, seed,
                                            quadrature=int(cfg.get("quadrature", 4096)),
                                            workers=workers)
    if kind == "mz":
        meas = special.RieszProductMeasure(**cfg["measure"]["riesz"])
        return mz_experiment(meas, samples, seed,
                             dip_threshold=float(cfg.get("dip_threshold", 0.2)),
                             workers=workers)
    if kind == "divergence":
        target = cfg.get("target")
        if target == "example_g":
            blocks = cfg.get("blocks")
            if isinstance(blocks, dict) and "mc" in blocks:
                mc = blocks["mc"]
                rng = substream(seed, 2**41)
                blocks = radial.choose_blocks_mc(
                    float(mc.get("p0", 0.95)), int(mc.get("samples", 2000)), rng,
                    count=int(mc.get("count", 4)))
            return divergence_experiment_g(blocks, samples, seed,
                                           osc_threshold=float(cfg.get("osc_threshold", 0.4)),
                                           workers=workers)
        if target == "counterexample_f":
            return divergence_experiment_f(int(cfg.get("factors", 200)),
                                           int(cfg.get("levels", 3)), samples, seed,
                                           coord_cap=int(cfg.get("coord_cap", 100_000)),
                                           workers=workers)
        if target == "example_u":
            path = radial.path_from_text(cfg["path_text"]) if "path_text" in cfg else \
                radial.block_path(cfg["blocks"])
            return divergence_experiment_path(target, path, samples, seed, workers=workers)
        raise ConfigError(f"unknown divergence target {target!r}")
    if kind == "abschnitt":
        series = _series_from_config(cfg["series"], seed)
        return abschnitt_check(series, float(cfg.get("p", 1.0)), cfg["m_list"],
                               samples, seed, workers=workers)
    raise ConfigError(f"unknown experiment kind {kind!r}")
