"""Dimension estimates from multi-scale covering tables.

Every estimator reads a :class:`~sphericalmax.entropy.CountTable`, so one
expensive sample serves β, the Assouad spectrum and the whole ν♯ profile.
Limits are replaced by least-squares slopes over the top half of the
available scales; the per-scale data stays attached for inspection.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .entropy import CountTable, count_table
from .setgen import Cantor, FullInterval, FullRay, Lacunary, Periodize, Scale, SequenceSet, SetSpec, Union

__all__ = [
    "NuSharpProfile",
    "SpectrumReport",
    "DimensionError",
    "beta_estimate",
    "assouad_spectrum_estimate",
    "assouad_spectrum",
    "nu_sharp_estimate",
    "gamma_estimate",
    "rho_star",
    "closed_form_profile",
    "union_profile",
    "known_profile",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 0.05


class DimensionError(ValueError):
    pass


def _top_half(j_max: int) -> np.ndarray:
    return np.arange(math.ceil(j_max / 2), j_max + 1)


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.polyfit(x.astype(float), y.astype(float), 1)[0])


def _window_slopes(x: np.ndarray, y: np.ndarray, width: int = 4) -> np.ndarray:
    """Least-squares slopes over every run of ``width`` consecutive scales."""
    if x.size <= width:
        return np.array([_slope(x, y)])
    return np.array([_slope(x[s:s + width], y[s:s + width]) for s in range(x.size - width + 1)])


def _ensure_table(spec, j_max, table, threads=1):
    if table is not None and table.j_max >= j_max:
        return table
    return count_table(spec, j_max, threads=threads)


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


@dataclass
class NuSharpProfile:
    """Piecewise-linear model of the Legendre–Assouad function ν♯.

    ``rho``/``value`` are the knots on ``[0, ∞)``.  Evaluation is constant
    ``beta`` left of 0, linear between knots and ``max(value[-1], rho)``
    right of the last knot.
    """

    kind: str
    rho: np.ndarray
    value: np.ndarray
    beta: float
    gamma: float
    rho_star: float
    tol: float = DEFAULT_TOL
    components: tuple = ()
    grid: np.ndarray | None = None
    grid_value: np.ndarray | None = None
    pre_clamp: np.ndarray | None = None
    slope_lo: np.ndarray | None = None
    slope_hi: np.ndarray | None = None
    per_scale: np.ndarray | None = None
    scales: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_closed_form(self) -> bool:
        return self.kind == "closed_form"

    def __call__(self, rho):
        return self.evaluate(rho)

    def evaluate(self, rho):
        r = np.asarray(rho, dtype=float)
        inner = np.interp(r, self.rho, self.value)
        out = np.where(r <= self.rho[0], self.beta, inner)
        out = np.where(r > self.rho[-1], np.maximum(self.value[-1], r), out)
        return float(out) if out.ndim == 0 else out

    def samples(self, grid=None):
        """``(rho, value)`` on ``grid`` (the estimation grid when omitted)."""
        if grid is None:
            grid = self.grid if self.grid is not None else np.linspace(0.0, 2.0, 41)
        grid = np.asarray(grid, dtype=float)
        return grid, self.evaluate(grid)

    def envelope_violation(self, grid=None) -> float:
        """Largest excursion outside ``[max(rho, beta), max(1, rho)]`` on the grid."""
        r, v = self.samples(grid)
        keep = r >= 0
        r, v = r[keep], v[keep]
        if r.size == 0:
            return 0.0
        lo = np.maximum(r, self.beta) - v
        hi = v - np.maximum(1.0, r)
        return float(max(0.0, lo.max(), hi.max()))

    def convexity_violation(self) -> float:
        """Soft diagnostic: largest negative second difference on the knots."""
        if self.rho.size < 3:
            return 0.0
        x, y = self.rho, self.value
        s = np.diff(y) / np.diff(x)
        return float(max(0.0, -(np.diff(s)).min()))

    def band(self) -> tuple["NuSharpProfile", "NuSharpProfile"]:
        """Lower and upper profiles built from the per-scale slope spread.

        Closed forms return themselves twice.
        """
        if self.slope_lo is None:
            return self, self
        out = []
        for raw in (self.slope_lo, self.slope_hi):
            out.append(_assemble_sampled(self.grid, raw, self.beta, self.tol,
                                         rho_star_tol=self.tol))
        return out[0], out[1]

    def to_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        r, v = self.samples()
        pre = self.pre_clamp if self.pre_clamp is not None else v
        lo = self.slope_lo if self.slope_lo is not None else v
        hi = self.slope_hi if self.slope_hi is not None else v
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh)
            w.writerow(["rho", "value", "pre_clamp", "slope_lo_j", "slope_hi_j"])
            for row in zip(r, v, pre, lo, hi):
                w.writerow([f"{x:.10g}" for x in row])

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "beta": self.beta,
            "gamma": self.gamma,
            "rho_star": self.rho_star,
            "tol": self.tol,
            "components": [list(c) for c in self.components],
            "envelope_violation": self.envelope_violation(),
            "convexity_violation": self.convexity_violation(),
            **{k: v for k, v in self.diagnostics.items() if np.isscalar(v) or isinstance(v, (list, str))},
        }


def _closed_knots(beta: float, gamma: float):
    if gamma <= 0:
        return np.array([0.0]), np.array([0.0])
    if beta >= gamma:
        return np.array([0.0, beta]), np.array([beta, beta])
    return np.array([0.0, gamma]), np.array([beta, gamma])


def _validate_pair(beta, gamma):
    if not (0.0 <= beta <= gamma <= 1.0):
        raise DimensionError(f"need 0 <= beta <= gamma <= 1, got beta={beta}, gamma={gamma}")


def closed_form_profile(beta: float, gamma: float) -> NuSharpProfile:
    """Exact profile of an Assouad-regular set.

    ``β`` left of 0, then the chord from ``(0, β)`` to ``(γ, γ)``, then the
    identity.  With ``β = γ`` this is ``max(ρ, β)``.
    """
    beta, gamma = float(beta), float(gamma)
    _validate_pair(beta, gamma)
    r, v = _closed_knots(beta, gamma)
    rs = beta if beta >= gamma else 0.0
    return NuSharpProfile("closed_form", r, v, beta, gamma, rs, 0.0, ((beta, gamma),))


def union_profile(components: Sequence[tuple[float, float]]) -> NuSharpProfile:
    """Pointwise maximum of closed-form profiles, the profile of a finite union."""
    comps = [(float(b), float(g)) for b, g in components]
    if not comps:
        raise DimensionError("union needs at least one component")
    if len(comps) == 1:
        return closed_form_profile(*comps[0])
    parts = [closed_form_profile(b, g) for b, g in comps]
    knots = sorted({float(x) for p in parts for x in p.rho})
    extra = []
    for a, b in zip(knots[:-1], knots[1:]):
        va = np.array([p.evaluate(a) for p in parts])
        vb = np.array([p.evaluate(b) for p in parts])
        for i in range(len(parts)):
            for k in range(i + 1, len(parts)):
                da, db = va[i] - va[k], vb[i] - vb[k]
                if da * db < 0:
                    extra.append(a + (b - a) * da / (da - db))
    r = np.array(sorted(set(knots) | set(extra)))
    v = np.max([p.evaluate(r) for p in parts], axis=0)
    beta = max(b for b, _ in comps)
    gamma = max(g for _, g in comps)
    prof = NuSharpProfile("closed_form", r, v, beta, gamma, 0.0, 0.0, tuple(comps))
    prof.rho_star = _rho_star_from(prof, 0.0)
    return prof


def known_profile(spec: SetSpec) -> NuSharpProfile | None:
    """Closed-form profile for built-in families, or ``None`` if unknown.

    Scaling and periodizing a unit piece do not change the profile; a union
    takes the pointwise maximum.
    """
    pairs = _known_pairs(spec)
    if pairs is None:
        return None
    return union_profile(pairs)


def _known_pairs(spec):
    if isinstance(spec, (FullInterval, FullRay)):
        if isinstance(spec, FullInterval) and spec.hi == spec.lo:
            return [(0.0, 0.0)]
        return [(1.0, 1.0)]
    if isinstance(spec, Lacunary):
        return [(0.0, 0.0)]
    if isinstance(spec, Cantor):
        s = math.log(2.0) / math.log(1.0 / spec.ratio)
        return [(s, s)]
    if isinstance(spec, SequenceSet):
        return [(1.0 / (1.0 + spec.a), 1.0)]
    if isinstance(spec, (Scale, Periodize)):
        return _known_pairs(spec.inner)
    if isinstance(spec, Union):
        out = []
        for part in spec.parts:
            sub = _known_pairs(part)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------


def beta_estimate(spec: SetSpec, j_max: int, *, table: CountTable | None = None,
                  threads: int = 1) -> tuple[float, dict]:
    """Upper Minkowski-type exponent from unit-window covering counts.

    Returns the top-half slope of ``s_j = log2 max_{|J|=1} N(E cap J, 2**-j)``
    clamped to ``[0, 1]``, with ``s_j`` and ``s_j / j`` as diagnostics.
    """
    if j_max < 8:
        raise DimensionError("beta_estimate needs j_max >= 8")
    table = _ensure_table(spec, j_max, table, threads)
    j = np.arange(1, j_max + 1)
    s = table.unit_window_log2()[:j_max]
    if not np.all(np.isfinite(s)):
        return 0.0, {"s_j": s, "ratio": np.zeros_like(s), "raw": 0.0, "empty": True}
    top = _top_half(j_max)
    raw = _slope(top, s[top - 1])
    diag = {"s_j": s, "ratio": s / j, "raw": raw,
            "window_slopes": _window_slopes(top, s[top - 1])}
    return float(min(1.0, max(0.0, raw))), diag


def assouad_spectrum_estimate(spec: SetSpec, theta: float, j_max: int, *,
                              table: CountTable | None = None, threads: int = 1,
                              return_diagnostics: bool = False):
    """Assouad spectrum at ``theta`` from windows of length ``2**-ceil(theta j)``.

    The count exponent is regressed against ``j - ceil(theta j)``, the exact
    log-ratio of window length to covering scale.
    """
    if not 0.0 < theta < 1.0:
        raise DimensionError("theta must lie in (0, 1)")
    table = _ensure_table(spec, j_max, table, threads)
    top = _top_half(j_max)
    xs, ys = [], []
    for j in top:
        i = math.ceil(theta * j - 1e-12)
        if j - i < 1:
            continue
        c = table.counts[j, i]
        if c <= 0:
            continue
        xs.append(j - i)
        ys.append(math.log2(c))
    xs, ys = np.array(xs), np.array(ys)
    if np.unique(xs).size < 4:
        raise DimensionError(
            f"theta={theta} leaves fewer than 4 usable scales at j_max={j_max}")
    raw = _slope(xs, ys)
    dim = float(max(0.0, raw))
    if return_diagnostics:
        return dim, {"x": xs, "log2_count": ys, "raw": raw}
    return dim


@dataclass
class SpectrumReport:
    theta_grid: np.ndarray
    dims: np.ndarray
    nu: np.ndarray
    diagnostics: list

    def to_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh)
            w.writerow(["theta", "dim", "nu"])
            for row in zip(self.theta_grid, self.dims, self.nu):
                w.writerow([f"{x:.10g}" for x in row])


def assouad_spectrum(spec: SetSpec, thetas, j_max: int, *, table: CountTable | None = None,
                     threads: int = 1) -> SpectrumReport:
    """Spectrum on a θ grid; θ values with too few scales are skipped and noted."""
    table = _ensure_table(spec, j_max, table, threads)
    kept, dims, diags = [], [], []
    for th in thetas:
        try:
            dim, dg = assouad_spectrum_estimate(spec, float(th), j_max, table=table,
                                                return_diagnostics=True)
        except DimensionError as exc:
            diags.append({"theta": float(th), "skipped": str(exc)})
            continue
        kept.append(float(th))
        dims.append(dim)
        diags.append({"theta": float(th), "raw": dg["raw"]})
    th = np.array(kept)
    dims = np.array(dims)
    return SpectrumReport(th, dims, -(1.0 - th) * dims, diags)


def _rho_star_from(profile: NuSharpProfile, tol: float) -> float:
    from .typeset import dagger  # local: typeset depends on this module
    return float(min(profile.beta, max(0.0, dagger(profile, profile.beta + tol, tol=np.inf))))


def _assemble_sampled(grid, raw, beta, tol, rho_star_tol, **extra) -> NuSharpProfile:
    grid = np.asarray(grid, dtype=float)
    raw = np.asarray(raw, dtype=float)
    lo_env = np.maximum(grid, beta)
    hi_env = np.maximum(1.0, grid)
    val = np.clip(raw, lo_env, hi_env)
    val = np.where(grid <= 0, beta, val)
    val = np.maximum.accumulate(val)
    pos = grid > 0
    knots_r = np.concatenate([[0.0], grid[pos]])
    knots_v = np.concatenate([[beta], val[pos]])
    prof = NuSharpProfile("sampled", knots_r, knots_v, beta, 1.0, 0.0, tol,
                          grid=grid, grid_value=val, pre_clamp=raw, **extra)
    prof.gamma = gamma_estimate(prof, tol)
    prof.rho_star = _rho_star_from(prof, rho_star_tol)
    return prof


def nu_sharp_estimate(spec: SetSpec, rho_grid, j_max: int, *, table: CountTable | None = None,
                      tol: float = DEFAULT_TOL, threads: int = 1) -> NuSharpProfile:
    """Sampled ν♯ profile.

    For each ρ, ``v_j(ρ) = log2 max_i 2**(iρ) M[j, i]`` is regressed on ``j``
    over the top half of scales.  Slopes are clamped to the envelope
    ``[max(ρ, β̂), max(1, ρ)]`` and made nondecreasing; raw slopes are kept
    in ``pre_clamp`` and the spread of 4-scale window slopes in
    ``slope_lo``/``slope_hi``.
    """
    if j_max < 10:
        raise DimensionError("nu_sharp_estimate needs j_max >= 10")
    grid = np.asarray(sorted(set(float(r) for r in rho_grid)), dtype=float)
    if grid.size == 0:
        raise DimensionError("empty rho grid")
    table = _ensure_table(spec, j_max, table, threads)
    beta, bdiag = beta_estimate(spec, j_max, table=table)
    js = np.arange(1, j_max + 1)
    logs = [table.log2_counts(j) for j in js]
    v = np.empty((grid.size, j_max))
    for col, j in enumerate(js):
        i = np.arange(j + 1)
        v[:, col] = np.max(grid[:, None] * i[None, :] + logs[col][None, :], axis=1)
    top = _top_half(j_max)
    raw = np.array([_slope(top, row[top - 1]) for row in v])
    ws = [_window_slopes(top, row[top - 1]) for row in v]
    lo = np.array([w.min() for w in ws])
    hi = np.array([w.max() for w in ws])
    prof = _assemble_sampled(grid, raw, beta, tol, rho_star_tol=tol,
                             slope_lo=lo, slope_hi=hi, per_scale=v, scales=js)
    prof.diagnostics = {"j_max": j_max, "beta_raw": bdiag["raw"],
                        "max_spread": float((hi - lo).max()),
                        "gamma_flagged": _gamma_flag(prof, tol)}
    return prof


def _gamma_flag(profile, tol):
    g = profile.grid_value - profile.grid
    return not bool(np.any(g <= tol))


def gamma_estimate(profile: NuSharpProfile, tol: float = DEFAULT_TOL) -> float:
    """Quasi-Assouad dimension: where the profile meets the diagonal.

    Takes the first grid point with ``value - ρ <= tol`` and refines with the
    zero of the linear interpolant of ``value - ρ`` through it and its left
    neighbour, clipped to the neighbouring grid cells.  Falls back to 1 when
    the profile never meets the diagonal.
    """
    if profile.is_closed_form:
        return profile.gamma
    r = profile.grid
    g = profile.grid_value - r
    pos = r >= 0
    r, g = r[pos], g[pos]
    hits = np.flatnonzero(g <= tol)
    if hits.size == 0:
        return 1.0
    k = int(hits[0])
    if k == 0:
        est = r[0]
    else:
        r0, r1, g0, g1 = r[k - 1], r[k], g[k - 1], g[k]
        est = r1 if g1 == g0 else r0 + g0 * (r1 - r0) / (g0 - g1)
        right = r[k + 1] if k + 1 < r.size else r1
        est = min(max(est, r0), right)
    return float(min(1.0, max(profile.beta, est)))


def rho_star(profile: NuSharpProfile) -> float:
    """Largest ρ with ``ν♯(ρ) <= β + tol``, clamped to ``[0, β]``."""
    return _rho_star_from(profile, profile.tol)
