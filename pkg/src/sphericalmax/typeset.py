"""Weighted type sets of spherical maximal operators.

A pair ``(p, alpha)`` belongs to the (closed) type set when
``(d-1)(p-1) >= Theta(p, alpha)``; equivalently ``p >= p_beta`` and
``L(p) <= alpha <= U(p)``.  Both descriptions are implemented independently
so they can be cross-checked.  Plots and tables use the coordinates
``(1/p, alpha/p)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.signal import fftconvolve

from .dimension import NuSharpProfile, closed_form_profile, union_profile

__all__ = [
    "TypeSetError",
    "TypeSetRegion",
    "EquivalenceReport",
    "ConvexityReport",
    "TOL_BOUNDARY",
    "P_MAX",
    "dagger",
    "U",
    "L",
    "theta",
    "contains",
    "explicit_contains",
    "necessary_conditions",
    "benchmark_contains",
    "p_beta",
    "p_gamma",
    "region_boundary",
    "region_uncertainty",
    "verify_equivalence",
    "convexity_check",
    "membership_grid",
    "union_L",
    "union_crossings",
    "profile_for_components",
]

TOL_BOUNDARY = 1e-6
P_MAX = 4.0


class TypeSetError(ValueError):
    pass


def p_beta(beta: float, d: int) -> float:
    return 1.0 + beta / (d - 1)


def p_gamma(gamma: float, d: int) -> float:
    return 1.0 + gamma / (d - 1)


def dagger(profile: NuSharpProfile, s, tol: float | None = None):
    """Generalized inverse ``sup{rho >= 0 : nu(rho) <= s}`` of the profile."""
    tol = max(profile.tol, 1e-9) if tol is None else tol
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < profile.beta - tol):
        raise TypeSetError(f"dagger needs s >= beta - tol (beta={profile.beta})")
    # rounding just below beta must still land on the flat piece's right end
    s_arr = np.maximum(s_arr, profile.beta)
    r, v = profile.rho, profile.value
    k = np.searchsorted(v, s_arr, side="right") - 1
    kk = np.clip(k, 0, r.size - 2) if r.size > 1 else np.zeros_like(k)
    if r.size > 1:
        dv = v[kk + 1] - v[kk]
        with np.errstate(divide="ignore", invalid="ignore"):
            mid = r[kk] + (s_arr - v[kk]) * (r[kk + 1] - r[kk]) / np.where(dv > 0, dv, 1.0)
    else:
        mid = np.zeros_like(s_arr)
    out = np.where(k < 0, 0.0, mid)
    out = np.where(s_arr >= v[-1], np.maximum(s_arr, r[-1]), out)
    return float(out) if out.ndim == 0 else out


def U(p, beta: float, d: int):
    """Upper boundary ``(d-1)(p-1) - beta``."""
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < p_beta(beta, d) - 1e-12):
        raise TypeSetError("U(p) is defined for p >= p_beta")
    out = (d - 1) * (p_arr - 1) - beta
    return float(out) if out.ndim == 0 else out


def L(p, profile: NuSharpProfile, d: int):
    """Lower boundary ``(d-1)(p-2) - dagger((d-1)(p-1))``."""
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < p_beta(profile.beta, d) - 1e-12):
        raise TypeSetError("L(p) is defined for p >= p_beta")
    s = (d - 1) * (p_arr - 1)
    out = (d - 1) * (p_arr - 2) - dagger(profile, s, tol=np.inf)
    return float(out) if np.ndim(out) == 0 else out


def theta(p, alpha, profile: NuSharpProfile, d: int):
    """``max{alpha + beta, nu((d-1)(p-2) - alpha)}``."""
    p_arr = np.asarray(p, dtype=float)
    a_arr = np.asarray(alpha, dtype=float)
    out = np.maximum(a_arr + profile.beta, profile.evaluate((d - 1) * (p_arr - 2) - a_arr))
    return float(out) if np.ndim(out) == 0 else out


def _theta_margin(p, alpha, profile, d):
    return (d - 1) * (np.asarray(p, dtype=float) - 1) - theta(p, alpha, profile, d)


def contains(p, alpha, profile: NuSharpProfile, d: int, tol: float = TOL_BOUNDARY):
    """Membership in the closed type set through the Θ predicate."""
    out = _theta_margin(p, alpha, profile, d) >= -tol
    return bool(out) if np.ndim(out) == 0 else out


def _explicit_margins(p, alpha, profile, d):
    p = np.asarray(p, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    pb = p_beta(profile.beta, d)
    pc = np.maximum(p, pb)
    lo = L(pc, profile, d)
    hi = U(pc, profile.beta, d)
    return p - pb, alpha - lo, hi - alpha


def explicit_contains(p, alpha, profile: NuSharpProfile, d: int, tol: float = TOL_BOUNDARY):
    """Membership through ``p >= p_beta`` and ``L(p) <= alpha <= U(p)``."""
    m = np.min(np.stack(np.broadcast_arrays(*_explicit_margins(p, alpha, profile, d))), axis=0)
    out = m >= -tol
    return bool(out) if np.ndim(out) == 0 else out


def necessary_conditions(p, alpha, beta: float, d: int, tol: float = 0.0):
    """``-(d-1) <= alpha <= (d-1)(p-1) - beta``."""
    p = np.asarray(p, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    out = (alpha >= -(d - 1) - tol) & (alpha <= (d - 1) * (p - 1) - beta + tol)
    return bool(out) if np.ndim(out) == 0 else out


def benchmark_contains(name: str, p, alpha, d: int, tol: float = TOL_BOUNDARY):
    """Classical closed regions: ``"lacunary"`` and ``"full"``."""
    p = np.asarray(p, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if name == "lacunary":
        out = (alpha >= 1 - d - tol) & (alpha <= (d - 1) * (p - 1) + tol) & (p >= 1)
    elif name == "full":
        out = ((alpha >= 1 - d - tol) & (alpha <= (d - 1) * p - d + tol)
               & (p >= 1 + 1.0 / (d - 1) - tol))
    else:
        raise TypeSetError(f"unknown benchmark '{name}'")
    return bool(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


@dataclass
class TypeSetRegion:
    d: int
    profile: NuSharpProfile
    p_beta: float
    p_gamma: float
    p: np.ndarray
    inv_p: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def to_csv(self, path, header_lines: Sequence[str] = ()) -> None:
        with open(path, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            w = csv.writer(fh)
            w.writerow(["inv_p", "lower", "upper"])
            for row in zip(self.inv_p, self.lower, self.upper):
                w.writerow([f"{x:.10g}" for x in row])

    def summary(self) -> dict:
        return {"d": self.d, "p_beta": self.p_beta, "p_gamma": self.p_gamma,
                "x_beta": 1.0 / self.p_beta, "x_gamma": 1.0 / self.p_gamma,
                "L_at_p_beta": float(self.lower[0] * self.p[0]), **self.diagnostics}


def _default_p_grid(profile, d, p_max, n):
    pb = p_beta(profile.beta, d)
    kinks = 1.0 + np.asarray(profile.value, dtype=float) / (d - 1)
    pts = np.concatenate([np.linspace(pb, p_max, n), kinks, [p_gamma(profile.gamma, d)]])
    pts = pts[(pts >= pb) & (pts <= p_max)]
    return np.unique(pts)


def region_boundary(profile: NuSharpProfile, d: int, p_grid=None, *, p_max: float = P_MAX,
                    n: int = 200) -> TypeSetRegion:
    """Boundary samples ``(1/p, L(p)/p, U(p)/p)`` on ``[p_beta, p_max]``.

    The default grid adds every kink of ``L``, including ``p_gamma``.
    """
    if d < 2:
        raise TypeSetError("d must be >= 2")
    pb = p_beta(profile.beta, d)
    if p_grid is None:
        p = _default_p_grid(profile, d, p_max, n)
    else:
        p = np.asarray(p_grid, dtype=float)
        if np.any(p < pb - 1e-12):
            raise TypeSetError("p_grid must lie in [p_beta, p_max]")
    lo = L(p, profile, d)
    hi = U(p, profile.beta, d)
    diag = {
        "lower_le_upper": bool(np.all(lo <= hi + 1e-12)),
        "lower_ge_1_minus_d": bool(np.all(lo >= 1 - d - 1e-12)),
        "lower_nonincreasing": bool(np.all(np.diff(lo) <= 1e-12)),
    }
    return TypeSetRegion(d, profile, pb, p_gamma(profile.gamma, d), p, 1.0 / p, lo / p, hi / p, diag)


def region_uncertainty(profile: NuSharpProfile, d: int, p_grid=None, *, p_max: float = P_MAX):
    """Inner and outer regions from the per-scale slope spread of a sampled profile.

    A larger profile gives a larger Θ and hence a smaller region, so the upper
    slope band yields the inner region.
    """
    lo_prof, hi_prof = profile.band()
    if p_grid is None:
        p_grid = _default_p_grid(profile, d, p_max, 200)
    return (region_boundary(hi_prof, d, p_grid, p_max=p_max),
            region_boundary(lo_prof, d, p_grid, p_max=p_max))


def membership_grid(profile: NuSharpProfile, d: int, nx: int = 100, ny: int = 100,
                    *, refine: int = 1):
    """Θ membership on a grid in ``(1/p, alpha/p)``.

    ``x`` runs over cell centres of ``(0, 1]`` and ``y`` over
    ``[-(d-1) - 0.2, (d-1) + 0.2]``.  With ``refine=2`` the grid also carries
    every midpoint between original nodes.
    """
    x0 = (np.arange(nx) + 0.5) / nx
    y0 = np.linspace(-(d - 1) - 0.2, (d - 1) + 0.2, ny)
    if refine == 2:
        x = np.linspace(x0[0], x0[-1], 2 * nx - 1)
        y = np.linspace(y0[0], y0[-1], 2 * ny - 1)
    else:
        x, y = x0, y0
    X, Y = np.meshgrid(x, y, indexing="ij")
    P = 1.0 / X
    A = Y * P
    margin = _theta_margin(P, A, profile, d)
    return X, Y, P, A, margin


@dataclass
class EquivalenceReport:
    n_points: int
    n_band: int
    n_members: int
    n_disagree: int
    n_necessary_violations: int
    counterexamples: list

    @property
    def ok(self) -> bool:
        return self.n_disagree == 0 and self.n_necessary_violations == 0


def verify_equivalence(profile: NuSharpProfile, d: int, nx: int = 100, ny: int = 100,
                       band: float = TOL_BOUNDARY) -> EquivalenceReport:
    """Compare the Θ predicate with the explicit ``(L, U)`` description."""
    _, _, P, A, margin = membership_grid(profile, d, nx, ny)
    m_p, m_lo, m_hi = _explicit_margins(P, A, profile, d)
    explicit = (m_p >= 0) & (m_lo >= 0) & (m_hi >= 0)
    implicit = margin >= 0
    near = ((np.abs(margin) < band) | (np.abs(m_p) < band)
            | (np.abs(m_lo) < band) | (np.abs(m_hi) < band))
    bad = (explicit != implicit) & ~near
    nec = necessary_conditions(P, A, profile.beta, d, tol=band)
    nec_bad = implicit & ~near & ~nec
    idx = np.argwhere(bad)[:20]
    ce = [{"p": float(P[i, k]), "alpha": float(A[i, k]), "theta_form": bool(implicit[i, k]),
           "explicit_form": bool(explicit[i, k])} for i, k in idx]
    return EquivalenceReport(int(P.size), int(near.sum()), int((implicit & ~near).sum()),
                             int(bad.sum()), int(nec_bad.sum()), ce)


@dataclass
class ConvexityReport:
    n_members: int
    n_midpoints: int
    n_violations: int
    n_band_excused: int

    @property
    def ok(self) -> bool:
        return self.n_violations == 0


def convexity_check(profile: NuSharpProfile, d: int, n: int = 200,
                    band: float = TOL_BOUNDARY) -> ConvexityReport:
    """Midpoint convexity of the membership set on an ``n x n`` grid.

    All pairwise sums of member nodes are found with one FFT autocorrelation;
    each sum indexes the exact midpoint on the twice-refined grid, where
    membership is evaluated directly.  Midpoints within ``band`` of the
    boundary are excused.
    """
    _, _, _, _, fine = membership_grid(profile, d, n, n, refine=2)
    member_f = fine >= -band
    coarse = member_f[::2, ::2].astype(float)
    sums = fftconvolve(coarse, coarse) > 0.5
    on_band = np.abs(fine) < band
    viol = sums & ~member_f
    excused = viol & on_band
    return ConvexityReport(int(coarse.sum()), int(sums.sum()),
                           int((viol & ~on_band).sum()), int(excused.sum()))


# ---------------------------------------------------------------------------
# finite unions of regular sets
# ---------------------------------------------------------------------------


def _validate_components(components):
    comps = [(float(b), float(g)) for b, g in components]
    for b, g in comps:
        if not 0.0 <= b <= g <= 1.0:
            raise TypeSetError(f"need 0 <= beta <= gamma <= 1, got ({b}, {g})")
    if not comps:
        raise TypeSetError("need at least one component")
    return comps


def union_L(p, components: Sequence[tuple[float, float]], d: int):
    """Lower boundary for a finite union of Assouad-regular pieces."""
    comps = _validate_components(components)
    beta = max(b for b, _ in comps)
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < p_beta(beta, d) - 1e-12):
        raise TypeSetError("union_L is defined for p >= p_beta")
    s = (d - 1) * (p_arr - 1)
    inner = np.zeros_like(s)
    for b, g in comps:
        if g > b:
            inner = np.maximum(inner, b * (g - s) / (g - b))
    out = 1 - d + inner
    return float(out) if out.ndim == 0 else out


def union_crossings(components: Sequence[tuple[float, float]], d: int) -> list[dict]:
    """Values of ``p`` where two linear pieces of :func:`union_L` cross.

    Each entry records whether the crossing lies in the admissible range
    ``p >= p_beta`` with both pieces still positive.
    """
    comps = _validate_components(components)
    beta = max(b for b, _ in comps)
    out = []
    for i in range(len(comps)):
        for k in range(i + 1, len(comps)):
            (b1, g1), (b2, g2) = comps[i], comps[k]
            if g1 <= b1 or g2 <= b2:
                continue
            # b(g - s)/(g - b) = c0 - c1 s
            c1a, c0a = b1 / (g1 - b1), b1 * g1 / (g1 - b1)
            c1b, c0b = b2 / (g2 - b2), b2 * g2 / (g2 - b2)
            if c1a == c1b:
                continue
            s = (c0a - c0b) / (c1a - c1b)
            p = 1.0 + s / (d - 1)
            admissible = p >= p_beta(beta, d) and s < min(g1, g2)
            out.append({"pair": (i, k), "p": p, "inv_p": 1.0 / p if p > 0 else float("inf"),
                        "admissible": bool(admissible)})
    return out


def profile_for_components(components) -> NuSharpProfile:
    comps = _validate_components(components)
    return closed_form_profile(*comps[0]) if len(comps) == 1 else union_profile(comps)
