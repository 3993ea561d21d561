"""Quadrature on the unit sphere and spherical averages of exact predicates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..setgen import SampledSet, SamplingResourceError

__all__ = [
    "QuadratureRule",
    "quadrature_rule",
    "J_CAP",
    "cap_nodes",
    "spherical_average",
    "spherical_averages",
    "maximal_function",
    "DEFAULT_CAP_NODES",
]

J_CAP = {2: 14, 3: 10}
DEFAULT_CAP_NODES = {2: 4096, 3: 96}
_CHUNK = 1 << 22


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for the normalized surface measure.

    The three-dimensional rule is a product of Gauss–Legendre nodes in the
    polar cosine with uniform azimuths; its nodes are materialized lazily.
    """

    d: int
    j: int
    polar: np.ndarray | None = None
    polar_weights: np.ndarray | None = None
    n_azimuth: int = 0

    @property
    def size(self) -> int:
        if self.d == 2:
            return 64 << self.j
        return self.polar.size * self.n_azimuth

    @property
    def nodes(self) -> np.ndarray:
        if self.d == 2:
            ang = 2 * np.pi * np.arange(self.size) / self.size
            return np.stack([np.cos(ang), np.sin(ang)], axis=1)
        phi = 2 * np.pi * (np.arange(self.n_azimuth) + 0.5) / self.n_azimuth
        c = self.polar[:, None]
        s = np.sqrt(1 - c * c)
        pts = np.stack([s * np.cos(phi)[None, :], s * np.sin(phi)[None, :],
                        np.broadcast_to(c, (c.size, phi.size))], axis=-1)
        return pts.reshape(-1, 3)

    @property
    def weights(self) -> np.ndarray:
        if self.d == 2:
            return np.full(self.size, 1.0 / self.size)
        return np.repeat(self.polar_weights / self.n_azimuth, self.n_azimuth)

    def integrate(self, g) -> float:
        """``sum w_i g(omega_i)`` for a vectorized ``g`` on ``(n, d)`` arrays."""
        return float(np.dot(self.weights, g(self.nodes)))


def quadrature_rule(d: int, j: int) -> QuadratureRule:
    """Global rule with node spacing of order ``2**-j``.

    ``d = 2``: ``64 * 2**j`` equally spaced angles.  ``d = 3``: ``8 * 2**j``
    Gauss–Legendre polar cosines times ``16 * 2**j`` azimuths.
    """
    if d not in J_CAP:
        raise ValueError("d must be 2 or 3")
    if j < 0:
        raise ValueError("j must be >= 0")
    if j > J_CAP[d]:
        raise SamplingResourceError(f"quadrature resolution j={j} exceeds the cap {J_CAP[d]} for d={d}")
    if d == 2:
        return QuadratureRule(2, j)
    x, w = np.polynomial.legendre.leggauss(8 << j)
    return QuadratureRule(3, j, x, w / w.sum(), 16 << j)


def _frame(axis):
    """Orthonormal ``(e1, e2)`` completing unit vectors ``axis`` (rows)."""
    a = axis
    helper = np.where(np.abs(a[:, 2:3]) < 0.9, np.array([[0.0, 0.0, 1.0]]),
                      np.array([[1.0, 0.0, 0.0]]))
    e1 = np.cross(helper, a)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(a, e1)
    return e1, e2


def cap_nodes(d: int, axis: np.ndarray, phi: np.ndarray, n: int | None = None):
    """Nodes and weights on caps ``{omega : angle(omega, axis) <= phi}``.

    ``axis`` has shape ``(m, d)`` (unit rows), ``phi`` shape ``(m,)``.
    Weights are fractions of the normalized measure, so integrating the
    constant 1 returns the cap measure.  Returns arrays of shape
    ``(m, n_nodes, d)`` and ``(m, n_nodes)``.
    """
    if n is None:
        n = DEFAULT_CAP_NODES[d]
    phi = np.asarray(phi, dtype=float)
    if d == 2:
        s = -1.0 + (np.arange(n) + 0.5) * (2.0 / n)
        base = np.arctan2(axis[:, 1], axis[:, 0])
        ang = base[:, None] + s[None, :] * phi[:, None]
        nodes = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
        w = np.broadcast_to((2.0 * phi / n / (2 * np.pi))[:, None], ang.shape)
        return nodes, w
    g, gw = np.polynomial.legendre.leggauss(n)
    na = 2 * n
    az = 2 * np.pi * (np.arange(na) + 0.5) / na
    cphi = np.cos(phi)
    c = cphi[:, None] + (1.0 - cphi)[:, None] * (g[None, :] + 1) / 2
    wc = (1.0 - cphi)[:, None] * gw[None, :] / 2
    sn = np.sqrt(np.clip(1 - c * c, 0.0, None))
    e1, e2 = _frame(axis)
    ca, sa = np.cos(az), np.sin(az)
    nodes = (c[:, :, None, None] * axis[:, None, None, :]
             + (sn[:, :, None] * ca[None, None, :])[..., None] * e1[:, None, None, :]
             + (sn[:, :, None] * sa[None, None, :])[..., None] * e2[:, None, None, :])
    w = np.repeat(wc / (2 * na), na, axis=1)
    return nodes.reshape(axis.shape[0], n * na, 3), w


def _cap_geometry(X, t, center, radius):
    """Axis toward the support ball and the half-angle of the visible cap."""
    diff = center[None, :] - X
    D = np.linalg.norm(diff, axis=1)
    safe = np.where(D > 0, D, 1.0)
    axis = diff / safe[:, None]
    axis[D == 0] = np.eye(X.shape[1])[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        cosb = (D * D + t * t - radius * radius) / (2 * t * safe)
    cosb = np.where(D == 0, np.where(t <= radius, -1.0, 2.0), cosb)
    phi = np.arccos(np.clip(cosb, -1.0, 1.0))
    empty = cosb > 1.0
    return axis, phi, empty


def spherical_averages(f, X, t: float, rule: QuadratureRule | None = None,
                       n: int | None = None) -> np.ndarray:
    """``A_t f`` at every row of ``X``.

    With a global ``rule`` the plain weighted sum is used.  Otherwise ``f``
    must expose ``bounding_ball()``; only the cap of directions that can hit
    the support is integrated, with ``n`` nodes per cap dimension.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    d = X.shape[1]
    if not t > 0:
        raise ValueError("t must be positive")
    if rule is not None:
        nodes, w = rule.nodes, rule.weights
        out = np.empty(X.shape[0])
        step = max(1, _CHUNK // nodes.shape[0])
        for s in range(0, X.shape[0], step):
            P = X[s:s + step, None, :] + t * nodes[None, :, :]
            out[s:s + step] = (f(P) * w[None, :]).sum(axis=1)
        return out
    center, radius = f.bounding_ball()
    axis, phi, empty = _cap_geometry(X, t, np.asarray(center, dtype=float), radius)
    out = np.zeros(X.shape[0])
    n_nodes = (n or DEFAULT_CAP_NODES[d]) * (1 if d == 2 else 2 * (n or DEFAULT_CAP_NODES[d]))
    step = max(1, _CHUNK // n_nodes)
    idx = np.flatnonzero(~empty)
    for s in range(0, idx.size, step):
        sel = idx[s:s + step]
        nodes, w = cap_nodes(d, axis[sel], phi[sel], n)
        P = X[sel, None, :] + t * nodes
        out[sel] = (f(P) * w).sum(axis=1)
    return out


def spherical_average(f, x, t: float, rule: QuadratureRule | None = None,
                      n: int | None = None) -> float:
    return float(spherical_averages(f, np.asarray(x, dtype=float)[None, :], t, rule, n)[0])


def maximal_function(f, E: SampledSet | np.ndarray, x, rule: QuadratureRule | None = None,
                     n: int | None = None) -> float:
    """``max_t |A_t f(x)|`` over the sampled radii (a lower bound for the sup).

    ``E`` is a :class:`SampledSet` in log coordinates or an array of radii.
    """
    radii = np.exp2(E.points) if isinstance(E, SampledSet) else np.asarray(E, dtype=float)
    if radii.size == 0:
        raise ValueError("maximal_function needs a nonempty set of radii")
    x = np.asarray(x, dtype=float)
    return max(abs(spherical_average(f, x, float(t), rule, n)) for t in radii)


def cap_measure(d: int, phi: float) -> float:
    """Normalized measure of a cap of half-angle ``phi``."""
    if d == 2:
        return min(phi, math.pi) / math.pi
    return (1 - math.cos(phi)) / 2
