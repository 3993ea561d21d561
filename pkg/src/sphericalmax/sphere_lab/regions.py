"""Exact indicator regions for the Knapp-type constructions.

Every region is symmetric about the last coordinate axis.  Integration
nodes are therefore returned in the half-plane ``x' = rho * e_1`` with the
rotational factor folded into the weights; integrands must share the axial
symmetry (spherical averages of axially symmetric indicators do).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "Region",
    "Ball",
    "Cylinder",
    "ShellCap",
    "KnappConfig",
    "KnappSetup",
    "knapp_small_k",
    "knapp_large_k",
    "knapp_setup",
    "composite_gauss",
    "geometric_gauss",
]


def _gl(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def composite_gauss(a: float, b: float, panels: int, order: int = 8):
    """Composite Gauss–Legendre nodes on ``[a, b]`` with equal panels."""
    x, w = _gl(order)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), (half[:, None] * w[None, :]).ravel()


def geometric_gauss(a: float, b: float, levels: int = 6, order: int = 8):
    """Gauss–Legendre on panels shrinking geometrically toward ``a``."""
    x, w = _gl(order)
    length = b - a
    edges = np.concatenate([[a], a + length * 2.0 ** -np.arange(levels, -1, -1)])
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), (half[:, None] * w[None, :]).ravel()


def _sphere_factor(d):
    # measure of {x' : |x'| = rho} in R^{d-1}, divided by rho^{d-2}
    return 2.0 if d == 2 else 2 * math.pi


def _ball_volume(d1, r):
    # volume of a ball of radius r in R^{d1}, d1 in {1, 2}
    return 2 * r if d1 == 1 else math.pi * r * r


class Region:
    """Closed axially symmetric region with an exact membership predicate."""

    d: int

    def __call__(self, P):
        return self.contains(P).astype(float)

    def contains(self, P) -> np.ndarray:
        return self.margin(P) >= 0

    def margin(self, P) -> np.ndarray:
        raise NotImplementedError

    def bounding_ball(self):
        raise NotImplementedError

    def volume(self) -> float:
        raise NotImplementedError

    def scaled(self, lam: float) -> "Region":
        raise NotImplementedError

    def integration_nodes(self, resolution: int = 1):
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def integrate(self, g, resolution: int = 1) -> float:
        X, W = self.integration_nodes(resolution)
        return float(np.dot(W, g(X)))


def _split(P, d):
    P = np.asarray(P, dtype=float)
    rho = np.linalg.norm(P[..., : d - 1], axis=-1)
    return rho, P[..., d - 1]


def _embed(rho, z, d):
    rho = np.asarray(rho, dtype=float)
    if d == 2:
        return np.stack([rho, z], axis=-1)
    return np.stack([rho, np.zeros_like(rho), z], axis=-1)


@dataclass(frozen=True)
class Ball(Region):
    """``{|y - c e_d| <= radius}``."""

    d: int
    radius: float
    center: float = 0.0

    def margin(self, P):
        rho, z = _split(P, self.d)
        return self.radius - np.hypot(rho, z - self.center)

    def bounding_ball(self):
        c = np.zeros(self.d)
        c[-1] = self.center
        return c, self.radius

    def volume(self):
        return (math.pi if self.d == 2 else 4 * math.pi / 3) * self.radius ** self.d

    def scaled(self, lam):
        return replace(self, radius=self.radius * lam, center=self.center * lam)


@dataclass(frozen=True)
class Cylinder(Region):
    """``{|y_d - center| <= half_height, inner <= |y'| <= outer}``."""

    d: int
    center: float
    half_height: float
    outer: float
    inner: float = 0.0

    def margin(self, P):
        rho, z = _split(P, self.d)
        m = np.minimum(self.half_height - np.abs(z - self.center), self.outer - rho)
        if self.inner > 0:
            m = np.minimum(m, rho - self.inner)
        return m

    def bounding_ball(self):
        c = np.zeros(self.d)
        c[-1] = self.center
        return c, math.hypot(self.outer, self.half_height)

    def volume(self):
        d1 = self.d - 1
        return 2 * self.half_height * (_ball_volume(d1, self.outer) - _ball_volume(d1, self.inner))

    def scaled(self, lam):
        return replace(self, center=self.center * lam, half_height=self.half_height * lam,
                       outer=self.outer * lam, inner=self.inner * lam)

    def integration_nodes(self, resolution=1):
        r, wr = composite_gauss(self.inner, self.outer, 4 * resolution)
        z, wz = composite_gauss(self.center - self.half_height, self.center + self.half_height,
                                2 * resolution)
        R, Z = np.meshgrid(r, z, indexing="ij")
        W = np.outer(wr * _sphere_factor(self.d) * r ** (self.d - 2), wz)
        return _embed(R.ravel(), Z.ravel(), self.d), W.ravel()

    def sample(self, n, rng):
        z = rng.uniform(self.center - self.half_height, self.center + self.half_height, n)
        if self.d == 2:
            rho = rng.uniform(self.inner, self.outer, n) * rng.choice([-1.0, 1.0], n)
            return np.stack([rho, z], axis=1)
        rho = np.sqrt(rng.uniform(self.inner ** 2, self.outer ** 2, n))
        ph = rng.uniform(0, 2 * np.pi, n)
        return np.stack([rho * np.cos(ph), rho * np.sin(ph), z], axis=1)


@dataclass(frozen=True)
class ShellCap(Region):
    """``{r0 <= |y - c e_d| <= r1, |y'| <= width}``, optionally one cap only.

    ``caps`` is ``"both"``, ``"lower"`` (``y_d <= c``) or ``"upper"``.
    """

    d: int
    center: float
    r0: float
    r1: float
    width: float
    caps: str = "both"

    def __post_init__(self):
        if not 0 < self.r0 <= self.r1:
            raise ValueError("need 0 < r0 <= r1")
        if self.caps not in ("both", "lower", "upper"):
            raise ValueError("caps must be both, lower or upper")

    def margin(self, P):
        rho, z = _split(P, self.d)
        r = np.hypot(rho, z - self.center)
        m = np.minimum(np.minimum(r - self.r0, self.r1 - r), self.width - rho)
        if self.caps == "lower":
            m = np.minimum(m, self.center - z)
        elif self.caps == "upper":
            m = np.minimum(m, z - self.center)
        return m

    def _psi_max(self, r):
        return np.arcsin(np.clip(self.width / np.asarray(r, dtype=float), 0.0, 1.0))

    @property
    def n_caps(self) -> int:
        return 2 if self.caps == "both" else 1

    def bounding_ball(self):
        c = np.zeros(self.d)
        if self.caps == "both" or self.width >= self.r0:
            c[-1] = self.center
            return c, self.r1
        inner_z = math.sqrt(self.r0 ** 2 - self.width ** 2)
        mid = (self.r1 + inner_z) / 2
        c[-1] = self.center - mid if self.caps == "lower" else self.center + mid
        return c, math.hypot(self.width, (self.r1 - inner_z) / 2)

    def _cap_volume_antiderivative(self, r):
        w = self.width
        if self.d == 2:
            if r <= w:
                return math.pi * r * r / 2
            base = math.pi * w * w / 2
            F = lambda s: s * s / 2 * math.asin(w / s) + w / 2 * math.sqrt(s * s - w * w)
            return base + 2 * (F(r) - F(w))
        if r <= w:
            return 2 * math.pi * r ** 3 / 3
        base = 2 * math.pi * w ** 3 / 3
        G = lambda s: 2 * math.pi * (s ** 3 / 3 - (s * s - w * w) ** 1.5 / 3)
        return base + G(r) - G(w)

    def volume(self):
        per_cap = self._cap_volume_antiderivative(self.r1) - self._cap_volume_antiderivative(self.r0)
        return self.n_caps * per_cap

    def scaled(self, lam):
        return replace(self, center=self.center * lam, r0=self.r0 * lam, r1=self.r1 * lam,
                       width=self.width * lam)

    def integration_nodes(self, resolution=1):
        r, wr = composite_gauss(self.r0, self.r1, resolution, order=4)
        s, ws = geometric_gauss(0.0, 1.0, levels=5, order=6 * resolution)
        R, S = np.meshgrid(r, s, indexing="ij")
        pm = self._psi_max(R)
        psi = S * pm
        jac = pm * R ** (self.d - 1) * (np.sin(psi) ** (self.d - 2)) * _sphere_factor(self.d)
        W = np.outer(wr, ws) * jac
        rho = R * np.sin(psi)
        dz = R * np.cos(psi)
        Xs, Ws = [], []
        if self.caps in ("both", "lower"):
            Xs.append(_embed(rho.ravel(), (self.center - dz).ravel(), self.d))
            Ws.append(W.ravel())
        if self.caps in ("both", "upper"):
            Xs.append(_embed(rho.ravel(), (self.center + dz).ravel(), self.d))
            Ws.append(W.ravel())
        return np.concatenate(Xs), np.concatenate(Ws)

    def sample(self, n, rng):
        out = np.empty((0, self.d))
        if self.d == 2:
            dens = lambda r: r * self._psi_max(r)
        else:
            dens = lambda r: r * r * (1 - np.cos(self._psi_max(r)))
        top = float(max(dens(self.r0), dens(self.r1), dens((self.r0 + self.r1) / 2))) * 1.01
        while out.shape[0] < n:
            m = 2 * (n - out.shape[0]) + 16
            r = rng.uniform(self.r0, self.r1, m)
            keep = rng.uniform(0, top, m) <= dens(r)
            r = r[keep]
            pm = self._psi_max(r)
            if self.d == 2:
                psi = rng.uniform(0, 1, r.size) * pm
                rho = r * np.sin(psi) * rng.choice([-1.0, 1.0], r.size)
                dz = r * np.cos(psi)
                pts = [rho]
            else:
                c = rng.uniform(np.cos(pm), 1.0)
                srt = np.sqrt(np.clip(1 - c * c, 0, None))
                ph = rng.uniform(0, 2 * np.pi, r.size)
                dz = r * c
                pts = [r * srt * np.cos(ph), r * srt * np.sin(ph)]
            if self.caps == "both":
                sign = rng.choice([-1.0, 1.0], r.size)
            else:
                sign = np.full(r.size, -1.0 if self.caps == "lower" else 1.0)
            z = self.center + sign * dz
            out = np.concatenate([out, np.stack(pts + [z], axis=1)])
        return out[:n]


# ---------------------------------------------------------------------------
# Knapp configurations
# ---------------------------------------------------------------------------

SMALL_K_EPS = 2.0 ** -6
LARGE_K_EPS = 1e-2


@dataclass(frozen=True)
class KnappConfig:
    """Parameters of one Knapp-type example.

    ``case`` is derived from ``k``: ``small`` when ``k <= j/2``.
    """

    d: int
    j: int
    k: int
    a: float
    eps: float | None = None
    scale: float = 1.0

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError("d must be 2 or 3")
        if not 0 < self.k <= self.j:
            raise ValueError("need 0 < k <= j")
        if not 1.0 <= self.a <= 2.0:
            raise ValueError("anchor a must lie in [1, 2]")
        if self.eps is None:
            object.__setattr__(self, "eps", SMALL_K_EPS if self.case == "small" else LARGE_K_EPS)
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.case == "large" and self.eps > LARGE_K_EPS:
            raise ValueError("the large-k construction needs eps <= 1e-2")

    @property
    def case(self) -> str:
        return "small" if 2 * self.k <= self.j else "large"


@dataclass(frozen=True)
class KnappSetup:
    config: KnappConfig
    f: Region

    def piece(self, t: float, caps: str | None = None) -> Region:
        """Region where ``A_t f`` is bounded below.

        Small k: ``U(a, t)`` (both caps by default; the integration piece is
        the cap near the origin).  Large k: ``Q(a, t)``.
        """
        c = self.config
        lam = c.scale
        hj, hk = 2.0 ** -c.j, 2.0 ** -c.k
        if c.case == "small":
            return ShellCap(c.d, c.a * lam, (t - c.eps * hj) * lam, (t + c.eps * hj) * lam,
                            hk * lam, caps or "both")
        return Cylinder(c.d, (c.a - t) * lam, c.eps * hj * lam, c.eps * hk * lam,
                        c.eps * hk / 2 * lam)

    def integration_piece(self, t: float) -> Region:
        return self.piece(t, "lower") if self.config.case == "small" else self.piece(t)

    def piece_radial_interval(self, t: float) -> tuple[float, float]:
        """The coordinate range that separates pieces for different ``t``."""
        c = self.config
        h = c.eps * 2.0 ** -c.j * c.scale
        mid = t * c.scale if c.case == "small" else (c.a - t) * c.scale
        return mid - h, mid + h


def knapp_small_k(config: KnappConfig) -> KnappSetup:
    """``f_Q`` for the box ``|y_d - a| <= eps^-1 2^-j``, ``|y'| <= eps^-1 2^(k-j)``."""
    if config.case != "small":
        raise ValueError("knapp_small_k needs k <= j/2")
    c = config
    f = Cylinder(c.d, c.a * c.scale, 2.0 ** -c.j / c.eps * c.scale,
                 2.0 ** (c.k - c.j) / c.eps * c.scale)
    return KnappSetup(c, f)


def knapp_large_k(config: KnappConfig) -> KnappSetup:
    """``g`` for the shell ``(a - 2^-j) <= |y| <= (a + 2^-j)``, ``|y'| <= eps^-1 2^(k-j)``."""
    if config.case != "large":
        raise ValueError("knapp_large_k needs k > j/2")
    c = config
    h = 2.0 ** -c.j
    f = ShellCap(c.d, 0.0, (c.a - h) * c.scale, (c.a + h) * c.scale,
                 2.0 ** (c.k - c.j) / c.eps * c.scale, "both")
    return KnappSetup(c, f)


def knapp_setup(config: KnappConfig) -> KnappSetup:
    return knapp_small_k(config) if config.case == "small" else knapp_large_k(config)
