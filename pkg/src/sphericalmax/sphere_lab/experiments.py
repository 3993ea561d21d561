"""Desk-scale experiments with the Knapp-type extremizers and ball tests.

Radii live in Euclidean coordinates on ``[1, 2]``; set samples are mapped
from log coordinates with ``t = 2**u``.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import _kernels
from ..setgen import LogInterval, SetSpec, sample
from .quadrature import DEFAULT_CAP_NODES, _cap_geometry, spherical_averages
from .regions import (LARGE_K_EPS, SMALL_K_EPS, Ball, KnappConfig, KnappSetup, composite_gauss,
                      geometric_gauss, knapp_setup)

__all__ = [
    "weighted_norm",
    "region_weighted_norm",
    "resolve_k",
    "radii_sample",
    "choose_interval",
    "check_disjoint",
    "InclusionReport",
    "geometry_inclusion_test",
    "PointwiseReport",
    "pointwise_lower_bound",
    "LowerBoundReport",
    "knapp_row",
    "lower_bound_experiment",
    "ScalingReport",
    "scaling_invariance_test",
    "BallTestReport",
    "ball_average",
    "ball_test_experiment",
    "SMALL_K_EPS",
    "LARGE_K_EPS",
]


def _surface(d):
    return 2 * math.pi if d == 2 else 4 * math.pi


def weighted_norm(g, p: float, alpha: float, d: int, r_max: float, r_min: float = 0.0,
                  panels: int = 8, order: int = 10) -> float:
    """``(int_{r_min <= |x| <= r_max} |g(|x|)|**p |x|**alpha dx)**(1/p)`` for radial ``g``.

    Composite Gauss–Legendre in the radius; panels shrink geometrically
    toward the origin when ``r_min = 0``.
    """
    if alpha <= -d:
        raise ValueError("alpha must exceed -d for local integrability")
    if p <= 0:
        raise ValueError("p must be positive")
    if r_min == 0.0:
        r, w = geometric_gauss(0.0, r_max, levels=60, order=order)
    else:
        r, w = composite_gauss(r_min, r_max, panels, order)
    vals = np.abs(np.asarray(g(r), dtype=float)) ** p
    return float((_surface(d) * np.dot(w, vals * r ** (alpha + d - 1))) ** (1.0 / p))


def region_weighted_norm(region, p: float, alpha: float, resolution: int = 2) -> float:
    """Norm of the indicator of ``region`` in ``L^p(|x|**alpha)``."""
    val = region.integrate(lambda X: np.linalg.norm(X, axis=1) ** alpha, resolution)
    return val ** (1.0 / p)


_K_RULE = re.compile(r"^j\s*-\s*(\d+)$")


def resolve_k(rule, j: int) -> int:
    """``k`` for scale ``j``: ``small`` (``j//2``), ``large`` (``3j//4``),
    ``j-N``, a fixed integer, or a callable."""
    if callable(rule):
        k = int(rule(j))
    elif isinstance(rule, int):
        k = rule
    elif rule == "small":
        k = j // 2
    elif rule == "large":
        k = max(3 * j // 4, j // 2 + 1)
    elif isinstance(rule, str) and _K_RULE.match(rule):
        k = j - int(_K_RULE.match(rule).group(1))
    elif isinstance(rule, str) and rule.isdigit():
        k = int(rule)
    else:
        raise ValueError(f"unknown k rule {rule!r}")
    if not 0 < k <= j:
        raise ValueError(f"k rule {rule!r} gives k={k} outside (0, {j}]")
    return k


def radii_sample(spec: SetSpec, j: int):
    """Components of ``E cap [1, 2]`` in radii, resolved for scale ``2**-j``."""
    S = sample(spec, LogInterval(0.0, 1.0), j)
    return np.exp2(S.comp_lo), np.exp2(S.comp_hi)


def choose_interval(tlo, thi, j: int, k: int):
    """Interval of length ``2**-k`` inside ``[1, 2]`` maximizing ``N(E cap I, 2**-j)``.

    Candidates start at multiples of ``2**-(k+1)``; ties go to the leftmost.
    """
    w = 2.0 ** -k
    starts = 1.0 + np.arange(2 ** (k + 1) - 1) * (w / 2)
    counts = _kernels.count_windows(tlo, thi, starts, w, 2.0 ** -j)
    m = int(np.argmax(counts))
    return float(starts[m]), float(starts[m] + w), int(counts[m])


def check_disjoint(setup: KnappSetup, net) -> int:
    """Number of overlapping pairs among the pieces for ``t`` in ``net``.

    Pieces are separated by one coordinate (the radius about ``(0, a)`` for
    small k, the height for large k), so disjointness of those closed ranges
    is exact.
    """
    spans = sorted(setup.piece_radial_interval(float(t)) for t in net)
    overlaps = 0
    for i in range(len(spans)):
        for k in range(i + 1, len(spans)):
            if spans[k][0] > spans[i][1]:
                break
            overlaps += 1
    return overlaps


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


def _ball_uniform(rng, n, dim, radius):
    if dim == 1:
        return rng.uniform(-radius, radius, (n, 1))
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    ph = rng.uniform(0, 2 * np.pi, n)
    return np.stack([r * np.cos(ph), r * np.sin(ph)], axis=1)


@dataclass
class InclusionReport:
    case: str
    n_samples: int
    failures: int
    worst_margin: float
    config: dict

    @property
    def ok(self) -> bool:
        return self.failures == 0


def geometry_inclusion_test(config: KnappConfig, n_samples: int, seed: int = 0,
                            t: float | None = None) -> InclusionReport:
    """Sample the piece and check that the relevant sphere points land in the support.

    Small k: ``x + t * theta(x, w')`` with ``|w'| <= 2**(k-j)`` must lie in
    the box.  Large k: ``x + t * omega`` with ``|omega'| <= eps 2**(k-j)``
    must lie in the shell region.  Margins are signed distances to the
    nearest constraint (positive inside).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    c = config
    t = c.a if t is None else t
    if abs(t - c.a) > 2.0 ** -c.k + 1e-15:
        raise ValueError("t must lie within 2**-k of the anchor")
    setup = knapp_setup(c)
    rng = np.random.default_rng(seed)
    X = setup.piece(t).sample(n_samples, rng) / c.scale
    ts = t
    d = c.d
    if c.case == "small":
        w = _ball_uniform(rng, n_samples, d - 1, 2.0 ** (c.k - c.j))
        v = np.concatenate([-X[:, : d - 1] + w, (c.a - X[:, d - 1])[:, None]], axis=1)
        theta = v / np.linalg.norm(v, axis=1, keepdims=True)
        Y = X + ts * theta
    else:
        wp = _ball_uniform(rng, n_samples, d - 1, c.eps * 2.0 ** (c.k - c.j))
        wd = np.sqrt(1 - np.sum(wp * wp, axis=1))
        Y = X + ts * np.concatenate([wp, wd[:, None]], axis=1)
    margin = setup.f.margin(Y * c.scale)
    return InclusionReport(c.case, n_samples, int(np.sum(margin < 0)), float(margin.min()),
                           asdict(c) | {"t": t})


@dataclass
class PointwiseReport:
    case: str
    j: int
    k: int
    min_average: float
    c: float
    n_samples: int


def pointwise_lower_bound(config: KnappConfig, n_samples: int = 1000, seed: int = 0,
                          t: float | None = None, n_cap: int | None = None) -> PointwiseReport:
    """``min A_t f(x)`` over sampled ``x`` in the piece, and ``c = min / 2**((k-j)(d-1))``."""
    c = config
    t = c.a if t is None else t
    setup = knapp_setup(c)
    X = setup.piece(t).sample(n_samples, np.random.default_rng(seed))
    A = spherical_averages(setup.f, X, t * c.scale, n=n_cap)
    m = float(A.min())
    return PointwiseReport(c.case, c.j, c.k, m, m / 2.0 ** ((c.k - c.j) * (c.d - 1)), n_samples)


# ---------------------------------------------------------------------------
# lower-bound experiment
# ---------------------------------------------------------------------------


def _theory_log2(j, k, d, p, alpha, n_cover):
    return (-j * (d - 1) * (1 - 1 / p) + math.log2(n_cover) / p
            - k * (alpha / p + (d - 1) * (2 / p - 1)))


def knapp_row(spec: SetSpec, d: int, p: float, alpha: float, j: int, k: int, *,
              eps: float | None = None, scale: float = 1.0, resolution: int = 1,
              n_cap: int | None = None, inclusion_samples: int = 0, seed: int = 0,
              radii=None) -> dict:
    """One scale of the lower-bound experiment.

    ``R_j`` is the ratio of ``(sum_t int_{piece_t} (A_t f)^p |x|^alpha)^(1/p)``
    over ``t`` in the separated net to ``||f||_{L^p(|x|^alpha)}``; every
    piece uses its own radius, which bounds the maximal function from below.
    """
    tlo, thi = radii_sample(spec, j) if radii is None else radii
    if tlo.size == 0:
        return {"j": j, "k": k, "skipped": "empty set"}
    i_lo, i_hi, n_cover = choose_interval(tlo, thi, j, k)
    if n_cover == 0:
        return {"j": j, "k": k, "skipped": "empty intersection"}
    net = _kernels.separated_net(tlo, thi, i_lo, i_hi, 2.0 ** -j)
    a = float(net[np.argmin(np.abs(net - (i_lo + i_hi) / 2))])
    cfg = KnappConfig(d, j, k, a, eps, scale)
    setup = knapp_setup(cfg)
    row = {"j": j, "k": k, "case": cfg.case, "eps": cfg.eps, "I_lo": i_lo, "I_hi": i_hi,
           "a": a, "N": n_cover, "net_size": int(net.size)}
    if inclusion_samples:
        rep = geometry_inclusion_test(cfg, inclusion_samples, seed)
        row["inclusion_failures"] = rep.failures
    row["overlaps"] = check_disjoint(setup, net)
    total = 0.0
    for t in net:
        piece = setup.integration_piece(float(t))
        X, W = piece.integration_nodes(resolution)
        A = spherical_averages(setup.f, X, float(t) * scale, n=n_cap)
        total += float(np.dot(W, A ** p * np.linalg.norm(X, axis=1) ** alpha))
    fnorm = region_weighted_norm(setup.f, p, alpha)
    R = total ** (1 / p) / fnorm
    row["R"] = R
    row["log2R"] = math.log2(R) if R > 0 else -math.inf
    row["theory_log2"] = _theory_log2(j, k, d, p, alpha, n_cover)
    return row


@dataclass
class LowerBoundReport:
    spec: str
    d: int
    p: float
    alpha: float
    k_rule: str
    rows: list
    slope: float
    theory_slope: float
    tol: float = 0.15
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        clean = all(r.get("overlaps", 0) == 0 and r.get("inclusion_failures", 0) == 0
                    for r in self.rows if "skipped" not in r)
        return clean and abs(self.slope - self.theory_slope) <= self.tol

    def to_dict(self) -> dict:
        return {"spec": self.spec, "d": self.d, "p": self.p, "alpha": self.alpha,
                "k_rule": self.k_rule, "rows": self.rows, "slope": self.slope,
                "theory_slope": self.theory_slope, "tol": self.tol, "ok": self.ok,
                "notes": self.notes}


def lower_bound_experiment(spec: SetSpec, d: int, p: float, alpha: float, j_list, k_rule="small",
                           eps: float | None = None, *, scale: float = 1.0, resolution: int = 1,
                           n_cap: int | None = None, inclusion_samples: int = 2000, seed: int = 0,
                           tol: float = 0.15) -> LowerBoundReport:
    """Measured ``log2 R_j`` against the predicted exponent across ``j_list``.

    Slopes are least-squares fits in ``j``; the prediction is assembled from
    the measured covering numbers ``N(E cap I, 2**-j)``.
    """
    ext = spec.extent()
    if ext is None or ext.lo < -1e-12 or ext.hi > 1 + 1e-12:
        raise ValueError("lower_bound_experiment needs a set inside [1, 2]")
    rows, notes = [], []
    for j in j_list:
        k = resolve_k(k_rule, j)
        row = knapp_row(spec, d, p, alpha, j, k, eps=eps, scale=scale, resolution=resolution,
                        n_cap=n_cap, inclusion_samples=inclusion_samples, seed=seed)
        if "skipped" in row:
            notes.append(f"j={j}: {row['skipped']}")
        rows.append(row)
    good = [r for r in rows if "skipped" not in r]
    if len(good) < 2:
        raise ValueError("need at least two usable scales")
    js = np.array([r["j"] for r in good], dtype=float)
    slope = float(np.polyfit(js, [r["log2R"] for r in good], 1)[0])
    theory = float(np.polyfit(js, [r["theory_log2"] for r in good], 1)[0])
    return LowerBoundReport(spec.to_text(), d, p, alpha, str(k_rule), rows, slope, theory, tol, notes)


@dataclass
class ScalingReport:
    lam: float
    ratio: float
    ratio_scaled: float

    @property
    def rel_diff(self) -> float:
        return abs(self.ratio_scaled - self.ratio) / abs(self.ratio)

    @property
    def ok(self) -> bool:
        return self.rel_diff <= 1e-3


def scaling_invariance_test(spec: SetSpec, lam: float, d: int, p: float, alpha: float, j: int,
                            k_rule="small", eps: float | None = None, *,
                            n_cap: int | None = None) -> ScalingReport:
    """Compare ``R_j`` for ``(E, f)`` with ``(lam E, f(./lam))`` on scaled geometry."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    k = resolve_k(k_rule, j)
    radii = radii_sample(spec, j)
    base = knapp_row(spec, d, p, alpha, j, k, eps=eps, n_cap=n_cap, radii=radii)
    scaled = knapp_row(spec, d, p, alpha, j, k, eps=eps, scale=lam, n_cap=n_cap, radii=radii)
    return ScalingReport(lam, base["R"], scaled["R"])


# ---------------------------------------------------------------------------
# ball test
# ---------------------------------------------------------------------------


def ball_average(d: int, delta: float, r, t) -> np.ndarray:
    """``A_t`` of the indicator of ``{|y| <= delta}`` at ``|x| = r``.

    The directions hitting a ball form a cap, so the cap rule integrates
    this indicator exactly; only the cap measure is needed.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    t = np.broadcast_to(np.asarray(t, dtype=float), r.shape)
    X = np.zeros((r.size, d))
    X[:, -1] = r
    out = np.empty(r.size)
    for tv in np.unique(t):
        sel = t == tv
        _, phi, empty = _cap_geometry(X[sel], float(tv), np.zeros(d), delta)
        meas = phi / np.pi if d == 2 else (1 - np.cos(phi)) / 2
        out[sel] = np.where(empty, 0.0, meas)
    return out


@dataclass
class BallTestReport:
    d: int
    p: float
    alpha: float
    beta: float
    deltas: list
    ratios: list
    slope: float
    predicted: float
    admissible: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _merge(lo, hi):
    order = np.argsort(lo)
    lo, hi = lo[order], hi[order]
    out_lo, out_hi = [lo[0]], [hi[0]]
    for a, b in zip(lo[1:], hi[1:]):
        if a <= out_hi[-1]:
            out_hi[-1] = max(out_hi[-1], b)
        else:
            out_lo.append(a)
            out_hi.append(b)
    return np.array(out_lo), np.array(out_hi)


def ball_test_experiment(spec: SetSpec, d: int, p: float, alpha: float, deltas, *,
                         beta: float | None = None) -> BallTestReport:
    """Ratio ``||M_E chi_delta|| / ||chi_delta||`` in ``L^p(|x|**alpha)`` against ``delta``.

    The maximal function at radius ``r`` is taken over the two sampled radii
    nearest ``r``.  The log-log slope is compared with
    ``((d-1)(p-1) - beta - alpha) / p``; a negative value means the ratio
    blows up as ``delta -> 0``.
    """
    if alpha <= -d:
        raise ValueError("alpha must exceed -d")
    ratios = []
    deltas = [float(x) for x in deltas]
    for delta in deltas:
        j = max(1, math.ceil(-math.log2(delta)) + 3)
        tlo, thi = radii_sample(spec, j)
        if tlo.size == 0:
            raise ValueError("empty set")
        cand = _kernels.separated_net(tlo, thi, 1.0, 2.0, delta / 8)
        lo, hi = _merge(np.maximum(cand - delta, 0.0), cand + delta)
        rs, ws = [], []
        for a, b in zip(lo, hi):
            r, w = composite_gauss(a, b, max(1, math.ceil((b - a) / (delta / 4))), 6)
            rs.append(r)
            ws.append(w)
        r = np.concatenate(rs)
        w = np.concatenate(ws)
        pos = np.searchsorted(cand, r)
        left = cand[np.clip(pos - 1, 0, cand.size - 1)]
        right = cand[np.clip(pos, 0, cand.size - 1)]
        M = np.maximum(ball_average(d, delta, r, left), ball_average(d, delta, r, right))
        num = _surface(d) * np.dot(w, M ** p * r ** (alpha + d - 1))
        den = _surface(d) * delta ** (d + alpha) / (d + alpha)
        ratios.append(float((num / den) ** (1 / p)))
    if beta is None:
        from ..dimension import known_profile
        prof = known_profile(spec)
        beta = prof.beta if prof is not None else float("nan")
    slope = float(np.polyfit(np.log2(deltas), np.log2(ratios), 1)[0]) if len(deltas) > 1 else float("nan")
    pred = ((d - 1) * (p - 1) - beta - alpha) / p
    return BallTestReport(d, p, alpha, beta, deltas, ratios, slope, pred,
                          bool(alpha <= (d - 1) * (p - 1) - beta))
