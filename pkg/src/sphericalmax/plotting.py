"""Matplotlib figures written as deterministic SVG files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .typeset import TypeSetRegion  # noqa: E402

plt.rcParams["svg.hashsalt"] = "sphericalmax"
plt.rcParams["svg.fonttype"] = "none"


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _closed_polygon(region: TypeSetRegion):
    """Boundary polygon in ``(1/p, alpha/p)``, extended to ``p = inf``.

    Beyond the sampled range both boundaries are linear in ``1/p``.
    """
    d, beta = region.d, region.profile.beta
    xs = np.linspace(0.0, region.inv_p.min(), 20, endpoint=False)
    lo_fill = (1 - d) * xs
    hi_fill = (d - 1) * (1 - xs) - beta * xs
    x = np.concatenate([xs, region.inv_p[::-1]])
    lo = np.concatenate([lo_fill, region.lower[::-1]])
    hi = np.concatenate([hi_fill, region.upper[::-1]])
    return x, lo, hi


def _draw_region(ax, region, inner=None, outer=None, zoom=False):
    d, beta = region.d, region.profile.beta
    x, lo, hi = _closed_polygon(region)
    xx = np.linspace(0, 1, 200)
    ax.fill_between(xx, -(d - 1) * xx, np.maximum((d - 1) * (1 - xx) - beta * xx, -(d - 1) * xx),
                    color="0.9", label="necessary conditions")
    if outer is not None:
        xo, loo, hio = _closed_polygon(outer)
        ax.fill_between(xo, loo, hio, color="tab:blue", alpha=0.15, lw=0, label="outer estimate")
    ax.fill_between(x, lo, hi, color="tab:blue", alpha=0.45, lw=0, label="type set")
    if inner is not None:
        xi, loi, hii = _closed_polygon(inner)
        ax.plot(xi, loi, color="tab:blue", ls=":", lw=1)
    ax.plot(x, lo, color="k", lw=1)
    ax.plot(x, hi, color="k", lw=1)
    xb, xg = 1 / region.p_beta, 1 / region.p_gamma
    ax.axvline(xb, color="tab:red", ls="--", lw=0.8)
    ax.axvline(xg, color="tab:green", ls="--", lw=0.8)
    ax.set_xlabel("1/p")
    ax.set_ylabel("alpha/p")
    if not zoom:
        ax.text(xb, d - 1, "1/p_beta", color="tab:red", ha="left", va="top", fontsize=8)
        ax.text(xg, -(d - 1), "1/p_gamma", color="tab:green", ha="left", va="bottom", fontsize=8)


def plot_region(region: TypeSetRegion, path, *, title: str = "", inner=None, outer=None,
                inset: bool = True) -> None:
    """Type set in ``(1/p, alpha/p)`` with the necessary-condition trapezoid.

    With ``inset`` a second panel zooms on the lower boundary between
    ``1/p_gamma`` and ``1/p_beta``.
    """
    if inset:
        fig, (ax, sub) = plt.subplots(1, 2, figsize=(10, 4.5), width_ratios=(3, 2))
    else:
        fig, ax = plt.subplots(figsize=(6, 5))
    _draw_region(ax, region, inner, outer)
    d = region.d
    ax.set_xlim(0, 1)
    ax.set_ylim(-(d - 1) - 0.2, (d - 1) + 0.2)
    ax.legend(loc="lower left", fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    if inset:
        xb, xg = 1 / region.p_beta, 1 / region.p_gamma
        _draw_region(sub, region, inner, outer, zoom=True)
        pad = max(0.05, (xb - xg) * 0.3)
        lo_x, hi_x = max(0.0, xg - pad), min(1.0, xb + pad)
        sub.set_xlim(lo_x, hi_x)
        ys = (1 - d) * np.array([lo_x, hi_x])
        sub.set_ylim(ys.min() - 0.05, max(region.lower.max(), ys.max()) + 0.1)
        sub.set_title("lower boundary near the kink", fontsize=9)
    fig.tight_layout()
    _save(fig, path)


def plot_profile(profile, path, *, title: str = "", rho_max: float = 2.0) -> None:
    r = np.linspace(-0.25, rho_max, 400)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.fill_between(r, np.maximum(r, profile.beta), np.maximum(1, r), color="0.9", label="envelope")
    ax.plot(r, profile.evaluate(r), color="tab:blue", label="nu_sharp")
    if profile.grid is not None:
        ax.plot(profile.grid, profile.pre_clamp, "o", ms=3, color="tab:orange", label="raw slope")
        ax.fill_between(profile.grid, profile.slope_lo, profile.slope_hi, color="tab:orange",
                        alpha=0.2, lw=0, label="window-slope spread")
    ax.axvline(profile.gamma, color="tab:green", ls="--", lw=0.8)
    ax.set_xlabel("rho")
    ax.set_ylabel("nu_sharp(rho)")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title, fontsize=10)
    _save(fig, path)


def plot_lower_bound(report, path) -> None:
    rows = [r for r in report.rows if "skipped" not in r]
    j = np.array([r["j"] for r in rows])
    fig, ax = plt.subplots(figsize=(5, 4))
    meas = np.array([r["log2R"] for r in rows])
    theo = np.array([r["theory_log2"] for r in rows])
    ax.plot(j, meas, "o-", label=f"measured (slope {report.slope:.3f})")
    ax.plot(j, theo + (meas - theo).mean(), "s--", label=f"predicted, shifted (slope {report.theory_slope:.3f})")
    ax.set_xlabel("j")
    ax.set_ylabel("log2 R_j")
    ax.legend(fontsize=8)
    ax.set_title(f"{report.spec}, d={report.d}, p={report.p}, alpha={report.alpha}", fontsize=9)
    _save(fig, path)


def plot_ball_test(report, path) -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    x = np.log2(report.deltas)
    y = np.log2(report.ratios)
    ax.plot(x, y, "o-", label=f"measured (slope {report.slope:.3f})")
    ax.plot(x, y[0] + report.predicted * (x - x[0]), "--", label=f"predicted slope {report.predicted:.3f}")
    ax.set_xlabel("log2 delta")
    ax.set_ylabel("log2 ratio")
    ax.legend(fontsize=8)
    _save(fig, path)
