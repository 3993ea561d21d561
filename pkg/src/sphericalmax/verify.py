"""Self-check suites behind ``sphericalmax verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dimension import beta_estimate, closed_form_profile, known_profile, nu_sharp_estimate
from .entropy import brute_force_cover_count
from .setgen import Cantor, FullInterval, FullRay, Lacunary, SequenceSet, parse_set_spec
from .sphere_lab.experiments import (geometry_inclusion_test, lower_bound_experiment,
                                     scaling_invariance_test)
from .sphere_lab.regions import KnappConfig
from .typeset import benchmark_contains, convexity_check, membership_grid, verify_equivalence

SUITES = ("cover", "profile", "region", "geometry", "knapp", "scaling")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def suite_cover(seed: int = 0, n_sets: int = 500, **_) -> list[Check]:
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n_sets):
        n = int(rng.integers(1, 13))
        pts = np.sort(rng.uniform(0, rng.choice([0.05, 0.5, 2.0]), n))
        delta = float(rng.uniform(0.005, 0.5))
        g = _kernels.greedy_count(pts, pts, -1.0, 10.0, delta)
        bad += int(g != brute_force_cover_count(pts, delta))
    return [Check("greedy = brute force", bad == 0, f"{bad} mismatches over {n_sets} sets")]


def suite_profile(j_max: int = 20, **_) -> list[Check]:
    out = []
    targets = [("interval(lo=1,hi=2)", 1.0, 0.02), ("lacunary", 0.0, 0.02),
               ("cantor(ratio=0.3333333333333333)", math.log(2) / math.log(3), 0.05),
               ("seq(a=0.5)", 1 / 1.5, 0.07), ("seq(a=1)", 0.5, 0.07), ("seq(a=2)", 1 / 3, 0.07)]
    for text, want, tol in targets:
        b, _ = beta_estimate(parse_set_spec(text), j_max)
        out.append(Check(f"beta {text}", abs(b - want) <= tol, f"{b:.4f} vs {want:.4f} +- {tol}"))
    grid = np.arange(0, 2.0001, 0.25)
    prof = nu_sharp_estimate(FullInterval(), grid, j_max)
    err = float(np.abs(prof.evaluate(grid) - np.maximum(1, grid)).max())
    out.append(Check("nu_sharp interval", err <= 0.1, f"max error {err:.4f}"))
    grid = np.linspace(0, 1, 11)
    prof = nu_sharp_estimate(SequenceSet(1.0), grid, j_max)
    err = float(np.abs(prof.evaluate(grid) - (0.5 * grid + 0.5)).max())
    out.append(Check("nu_sharp seq(a=1)", err <= 0.1, f"max error {err:.4f}"))
    cf = closed_form_profile(0.5, 1.0)
    out.append(Check("closed form (0.5, 1) at 0.5", abs(cf.evaluate(0.5) - 0.75) < 1e-12,
                     f"{cf.evaluate(0.5)}"))
    return out


def _profiles():
    return {
        "interval": known_profile(FullInterval()),
        "lacunary": known_profile(Lacunary()),
        "cantor": known_profile(Cantor()),
        "closed(0.5,1)": closed_form_profile(0.5, 1.0),
        "closed(0.25,0.5)": closed_form_profile(0.25, 0.5),
    }


def benchmark_disagreements(name: str, d: int, n: int = 100, band: float = 1e-6) -> int:
    prof = known_profile(Lacunary() if name == "lacunary" else FullRay())
    _, _, P, A, margin = membership_grid(prof, d, n, n)
    got = margin >= 0
    want = benchmark_contains(name, P, A, d, tol=0.0)
    if name == "lacunary":
        near = (np.abs(A - (1 - d)) < band) | (np.abs(A - (d - 1) * (P - 1)) < band)
    else:
        near = ((np.abs(A - (1 - d)) < band) | (np.abs(A - ((d - 1) * P - d)) < band)
                | (np.abs(P - (1 + 1 / (d - 1))) < band))
    near |= np.abs(margin) < band
    return int(np.sum((got != want) & ~near))


def suite_region(**_) -> list[Check]:
    out = []
    for d in (2, 3):
        for name, prof in _profiles().items():
            rep = verify_equivalence(prof, d)
            out.append(Check(f"equivalence {name} d={d}", rep.ok,
                             f"{rep.n_disagree} disagreements, {rep.n_band} in band"))
        for bench in ("lacunary", "full"):
            bad = benchmark_disagreements(bench, d)
            out.append(Check(f"benchmark {bench} d={d}", bad == 0, f"{bad} disagreements"))
        for name, prof in _profiles().items():
            rep = convexity_check(prof, d)
            out.append(Check(f"convexity {name} d={d}", rep.ok, f"{rep.n_violations} violations"))
    return out


def suite_geometry(d: int = 2, j: int = 12, k: int = 5, n: int = 100000, seed: int = 7,
                   eps: float | None = None, **_) -> list[Check]:
    cfg = KnappConfig(d, j, k, 1.5, eps)
    rep = geometry_inclusion_test(cfg, n, seed)
    return [Check(f"inclusion {cfg.case} d={d} j={j} k={k} eps={cfg.eps:g}", rep.ok,
                  f"{rep.failures} failures, worst margin {rep.worst_margin:.3e}")]


def suite_knapp(d: int = 2, p: float = 2.0, **_) -> list[Check]:
    out = []
    for spec in (FullInterval(), Cantor()):
        for alpha in (0.0, -0.5):
            rep = lower_bound_experiment(spec, d, p, alpha, [6, 8, 10, 12], "small")
            out.append(Check(f"slope {spec.to_text()} alpha={alpha}", rep.ok,
                             f"measured {rep.slope:.3f}, predicted {rep.theory_slope:.3f}"))
    return out


def suite_scaling(d: int = 2, p: float = 2.0, **_) -> list[Check]:
    out = []
    for spec in (FullInterval(), Cantor()):
        for alpha in (0.0, -0.5):
            for lam in (0.5, 2.0):
                rep = scaling_invariance_test(spec, lam, d, p, alpha, 10)
                out.append(Check(f"scaling {spec.to_text()} alpha={alpha} lam={lam}", rep.ok,
                                 f"relative difference {rep.rel_diff:.2e}"))
    return out


def run_suite(name: str, **kwargs) -> list[Check]:
    fn = {"cover": suite_cover, "profile": suite_profile, "region": suite_region,
          "geometry": suite_geometry, "knapp": suite_knapp, "scaling": suite_scaling}.get(name)
    if fn is None:
        raise ValueError(f"unknown suite '{name}' (choose from {', '.join(SUITES)})")
    return fn(**{k: v for k, v in kwargs.items() if v is not None})


__all__ = ["SUITES", "Check", "run_suite", "benchmark_disagreements"]
