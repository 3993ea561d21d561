"""End-to-end acceptance checks, one test per criterion.

Each check returns ``(passed, detail)``; a single ``criterion N: PASS|FAIL``
line per check is printed in the pytest terminal summary and when this file
is run directly.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from sphericalmax import _kernels
from sphericalmax.dimension import beta_estimate, closed_form_profile, known_profile, nu_sharp_estimate
from sphericalmax.entropy import check_mainassu
from sphericalmax.setgen import (Cantor, FullInterval, FullRay, Lacunary, SequenceSet, Union,
                                 parse_set_spec)
from sphericalmax.sphere_lab.experiments import (check_disjoint, choose_interval,
                                                 geometry_inclusion_test, lower_bound_experiment,
                                                 pointwise_lower_bound, radii_sample,
                                                 scaling_invariance_test)
from sphericalmax.sphere_lab.regions import KnappConfig, knapp_setup
from sphericalmax.typeset import convexity_check, verify_equivalence
from sphericalmax.verify import benchmark_disagreements, suite_cover

RESULTS: dict[int, tuple[bool, str, float]] = {}

CANTOR = Cantor(1 / 3, 1.0, 2.0)
KNAPP_SETS = (FullInterval(), CANTOR)
KNAPP_ALPHAS = (0.0, -0.5)
KNAPP_JS = (6, 8, 10, 12)


def criterion_1():
    (check,) = suite_cover(seed=0, n_sets=500)
    return check.passed, check.detail


def criterion_2():
    targets = [(FullInterval(), 1.0, 0.02), (Lacunary(), 0.0, 0.02),
               (CANTOR, math.log(2) / math.log(3), 0.05)]
    targets += [(SequenceSet(a), 1 / (1 + a), 0.07) for a in (0.5, 1.0, 2.0)]
    bad, parts = 0, []
    for spec, want, tol in targets:
        b, _ = beta_estimate(spec, 20)
        bad += abs(b - want) > tol
        parts.append(f"{spec.to_text()}={b:.3f}")
    return bad == 0, "; ".join(parts)


def criterion_3():
    grid = np.arange(0, 2.0001, 0.25)
    e1 = float(np.abs(nu_sharp_estimate(FullInterval(), grid, 20).evaluate(grid)
                      - np.maximum(1, grid)).max())
    grid = np.linspace(0, 1, 11)
    e2 = float(np.abs(nu_sharp_estimate(SequenceSet(1.0), grid, 20).evaluate(grid)
                      - (0.5 * grid + 0.5)).max())
    return max(e1, e2) <= 0.1, f"interval max err {e1:.4f}, seq(a=1) max err {e2:.4f}"


def _region_profiles():
    return {"interval": known_profile(FullInterval()), "lacunary": known_profile(Lacunary()),
            "cantor": known_profile(CANTOR), "closed(0.5,1)": closed_form_profile(0.5, 1.0),
            "closed(0.25,0.5)": closed_form_profile(0.25, 0.5)}


def criterion_4():
    worst, n_pts = 0, 0
    for d in (2, 3):
        for prof in _region_profiles().values():
            rep = verify_equivalence(prof, d)
            worst = max(worst, rep.n_disagree)
            n_pts += rep.n_points
    return worst == 0, f"{worst} disagreements over {n_pts} grid points"


def criterion_5():
    bad = {f"{n} d={d}": benchmark_disagreements(n, d) for n in ("lacunary", "full") for d in (2, 3)}
    return sum(bad.values()) == 0, ", ".join(f"{k}: {v}" for k, v in bad.items())


def criterion_6():
    families = [FullRay(), FullInterval(), Lacunary(), CANTOR, Cantor(0.25, 1.0, 2.0),
                SequenceSet(0.5), SequenceSet(1.0), SequenceSet(2.0),
                Union([Lacunary(), SequenceSet(1.0)]), Union([CANTOR, SequenceSet(2.0)])]
    bad = []
    for spec in families:
        prof = known_profile(spec)
        for d in (2, 3):
            rep = convexity_check(prof, d, n=200)
            if not rep.ok:
                bad.append(f"{spec.to_text()} d={d}: {rep.n_violations}")
    return not bad, f"{len(families) * 2} region grids, violations: {bad or 'none'}"


def _geometry_configs():
    for d in (2, 3):
        yield KnappConfig(d, 12, 5, 1.5, 2.0 ** -6)
        yield KnappConfig(d, 12, 9, 1.5, 1e-2)


def criterion_7():
    total, parts = 0, []
    for cfg in _geometry_configs():
        rep = geometry_inclusion_test(cfg, 100_000, seed=7)
        total += rep.failures
        parts.append(f"{cfg.case} d={cfg.d}: {rep.failures}")
    return total == 0, ", ".join(parts)


def criterion_8():
    overlaps, n_cfg = 0, 0
    for spec in KNAPP_SETS:
        for d in (2, 3):
            for j in KNAPP_JS:
                tlo, thi = radii_sample(spec, j)
                for k in sorted({j // 2, max(3 * j // 4, j // 2 + 1), j - 3}):
                    i_lo, i_hi, _ = choose_interval(tlo, thi, j, k)
                    net = _kernels.separated_net(tlo, thi, i_lo, i_hi, 2.0 ** -j)
                    a = float(net[len(net) // 2])
                    for eps in (None, 1e-2):
                        cfg = KnappConfig(d, j, k, a, eps if 2 * k > j else None)
                        overlaps += check_disjoint(knapp_setup(cfg), net)
                        n_cfg += 1
    return overlaps == 0, f"{overlaps} overlapping pairs over {n_cfg} configurations"


def criterion_9():
    # large-k windows use k = j - 3 so the probe function is not saturated at reachable j
    ok, parts = True, []
    for d in (2, 3):
        for case, rule in (("small", lambda j: j // 2), ("large", lambda j: j - 3)):
            cs = []
            for j in (8, 10, 12):
                cfg = KnappConfig(d, j, rule(j), 1.5)
                cs.append(pointwise_lower_bound(cfg, 1000, seed=j).c)
            cs = np.array(cs)
            stable = cs.min() > 0 and cs.max() / cs.min() <= 2
            ok &= bool(stable)
            parts.append(f"d={d} {case}: c=" + "/".join(f"{c:.3g}" for c in cs))
    return ok, "; ".join(parts)


def criterion_10():
    ok, parts = True, []
    for spec in KNAPP_SETS:
        for alpha in KNAPP_ALPHAS:
            rep = lower_bound_experiment(spec, 2, 2.0, alpha, KNAPP_JS, "small")
            ok &= rep.ok
            parts.append(f"{spec.to_text()} alpha={alpha}: {rep.slope:.3f} vs {rep.theory_slope:.3f}")
    return ok, "; ".join(parts)


def criterion_11():
    worst = 0.0
    for spec in KNAPP_SETS:
        for alpha in KNAPP_ALPHAS:
            for j in KNAPP_JS:
                for lam in (0.5, 2.0):
                    worst = max(worst, scaling_invariance_test(spec, lam, 2, 2.0, alpha, j).rel_diff)
    return worst <= 1e-3, f"worst relative difference {worst:.2e}"


MAINASSU_INSIDE = [(FullInterval(), 2.5, -0.5, 0.1), (CANTOR, 1.8, -0.5, 0.1)]
MAINASSU_OUTSIDE = [(FullInterval(), 2.5, -1.5, 0.1), (CANTOR, 1.2, -0.5, 0.05),
                    (CANTOR, 1.8, -1.5, 0.1)]


def criterion_12():
    ok, parts = True, []
    for spec, p, alpha, eps in MAINASSU_INSIDE:
        a, b = (check_mainassu(spec, p, alpha, eps, jm) for jm in (14, 18))
        var = abs(b - a) / a
        ok &= var < 0.05
        parts.append(f"in {spec.to_text()} p={p} a={alpha}: var {var:.3f}")
    for spec, p, alpha, eps in MAINASSU_OUTSIDE:
        a, b = (check_mainassu(spec, p, alpha, eps, jm) for jm in (14, 18))
        ok &= b / a > 2
        parts.append(f"out {spec.to_text()} p={p} a={alpha}: growth {b / a:.2f}x")
    return ok, "; ".join(parts)


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 13)}


def run_criterion(n: int):
    t0 = time.perf_counter()
    passed, detail = CRITERIA[n]()
    RESULTS[n] = (bool(passed), detail, time.perf_counter() - t0)
    return RESULTS[n]


def format_line(n: int) -> str:
    passed, detail, secs = RESULTS[n]
    return f"criterion {n}: {'PASS' if passed else 'FAIL'} ({secs:.1f}s) {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    passed, detail, _ = run_criterion(n)
    print(format_line(n))
    assert passed, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        run_criterion(n)
        print(format_line(n), flush=True)
