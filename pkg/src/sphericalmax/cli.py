"""Command-line interface: ``sphericalmax <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dimension import (DEFAULT_TOL, DimensionError, assouad_spectrum, closed_form_profile,
                        known_profile, nu_sharp_estimate)
from .entropy import ResolutionError, UnboundedSpecError, count_table
from .setgen import SamplingResourceError, SpecParameterError, SpecSyntaxError, parse_set_spec
from .typeset import (P_MAX, TypeSetError, convexity_check, region_boundary, region_uncertainty,
                      union_crossings, verify_equivalence)
from .typeset import profile_for_components

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------


def parse_range(text: str) -> np.ndarray:
    """``a:b:step`` (inclusive of ``b`` up to rounding) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be a:b:step, got '{text}'")
        a, b, step = map(float, parts)
        if step <= 0 or b < a:
            raise UsageError(f"bad range '{text}'")
        n = int(np.floor((b - a) / step + 1e-9))
        return np.round(a + step * np.arange(n + 1), 12)
    return np.array([float(x) for x in text.split(",") if x.strip()])


def parse_int_list(text: str) -> list[int]:
    if ":" in text:
        return [int(x) for x in parse_range(text)]
    return [int(x) for x in text.split(",") if x.strip()]


def parse_closed_form(text: str) -> tuple[float, float]:
    vals = {}
    for item in text.split(","):
        key, _, val = item.partition("=")
        vals[key.strip()] = float(val)
    if set(vals) != {"beta", "gamma"}:
        raise UsageError("--closed-form expects beta=<b>,gamma=<g>")
    return vals["beta"], vals["gamma"]


def parse_union(text: str) -> list[tuple[float, float]]:
    out = []
    for item in text.split(","):
        b, _, g = item.partition(":")
        if not g:
            raise UsageError("--union expects b:g,b:g,...")
        out.append((float(b), float(g)))
    return out


def _config_echo(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _header(args) -> list[str]:
    return [f"sphericalmax {__version__}", "config " + json.dumps(_config_echo(args), sort_keys=True)]


def _formats(args) -> set[str]:
    return {f.strip() for f in args.format.split(",")} if args.format else {"csv", "json", "svg"}


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, args, payload: dict) -> None:
    doc = {"version": __version__, "config": _config_echo(args), **payload}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _spec(args):
    if not args.set:
        raise UsageError("--set is required")
    return parse_set_spec(args.set)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_dims(args) -> int:
    spec = _spec(args)
    rho = parse_range(args.rho)
    thetas = parse_range(args.theta)
    table = count_table(spec, args.jmax, threads=args.threads)
    prof = nu_sharp_estimate(spec, rho, args.jmax, table=table, tol=args.tol)
    spec_rep = assouad_spectrum(spec, thetas, args.jmax, table=table)
    out, fmts = _out_dir(args), _formats(args)
    if "csv" in fmts:
        prof.to_csv(out / "profile.csv", _header(args))
        spec_rep.to_csv(out / "spectrum.csv", _header(args))
    summary = prof.summary()
    if "json" in fmts:
        _write_json(out / "dims.json", args, {
            "summary": summary,
            "s_j": table.unit_window_log2(),
            "spectrum": {"theta": spec_rep.theta_grid, "dim": spec_rep.dims, "nu": spec_rep.nu,
                         "diagnostics": spec_rep.diagnostics},
        })
    if "svg" in fmts:
        from .plotting import plot_profile
        plot_profile(prof, out / "profile.svg", title=spec.to_text())
    print(f"beta={prof.beta:.4f} gamma={prof.gamma:.4f} rho_star={prof.rho_star:.4f} "
          f"max_spread={prof.diagnostics['max_spread']:.4f}")
    return EXIT_OK


def _typeset_profile(args):
    chosen = [x for x in (args.set, args.closed_form, args.union) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --set, --closed-form, --union")
    if args.closed_form:
        b, g = parse_closed_form(args.closed_form)
        return closed_form_profile(b, g), f"closed form beta={b:g}, gamma={g:g}", None
    if args.union:
        comps = parse_union(args.union)
        return profile_for_components(comps), f"union {args.union}", comps
    spec = parse_set_spec(args.set)
    prof = None if args.sampled else known_profile(spec)
    if prof is None:
        prof = nu_sharp_estimate(spec, parse_range(args.rho), args.jmax, tol=args.tol,
                                 threads=args.threads)
    return prof, spec.to_text(), None


def cmd_typeset(args) -> int:
    prof, label, comps = _typeset_profile(args)
    region = region_boundary(prof, args.d, p_max=args.pmax)
    inner = outer = None
    if not prof.is_closed_form:
        inner, outer = region_uncertainty(prof, args.d, region.p, p_max=args.pmax)
    eq = verify_equivalence(prof, args.d)
    conv = convexity_check(prof, args.d)
    out, fmts = _out_dir(args), _formats(args)
    if "csv" in fmts:
        region.to_csv(out / "region.csv", _header(args))
    if "json" in fmts:
        payload = {"profile": prof.summary(), "region": region.summary(),
                   "equivalence": eq.__dict__, "convexity": conv.__dict__}
        if comps is not None:
            payload["union_crossings"] = union_crossings(comps, args.d)
        if inner is not None:
            payload["inner_boundary"] = {"inv_p": inner.inv_p, "lower": inner.lower}
            payload["outer_boundary"] = {"inv_p": outer.inv_p, "lower": outer.lower}
        _write_json(out / "typeset.json", args, payload)
    if "svg" in fmts:
        from .plotting import plot_region
        plot_region(region, out / "typeset.svg", title=f"{label}, d={args.d}", inner=inner, outer=outer)
    print(f"p_beta={region.p_beta:.4f} p_gamma={region.p_gamma:.4f} "
          f"x_beta={1 / region.p_beta:.4f} x_gamma={1 / region.p_gamma:.4f} "
          f"L(p_beta)={region.lower[0] * region.p[0]:.4f} "
          f"equivalence_disagreements={eq.n_disagree} convexity_violations={conv.n_violations}")
    # sampled profiles carry estimator noise, so convexity is only a diagnostic there
    hard_conv = conv.ok or not prof.is_closed_form
    return EXIT_OK if eq.ok and hard_conv else EXIT_FAIL


def cmd_knapp(args) -> int:
    from .sphere_lab.experiments import lower_bound_experiment

    spec = _spec(args)
    rep = lower_bound_experiment(spec, args.d, args.p, args.alpha, parse_int_list(args.j),
                                 args.k_rule, args.eps, resolution=args.resolution,
                                 inclusion_samples=args.inclusion_samples, seed=args.seed)
    out, fmts = _out_dir(args), _formats(args)
    cols = ["j", "k", "case", "eps", "I_lo", "I_hi", "a", "N", "net_size", "overlaps",
            "inclusion_failures", "log2R", "theory_log2"]
    if "csv" in fmts:
        with open(out / "knapp.csv", "w") as fh:
            for line in _header(args):
                fh.write(f"# {line}\n")
            fh.write(",".join(cols) + "\n")
            for r in rep.rows:
                fh.write(",".join(str(r.get(c, "")) for c in cols) + "\n")
    if "json" in fmts:
        _write_json(out / "knapp.json", args, rep.to_dict())
    if "svg" in fmts:
        from .plotting import plot_lower_bound
        plot_lower_bound(rep, out / "knapp.svg")
    print(f"slope={rep.slope:.4f} predicted={rep.theory_slope:.4f} "
          f"verdict={'pass' if rep.ok else 'fail'}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_balltest(args) -> int:
    from .sphere_lab.experiments import ball_test_experiment

    spec = _spec(args)
    deltas = [2.0 ** -m for m in parse_int_list(args.delta_exp)]
    rep = ball_test_experiment(spec, args.d, args.p, args.alpha, deltas, beta=args.beta)
    out, fmts = _out_dir(args), _formats(args)
    if "json" in fmts:
        _write_json(out / "balltest.json", args, rep.to_dict())
    if "csv" in fmts:
        with open(out / "balltest.csv", "w") as fh:
            for line in _header(args):
                fh.write(f"# {line}\n")
            fh.write("delta,ratio\n")
            for dl, r in zip(rep.deltas, rep.ratios):
                fh.write(f"{dl!r},{r!r}\n")
    if "svg" in fmts:
        from .plotting import plot_ball_test
        plot_ball_test(rep, out / "balltest.svg")
    print(f"slope={rep.slope:.4f} predicted={rep.predicted:.4f} admissible={rep.admissible}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    checks = run_suite(args.suite, d=args.d, j=args.j, k=args.k, n=args.n, seed=args.seed,
                       p=args.p, eps=args.eps, j_max=args.jmax)
    width = max(len(c.name) for c in checks)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.detail}")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def _read_csv(path):
    rows = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    head = rows[0].split(",")
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    return head, data


def cmd_plot(args) -> int:
    from .plotting import plot_profile, plot_region
    from .dimension import NuSharpProfile
    from .typeset import TypeSetRegion

    head, data = _read_csv(args.input)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    if head[:3] == ["inv_p", "lower", "upper"]:
        inv_p, lo, hi = data[:, 0], data[:, 1], data[:, 2]
        p = 1 / inv_p
        order = np.argsort(p)
        p, inv_p, lo, hi = p[order], inv_p[order], lo[order], hi[order]
        beta = (args.d - 1) * (p[0] - 1) - hi[0] * p[0]
        gamma = args.gamma if args.gamma is not None else beta
        prof = closed_form_profile(max(0.0, beta), max(beta, gamma))
        region = TypeSetRegion(args.d, prof, p[0], 1 + prof.gamma / (args.d - 1), p, inv_p, lo, hi)
        plot_region(region, out, title=Path(args.input).name)
    elif head[:2] == ["rho", "value"]:
        r, v = data[:, 0], data[:, 1]
        beta = float(v[r <= 0].max()) if np.any(r <= 0) else float(v[0])
        pos = r > 0
        prof = NuSharpProfile("sampled", np.concatenate([[0.0], r[pos]]),
                              np.concatenate([[beta], v[pos]]), beta, 1.0, 0.0, DEFAULT_TOL)
        plot_profile(prof, out, title=Path(args.input).name)
    else:
        raise UsageError("unrecognized CSV: expected a region or profile table")
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(p, need_set=False):
    p.add_argument("--set", required=need_set, help="dilation set spec, e.g. 'seq(a=1)'")
    p.add_argument("--d", type=int, default=2, choices=(2, 3), help="ambient dimension")
    p.add_argument("--jmax", type=int, default=20, help="finest covering scale 2^-jmax")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--format", default=None, help="comma list of csv,json,svg (default all)")
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    p.add_argument("--seed", type=int, default=0, help="random seed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sphericalmax",
                                 description="Dimension spectra of dilation sets and weighted "
                                             "type sets of spherical maximal operators.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="beta, Assouad spectrum and nu_sharp profile")
    _common(p, need_set=True)
    p.add_argument("--rho", default="0:2:0.1", help="rho grid a:b:step or list")
    p.add_argument("--theta", default="0.1:0.9:0.1", help="theta grid for the spectrum")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="envelope / gamma tolerance")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("typeset", help="type set region, equivalence and convexity checks")
    _common(p)
    p.add_argument("--closed-form", default=None, help="beta=<b>,gamma=<g>")
    p.add_argument("--union", default=None, help="b1:g1,b2:g2,... regular components")
    p.add_argument("--sampled", action="store_true", help="estimate the profile even for known sets")
    p.add_argument("--rho", default="0:2:0.05", help="rho grid for sampled profiles")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--pmax", type=float, default=P_MAX, help="largest p on the boundary grid")
    p.set_defaults(func=cmd_typeset)

    p = sub.add_parser("knapp", help="lower-bound slope experiment")
    _common(p)
    p.set_defaults(set="interval(lo=1,hi=2)")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--j", default="6,8,10,12", help="scales j")
    p.add_argument("--k-rule", default="small", help="small, large, j-N or an integer")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--resolution", type=int, default=1)
    p.add_argument("--inclusion-samples", type=int, default=2000)
    p.set_defaults(func=cmd_knapp)

    p = sub.add_parser("balltest", help="ball test ratio against delta")
    _common(p)
    p.set_defaults(set="interval(lo=1,hi=2)")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--delta-exp", default="5:10:1", help="exponents m with delta = 2^-m")
    p.add_argument("--beta", type=float, default=None, help="override beta for the prediction")
    p.set_defaults(func=cmd_balltest)

    p = sub.add_parser("verify", help="run a self-check suite")
    _common(p)
    p.add_argument("--suite", required=True)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a region or profile CSV to SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--d", type=int, default=2, choices=(2, 3))
    p.add_argument("--gamma", type=float, default=None, help="mark 1/p_gamma for region plots")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecParameterError, UsageError, UnboundedSpecError, DimensionError, TypeSetError,
            ResolutionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SamplingResourceError, MemoryError) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
