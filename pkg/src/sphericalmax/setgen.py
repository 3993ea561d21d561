"""Dilation sets in logarithmic coordinates.

Every set is handled through ``u = log2(t)``.  In these coordinates the
multiplicative metric ``|log2(s/t)|`` is the Euclidean metric, dilations are
translations and the dyadic shells ``[2^k, 2^(k+1)]`` are unit intervals.

A sample of a set inside a window is stored as a sorted list of disjoint
closed components ``[lo_i, hi_i]``.  Isolated points are components with
``lo_i == hi_i``; stretches where the set is denser than the sampling
resolution are stored as solid segments instead of being grid-filled point by
point, which keeps covering counts exact and memory bounded.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "LogInterval",
    "SetSpec",
    "FullRay",
    "FullInterval",
    "Lacunary",
    "SequenceSet",
    "Cantor",
    "ExplicitPoints",
    "Union",
    "Scale",
    "Periodize",
    "WindowRestrict",
    "SampledSet",
    "SpecSyntaxError",
    "SpecParameterError",
    "SamplingResourceError",
    "parse_set_spec",
    "sample",
    "window_restrict",
    "DEFAULT_GUARD_BITS",
]

DEFAULT_GUARD_BITS = 3
# merge tolerance for float duplicates produced by unions and periodization
_MERGE_EPS = 1e-12
# hard cap on stored components of a single sample
MAX_COMPONENTS = 1 << 25


class SpecSyntaxError(ValueError):
    """Malformed set-spec text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        pointer = ""
        if text:
            pointer = f"\n  {text}\n  {' ' * position}^"
        super().__init__(f"{message} (at position {position}){pointer}")


class SpecParameterError(ValueError):
    """A set-spec parameter is outside its admissible range."""


class SamplingResourceError(RuntimeError):
    """A sample would exceed the configured component cap."""


@dataclass(frozen=True)
class LogInterval:
    """Closed interval ``[lo, hi]`` in log2 coordinates.

    ``diameter()`` is the multiplicative diameter of ``[2**lo, 2**hi]``.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("LogInterval endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"LogInterval requires lo <= hi, got [{self.lo}, {self.hi}]")

    def diameter(self) -> float:
        return self.hi - self.lo

    def shifted(self, s: float) -> "LogInterval":
        return LogInterval(self.lo + s, self.hi + s)

    @classmethod
    def from_radii(cls, t_lo: float, t_hi: float) -> "LogInterval":
        return cls(math.log2(t_lo), math.log2(t_hi))

    def contains(self, u: float) -> bool:
        return self.lo <= u <= self.hi


def _empty():
    return np.empty(0), np.empty(0)


def _normalize(lo: np.ndarray, hi: np.ndarray):
    """Sort components and merge the ones that overlap or touch."""
    if lo.size == 0:
        return _empty()
    order = np.lexsort((hi, lo))
    lo = lo[order]
    hi = hi[order]
    run_hi = np.maximum.accumulate(hi)
    # a new component starts where lo exceeds every previous hi
    starts = np.empty(lo.size, dtype=bool)
    starts[0] = True
    starts[1:] = lo[1:] > run_hi[:-1] + _MERGE_EPS
    idx = np.flatnonzero(starts)
    new_lo = lo[idx]
    ends = np.append(idx[1:], lo.size) - 1
    new_hi = run_hi[ends]
    return new_lo, new_hi


# ---------------------------------------------------------------------------
# set specifications
# ---------------------------------------------------------------------------


class SetSpec:
    """Base class of the dilation-set description tree.

    Subclasses implement ``_components(lo, hi, h)``, returning the sample of
    the set inside ``[lo, hi]`` (log coordinates) at Hausdorff resolution
    ``h``, and the structural queries ``extent`` and ``period``.
    """

    def _components(self, lo: float, hi: float, h: float):
        raise NotImplementedError

    def extent(self) -> LogInterval | None:
        """Log-coordinate hull of the set, or None when unbounded."""
        raise NotImplementedError

    def period(self) -> float | None:
        """Translation period in log coordinates.

        ``0.0`` means invariant under every translation (the full ray);
        ``None`` means no periodic structure is known.
        """
        return None

    def scan_range(self) -> LogInterval | None:
        """Range of window start offsets sufficient for unit-window sups."""
        ext = self.extent()
        if ext is not None:
            return ext
        per = self.period()
        if per is None:
            return None
        return LogInterval(0.0, per if per > 0 else 1.0)

    def to_text(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_text()


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class FullRay(SetSpec):
    """The whole half-line ``(0, inf)``."""

    def _components(self, lo, hi, h):
        return np.array([lo]), np.array([hi])

    def extent(self):
        return None

    def period(self):
        return 0.0

    def to_text(self):
        return "full"


@dataclass(frozen=True)
class FullInterval(SetSpec):
    """The interval ``[lo, hi]`` of radii (multiplicative coordinates)."""

    lo: float = 1.0
    hi: float = 2.0

    def __post_init__(self):
        if not (self.lo > 0 and self.hi >= self.lo and math.isfinite(self.hi)):
            raise SpecParameterError(f"interval needs 0 < lo <= hi, got lo={self.lo}, hi={self.hi}")

    def _components(self, lo, hi, h):
        a = max(lo, math.log2(self.lo))
        b = min(hi, math.log2(self.hi))
        if a > b:
            return _empty()
        return np.array([a]), np.array([b])

    def extent(self):
        return LogInterval.from_radii(self.lo, self.hi)

    def to_text(self):
        return f"interval(lo={_fmt(self.lo)},hi={_fmt(self.hi)})"


@dataclass(frozen=True)
class Lacunary(SetSpec):
    """Geometric sequence ``{base**k : k in Z}``."""

    base: float = 2.0

    def __post_init__(self):
        if not (self.base > 1 and math.isfinite(self.base)):
            raise SpecParameterError(f"lacunary base must be > 1, got {self.base}")

    def _components(self, lo, hi, h):
        step = math.log2(self.base)
        k0 = math.ceil(lo / step - 1e-12)
        k1 = math.floor(hi / step + 1e-12)
        if k1 < k0:
            return _empty()
        if k1 - k0 + 1 > MAX_COMPONENTS:
            raise SamplingResourceError("too many lacunary points in window")
        pts = np.arange(k0, k1 + 1) * step
        pts = pts[(pts >= lo) & (pts <= hi)]
        return pts, pts.copy()

    def extent(self):
        return None

    def period(self):
        return math.log2(self.base)

    def to_text(self):
        return "lacunary" if self.base == 2.0 else f"lacunary(base={_fmt(self.base)})"


@dataclass(frozen=True)
class SequenceSet(SetSpec):
    """``{1 + n**(-a) : n >= 1}``, accumulating at ``t = 1``.

    Points are enumerated exactly until consecutive gaps fall below the
    sampling resolution; the remaining accumulation stretch ``[0, u_n]`` is
    stored as a solid segment.
    """

    a: float

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise SpecParameterError(f"seq exponent a must be > 0, got {self.a}")

    def _u(self, n):
        return np.log1p(np.asarray(n, dtype=float) ** (-self.a)) / math.log(2.0)

    def _components(self, lo, hi, h):
        if hi < 0.0 or lo > 1.0:
            return _empty()
        if hi == 0.0:
            # only the accumulation point t = 1 remains
            return np.array([0.0]), np.array([0.0])
        if hi >= 1.0:
            n = 1
        else:
            # smallest n with u_n <= hi
            n = max(1, math.ceil((2.0 ** hi - 1.0) ** (-1.0 / self.a) * (1 - 1e-12)))
            while n > 1 and self._u(n - 1) <= hi:
                n -= 1
            while self._u(n) > hi:
                n += 1
        pts = []
        tail_top = None
        chunk = 4096
        while True:
            ns = np.arange(n, n + chunk + 1, dtype=float)
            u = self._u(ns)
            gaps = u[:-1] - u[1:]
            u = u[:-1]
            below = np.flatnonzero(u < lo)
            fine = np.flatnonzero(gaps < h)
            stop_lo = below[0] if below.size else chunk
            stop_fine = fine[0] if fine.size else chunk
            if stop_fine < stop_lo:
                # u[stop_fine] is the last enumerated point, tail below it is dense
                pts.append(u[: stop_fine + 1])
                tail_top = float(u[stop_fine])
                break
            if stop_lo < chunk:
                pts.append(u[:stop_lo])
                break
            pts.append(u)
            n += chunk
            if sum(p.size for p in pts) > MAX_COMPONENTS:
                raise SamplingResourceError("sequence enumeration exceeds component cap")
            chunk = min(chunk * 2, 1 << 20)
        pts = np.concatenate(pts)[::-1] if pts else np.empty(0)
        lo_arr, hi_arr = pts, pts.copy()
        if tail_top is not None:
            a = max(lo, 0.0)
            b = min(hi, tail_top)
            if a <= b:
                lo_arr = np.append(lo_arr, a)
                hi_arr = np.append(hi_arr, b)
        return _normalize(lo_arr, hi_arr)

    def extent(self):
        return LogInterval(0.0, 1.0)

    def to_text(self):
        return f"seq(a={_fmt(self.a)})"


@dataclass(frozen=True)
class Cantor(SetSpec):
    """Symmetric Cantor set in ``[lo, hi]`` (radii) with contraction ``ratio``.

    ``ratio = 1/3`` gives the middle-third set.  The sample stores one point
    per generation-``m`` interval, ``m`` being the first generation whose
    intervals are shorter than the resolution in log coordinates.
    """

    ratio: float = 1.0 / 3.0
    lo: float = 1.0
    hi: float = 2.0

    def __post_init__(self):
        if not (0 < self.ratio <= 0.5):
            raise SpecParameterError(f"cantor ratio must lie in (0, 1/2], got {self.ratio}")
        if not (self.lo > 0 and self.hi > self.lo and math.isfinite(self.hi)):
            raise SpecParameterError(f"cantor needs 0 < lo < hi, got lo={self.lo}, hi={self.hi}")

    def generation_for(self, h: float) -> int:
        """First generation whose intervals have log-length <= h."""
        length = self.hi - self.lo
        # d(log2 t)/dt <= 1/(lo ln 2) on [lo, hi]
        scale = length / (self.lo * math.log(2.0))
        if scale <= h:
            return 0
        return max(0, math.ceil(math.log(h / scale) / math.log(self.ratio) - 1e-12))

    def _components(self, lo, hi, h):
        t_lo, t_hi = 2.0 ** lo, 2.0 ** hi
        m = self.generation_for(h)
        left = np.array([self.lo])
        length = self.hi - self.lo
        for _ in range(m):
            length_next = length * self.ratio
            left = np.concatenate([left, left + (length - length_next)])
            length = length_next
            keep = (left + length >= t_lo) & (left <= t_hi)
            left = np.sort(left[keep])
            if left.size > MAX_COMPONENTS:
                raise SamplingResourceError("cantor generation exceeds component cap")
        right = left + length
        pts = np.where(left >= t_lo, left, right)
        pts = pts[(pts >= t_lo) & (pts <= t_hi)]
        u = np.log2(pts)
        u = u[(u >= lo) & (u <= hi)]
        return _normalize(u, u.copy())

    def extent(self):
        return LogInterval.from_radii(self.lo, self.hi)

    def to_text(self):
        return f"cantor(ratio={_fmt(self.ratio)},lo={_fmt(self.lo)},hi={_fmt(self.hi)})"


@dataclass(frozen=True)
class ExplicitPoints(SetSpec):
    """A finite set of radii."""

    points: tuple

    def __post_init__(self):
        pts = tuple(sorted(float(p) for p in self.points))
        if not pts:
            raise SpecParameterError("points() needs at least one radius")
        if pts[0] <= 0 or not all(math.isfinite(p) for p in pts):
            raise SpecParameterError("radii must be positive and finite")
        object.__setattr__(self, "points", pts)

    def _components(self, lo, hi, h):
        u = np.log2(np.array(self.points))
        u = u[(u >= lo) & (u <= hi)]
        return _normalize(u, u.copy())

    def extent(self):
        return LogInterval.from_radii(self.points[0], self.points[-1])

    def to_text(self):
        return "points(" + ",".join(_fmt(p) for p in self.points) + ")"


@dataclass(frozen=True)
class Union(SetSpec):
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise SpecParameterError("union() needs at least one member")
        object.__setattr__(self, "parts", tuple(self.parts))

    def _components(self, lo, hi, h):
        los, his = [], []
        for part in self.parts:
            a, b = part._components(lo, hi, h)
            los.append(a)
            his.append(b)
        return _normalize(np.concatenate(los), np.concatenate(his))

    def extent(self):
        exts = [p.extent() for p in self.parts]
        if any(e is None for e in exts):
            return None
        return LogInterval(min(e.lo for e in exts), max(e.hi for e in exts))

    def period(self):
        periods = [p.period() for p in self.parts if p.extent() is None]
        if not periods or any(p is None for p in periods):
            return None
        nonzero = [p for p in periods if p > 0]
        if not nonzero:
            return 0.0
        if any(abs(p - nonzero[0]) > 1e-12 for p in nonzero):
            return None
        return nonzero[0]

    def scan_range(self):
        if self.extent() is not None:
            return self.extent()
        per = self.period()
        if per is None:
            return None
        per = per if per > 0 else 1.0
        rng_lo, rng_hi = 0.0, per
        for p in self.parts:
            e = p.extent()
            if e is not None:
                rng_lo = min(rng_lo, e.lo - 1.0)
                rng_hi = max(rng_hi, e.hi)
        return LogInterval(rng_lo, rng_hi)

    def to_text(self):
        return "union(" + ",".join(p.to_text() for p in self.parts) + ")"


@dataclass(frozen=True)
class Scale(SetSpec):
    """The dilate ``lam * inner``; a translation by ``log2(lam)``."""

    lam: float
    inner: SetSpec

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise SpecParameterError(f"scale factor must be > 0, got {self.lam}")

    @property
    def shift(self) -> float:
        return math.log2(self.lam)

    def _components(self, lo, hi, h):
        s = self.shift
        a, b = self.inner._components(lo - s, hi - s, h)
        return a + s, b + s

    def extent(self):
        e = self.inner.extent()
        return None if e is None else e.shifted(self.shift)

    def period(self):
        return self.inner.period()

    def scan_range(self):
        r = self.inner.scan_range()
        return None if r is None else r.shifted(self.shift)

    def to_text(self):
        return f"scale({_fmt(self.lam)},{self.inner.to_text()})"


@dataclass(frozen=True)
class Periodize(SetSpec):
    """``union over k of 2**k * (inner intersected with [1, 2])``."""

    inner: SetSpec

    def _components(self, lo, hi, h):
        los, his = [], []
        for k in range(math.floor(lo) - 1, math.ceil(hi) + 1):
            a_win = max(lo - k, 0.0)
            b_win = min(hi - k, 1.0)
            if a_win > b_win:
                continue
            a, b = self.inner._components(a_win, b_win, h)
            los.append(a + k)
            his.append(b + k)
        if not los:
            return _empty()
        return _normalize(np.concatenate(los), np.concatenate(his))

    def extent(self):
        return None

    def period(self):
        return 1.0

    def to_text(self):
        return f"periodize({self.inner.to_text()})"


@dataclass(frozen=True)
class WindowRestrict(SetSpec):
    """``R**-1 * (inner intersected with [R, 2R])``, a subset of ``[1, 2]``."""

    R: float
    inner: SetSpec

    def __post_init__(self):
        if not (self.R > 0 and math.isfinite(self.R)):
            raise SpecParameterError(f"window radius must be > 0, got {self.R}")

    def _components(self, lo, hi, h):
        r = math.log2(self.R)
        a_win = max(lo, 0.0)
        b_win = min(hi, 1.0)
        if a_win > b_win:
            return _empty()
        a, b = self.inner._components(a_win + r, b_win + r, h)
        a, b = a - r, b - r
        # clip float drift back into [0, 1]
        a = np.clip(a, a_win, b_win)
        b = np.clip(b, a_win, b_win)
        return _normalize(a, b)

    def extent(self):
        return LogInterval(0.0, 1.0)

    def to_text(self):
        return f"window({_fmt(self.R)},{self.inner.to_text()})"


def window_restrict(spec: SetSpec, R: float) -> WindowRestrict:
    """The normalized window set ``R**-1 (E cap [R, 2R])``."""
    return WindowRestrict(R, spec)


# ---------------------------------------------------------------------------
# samples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledSet:
    """Finite stand-in for ``E`` inside ``window`` at scale ``2**-resolution_j``.

    ``comp_lo``/``comp_hi`` hold the sorted disjoint components.  Every point
    of the true set in the window lies within ``spacing`` of a component and
    every component point lies within ``spacing`` of the true set.
    """

    comp_lo: np.ndarray
    comp_hi: np.ndarray
    window: LogInterval
    resolution_j: int
    guard_bits: int = DEFAULT_GUARD_BITS
    spec_text: str = field(default="", compare=False)

    def __post_init__(self):
        self.comp_lo.setflags(write=False)
        self.comp_hi.setflags(write=False)

    @property
    def spacing(self) -> float:
        return 2.0 ** (-(self.resolution_j + self.guard_bits))

    @property
    def empty(self) -> bool:
        return self.comp_lo.size == 0

    @property
    def n_components(self) -> int:
        return int(self.comp_lo.size)

    @property
    def points(self) -> np.ndarray:
        """Materialized points: isolated points plus a uniform grid on segments."""
        h = self.spacing
        out = []
        for a, b in zip(self.comp_lo, self.comp_hi):
            if b - a <= 0:
                out.append(np.array([a]))
            else:
                n = math.ceil((b - a) / h)
                out.append(np.linspace(a, b, n + 1))
        if not out:
            return np.empty(0)
        return np.concatenate(out)

    def radii(self) -> tuple[np.ndarray, np.ndarray]:
        """Components mapped back to radii ``t = 2**u``."""
        return np.exp2(self.comp_lo), np.exp2(self.comp_hi)

    def shifted(self, s: float) -> "SampledSet":
        return SampledSet(self.comp_lo + s, self.comp_hi + s, self.window.shifted(s),
                          self.resolution_j, self.guard_bits, self.spec_text)

    def equals(self, other: "SampledSet", tol: float | None = None) -> bool:
        """Componentwise equality within ``tol`` (default: sub-resolution)."""
        tol = self.spacing if tol is None else tol
        if self.n_components != other.n_components:
            return False
        return bool(np.all(np.abs(self.comp_lo - other.comp_lo) <= tol)
                    and np.all(np.abs(self.comp_hi - other.comp_hi) <= tol))


def sample(spec: SetSpec, window: LogInterval, j: int,
           guard_bits: int = DEFAULT_GUARD_BITS) -> SampledSet:
    """Sample ``spec`` inside ``window`` for covering at scale ``2**-j``.

    An empty intersection gives a SampledSet with ``empty == True``.
    """
    if j < 0:
        raise ValueError("resolution j must be >= 0")
    if guard_bits < 2:
        raise ValueError("guard_bits must be >= 2")
    h = 2.0 ** (-(j + guard_bits))
    lo, hi = spec._components(window.lo, window.hi, h)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    keep = (hi >= window.lo) & (lo <= window.hi)
    lo = np.maximum(lo[keep], window.lo)
    hi = np.minimum(hi[keep], window.hi)
    return SampledSet(np.ascontiguousarray(lo), np.ascontiguousarray(hi), window, j,
                      guard_bits, spec.to_text())


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_KEYWORDS = {"full", "interval", "lacunary", "seq", "cantor", "points", "pointsfile",
             "union", "scale", "periodize", "window"}


class _Parser:
    def __init__(self, text: str, base_dir: Path | None = None):
        self.text = text
        self.pos = 0
        self.base_dir = base_dir

    def error(self, msg, pos=None):
        raise SpecSyntaxError(msg, self.pos if pos is None else pos, self.text)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, ch):
        self.skip_ws()
        return self.text.startswith(ch, self.pos)

    def expect(self, ch):
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            self.error(f"expected '{ch}'")
        self.pos += 1

    def name(self):
        self.skip_ws()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a name")
        self.pos = m.end()
        return m.group(0), m.start()

    def number(self):
        self.skip_ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return float(m.group(0))

    def kwargs(self, allowed):
        """Parse ``(k=v, ...)``; the opening paren is already consumed."""
        out = {}
        while True:
            key, at = self.name()
            if key not in allowed:
                self.error(f"unknown parameter '{key}'", at)
            if key in out:
                self.error(f"duplicate parameter '{key}'", at)
            self.expect("=")
            out[key] = self.number()
            if self.peek(","):
                self.pos += 1
                continue
            self.expect(")")
            return out

    def spec_list(self):
        items = [self.spec()]
        while self.peek(","):
            self.pos += 1
            items.append(self.spec())
        self.expect(")")
        return items

    def spec(self) -> SetSpec:
        word, at = self.name()
        if word not in _KEYWORDS:
            self.error(f"unknown set '{word}'", at)
        return self._build(word, at)

    def _build(self, word, at):
        if word == "full":
            return FullRay()
        if word == "lacunary":
            if self.peek("("):
                self.pos += 1
                kw = self.kwargs({"base"})
                return Lacunary(kw.get("base", 2.0))
            return Lacunary()
        self.expect("(")
        if word == "interval":
            kw = self.kwargs({"lo", "hi"})
            if set(kw) != {"lo", "hi"}:
                self.error("interval needs lo= and hi=")
            return FullInterval(kw["lo"], kw["hi"])
        if word == "seq":
            kw = self.kwargs({"a"})
            if "a" not in kw:
                self.error("seq needs a=")
            return SequenceSet(kw["a"])
        if word == "cantor":
            kw = self.kwargs({"ratio", "lo", "hi"})
            return Cantor(kw.get("ratio", 1.0 / 3.0), kw.get("lo", 1.0), kw.get("hi", 2.0))
        if word == "points":
            pts = [self.number()]
            while self.peek(","):
                self.pos += 1
                pts.append(self.number())
            self.expect(")")
            return ExplicitPoints(tuple(pts))
        if word == "pointsfile":
            self.skip_ws()
            end = self.text.find(")", self.pos)
            if end < 0:
                self.error("expected ')'")
            path = self.text[self.pos:end].strip().strip("'\"")
            self.pos = end + 1
            return ExplicitPoints(tuple(read_points_file(path, self.base_dir)))
        if word == "union":
            return Union(tuple(self.spec_list()))
        if word in ("scale", "window"):
            r = self.number()
            self.expect(",")
            inner = self.spec()
            self.expect(")")
            return Scale(r, inner) if word == "scale" else WindowRestrict(r, inner)
        if word == "periodize":
            inner = self.spec()
            self.expect(")")
            return Periodize(inner)
        self.error(f"unknown set '{word}'", at)  # pragma: no cover


def read_points_file(path: str | Path, base_dir: Path | None = None) -> list[float]:
    """One positive decimal per line; ``#`` starts a comment."""
    p = Path(path)
    if base_dir is not None and not p.is_absolute():
        p = base_dir / p
    values = []
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = float(line)
        except ValueError:
            raise SpecParameterError(f"{p}:{lineno}: not a number: {line!r}") from None
        if not (v > 0 and math.isfinite(v)):
            raise SpecParameterError(f"{p}:{lineno}: radius must be positive, got {v}")
        values.append(v)
    if not values:
        raise SpecParameterError(f"{p}: no radii found")
    return values


def parse_set_spec(text: str, base_dir: Path | None = None) -> SetSpec:
    """Parse the ASCII set grammar into a validated spec tree.

    >>> parse_set_spec("seq(a=1.0)")
    SequenceSet(a=1.0)
    """
    parser = _Parser(text, base_dir)
    spec = parser.spec()
    parser.skip_ws()
    if parser.pos != len(text):
        parser.error("unexpected trailing input")
    return spec


def from_points(points: Sequence[float]) -> ExplicitPoints:
    return ExplicitPoints(tuple(points))
