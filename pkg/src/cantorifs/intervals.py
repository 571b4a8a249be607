"""Exact arithmetic on finite unions of closed subintervals of [0, 1].

Everything downstream (fundamental domains, holes, ruination regions, the
appendix Λ recursion, orbit covers) is carried by these two types.  Sets are
normalized eagerly: parts sorted, touching/overlapping parts merged, so the
invariants hold everywhere and measure/distance can be computed exactly from
the representation rather than by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import SpecError

#: Endpoints closer than this are treated as equal and parts merged.  All
#: downstream sets come from floating-point map evaluation, so exact endpoint
#: comparisons would be meaningless.
MERGE_EPS = 1e-9


@dataclass(frozen=True)
class Tolerance:
    """Numeric slack knobs shared across the library.

    eps_geom   -- point/endpoint comparison slack.
    eps_newton -- inverse-evaluation convergence target.
    max_iter   -- guard on iterative loops.
    """

    eps_geom: float = 1e-9
    eps_newton: float = 1e-12
    max_iter: int = 100

    def __post_init__(self) -> None:
        if not (0.0 < self.eps_newton <= self.eps_geom < 1e-3):
            raise SpecError(
                f"need 0 < eps_newton <= eps_geom < 1e-3, got "
                f"eps_newton={self.eps_newton}, eps_geom={self.eps_geom}"
            )
        if self.max_iter < 1:
            raise SpecError("max_iter must be positive")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval [lo, hi] ⊂ [0, 1]; degenerate (lo == hi) allowed."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo <= self.hi):
            raise SpecError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def contains_interval(self, other: "Interval", margin: float = 0.0) -> bool:
        return self.lo + margin <= other.lo and other.hi <= self.hi - margin

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def shrink(self, margin: float) -> "Interval":
        """The interval with `margin` trimmed off both ends."""
        if 2.0 * margin > self.length:
            raise SpecError(f"cannot shrink {self} by {margin}")
        return Interval(self.lo + margin, self.hi - margin)

    def middle_third(self) -> "Interval":
        third = self.length / 3.0
        return Interval(self.lo + third, self.hi - third)

    def __str__(self) -> str:
        return f"[{self.lo:.12g}, {self.hi:.12g}]"


def _normalize(los: np.ndarray, his: np.ndarray, eps: float) -> tuple[np.ndarray, np.ndarray]:
    if los.size == 0:
        return los, his
    order = np.argsort(los, kind="stable")
    los, his = los[order], his[order]
    # Sweep-merge: a new run starts where lo exceeds the running max hi + eps.
    run_hi = np.maximum.accumulate(his)
    new_run = np.empty(los.size, dtype=bool)
    new_run[0] = True
    new_run[1:] = los[1:] > run_hi[:-1] + eps
    idx = np.flatnonzero(new_run)
    out_lo = los[idx]
    out_hi = np.maximum.reduceat(his, idx)
    return out_lo, out_hi


class IntervalSet:
    """Finite union of disjoint closed intervals, sorted by lo ascending.

    Parts separated by less than `merge_eps` are merged on construction, so
    consecutive parts always have strictly positive gaps.  Instances are
    immutable (backing arrays are non-writeable) and safe to share.
    """

    __slots__ = ("los", "his", "merge_eps")

    def __init__(
        self,
        parts: Iterable[Interval | tuple[float, float]] | None = None,
        *,
        los: np.ndarray | None = None,
        his: np.ndarray | None = None,
        merge_eps: float = MERGE_EPS,
    ) -> None:
        if los is None:
            pl: list[float] = []
            ph: list[float] = []
            for p in parts or ():
                if isinstance(p, Interval):
                    pl.append(p.lo)
                    ph.append(p.hi)
                else:
                    lo, hi = p
                    if hi < lo:
                        raise SpecError(f"bad part ({lo}, {hi})")
                    pl.append(float(lo))
                    ph.append(float(hi))
            los = np.asarray(pl, dtype=float)
            his = np.asarray(ph, dtype=float)
        los, his = _normalize(np.asarray(los, dtype=float), np.asarray(his, dtype=float), merge_eps)
        los.setflags(write=False)
        his.setflags(write=False)
        self.los = los
        self.his = his
        self.merge_eps = merge_eps

    # -- basic queries ----------------------------------------------------

    @property
    def parts(self) -> list[Interval]:
        return [Interval(lo, hi) for lo, hi in zip(self.los, self.his)]

    @property
    def n_parts(self) -> int:
        return int(self.los.size)

    def is_empty(self) -> bool:
        return self.los.size == 0

    def measure(self) -> float:
        """Exact Lebesgue measure of the normalized representation."""
        return math.fsum((self.his - self.los).tolist()) if self.los.size else 0.0

    def span(self) -> Interval:
        if self.is_empty():
            raise SpecError("span of empty set")
        return Interval(float(self.los[0]), float(self.his[-1]))

    def contains_point(self, x: float, slack: float = 0.0) -> bool:
        i = int(np.searchsorted(self.los, x, side="right")) - 1
        if i < 0:
            return self.los.size > 0 and x >= self.los[0] - slack
        if x <= self.his[i] + slack:
            return True
        return i + 1 < self.los.size and x >= self.los[i + 1] - slack

    def contains_points(self, xs: np.ndarray, slack: float = 0.0) -> np.ndarray:
        """Vectorized membership for an array of points."""
        if self.is_empty():
            return np.zeros(np.shape(xs), dtype=bool)
        i = np.searchsorted(self.los, xs, side="right") - 1
        i_cl = np.clip(i, 0, self.los.size - 1)
        inside = (i >= 0) & (xs <= self.his[i_cl] + slack)
        # Points just left of a part start, within slack.
        j = np.clip(i + 1, 0, self.los.size - 1)
        near_next = (i + 1 < self.los.size) & (xs >= self.los[j] - slack) & (xs <= self.his[j] + slack)
        return inside | near_next

    def part_containing(self, x: float, slack: float = 0.0) -> Interval | None:
        i = int(np.searchsorted(self.los, x, side="right")) - 1
        for k in (i, i + 1):
            if 0 <= k < self.los.size and self.los[k] - slack <= x <= self.his[k] + slack:
                return Interval(float(self.los[k]), float(self.his[k]))
        return None

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.parts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return (
            self.los.shape == other.los.shape
            and bool(np.all(self.los == other.los))
            and bool(np.all(self.his == other.his))
        )

    def __repr__(self) -> str:
        inner = ", ".join(f"[{lo:.9g},{hi:.9g}]" for lo, hi in zip(self.los, self.his))
        return f"IntervalSet({{{inner}}})"

    # -- set algebra -------------------------------------------------------

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(
            los=np.concatenate([self.los, other.los]),
            his=np.concatenate([self.his, other.his]),
            merge_eps=min(self.merge_eps, other.merge_eps),
        )

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        if self.is_empty() or other.is_empty():
            return IntervalSet([], merge_eps=min(self.merge_eps, other.merge_eps))
        # Two-pointer sweep over sorted disjoint parts.
        out_lo, out_hi = [], []
        i = j = 0
        while i < self.los.size and j < other.los.size:
            lo = max(self.los[i], other.los[j])
            hi = min(self.his[i], other.his[j])
            if lo <= hi:
                out_lo.append(lo)
                out_hi.append(hi)
            if self.his[i] < other.his[j]:
                i += 1
            else:
                j += 1
        return IntervalSet(
            los=np.asarray(out_lo), his=np.asarray(out_hi),
            merge_eps=min(self.merge_eps, other.merge_eps),
        )

    def complement(self, within: Interval = Interval(0.0, 1.0)) -> "IntervalSet":
        """Closure of `within` minus this set."""
        out: list[tuple[float, float]] = []
        cursor = within.lo
        for lo, hi in zip(self.los, self.his):
            if hi < within.lo or lo > within.hi:
                continue
            if lo > cursor:
                out.append((cursor, min(lo, within.hi)))
            cursor = max(cursor, hi)
        if cursor < within.hi:
            out.append((cursor, within.hi))
        return IntervalSet(out, merge_eps=self.merge_eps)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        if self.is_empty():
            return self
        return self.intersect(other.complement(self.span()))

    def dilate(self, r: float, clip: Interval = Interval(0.0, 1.0)) -> "IntervalSet":
        if r < 0:
            raise SpecError("dilate needs r >= 0")
        return IntervalSet(
            los=np.maximum(self.los - r, clip.lo),
            his=np.minimum(self.his + r, clip.hi),
            merge_eps=self.merge_eps,
        )

    def contract(self, r: float) -> "IntervalSet":
        """Shrink every part by r at both ends, dropping emptied parts."""
        if r < 0:
            raise SpecError("contract needs r >= 0")
        los, his = self.los + r, self.his - r
        keep = los <= his
        return IntervalSet(los=los[keep], his=his[keep], merge_eps=self.merge_eps)


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.union(b)


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.intersect(b)


def measure(a: IntervalSet) -> float:
    return a.measure()


def contained_in_interior(a: IntervalSet, b: IntervalSet, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every part of `a` sits inside int(b) with margin >= eps_geom.

    `b` is normalized, so its parts are maximal covering runs; interiority
    with margin is exactly containment in b contracted by eps_geom.
    """
    if a.is_empty():
        return True
    core = b.contract(tol.eps_geom)
    if core.is_empty():
        return False
    i = np.searchsorted(core.los, a.los, side="right") - 1
    if np.any(i < 0):
        return False
    return bool(np.all(a.his <= core.his[i]))


def _dist_to_set(xs: np.ndarray, s: IntervalSet) -> np.ndarray:
    """Distance from each point to the closed set s (exact)."""
    pts = np.stack([s.los, s.his], axis=1).ravel()  # sorted part endpoints
    i = np.clip(np.searchsorted(pts, xs), 1, pts.size - 1)
    d = np.minimum(np.abs(xs - pts[i - 1]), np.abs(xs - pts[i]))
    return np.where(s.contains_points(xs), 0.0, d)


def hausdorff_distance(a: IntervalSet, b: IntervalSet) -> float:
    """Hausdorff distance between two non-empty closed interval unions.

    sup_{x∈a} d(x, b) is attained either at a part endpoint of `a` or at a
    gap midpoint of `b` lying inside `a` (d(·, b) is piecewise V-shaped), so
    finitely many candidates give the exact value.
    """
    if a.is_empty() or b.is_empty():
        raise SpecError("hausdorff_distance needs non-empty sets")

    def one_sided(x: IntervalSet, y: IntervalSet) -> float:
        cands = [x.los, x.his]
        if y.n_parts > 1:
            gap_mids = 0.5 * (y.his[:-1] + y.los[1:])
            inside = x.contains_points(gap_mids)
            cands.append(gap_mids[inside])
        pts = np.concatenate(cands)
        return float(np.max(_dist_to_set(pts, y))) if pts.size else 0.0

    return max(one_sided(a, b), one_sided(b, a))


# -- CSV interchange -------------------------------------------------------


def to_csv(s: IntervalSet) -> str:
    """One `lo,hi` line per part, 17 significant digits."""
    return "".join(f"{lo:.17g},{hi:.17g}\n" for lo, hi in zip(s.los, s.his))


def from_csv(text: str, merge_eps: float = MERGE_EPS) -> IntervalSet:
    parts = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lo_s, hi_s = line.split(",")
        parts.append((float(lo_s), float(hi_s)))
    return IntervalSet(parts, merge_eps=merge_eps)
