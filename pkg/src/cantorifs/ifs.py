"""The IFS pair itself: class membership, fundamental domains, semigroup
orbits and finite approximations of the unique minimal set.

Class membership means, for C1 diffeomorphisms-onto-image f, g of [0, 1]:
f(0) = 0, g(1) = 1, f(x) < x < g(x) on (0, 1), and 0 < g(0) < f(1) < 1.
Such a pair has a unique minimal set K equal to the closure of the orbit of 0
(and of 1); the overlap region is W = [g(0), f(1)].

Membership of "f(x) < x < g(x) on (0,1)" is checked on a uniform grid plus
all breakpoints.  With a few piecewise-monotone segments this is reliable in
practice, but it is sampling, not a proof; reports say so.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DomainError, ResourceCapError, SpecError
from .intervals import DEFAULT_TOL, Interval, IntervalSet, Tolerance
from .maps import MapSpec, iterate

#: Hard cap on deduplicated orbit size.
ORBIT_CAP = 10_000_000


@dataclass(frozen=True)
class IFSPair:
    """A pair (f, g) together with its overlap region W = [g(0), f(1)].

    Construction does not re-run class-A validation; `validate_class_a` is
    the checked entry point and fills `overlap` consistently.  Direct
    construction is allowed for toys and negative controls.
    """

    f: MapSpec
    g: MapSpec
    overlap: Interval
    tol: Tolerance = DEFAULT_TOL

    @staticmethod
    def of(f: MapSpec, g: MapSpec, tol: Tolerance = DEFAULT_TOL) -> "IFSPair":
        return IFSPair(f, g, Interval(g.eval(0.0), f.eval(1.0)), tol)


@dataclass(frozen=True)
class Violation:
    bullet: str
    witness: float
    detail: str


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    pair: IFSPair | None
    violations: tuple[Violation, ...]
    grid_n: int

    def as_pair(self) -> IFSPair:
        if not self.ok or self.pair is None:
            raise SpecError("pair failed class-A validation: " + "; ".join(
                f"{v.bullet} (witness x={v.witness:.12g}: {v.detail})" for v in self.violations))
        return self.pair

    def to_text(self) -> str:
        lines = [f"class_a: {'ok' if self.ok else 'violated'}", f"grid_n: {self.grid_n}"]
        for v in self.violations:
            lines.append(f"violation: {v.bullet}")
            lines.append(f"  witness: {v.witness:.17g}")
            lines.append(f"  detail: {v.detail}")
        if self.ok and self.pair is not None:
            w = self.pair.overlap
            lines.append(f"overlap_W: [{w.lo:.17g}, {w.hi:.17g}]")
        return "\n".join(lines) + "\n"


def validate_class_a(
    f: MapSpec, g: MapSpec, grid_n: int = 10_000, tol: Tolerance = DEFAULT_TOL
) -> ValidationResult:
    """Check the class-A bullets in order; violations are data, not faults."""
    eps = tol.eps_geom
    violations: list[Violation] = []

    if abs(f.eval(0.0)) > eps:
        violations.append(Violation("f(0) = 0", 0.0, f"f(0) = {f.eval(0.0):.3g}"))
    if abs(g.eval(1.0) - 1.0) > eps:
        violations.append(Violation("g(1) = 1", 1.0, f"g(1) = {g.eval(1.0):.3g}"))

    if not violations:
        xs = np.linspace(0.0, 1.0, grid_n + 1)[1:-1]
        xs = np.unique(np.concatenate([
            xs,
            [b for b in f.breakpoints() if 0.0 < b < 1.0],
            [b for b in g.breakpoints() if 0.0 < b < 1.0],
        ]))
        fx, gx = f.eval_array(xs), g.eval_array(xs)
        bad_f = np.flatnonzero(xs - fx < eps)
        if bad_f.size:
            x = float(xs[bad_f[0]])
            violations.append(Violation("f(x) < x", x, f"x - f(x) = {x - f.eval(x):.3g}"))
        bad_g = np.flatnonzero(gx - xs < eps)
        if bad_g.size:
            x = float(xs[bad_g[0]])
            violations.append(Violation("x < g(x)", x, f"g(x) - x = {g.eval(x) - x:.3g}"))

    if not violations:
        g0, f1 = g.eval(0.0), f.eval(1.0)
        if not (g0 > eps and f1 - g0 > eps and 1.0 - f1 > eps):
            violations.append(Violation(
                "0 < g(0) < f(1) < 1", 0.0, f"g(0) = {g0:.12g}, f(1) = {f1:.12g}"))

    if violations:
        return ValidationResult(False, None, tuple(violations), grid_n)
    return ValidationResult(True, IFSPair.of(f, g, tol), (), grid_n)


def fundamental_domain(p: IFSPair, which: Literal["f", "g"], n: int) -> Interval:
    """F_n = [f^(n+1)(1), f^n(1)] or G_n = [g^n(0), g^(n+1)(0)]."""
    if n < 0:
        raise DomainError("fundamental_domain needs n >= 0")
    if which == "f":
        return Interval(iterate(p.f, n + 1, 1.0), iterate(p.f, n, 1.0))
    if which == "g":
        return Interval(iterate(p.g, n, 0.0), iterate(p.g, n + 1, 0.0))
    raise DomainError(f"which must be 'f' or 'g', got {which!r}")


# -- orbits ---------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitCloud:
    """Deduplicated images of `seed` under all words of length <= depth."""

    points: np.ndarray
    depth: int
    seed: float
    dedup_eps: float

    def __post_init__(self) -> None:
        self.points.setflags(write=False)

    @property
    def size(self) -> int:
        return int(self.points.size)

    def contains(self, x: float, slack: float) -> bool:
        i = int(np.searchsorted(self.points, x))
        for k in (i - 1, i):
            if 0 <= k < self.points.size and abs(self.points[k] - x) <= slack:
                return True
        return False

    def min_distance(self, xs: np.ndarray) -> np.ndarray:
        i = np.clip(np.searchsorted(self.points, xs), 1, self.points.size - 1)
        return np.minimum(np.abs(xs - self.points[i - 1]), np.abs(xs - self.points[i]))


def _dedup_sorted(pts: np.ndarray, eps: float) -> np.ndarray:
    """Resolution-eps dedup on a sorted array: bucket by floor(x/eps) and
    keep the first point of each bucket.  Representatives are exact orbit
    values and every dropped point is within eps of its representative."""
    if pts.size == 0 or eps <= 0.0:
        return np.unique(pts)
    keys = np.floor(pts / eps).astype(np.int64)
    _, first = np.unique(keys, return_index=True)
    return pts[first]


def orbit(
    p: IFSPair,
    seed: float,
    depth: int,
    dedup_eps: float | None = None,
    cap: int = ORBIT_CAP,
) -> OrbitCloud:
    """Breadth-first enumeration of word images, deduplicated per level.

    The result is a deterministic sorted set: cloud(depth d) is (within
    dedup_eps) a subset of cloud(depth d+1).
    """
    if not (0.0 <= seed <= 1.0):
        raise DomainError(f"seed {seed} outside [0, 1]")
    if depth < 0:
        raise DomainError("depth must be >= 0")
    eps = p.tol.eps_geom if dedup_eps is None else dedup_eps

    level = np.array([seed])
    all_pts = level
    for _ in range(depth):
        level = np.concatenate([p.f.eval_array(level), p.g.eval_array(level)])
        all_pts = np.sort(np.concatenate([all_pts, level]))
        all_pts = _dedup_sorted(all_pts, eps)
        level = _dedup_sorted(np.sort(level), eps)
        if all_pts.size > cap:
            raise ResourceCapError(f"orbit exceeds cap of {cap} points")
    return OrbitCloud(all_pts, depth, seed, eps)


def orbit_bruteforce(p: IFSPair, seed: float, depth: int) -> np.ndarray:
    """Independent oracle: recursive enumeration over all <= 2^depth words."""
    out: list[float] = []

    def rec(x: float, d: int) -> None:
        out.append(x)
        if d == 0:
            return
        rec(p.f.eval(x), d - 1)
        rec(p.g.eval(x), d - 1)

    rec(seed, depth)
    return np.sort(np.asarray(out))


def minimal_set_cover(
    p: IFSPair, depth: int, resolution: float, seed: float = 0.0
) -> IntervalSet:
    """Union of radius-`resolution` intervals around the depth-d orbit of
    `seed`, clipped to [0, 1].  An outer cover of a finite *sample* of K, not
    of K itself; downstream claims are phrased against the sample."""
    if depth < 1:
        raise DomainError("minimal_set_cover needs depth >= 1")
    if resolution <= 0:
        raise DomainError("resolution must be positive")
    cloud = orbit(p, seed, depth)
    return IntervalSet(
        los=np.maximum(cloud.points - resolution, 0.0),
        his=np.minimum(cloud.points + resolution, 1.0),
    )
