"""Piecewise monotone C1 self-maps of [0, 1].

Segments are either affine (value = slope*x + intercept, global coordinates)
or cubic Hermite (endpoint values and derivatives in local coordinates).
Affine pieces reproduce the base pair and the epsilon-family exactly; Hermite
pieces realize the C1 bump modifications and connector joins with
controllable endpoint derivatives.

Composition-word convention: the RIGHTMOST letter acts first, so "FG" applied
to x means f(g(x)).  The convention is fixed globally; mixing conventions is
the classic way to produce silently wrong orbits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, IterationCapError, RangeError, SpecError
from .intervals import DEFAULT_TOL, Interval, IntervalSet, Tolerance

#: Accepted derivative mismatch at internal breakpoints ("C1 within
#: tolerance"): constructed joins are exact in exact arithmetic, this absorbs
#: rounding.
C1_DERIV_TOL = 1e-6
#: Accepted value mismatch at internal breakpoints.
C0_VALUE_TOL = 1e-9


@dataclass(frozen=True)
class Affine:
    slope: float
    intercept: float

    def value(self, x: float) -> float:
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class CubicHermite:
    """Hermite data on [x_lo, x_hi]: values y_lo, y_hi; derivatives d_lo, d_hi."""

    y_lo: float
    y_hi: float
    d_lo: float
    d_hi: float


@dataclass(frozen=True)
class Segment:
    x_lo: float
    x_hi: float
    kind: Affine | CubicHermite

    def __post_init__(self) -> None:
        if not (self.x_lo < self.x_hi):
            raise SpecError(f"segment needs x_lo < x_hi, got [{self.x_lo}, {self.x_hi}]")
        k = self.kind
        if isinstance(k, Affine):
            if k.slope <= 0:
                raise SpecError(f"affine segment needs positive slope, got {k.slope}")
        else:
            if k.d_lo <= 0 or k.d_hi <= 0 or not (k.y_lo < k.y_hi):
                raise SpecError("hermite segment needs d_lo, d_hi > 0 and y_lo < y_hi")
            if _hermite_min_deriv(self) <= 0:
                raise SpecError("hermite segment is not strictly increasing")

    @property
    def width(self) -> float:
        return self.x_hi - self.x_lo

    def coeffs(self) -> tuple[float, float, float, float]:
        """Cubic coefficients c0..c3 in t = x - x_lo (affine has c2 = c3 = 0)."""
        k = self.kind
        if isinstance(k, Affine):
            return (k.slope * self.x_lo + k.intercept, k.slope, 0.0, 0.0)
        h = self.width
        delta = (k.y_hi - k.y_lo) / h
        c2 = (3.0 * delta - 2.0 * k.d_lo - k.d_hi) / h
        c3 = (k.d_lo + k.d_hi - 2.0 * delta) / (h * h)
        return (k.y_lo, k.d_lo, c2, c3)

    def value_at(self, x: float) -> float:
        c0, c1, c2, c3 = self.coeffs()
        t = x - self.x_lo
        return ((c3 * t + c2) * t + c1) * t + c0

    def deriv_at(self, x: float) -> float:
        c0, c1, c2, c3 = self.coeffs()
        t = x - self.x_lo
        return (3.0 * c3 * t + 2.0 * c2) * t + c1

    @property
    def y_lo(self) -> float:
        return self.value_at(self.x_lo)

    @property
    def y_hi(self) -> float:
        k = self.kind
        return k.y_hi if isinstance(k, CubicHermite) else k.value(self.x_hi)


def _hermite_min_deriv(seg: Segment) -> float:
    """Minimum of the (quadratic) derivative of a Hermite segment over it."""
    c0, c1, c2, c3 = seg.coeffs()
    h = seg.width
    ends = min(c1, (3.0 * c3 * h + 2.0 * c2) * h + c1)
    if c3 == 0.0:
        return ends
    t_star = -c2 / (3.0 * c3)
    if 0.0 < t_star < h:
        return min(ends, (3.0 * c3 * t_star + 2.0 * c2) * t_star + c1)
    return ends


def hermite_linear_deriv(x_lo: float, x_hi: float, y_lo: float, d_lo: float, d_hi: float) -> Segment:
    """Hermite segment whose derivative is *linear* from d_lo to d_hi.

    Choosing the rise as the slope average times the width makes the cubic's
    derivative exactly linear, hence positive whenever both end slopes are:
    monotone by construction.
    """
    y_hi = y_lo + 0.5 * (d_lo + d_hi) * (x_hi - x_lo)
    return Segment(x_lo, x_hi, CubicHermite(y_lo, y_hi, d_lo, d_hi))


@dataclass(frozen=True)
class MapSpec:
    """Strictly increasing piecewise map covering [0, 1] without gaps."""

    segments: tuple[Segment, ...]
    label: str = ""

    def __post_init__(self) -> None:
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise SpecError("MapSpec needs at least one segment")
        if abs(segs[0].x_lo) > 1e-12 or abs(segs[-1].x_hi - 1.0) > 1e-12:
            raise SpecError("segments must cover [0, 1]")
        for a, b in zip(segs, segs[1:]):
            if abs(a.x_hi - b.x_lo) > 1e-12:
                raise SpecError(f"segments must abut: {a.x_hi} vs {b.x_lo}")
            if abs(a.y_hi - b.y_lo) > C0_VALUE_TOL:
                raise SpecError(f"value jump {a.y_hi - b.y_lo:.3g} at x={b.x_lo}")
            dl, dr = a.deriv_at(a.x_hi), b.deriv_at(b.x_lo)
            if abs(dl - dr) > C1_DERIV_TOL * max(1.0, abs(dl), abs(dr)):
                raise SpecError(f"derivative jump {dl:.6g} vs {dr:.6g} at x={b.x_lo}")

    # -- cached vectorized form -------------------------------------------

    @cached_property
    def _bps(self) -> np.ndarray:
        a = np.array([s.x_lo for s in self.segments])
        a.setflags(write=False)
        return a

    @cached_property
    def _coeffs(self) -> np.ndarray:
        a = np.array([s.coeffs() for s in self.segments])  # (n, 4)
        a.setflags(write=False)
        return a

    @cached_property
    def _break_ys(self) -> np.ndarray:
        a = np.array([s.y_lo for s in self.segments] + [self.segments[-1].y_hi])
        a.setflags(write=False)
        return a

    def _seg_index(self, x: float) -> int:
        # side="left" returns the LEFT segment at an internal breakpoint.
        i = int(np.searchsorted(self._bps, x, side="left")) - 1
        return min(max(i, 0), len(self.segments) - 1)

    # -- scalar evaluation ---------------------------------------------------

    def _check_domain(self, x: float) -> float:
        if x < -1e-12 or x > 1.0 + 1e-12:
            raise DomainError(f"x={x} outside [0, 1]")
        return min(max(x, 0.0), 1.0)

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def eval(self, x: float) -> float:
        x = self._check_domain(x)
        return self.segments[self._seg_index(x)].value_at(x)

    def deriv(self, x: float) -> float:
        x = self._check_domain(x)
        return self.segments[self._seg_index(x)].deriv_at(x)

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if xs.size and (xs.min() < -1e-12 or xs.max() > 1.0 + 1e-12):
            raise DomainError("array evaluation outside [0, 1]")
        xc = np.clip(xs, 0.0, 1.0)
        i = np.clip(np.searchsorted(self._bps, xc, side="left") - 1, 0, len(self.segments) - 1)
        c = self._coeffs[i]
        t = xc - self._bps[i]
        return ((c[..., 3] * t + c[..., 2]) * t + c[..., 1]) * t + c[..., 0]

    # -- inversion -----------------------------------------------------------

    @property
    def y0(self) -> float:
        return self.segments[0].y_lo

    @property
    def y1(self) -> float:
        return self.segments[-1].y_hi

    def inverse_eval(self, y: float, tol: Tolerance = DEFAULT_TOL) -> float:
        """The unique x with eval(x) = y, by segment bracketing plus Newton
        with bisection safeguard.  Iterates past eps_newton down to machine
        precision when cheap, so inverse errors do not accumulate along long
        inverse-word compositions."""
        if y < self.y0 - 1e-12 or y > self.y1 + 1e-12:
            raise RangeError(f"y={y} outside image [{self.y0}, {self.y1}]")
        y = min(max(y, self.y0), self.y1)
        j = int(np.searchsorted(self._break_ys, y, side="left")) - 1
        j = min(max(j, 0), len(self.segments) - 1)
        seg = self.segments[j]
        if isinstance(seg.kind, Affine):
            return (y - seg.kind.intercept) / seg.kind.slope
        a, b = seg.x_lo, seg.x_hi
        x = 0.5 * (a + b)
        for _ in range(tol.max_iter):
            fx = seg.value_at(x) - y
            if fx == 0.0:
                return x
            if fx > 0:
                b = x
            else:
                a = x
            dfx = seg.deriv_at(x)
            step = fx / dfx if dfx > 0 else math.inf
            # converged: residual within target and the Newton correction is
            # at rounding scale; returning *this* x, never a fallback point
            if abs(fx) <= tol.eps_newton and abs(step) <= 4.0 * math.ulp(x):
                return x
            x_new = x - step
            if not (a < x_new < b):
                x_new = 0.5 * (a + b)
            if x_new == x:
                return x
            x = x_new
        if abs(seg.value_at(x) - y) > tol.eps_newton:
            raise IterationCapError(f"inverse_eval stalled at y={y}")
        return x

    def inverse_array(self, ys: np.ndarray, iters: int = 60) -> np.ndarray:
        """Vectorized inversion by bisection inside located segments."""
        ys = np.asarray(ys, dtype=float)
        if ys.size and (ys.min() < self.y0 - 1e-12 or ys.max() > self.y1 + 1e-12):
            raise RangeError("array inversion outside image")
        yc = np.clip(ys, self.y0, self.y1)
        j = np.clip(np.searchsorted(self._break_ys, yc, side="left") - 1, 0, len(self.segments) - 1)
        lo = self._bps[j]
        hi = np.append(self._bps[1:], 1.0)[j]
        c = self._coeffs[j]
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            t = mid - self._bps[j]
            val = ((c[..., 3] * t + c[..., 2]) * t + c[..., 1]) * t + c[..., 0]
            too_big = val > yc
            hi = np.where(too_big, mid, hi)
            lo = np.where(too_big, lo, mid)
        return 0.5 * (lo + hi)

    # -- structure helpers -----------------------------------------------------

    def breakpoints(self) -> list[float]:
        return [s.x_lo for s in self.segments[1:]]

    def image_of(self, iv: Interval) -> Interval:
        return Interval(self.eval(iv.lo), self.eval(iv.hi))

    def image_of_set(self, s: IntervalSet) -> IntervalSet:
        return IntervalSet(
            los=self.eval_array(s.los), his=self.eval_array(s.his), merge_eps=s.merge_eps
        )

    def preimage_of(self, iv: Interval, tol: Tolerance = DEFAULT_TOL) -> Interval:
        return Interval(self.inverse_eval(iv.lo, tol), self.inverse_eval(iv.hi, tol))


def identity_spec() -> MapSpec:
    return MapSpec((Segment(0.0, 1.0, Affine(1.0, 0.0)),), label="id")


def affine_spec(slope: float, intercept: float, label: str = "") -> MapSpec:
    return MapSpec((Segment(0.0, 1.0, Affine(slope, intercept)),), label=label)


def iterate(m: MapSpec, n: int, x: float) -> float:
    if n < 0:
        raise DomainError("iterate needs n >= 0")
    for _ in range(n):
        x = m.eval(x)
    return x


def iterate_interval(m: MapSpec, n: int, iv: Interval) -> Interval:
    for _ in range(n):
        iv = m.image_of(iv)
    return iv


# -- words -------------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    """Composition word over {F, G}; rightmost letter acts first."""

    letters: str = ""

    def __post_init__(self) -> None:
        if any(ch not in "FG" for ch in self.letters):
            raise SpecError(f"word letters must be F or G, got {self.letters!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters


def apply_word(f: MapSpec, g: MapSpec, w: Word | str, x: float) -> float:
    letters = w.letters if isinstance(w, Word) else Word(w).letters
    for ch in reversed(letters):
        x = f.eval(x) if ch == "F" else g.eval(x)
    return x


# -- diagonal symmetry ---------------------------------------------------------


def symmetry_conjugate(m: MapSpec) -> MapSpec:
    """The map x -> 1 - m(1 - x), segments reflected about the diagonal."""
    out: list[Segment] = []
    for s in reversed(m.segments):
        x_lo, x_hi = 1.0 - s.x_hi, 1.0 - s.x_lo
        k = s.kind
        if isinstance(k, Affine):
            out.append(Segment(x_lo, x_hi, Affine(k.slope, 1.0 - k.slope - k.intercept)))
        else:
            out.append(Segment(x_lo, x_hi, CubicHermite(1.0 - k.y_hi, 1.0 - k.y_lo, k.d_hi, k.d_lo)))
    label = m.label and f"conj({m.label})"
    return MapSpec(tuple(out), label=label)


def symmetry_residual(f: MapSpec, g: MapSpec, n: int = 1001) -> float:
    """max over a grid of |1 - f(1-x) - g(x)|."""
    xs = np.linspace(0.0, 1.0, n)
    return float(np.max(np.abs(1.0 - f.eval_array(1.0 - xs) - g.eval_array(xs))))


# -- affine conjugation (used by the castration surgery) ---------------------------


def conjugate_segment(s: Segment, a1: float, b1: float, a2: float, b2: float) -> Segment:
    """The segment of x -> A2(s(A1(x))) with A1, A2 increasing affine maps.

    A1(x) = a1*x + b1 maps the new domain onto [s.x_lo, s.x_hi]; the result is
    again affine/Hermite because cubics are closed under affine conjugation.
    """
    if a1 <= 0 or a2 <= 0:
        raise SpecError("conjugation needs increasing affine maps")
    x_lo = (s.x_lo - b1) / a1
    x_hi = (s.x_hi - b1) / a1
    k = s.kind
    if isinstance(k, Affine):
        # A2(k(A1(x))) = a2*k.slope*a1 * x + a2*(k.slope*b1 + k.intercept) + b2
        return Segment(x_lo, x_hi, Affine(a2 * k.slope * a1, a2 * (k.slope * b1 + k.intercept) + b2))
    return Segment(
        x_lo,
        x_hi,
        CubicHermite(a2 * k.y_lo + b2, a2 * k.y_hi + b2, a1 * a2 * k.d_lo, a1 * a2 * k.d_hi),
    )


# -- validation report (structural; class-A validation lives in ifs) ------------


def check_c1(m: MapSpec) -> dict:
    """Breakpoint continuity summary: max value jump and derivative jump."""
    vjump = djump = 0.0
    for a, b in zip(m.segments, m.segments[1:]):
        vjump = max(vjump, abs(a.y_hi - b.y_lo))
        djump = max(djump, abs(a.deriv_at(a.x_hi) - b.deriv_at(b.x_lo)))
    return {"max_value_jump": vjump, "max_deriv_jump": djump}


# -- serialization ------------------------------------------------------------


def _seg_to_dict(s: Segment) -> dict:
    k = s.kind
    if isinstance(k, Affine):
        return {"x_lo": s.x_lo, "x_hi": s.x_hi, "kind": "affine",
                "slope": k.slope, "intercept": k.intercept}
    return {"x_lo": s.x_lo, "x_hi": s.x_hi, "kind": "cubic_hermite",
            "y_lo": k.y_lo, "y_hi": k.y_hi, "d_lo": k.d_lo, "d_hi": k.d_hi}


def _seg_from_dict(d: dict) -> Segment:
    if d["kind"] == "affine":
        return Segment(d["x_lo"], d["x_hi"], Affine(d["slope"], d["intercept"]))
    if d["kind"] == "cubic_hermite":
        return Segment(d["x_lo"], d["x_hi"], CubicHermite(d["y_lo"], d["y_hi"], d["d_lo"], d["d_hi"]))
    raise SpecError(f"unknown segment kind {d['kind']!r}")


def spec_to_dict(m: MapSpec) -> dict:
    return {"label": m.label, "segments": [_seg_to_dict(s) for s in m.segments]}


def spec_from_dict(d: dict) -> MapSpec:
    return MapSpec(tuple(_seg_from_dict(s) for s in d["segments"]), label=d.get("label", ""))


def pair_to_json(f: MapSpec, g: MapSpec) -> str:
    doc = {"format": "cantorifs-pair", "version": 1,
           "f": spec_to_dict(f), "g": spec_to_dict(g)}
    return json.dumps(doc, indent=1)


def pair_from_json(text: str) -> tuple[MapSpec, MapSpec]:
    doc = json.loads(text)
    if doc.get("format") != "cantorifs-pair":
        raise SpecError("not a cantorifs pair file")
    return spec_from_dict(doc["f"]), spec_from_dict(doc["g"])
