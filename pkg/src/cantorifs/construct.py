"""Construction pipeline for a certified pair with all four properties, plus
the appendix example with its measure bound.

Pipeline stages, in data-dependency order:

1. base pair: f*(x) = x/2, g*(x) = x/2 + 1/2 (degenerate overlap).
2. bump modification: steepen f* on the window around q = 2/3 (whose image
   is near p = 1/3) and mirror onto g*; the composition f0∘g0 then contracts
   J_p onto a fixed interval H_p with non-empty interior that contains the
   inner window.  Modifying literally on J_p (for f) and J_q (for g) cannot
   work: each map would halve lengths on the other's inner window and the two
   required containments are jointly unsatisfiable.
3. epsilon family: replace the corner of f0 on (1-k, 1) by an affine piece of
   slope 1/2 + eps (C1-bridged over a sub-window of width k/50 so the family
   stays C1 while f_eps(1) = 1/2 + eps*k holds exactly), g_eps symmetric.
   The overlap is W = [1/2 - eps*k, 1/2 + eps*k].
4. parameter search: eps with f_eps^{-1}(g_eps(0)) in the middle of
   g^n(H_p); then the alpha sequence solving
   f^{-1}_{alpha_n}(g_{alpha_n}(0)) = g^n_{alpha_0}(f^{-1}_{alpha_0}(g_{alpha_0}(0))).
5. gamma surgery on W^{alpha_0}: a single stretch sliding the ruination part
   of r_g that contains f(1) across the whole overlap until it overlaps the
   r_f part containing g(0); this is the "easy to see" diffeomorphism whose
   existence follows from alpha_0 belonging to the parameter set C.
6. castration of g at alpha_n through phi-conjugated gamma; increase n until
   the induced maps are uniformly expanding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BracketError, ConstructionError, DomainError, SpecError
from .intervals import DEFAULT_TOL, Interval, IntervalSet, Tolerance
from .maps import (
    Affine,
    CubicHermite,
    MapSpec,
    Segment,
    conjugate_segment,
    hermite_linear_deriv,
    iterate_interval,
    pair_from_json,
    pair_to_json,
    symmetry_conjugate,
    symmetry_residual,
)
from .ifs import IFSPair, validate_class_a
from .axioms import (
    AxiomReport,
    HolePair,
    RuinationRegions,
    check_ca,
    check_ee,
    check_so,
    find_hole,
    ruination_regions,
)


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstructionParams:
    p: float = 1.0 / 3.0
    q: float = 2.0 / 3.0
    jp_width: float = 0.01          # |J_p| = |J_q|; 1/100 is small enough
    bump_strength: float = 4.0      # inner expansion factor of f0 ∘ g0
    k: float = 0.005                # affine corner width; < 1/100
    epsilon_range: Interval = field(default_factory=lambda: Interval(0.0, 0.125))
    n_target: int = 10              # index n for eps in C_n

    def __post_init__(self) -> None:
        if not (0.0 < self.jp_width <= 0.01):
            raise SpecError("jp_width must be in (0, 1/100]")
        if not (0.0 < self.k < 0.01):
            raise SpecError("k must be in (0, 1/100)")
        if not (2.0 < self.bump_strength < 14.0 / 3.0):
            # sigma = strength/2 per map; the edge-slope budget dies at 7/3
            raise SpecError("bump_strength must be in (2, 14/3)")
        if abs(self.p + self.q - 1.0) > 1e-12:
            raise SpecError("p and q must be symmetric about 1/2")
        if self.n_target < 3:
            raise SpecError("n_target must be >= 3")

    @property
    def j_p(self) -> Interval:
        return Interval(self.p - self.jp_width / 2, self.p + self.jp_width / 2)

    @property
    def j_q(self) -> Interval:
        return Interval(self.q - self.jp_width / 2, self.q + self.jp_width / 2)

    @property
    def bridge(self) -> float:
        """Width of the C1 bridge inside the corner window."""
        return self.k / 50.0


# ---------------------------------------------------------------------------
# Stages 1-2: base pair and bump modification
# ---------------------------------------------------------------------------


def base_pair() -> tuple[MapSpec, MapSpec]:
    f = MapSpec((Segment(0.0, 1.0, Affine(0.5, 0.0)),), label="f*")
    g = MapSpec((Segment(0.0, 1.0, Affine(0.5, 0.5)),), label="g*")
    return f, g


def _chain(x0: float, y0: float, pieces: list[tuple[str, float, float, float]]) -> list[Segment]:
    """Build abutting segments from (kind, width, d_lo, d_hi) descriptions.

    Affine pieces use d_lo as the slope; Hermite pieces get the
    linear-derivative rise, so every piece is monotone by construction.
    """
    segs: list[Segment] = []
    x, y = x0, y0
    for kind, width, d_lo, d_hi in pieces:
        x1 = x + width
        if kind == "affine":
            segs.append(Segment(x, x1, Affine(d_lo, y - d_lo * x)))
            y = y + d_lo * width
        else:
            seg = hermite_linear_deriv(x, x1, y, d_lo, d_hi)
            segs.append(seg)
            y = seg.y_hi
        x = x1
    return segs


def bump_modify(params: ConstructionParams) -> tuple[MapSpec, MapSpec, Interval, Interval]:
    """Steepen f* on the window around q (image near p); g0 by symmetry.

    Slope profile on each half-window of width w/2, inward from the edge:
    join at 1/2, drop to a low slope m, rise to sigma on [q-w/16, q+w/16].
    The rise budget forces 3*sigma + 11*m = 7, so m > 0 bounds sigma < 7/3.
    The composition f0∘g0 then has derivative sigma^2 near p and < 1 on the
    rest of J_p, which is exactly the fixed-interval hypothesis.
    """
    w = params.jp_width
    q = params.q
    sigma = params.bump_strength / 2.0
    m = (7.0 - 3.0 * sigma) / 11.0
    if m <= 0.01:
        raise ConstructionError(f"bump profile infeasible: low slope m = {m:.4g}")
    a, b, c1 = w / 16.0, w / 8.0, w / 8.0

    lo = q - w / 2.0
    pieces = [
        ("hermite", c1, 0.5, m),                    # edge join (left)
        ("affine", w / 2.0 - b - c1, m, m),
        ("hermite", b - a, m, sigma),
        ("affine", 2.0 * a, sigma, sigma),          # the expanding core
        ("hermite", b - a, sigma, m),
        ("affine", w / 2.0 - b - c1, m, m),
        ("hermite", c1, m, 0.5),                    # edge join (right)
    ]
    bump = _chain(lo, lo / 2.0, pieces)
    segs = [Segment(0.0, lo, Affine(0.5, 0.0))] + bump + [
        Segment(q + w / 2.0, 1.0, Affine(0.5, 0.0))
    ]
    f0 = MapSpec(tuple(segs), label="f0")
    g0 = symmetry_conjugate(f0)
    g0 = MapSpec(g0.segments, label="g0")

    jp_in = Interval(params.p - w / 20.0, params.p + w / 20.0)
    jq_in = Interval(q - w / 20.0, q + w / 20.0)

    margin = w / 100.0
    img_g = g0.image_of(jp_in)
    img_f = f0.image_of(jq_in)
    if not img_g.contains_interval(jq_in, margin):
        raise ConstructionError(f"inner containment failed: g0(J'_p) = {img_g}")
    if not img_f.contains_interval(jp_in, margin):
        raise ConstructionError(f"inner containment failed: f0(J'_q) = {img_f}")
    jp = params.j_p
    composed = f0.image_of(g0.image_of(jp))
    if not jp.contains_interval(composed, margin):
        raise ConstructionError(f"outer contraction failed: f0(g0(J_p)) = {composed}")
    return f0, g0, jp_in, jq_in


# ---------------------------------------------------------------------------
# Stage 3: the epsilon family
# ---------------------------------------------------------------------------


def epsilon_family_specs(
    f0: MapSpec, k: float, eps: float, bridge: float | None = None
) -> tuple[MapSpec, MapSpec]:
    """(f_eps, g_eps) as MapSpecs, without class-A validation.

    f_eps equals f0 on [0, 1-k], is affine with slope 1/2 + eps on
    [1-k+bridge, 1] with f_eps(1) = 1/2 + eps*k exactly, and C1-bridges the
    slopes in between; the bridge's rise equals what the affine slope would
    produce, so the corner value identity is exact.  g_eps is the diagonal
    conjugate.
    """
    if eps <= 0:
        raise DomainError("epsilon_family needs eps > 0")
    eta = k / 50.0 if bridge is None else bridge
    corner = 1.0 - k
    if 4.0 * eps * k / (1.0 + 2.0 * eps) >= k - eta:
        raise ConstructionError(
            f"eps = {eps} too large: the overlap preimage leaves the affine tail")
    segs: list[Segment] = []
    for s in f0.segments:
        if s.x_hi <= corner + 1e-15:
            segs.append(s)
        elif s.x_lo < corner:
            if not isinstance(s.kind, Affine):
                raise ConstructionError("corner window must fall in an affine run of f0")
            segs.append(Segment(s.x_lo, corner, s.kind))
    y_corner = f0.eval(corner)
    slope = 0.5 + eps
    f1 = 0.5 + eps * k
    y_bridge = f1 - slope * (k - eta)
    segs.append(Segment(corner, corner + eta,
                        CubicHermite(y_corner, y_bridge, 0.5, slope)))
    segs.append(Segment(corner + eta, 1.0, Affine(slope, f1 - slope)))
    f_eps = MapSpec(tuple(segs), label=f"f_eps[{eps:.12g}]")
    g_eps = MapSpec(symmetry_conjugate(f_eps).segments, label=f"g_eps[{eps:.12g}]")
    return f_eps, g_eps


def epsilon_family(
    f0: MapSpec, g0: MapSpec, k: float, eps: float, tol: Tolerance = DEFAULT_TOL
) -> IFSPair:
    """Validated epsilon-family pair; raises if class-A or So fails."""
    f_eps, g_eps = epsilon_family_specs(f0, k, eps)
    pair = validate_class_a(f_eps, g_eps, tol=tol).as_pair()
    so = check_so(pair)
    if not so.ok:
        raise ConstructionError(f"single overlapping fails at eps={eps}: {so}")
    return pair


# ---------------------------------------------------------------------------
# Stage 4 helpers: H'_p, the C-parameter and the alpha sequence
# ---------------------------------------------------------------------------


def h_prime(p: IFSPair, h_p: Interval, n_max: int | None = None) -> IntervalSet:
    """Union of forward g-images of H_p: disjoint parts marching to 1.

    Truncated at n_max or at part length < eps_geom; part 0 is H_p itself.
    """
    parts: list[Interval] = []
    cur = h_p
    n = 0
    cap = 10_000 if n_max is None else n_max
    while n <= cap:
        parts.append(cur)
        nxt = p.g.image_of(cur)
        if n_max is None and nxt.length < p.tol.eps_geom:
            parts.append(nxt)
            break
        cur = nxt
        n += 1
    return IntervalSet(parts)


def h_prime_parts(g: MapSpec, h_p: Interval, n_max: int) -> list[Interval]:
    out = [h_p]
    for _ in range(n_max):
        out.append(g.image_of(out[-1]))
    return out


def phi_rescale(w_from: Interval, w_to: Interval, x: float) -> float:
    """The unique orientation-preserving affine map between two overlap
    regions, applied to a point."""
    if w_from.length <= 0 or w_to.length <= 0:
        raise DomainError("phi_rescale needs non-degenerate intervals")
    if not w_from.contains(x, slack=1e-12):
        raise DomainError(f"{x} outside {w_from}")
    t = (x - w_from.lo) / w_from.length
    return w_to.lo + t * w_to.length


def phi_rescale_interval(w_from: Interval, w_to: Interval, iv: Interval) -> Interval:
    return Interval(phi_rescale(w_from, w_to, iv.lo), phi_rescale(w_from, w_to, iv.hi))


def _bisect_increasing(
    fn: Callable[[float], float], target: float, lo: float, hi: float,
    xtol: float = 1e-14, max_iter: int = 200,
) -> float:
    """Bisection for fn increasing in x; robust against kinks, no Newton."""
    flo, fhi = fn(lo) - target, fn(hi) - target
    if flo > 0 or fhi < 0:
        raise BracketError(
            f"bracket [{lo}, {hi}] does not straddle target {target}: "
            f"f(lo)-t={flo:.3g}, f(hi)-t={fhi:.3g}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < xtol:
            break
    return 0.5 * (lo + hi)


class ClassCBuilder:
    """Pipeline state: the bump pair, the admissible eps window and the
    derived objects, with pair construction at arbitrary eps.

    The reachable-corner function x(eps) = f_eps^{-1}(g_eps(0)) is strictly
    decreasing in eps and tends to 1 as eps -> 0+; all one-dimensional
    solves bisect it on verified brackets (it has kinks where the preimage
    crosses breakpoints, so Newton is not trusted).
    """

    EPS_FLOOR = 1e-9

    def __init__(self, params: ConstructionParams | None = None, tol: Tolerance = DEFAULT_TOL):
        self.params = params or ConstructionParams()
        self.tol = tol
        self.f_star, self.g_star = base_pair()
        self.f0, self.g0, self.jp_inner, self.jq_inner = bump_modify(self.params)
        self.delta = self._admissible_delta()
        ref = self.pair_at(self.delta / 2.0)
        self.hole_ref = find_hole(ref, self.params.j_p)

    # -- primitives --------------------------------------------------------

    def pair_specs_at(self, eps: float) -> tuple[MapSpec, MapSpec]:
        return epsilon_family_specs(self.f0, self.params.k, eps,
                                    bridge=self.params.bridge)

    def pair_at(self, eps: float, validate: bool = False) -> IFSPair:
        f_eps, g_eps = self.pair_specs_at(eps)
        if validate:
            return validate_class_a(f_eps, g_eps, tol=self.tol).as_pair()
        return IFSPair.of(f_eps, g_eps, self.tol)

    def x_of(self, eps: float) -> float:
        """f_eps^{-1}(g_eps(0)), the left overlap endpoint pulled to the corner."""
        p = self.pair_at(eps)
        return p.f.inverse_eval(p.g.eval(0.0), self.tol)

    def _admissible_delta(self) -> float:
        """Largest dyadic eps <= epsilon_range.hi at which class-A + So hold
        at both window ends (Ho is eps-independent and checked on the
        reference pair).  The small-end probe sits where the overlap width
        2*eps*k still clears the geometric tolerance."""
        small = max(1e-5, 2.0 * self.tol.eps_geom / self.params.k)
        delta = self.params.epsilon_range.hi
        for _ in range(20):
            if delta <= small:
                break
            try:
                hi_pair = self.pair_at(delta, validate=True)
                lo_pair = self.pair_at(small, validate=True)
                if check_so(hi_pair).ok and check_so(lo_pair).ok:
                    return delta
            except (ConstructionError, SpecError):
                pass
            delta /= 2.0
        raise ConstructionError("no admissible eps window found")

    def g_power_hole(self, n: int) -> Interval:
        """g^n(H_p), computed with g0 (the orbit avoids the modified corner,
        so this does not depend on eps)."""
        return iterate_interval(self.g0, n, self.hole_ref.h_f)

    # -- the C parameter and alpha sequence ---------------------------------

    def find_c_parameter(self, n: int) -> float:
        """eps with x(eps) at the midpoint of g^n(H_p); member of C_n.

        x(eps) is decreasing in eps, so bisect -x against -target on
        [floor, delta]; raises when the target is outside the reachable
        range (n too small or too large for the window).
        """
        target = self.g_power_hole(n)
        lo, hi = self.EPS_FLOOR, self.delta
        x_hi, x_lo = self.x_of(lo), self.x_of(hi)
        if not (x_lo < target.mid < x_hi):
            raise BracketError(
                f"g^{n}(H_p) midpoint {target.mid:.12g} outside reachable "
                f"range ({x_lo:.12g}, {x_hi:.12g}); adjust n_target")
        eps = _bisect_increasing(lambda e: -self.x_of(e), -target.mid, lo, hi)
        x = self.x_of(eps)
        if not (target.lo + target.length / 10.0 <= x <= target.hi - target.length / 10.0):
            raise ConstructionError(
                f"C-parameter verification failed: x({eps}) = {x} vs {target}")
        return eps

    def in_h_prime(self, eps: float, n_max: int = 200) -> bool:
        """Membership of x(eps) in the union of forward g-images of H_p."""
        x = self.x_of(eps)
        cur = self.hole_ref.h_f
        for _ in range(n_max):
            if cur.contains(x):
                return True
            if cur.lo > x:
                return False
            cur = self.g0.image_of(cur)
        return False

    def alpha_sequence(self, alpha0: float, count: int) -> list[float]:
        """alpha_n solving x(alpha_n) = g^n_{alpha_0}(x(alpha_0)); strictly
        decreasing to 0, each a member of C."""
        if not self.in_h_prime(alpha0):
            raise ConstructionError(f"alpha0 = {alpha0} is not in C")
        g_a0 = self.pair_at(alpha0).g
        x0 = self.x_of(alpha0)
        out: list[float] = []
        target = x0
        for n in range(count):
            alpha = _bisect_increasing(lambda e: -self.x_of(e), -target,
                                       self.EPS_FLOOR, self.delta)
            out.append(alpha)
            target = g_a0.eval(target)
        for a, b in zip(out, out[1:]):
            if not b < a:
                raise ConstructionError(f"alpha sequence not strictly decreasing: {out}")
        return out


def find_c_parameter(builder: ClassCBuilder, n: int) -> float:
    return builder.find_c_parameter(n)


def alpha_sequence(builder: ClassCBuilder, alpha0: float, count: int) -> list[float]:
    return builder.alpha_sequence(alpha0, count)


# ---------------------------------------------------------------------------
# Stage 5: gamma surgery
# ---------------------------------------------------------------------------


def build_gamma(ruin: RuinationRegions, w: Interval, tol: Tolerance = DEFAULT_TOL) -> MapSpec:
    """A C1 diffeomorphism of [0, 1] (normalized overlap coordinates) making
    the castration covering hold: it stretches the r_g part containing the
    right overlap endpoint until its image overlaps the r_f part containing
    the left endpoint, and is the identity near both endpoints so the
    castrated map joins g C1.

    Existence needs both endpoint parts, i.e. the C-membership of the
    parameter; a per-gap sliding construction is unnecessary.
    """
    qb = ruin.r_f.part_containing(w.lo)
    pb = ruin.r_g.part_containing(w.hi)
    if qb is None or pb is None:
        raise ConstructionError(
            "gamma needs g(0) in r_f and f(1) in r_g (parameter not in C?)")
    h = (min(qb.hi, w.hi) - w.lo) / w.length
    c = (max(pb.lo, w.lo) - w.lo) / w.length
    if not (0.0 < h and c < 1.0):
        raise ConstructionError(f"degenerate end blocks: h={h}, c={c}")
    if c <= h:
        return MapSpec((Segment(0.0, 1.0, Affine(1.0, 0.0)),), label="gamma[id]")

    h_t = 2.0 * h / 3.0
    xi = min(1e-4, h / 10.0, (1.0 - c) / 10.0, h_t / 4.0)

    w_a = c - xi
    r_a = h_t - xi
    frac_a = min(0.1, r_a / w_a)
    s_a = (r_a / w_a - frac_a / 2.0) / (1.0 - frac_a / 2.0)
    if s_a <= 0:
        raise ConstructionError(f"gamma region A infeasible: s_a = {s_a:.3g}")

    w_b = (1.0 - xi) - c
    r_b = (1.0 - xi) - h_t
    beta = 0.1
    s_b = (r_b / w_b - beta * (s_a + 1.0) / 2.0) / (1.0 - beta)
    if s_b <= 1.0:
        raise ConstructionError(f"gamma region B infeasible: s_b = {s_b:.3g}")

    pieces = [
        ("hermite", frac_a * w_a, 1.0, s_a),
        ("affine", (1.0 - frac_a) * w_a, s_a, s_a),
        ("hermite", beta * w_b, s_a, s_b),
        ("affine", (1.0 - 2.0 * beta) * w_b, s_b, s_b),
        ("hermite", beta * w_b, s_b, 1.0),
    ]
    segs = [Segment(0.0, xi, Affine(1.0, 0.0))] + _chain(xi, xi, pieces)
    end = segs[-1]
    # close with the identity tail; the chain lands at (1 - xi, 1 - xi) by
    # the rise bookkeeping, up to rounding absorbed by the C0 tolerance
    segs.append(Segment(1.0 - xi, 1.0, Affine(1.0, 0.0)))
    gamma = MapSpec(tuple(segs), label="gamma")
    if abs(end.y_hi - (1.0 - xi)) > 1e-9:
        raise ConstructionError(f"gamma rise bookkeeping off by {end.y_hi - (1 - xi):.3g}")
    return gamma


def castrate(
    g_alpha_n: MapSpec,
    gamma: MapSpec,
    w_n: Interval,
    w_0: Interval,
    tol: Tolerance = DEFAULT_TOL,
) -> MapSpec:
    """Modify g so that on the overlap its inverse is conjugated through
    gamma: (g.)^{-1} = g^{-1} ∘ phi^{-1} ∘ gamma^{-1} ∘ phi, intact outside.

    Since gamma is built in normalized overlap coordinates and the phi maps
    are affine and orientation-preserving, the phi conjugation collapses to
    rescaling gamma onto w_n; w_0 only enters through gamma having been
    built there.  The forward form g. = (rescaled gamma) ∘ g composes
    segment-by-segment because the support g^{-1}(w_n) falls inside a single
    affine run of g near 0.
    """
    s_hi = g_alpha_n.inverse_eval(w_n.hi, tol)
    first = g_alpha_n.segments[0]
    if not isinstance(first.kind, Affine) or first.x_hi < s_hi - 1e-15:
        raise ConstructionError(
            "castration support must fall inside g's leading affine run")
    a_g, b_g = first.kind.slope, first.kind.intercept
    # A1: y -> (g(y) - w_n.lo)/|w_n| onto [0, 1]; A2: t -> w_n.lo + t |w_n|
    a1, b1 = a_g / w_n.length, (b_g - w_n.lo) / w_n.length
    a2, b2 = w_n.length, w_n.lo
    composed = [conjugate_segment(s, a1, b1, a2, b2) for s in gamma.segments]
    # snap the composed run exactly onto [0, s_hi]
    snapped: list[Segment] = []
    for i, s in enumerate(composed):
        x_lo = 0.0 if i == 0 else snapped[-1].x_hi
        x_hi = s_hi if i == len(composed) - 1 else s.x_hi
        if x_hi <= x_lo:
            continue
        snapped.append(Segment(x_lo, x_hi, s.kind))
    rest: list[Segment] = []
    for s in g_alpha_n.segments:
        if s.x_hi <= s_hi + 1e-15:
            continue
        if s.x_lo < s_hi:
            rest.append(Segment(s_hi, s.x_hi, s.kind))
        else:
            rest.append(s)
    return MapSpec(tuple(snapped + rest), label=f"{g_alpha_n.label}.castrated")


# ---------------------------------------------------------------------------
# Stage 6: the full pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineReport:
    params: ConstructionParams
    delta: float
    alpha0: float
    alphas: tuple[float, ...]
    n_final: int
    hole: HolePair
    axioms: AxiomReport
    symmetry_residual_precastration: float
    attempts: tuple[tuple[int, float, float, bool, bool], ...]  # (n, alpha, mu, ee_ok, ca_ok)

    def to_text(self) -> str:
        pr = self.params
        lines = [
            "pipeline: class-C construction",
            f"param_p: {pr.p:.17g}",
            f"param_q: {pr.q:.17g}",
            f"param_jp_width: {pr.jp_width:.17g}",
            f"param_bump_strength: {pr.bump_strength:.17g}",
            f"param_k: {pr.k:.17g}",
            f"param_eps_window: (0, {pr.epsilon_range.hi:.17g}]",
            f"param_n_target: {pr.n_target}",
            f"delta: {self.delta:.17g}",
            f"alpha0: {self.alpha0:.17g}",
            f"alphas: {', '.join(f'{a:.12g}' for a in self.alphas)}",
            f"n_final: {self.n_final}",
            f"hole_h_f: [{self.hole.h_f.lo:.17g}, {self.hole.h_f.hi:.17g}]",
            f"hole_h_g: [{self.hole.h_g.lo:.17g}, {self.hole.h_g.hi:.17g}]",
            f"hole_swap_residual: {self.hole.swap_residual:.3g}",
            f"symmetry_residual_precastration: {self.symmetry_residual_precastration:.3g}",
        ]
        for n, alpha, mu, ee_ok, ca_ok in self.attempts:
            lines.append(f"attempt: n={n} alpha={alpha:.12g} mu={mu:.6g} ee={ee_ok} ca={ca_ok}")
        lines.append(self.axioms.so.to_text().rstrip() if self.axioms.so else "so: skipped")
        lines.append(self.axioms.ee.to_text().rstrip() if self.axioms.ee else "ee: skipped")
        lines.append(self.axioms.ca.to_text().rstrip() if self.axioms.ca else "ca: skipped")
        lines.append(f"corner_derivs_below_one: {self.axioms.corner_derivs_below_one}")
        lines.append(f"all_axioms: {'ok' if self.axioms.ok else 'FAILED'}")
        return "\n".join(lines) + "\n"


def build_class_c_example(
    params: ConstructionParams | None = None,
    tol: Tolerance = DEFAULT_TOL,
    mu_target: float = 1.01,
    n_search_max: int = 12,
) -> tuple[IFSPair, PipelineReport, ClassCBuilder]:
    """Run the whole pipeline, increasing the castration index until the
    induced maps are uniformly expanding and the covering margins hold.

    Returns the certified pair, the stage report, and the builder (which
    keeps the alpha family available for the rescaling experiments).
    """
    builder = ClassCBuilder(params, tol)
    pr = builder.params
    alpha0 = builder.find_c_parameter(pr.n_target)
    pair0 = builder.pair_at(alpha0, validate=True)
    hole0 = find_hole(pair0, pr.j_p)
    ruin0 = ruination_regions(pair0, hole0)
    gamma = build_gamma(ruin0, pair0.overlap, tol)
    alphas = builder.alpha_sequence(alpha0, max(n_search_max + 1, 6))

    attempts: list[tuple[int, float, float, bool, bool]] = []
    for n in range(n_search_max + 1):
        alpha_n = alphas[n]
        pair_n = builder.pair_at(alpha_n, validate=True)
        g_dot = castrate(pair_n.g, gamma, pair_n.overlap, pair0.overlap, tol)
        cand = validate_class_a(pair_n.f, g_dot, tol=tol)
        if not cand.ok:
            attempts.append((n, alpha_n, math.nan, False, False))
            continue
        pair = cand.as_pair()
        so = check_so(pair)
        hole = find_hole(pair, pr.j_p)
        ee = check_ee(pair, hole, mu_target)
        ruin = ruination_regions(pair, hole)
        ca = check_ca(pair, hole, ruin)
        margins_ok = ca.ok and ca.min_margin >= tol.eps_geom
        attempts.append((n, alpha_n, ee.mu, ee.ok, margins_ok))
        if so.ok and ee.ok and margins_ok:
            sym = symmetry_residual(pair_n.f, pair_n.g)
            advisory = pair.f.deriv(0.0) < 1.0 and pair.g.deriv(1.0) < 1.0
            report = PipelineReport(
                params=pr, delta=builder.delta, alpha0=alpha0, alphas=tuple(alphas),
                n_final=n, hole=hole,
                axioms=AxiomReport(True, so, hole, None, ee, ca, advisory),
                symmetry_residual_precastration=sym,
                attempts=tuple(attempts),
            )
            return pair, report, builder
    raise ConstructionError(
        "no castration index satisfied expansion + covering margins; attempts: "
        + ", ".join(f"n={n} mu={mu:.4g} ee={e} ca={c}" for n, _, mu, e, c in attempts))


# ---------------------------------------------------------------------------
# The appendix example
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AppendixParams:
    eps: float = 0.01
    lam: float = 0.45

    def __post_init__(self) -> None:
        if not (0.0 < self.lam < 0.5):
            raise SpecError("lam must be in (0, 1/2)")
        if not (0.0 < self.eps < 1.0 / 6.0):
            raise SpecError("eps must be in (0, 1/6)")

    @property
    def blocks(self) -> tuple[Interval, Interval, Interval]:
        e = self.eps
        return (
            Interval(0.0, 1.0 / 3.0 - e),
            Interval(1.0 / 3.0 + e, 2.0 / 3.0 - e),
            Interval(2.0 / 3.0 + e, 1.0),
        )

    @property
    def block_set(self) -> IntervalSet:
        return IntervalSet(self.blocks)


def appendix_pair(params: AppendixParams | None = None, tol: Tolerance = DEFAULT_TOL) -> IFSPair:
    """A diagonal-symmetric pair with the inclusion property
    f(I_-1) ⊂ I_-1, f(I_0) ⊂ int(I_-1), f(I_1) ⊂ int(I_0) (g mirrored) and
    derivative < lam on the three blocks.

    Affine slope 0.98*lam on each block, steep monotone Hermite connectors
    across the two gaps; the connectors exceed lam but lie outside the
    blocks, which is all the contraction property quantifies over.
    """
    pr = params or AppendixParams()
    e, lam = pr.eps, pr.lam
    s = 0.98 * lam
    i_m1, i_0, i_1 = pr.blocks
    w1, w0 = i_m1.length, i_0.length

    if s * (w1 + w0) >= w1:
        raise ConstructionError(f"infeasible: s(|I-1|+|I0|) = {s*(w1+w0):.4g} >= {w1:.4g}")
    c0 = 0.5 * (s * w1 + (w1 - s * w0))      # start of f(I_0), centered in its slack
    f1_target = 0.5 * (0.5 + i_0.hi)          # f(1); also fixes g(0) = 1 - f(1)
    c1 = f1_target - s * i_1.length           # start of f(I_1)
    if not (i_0.lo < c1 and f1_target < i_0.hi and f1_target > 0.5):
        raise ConstructionError(f"infeasible: f(I_1) = [{c1:.4g}, {f1_target:.4g}]")

    y_a = s * i_m1.hi
    y_b = c0 + s * w0
    segs = (
        Segment(0.0, i_m1.hi, Affine(s, 0.0)),
        Segment(i_m1.hi, i_0.lo, CubicHermite(y_a, c0, s, s)),
        Segment(i_0.lo, i_0.hi, Affine(s, c0 - s * i_0.lo)),
        Segment(i_0.hi, i_1.lo, CubicHermite(y_b, c1, s, s)),
        Segment(i_1.lo, 1.0, Affine(s, c1 - s * i_1.lo)),
    )
    f = MapSpec(segs, label="f_appendix")
    g = MapSpec(symmetry_conjugate(f).segments, label="g_appendix")
    pair = validate_class_a(f, g, tol=tol).as_pair()

    for m, name in ((f, "f"), (g, "g")):
        images = [m.image_of(b) for b in pr.blocks]
        targets = (i_m1, i_m1, i_0) if name == "f" else (i_1, i_1, i_0)
        strict = (False, True, True)
        if name == "g":
            images = images[::-1]
        for img, tgt, need_int in zip(images, targets, strict):
            # the non-strict containments touch at the fixed points 0 and 1
            margin = 1e-6 if need_int else 0.0
            if not tgt.contains_interval(img, margin):
                raise ConstructionError(f"inclusion failed: {name}(block) = {img} vs {tgt}")
    return pair


def lambda_sequence(pair: IFSPair, params: AppendixParams, n: int) -> list[IntervalSet]:
    """Lambda_0 = the three blocks; Lambda_{k+1} = f(Lambda_k) ∪ g(Lambda_k).

    Nestedness is verified at every step (a violation means the inclusion
    property failed).  Images of interval unions are exact: monotone maps
    send parts to parts.
    """
    seq = [params.block_set]
    for k in range(n):
        cur = seq[-1]
        nxt = pair.f.image_of_set(cur).union(pair.g.image_of_set(cur))
        if not _subset(nxt, cur, 1e-12):
            raise ConstructionError(f"Lambda_{k+1} not nested in Lambda_{k}")
        seq.append(nxt)
    return seq


def _subset(a: IntervalSet, b: IntervalSet, slack: float) -> bool:
    if a.is_empty():
        return True
    i = np.searchsorted(b.los, a.los + slack, side="right") - 1
    if np.any(i < 0):
        return False
    return bool(np.all(a.his <= b.his[i] + slack))


def lambda_sets(pair: IFSPair, params: AppendixParams, n: int) -> IntervalSet:
    if n < 0:
        raise DomainError("lambda_sets needs n >= 0")
    return lambda_sequence(pair, params, n)[-1]


def lambda_raw_images(pair: IFSPair, params: AppendixParams, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint arrays of the 3 * 2^n interval images of the recursion tree,
    without normalization: the branching structure before any merging."""
    los = np.array([b.lo for b in params.blocks])
    his = np.array([b.hi for b in params.blocks])
    for _ in range(n):
        los = np.concatenate([pair.f.eval_array(los), pair.g.eval_array(los)])
        his = np.concatenate([pair.f.eval_array(his), pair.g.eval_array(his)])
    return los, his


@dataclass(frozen=True)
class MeasureBoundReport:
    lam: float
    rows: tuple[tuple[int, float, float], ...]  # (n, measure, bound)
    ok: bool
    ratio_ok: bool

    def to_text(self) -> str:
        lines = [f"measure_bound_lambda: {self.lam:.17g}",
                 f"measure_bound_ok: {self.ok}",
                 f"measure_ratio_ok: {self.ratio_ok}",
                 "n,measure,bound"]
        lines += [f"{n},{m:.17g},{b:.17g}" for n, m, b in self.rows]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = "n,measure,bound\n"
        out += "".join(f"{n},{m:.17g},{b:.17g}\n" for n, m, b in self.rows)
        return out


def check_measure_bound(
    pair: IFSPair, params: AppendixParams, n_max: int = 20
) -> MeasureBoundReport:
    """Exact interval measures against the geometric bound (2*lam)^n, plus
    the per-step ratio mu(L_{n+1})/mu(L_n) <= 2*lam; no tolerances."""
    seq = lambda_sequence(pair, params, n_max)
    two_lam = 2.0 * params.lam
    rows = []
    ok = ratio_ok = True
    prev = None
    for n, s in enumerate(seq):
        m = s.measure()
        bound = two_lam ** n
        rows.append((n, m, bound))
        if m > bound:
            ok = False
        if prev is not None and prev > 0 and m > two_lam * prev:
            ratio_ok = False
        prev = m
    return MeasureBoundReport(params.lam, tuple(rows), ok, ratio_ok)


@dataclass(frozen=True)
class ComplementCertifyReport:
    resolution: float
    depth: int
    n_meeting: int
    n_certified: int
    n_skipped: int

    @property
    def all_certified(self) -> bool:
        return self.n_certified == self.n_meeting

    def to_text(self) -> str:
        return (f"complement_resolution: {self.resolution:.17g}\n"
                f"complement_depth: {self.depth}\n"
                f"complement_meeting: {self.n_meeting}\n"
                f"complement_certified: {self.n_certified}\n"
                f"complement_skipped: {self.n_skipped}\n")


def certify_cantor_by_complement(
    pair: IFSPair, params: AppendixParams, resolution: float, depth: int
) -> ComplementCertifyReport:
    """Gap certification for the appendix mechanism: every grid interval
    meeting the orbit cover contains a sub-interval in the complement of
    some Lambda_d, d <= depth, which is disjoint from the minimal set
    because K ⊂ Lambda_d for every d."""
    from .ifs import minimal_set_cover

    cover = minimal_set_cover(pair, depth, resolution)
    seq = lambda_sequence(pair, params, depth)
    n_grid = int(math.ceil(1.0 / resolution))
    meeting = certified = skipped = 0
    for i in range(n_grid):
        J = Interval(i * resolution, min((i + 1) * resolution, 1.0))
        if not cover.intersect(IntervalSet([J])).measure() > 0:
            skipped += 1
            continue
        meeting += 1
        jset = IntervalSet([J])
        for s in seq:
            gap = jset.difference(s)
            if not gap.is_empty() and float(np.max(gap.his - gap.los)) > 10 * pair.tol.eps_geom:
                certified += 1
                break
    return ComplementCertifyReport(resolution, depth, meeting, certified, skipped)


# ---------------------------------------------------------------------------
# Serialization helpers shared with the CLI
# ---------------------------------------------------------------------------


def save_pair(pair: IFSPair, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(pair_to_json(pair.f, pair.g))


def load_pair(path: str, tol: Tolerance = DEFAULT_TOL) -> tuple[MapSpec, MapSpec]:
    with open(path, "r", encoding="utf-8") as fh:
        return pair_from_json(fh.read())
