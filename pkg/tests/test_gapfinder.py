import numpy as np
import pytest

from cantorifs.errors import DomainError
from cantorifs.intervals import Interval, IntervalSet
from cantorifs.ifs import fundamental_domain
from cantorifs.gapfinder import (
    CaseTag,
    TerminalReason,
    certify_cantor,
    classify,
    find_gap,
    find_gap_core,
    replay,
    verify_hole_disjoint,
)
from cantorifs.axioms import HolePair

RNG = np.random.default_rng(777)


def _ctx(built_ctx):
    c = built_ctx
    return c["pair"], c["hole"], c["ruin"], c["bsets"], c["mu"]


# -- classification -----------------------------------------------------------


def test_classify_boundary_hit_at_f1(built_ctx):
    pair, hole, ruin, bsets, _ = _ctx(built_ctx)
    f1_hi = pair.f.eval(1.0)
    J = Interval(f1_hi - 1e-5, f1_hi + 1e-5)
    assert classify(J, pair, hole, ruin, bsets) is CaseTag.BOUNDARY_HIT


def test_classify_inside_hole(built_ctx):
    pair, hole, ruin, bsets, _ = _ctx(built_ctx)
    assert classify(hole.h_f.middle_third(), pair, hole, ruin, bsets) is CaseTag.IN_HF
    assert classify(hole.h_g.middle_third(), pair, hole, ruin, bsets) is CaseTag.IN_HG


def test_classify_deep_domain_is_pullback(built_ctx):
    pair, hole, ruin, bsets, _ = _ctx(built_ctx)
    f3 = fundamental_domain(pair, "f", 3)
    J = Interval(f3.mid - 1e-6, f3.mid + 1e-6)
    assert classify(J, pair, hole, ruin, bsets) is CaseTag.PULLBACK_FN


def test_classify_free_regions(built_ctx):
    pair, hole, ruin, bsets, _ = _ctx(built_ctx)
    f1 = fundamental_domain(pair, "f", 1)
    J = Interval(f1.lo + 0.01, hole.h_f.lo - 0.01)
    assert classify(J, pair, hole, ruin, bsets) is CaseTag.IN_F1_FREE
    g1 = fundamental_domain(pair, "g", 1)
    J = Interval(hole.h_g.hi + 0.01, g1.hi - 0.01)
    assert classify(J, pair, hole, ruin, bsets) is CaseTag.IN_G1_FREE


def test_classify_w_overlap(built_ctx):
    pair, hole, ruin, bsets, _ = _ctx(built_ctx)
    rfrg = ruin.r_f.intersect(ruin.r_g)
    widest = max(rfrg.parts, key=lambda p: p.length)
    assert classify(widest.middle_third(), pair, hole, ruin, bsets) is CaseTag.IN_W_OVERLAP


def test_classify_w_exclusive_sides(built_ctx):
    pair, hole, ruin, bsets, _ = _ctx(built_ctx)
    w = pair.overlap
    rfrg = ruin.r_f.intersect(ruin.r_g)
    found = {CaseTag.IN_W_RF: 0, CaseTag.IN_W_RG: 0}
    for fam, tag in ((ruin.r_f, CaseTag.IN_W_RF), (ruin.r_g, CaseTag.IN_W_RG)):
        only = fam.intersect(IntervalSet([w])).difference(rfrg)
        for part in only.parts:
            if part.length < 1e-7:
                continue
            got = classify(part.middle_third(), pair, hole, ruin, bsets)
            if got is tag:
                found[tag] += 1
    assert found[CaseTag.IN_W_RF] > 0
    assert found[CaseTag.IN_W_RG] > 0


def test_classify_rejects_degenerate(built_ctx):
    pair, hole, ruin, bsets, _ = _ctx(built_ctx)
    with pytest.raises(DomainError):
        classify(Interval(0.3, 0.3), pair, hole, ruin, bsets)


# -- core terminal cases -------------------------------------------------------------


def test_core_hole_input_is_its_own_gap(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    J = hole.h_f.middle_third()
    cert = find_gap_core(J, pair, hole, ruin, bsets, mu=mu)
    # already disjoint from K: the certified gap is J itself (up to the
    # inverse-evaluation roundtrip)
    assert cert.output.lo == pytest.approx(J.lo, abs=1e-12)
    assert cert.output.hi == pytest.approx(J.hi, abs=1e-12)
    assert cert.terminal_reason is TerminalReason.HOLE
    assert len(cert.trace) == 1 and cert.trace[0].op == "F"


def test_core_overlap_input_is_its_own_gap(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    rfrg = ruin.r_f.intersect(ruin.r_g)
    widest = max(rfrg.parts, key=lambda p: p.length)
    J = widest.middle_third()
    cert = find_gap_core(J, pair, hole, ruin, bsets, mu=mu)
    assert cert.output == J
    assert cert.terminal_reason is TerminalReason.RUINATION_OVERLAP


def test_core_rejects_tiny_input(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    with pytest.raises(DomainError):
        find_gap_core(Interval(0.3, 0.3 + 1e-10), pair, hole, ruin, bsets, mu=mu)


def test_core_walk_reaches_terminal_from_free_region(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    f1 = fundamental_domain(pair, "f", 1)
    J = Interval(f1.lo + 0.013, f1.lo + 0.013 + 1e-4)
    cert = find_gap_core(J, pair, hole, ruin, bsets, mu=mu)
    assert cert.output.length > 0
    assert cert.output.lo >= J.lo - 1e-12 and cert.output.hi <= J.hi + 1e-12
    assert cert.n_steps <= cert.iteration_bound


# -- certificate soundness ------------------------------------------------------------


def test_certificates_on_random_intervals_verify_against_orbit(built_ctx, cloud18):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    from cantorifs.ifs import minimal_set_cover

    cover = minimal_set_cover(pair, 18, 1e-3)
    n_done = 0
    attempts = 0
    while n_done < 100 and attempts < 3000:
        attempts += 1
        lo = float(RNG.uniform(0.0, 1.0 - 1e-3))
        J = Interval(lo, lo + 1e-3)
        if not cover.intersect(IntervalSet([J])).measure() > 0:
            continue
        cert = find_gap(J, pair, hole, ruin, bsets, mu=mu, cloud=cloud18)
        # verification already ran inside (cloud given); double-check here
        inside = np.sum((cloud18.points > cert.output.lo + 1e-9)
                        & (cloud18.points < cert.output.hi - 1e-9))
        assert inside == 0
        n_done += 1
    assert n_done == 100


def test_certificate_replay_lands_in_terminal_region(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    rfrg = ruin.r_f.intersect(ruin.r_g)
    targets = IntervalSet([hole.h_f, hole.h_g]).union(rfrg)
    f1 = fundamental_domain(pair, "f", 1)
    tested = 0
    for lo in np.linspace(f1.lo + 0.005, f1.hi - 0.02, 17):
        J = Interval(float(lo), float(lo) + 2e-4)
        cert = find_gap_core(J, pair, hole, ruin, bsets, mu=mu)
        final = replay(pair, cert)
        part = targets.part_containing(final.mid)
        assert part is not None, f"replay of {J} ended at {final} off-target"
        assert part.lo - 1e-9 <= final.lo and final.hi <= part.hi + 1e-9
        tested += 1
    assert tested == 17


def test_trace_growth_respects_expansion(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    f1 = fundamental_domain(pair, "f", 1)
    grown = 0
    for lo in np.linspace(f1.lo + 0.004, f1.hi - 0.03, 11):
        J = Interval(float(lo), float(lo) + 1e-4)
        cert = find_gap_core(J, pair, hole, ruin, bsets, mu=mu)
        cur = None
        for step in cert.trace:
            if step.op == "shrink":
                cur = step.interval
                continue
            if cur is not None and step.op in ("F", "G") and step is not cert.trace[-1]:
                assert step.interval.length >= mu * cur.length * (1 - 1e-9)
                grown += 1
            cur = step.interval
    assert grown > 0


def test_find_gap_determinism(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    J = Interval(0.30, 0.301)
    c1 = find_gap(J, pair, hole, ruin, bsets, mu=mu)
    c2 = find_gap(J, pair, hole, ruin, bsets, mu=mu)
    assert c1 == c2


# -- pullback cases -----------------------------------------------------------------------


def test_pullback_from_f3(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    f3 = fundamental_domain(pair, "f", 3)
    J = Interval(f3.mid - 1e-5, f3.mid + 1e-5)
    cert = find_gap(J, pair, hole, ruin, bsets, mu=mu)
    assert cert.trace[0].tag is CaseTag.PULLBACK_FN
    assert cert.trace[0].op == "invpow_f" and cert.trace[0].n == 2  # N = 3
    assert J.contains_interval(cert.output)


def test_find_gap_identical_to_core_inside_f1(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    f1 = fundamental_domain(pair, "f", 1)
    J = Interval(f1.lo + 0.02, f1.lo + 0.0205)
    assert find_gap(J, pair, hole, ruin, bsets, mu=mu) == \
        find_gap_core(J, pair, hole, ruin, bsets, mu=mu)


def test_pullback_right_side_g_domains(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    g3 = fundamental_domain(pair, "g", 3)
    J = Interval(g3.mid - 1e-5, g3.mid + 1e-5)
    cert = find_gap(J, pair, hole, ruin, bsets, mu=mu)
    assert cert.trace[0].op == "invpow_g"
    assert J.contains_interval(cert.output)


def test_gap_near_fixed_point_zero(built_ctx, cloud18):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    J = Interval(0.0, 0.01)  # contains the fixed point 0 ∈ K
    cert = find_gap(J, pair, hole, ruin, bsets, mu=mu, cloud=cloud18)
    assert J.contains_interval(cert.output)


def test_hole_case_symmetry_on_precastration_pair(builder, built_report):
    """For the symmetric (uncastrated) pair, reflected hole inputs produce
    reflected certificates."""
    from cantorifs.axioms import find_hole, ruination_regions, boundary_sets

    alpha = built_report.alphas[built_report.n_final]
    pair0 = builder.pair_at(alpha, validate=True)
    hole0 = find_hole(pair0, builder.params.j_p)
    ruin0 = ruination_regions(pair0, hole0)
    b0 = boundary_sets(pair0, hole0, ruin0)
    J = hole0.h_f.middle_third()
    J_ref = Interval(1.0 - J.hi, 1.0 - J.lo)
    c1 = find_gap_core(J, pair0, hole0, ruin0, b0, mu=2.0)
    c2 = find_gap_core(J_ref, pair0, hole0, ruin0, b0, mu=2.0)
    assert c2.output.lo == pytest.approx(1.0 - c1.output.hi, abs=1e-9)
    assert c2.output.hi == pytest.approx(1.0 - c1.output.lo, abs=1e-9)


# -- hole avoidance -------------------------------------------------------------------------


def test_verify_hole_disjoint_zero_violations(built_ctx):
    rep = verify_hole_disjoint(built_ctx["pair"], built_ctx["hole"], depth=14)
    assert rep.ok and rep.violations == 0


def test_verify_hole_disjoint_depth_zero(built_ctx):
    rep = verify_hole_disjoint(built_ctx["pair"], built_ctx["hole"], depth=0)
    assert rep.violations == 0  # the seed 0 is outside F1


def test_shifted_hole_negative_control(built_ctx):
    pair, hole = built_ctx["pair"], built_ctx["hole"]
    shift = 0.01
    fake = HolePair(
        Interval(hole.h_f.lo + shift, hole.h_f.hi + shift),
        Interval(hole.h_g.lo + shift, hole.h_g.hi + shift),
        0, 0.0)
    rep = verify_hole_disjoint(pair, fake, depth=14)
    assert rep.violations > 0


# -- certification sweep -----------------------------------------------------------------------


def test_certify_cantor_small_sweep(built_ctx):
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    rep = certify_cantor(pair, hole, ruin, bsets, resolution=2e-2, depth=12,
                         mu=mu, verification_depth=14)
    assert rep.all_certified, rep.to_text()
    assert rep.n_skipped + rep.n_meeting == rep.n_grid
    assert rep.bound_respected


def test_certify_skips_cells_off_the_cover(built_ctx):
    # at fine resolution the hole itself leaves grid cells off the cover
    pair, hole, ruin, bsets, mu = _ctx(built_ctx)
    rep = certify_cantor(pair, hole, ruin, bsets, resolution=1e-3, depth=10,
                         mu=mu, verification_depth=12)
    assert rep.n_skipped > 0
    assert rep.n_skipped + rep.n_meeting == rep.n_grid
    assert rep.all_certified, rep.to_text()
