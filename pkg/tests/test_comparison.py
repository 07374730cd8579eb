"""Comparison layer: fibers, the comparison map, base change, diagnostics."""

from fractions import Fraction

import pytest

from mlg import comparison as cmp
from mlg import extcalc as xc
from mlg.bdmodel import Splitting
from mlg.harness import bundled_datum


def test_base_point_requires_s_psi_restriction(sl2_n2_model):
    dm = sl2_n2_model.dm
    t = sl2_n2_model.base_points[0].s.t
    bad = Splitting(tuple((x + 1) % dm.fm.N for x in t))
    with pytest.raises(cmp.ComparisonError):
        cmp.make_base_point(dm, bad)


def test_zeta_level_must_be_multiple_of_n(torus_sl2_n2_model):
    dm = torus_sl2_n2_model.dm
    s = torus_sl2_n2_model.base_points[0].s
    with pytest.raises(cmp.ComparisonError):
        cmp.make_base_point(dm, s, zeta_level=3)
    bp = cmp.make_base_point(dm, s, zeta_level=4)
    assert bp.zeta_level == 4


def test_fiber_sizes_match(sl2_n2_model, torus_sl2_n2_model):
    for bundle in (sl2_n2_model, torus_sl2_n2_model):
        bp = bundle.base_points[0]
        for g in bundle.fm.galois_elements():
            p = cmp.enumerate_pi1_fiber(bp, g)
            e = cmp.enumerate_e2_fiber(bp, g)
            assert len(p) == len(e) > 0


def test_canonical_form_is_idempotent_and_stable(sl2_n2_model):
    bp = sl2_n2_model.base_points[0]
    fm = sl2_n2_model.fm
    for g in fm.galois_elements():
        for p in cmp.enumerate_pi1_fiber(bp, g):
            assert cmp.canonical_pi1(bp, p) == p
            # every representative reduces back to the class
            for xi in cmp._xi_choices(bp)[0]:
                alt = cmp.Pi1Element(
                    p.gamma_i,
                    ((p.tau[0] + xi) % fm.N,),
                    ((p.zeta[0] - cmp._eps_exp(fm, xi)) % 1,))
                assert cmp.canonical_pi1(bp, alt) == p


def test_identity_and_composition(sl2_n2_model):
    bp = sl2_n2_model.base_points[0]
    fm = sl2_n2_model.fm
    e = cmp.pi1_identity(bp)
    for g in fm.galois_elements():
        for p in cmp.enumerate_pi1_fiber(bp, g):
            assert cmp.pi1_compose(bp, e, p) == p
            assert cmp.pi1_compose(bp, p, e) == p


def test_composition_lands_in_the_product_fiber(sl2_n2_model):
    bp = sl2_n2_model.base_points[0]
    fm = sl2_n2_model.fm
    fibers = {g.i: cmp.enumerate_pi1_fiber(bp, g)
              for g in fm.galois_elements()}
    for i, ps in fibers.items():
        for j, qs in fibers.items():
            for p in ps:
                for q in qs:
                    out = cmp.pi1_compose(bp, p, q)
                    assert out.gamma_i == (i + j) % fm.k
                    assert out in fibers[out.gamma_i]


def test_comparison_on_kernel_is_the_artin_character(sl2_n2_model):
    bp = sl2_n2_model.base_points[0]
    fm = sl2_n2_model.fm
    zero = (0,) * bp.dm.rank
    for g in fm.galois_elements():
        a = fm.artin_character(g, fm.base_subgroup_index)
        for p in cmp.enumerate_pi1_fiber(bp, g):
            assert cmp.comparison_apply(bp, p, zero,
                                        fm.base_subgroup_index) == a


def test_comparison_rejects_non_invariant_elements(sl2_n2_model):
    bp = sl2_n2_model.base_points[0]
    p = cmp.pi1_identity(bp)
    with pytest.raises(cmp.ComparisonError):
        cmp.comparison_apply(bp, p, (1,), 1)


def test_comparison_is_fiberwise_bijective(torus_sl2_n2_model):
    bp = torus_sl2_n2_model.base_points[0]
    for g in torus_sl2_n2_model.fm.galois_elements():
        images = [cmp.comparison_image(bp, p)
                  for p in cmp.enumerate_pi1_fiber(bp, g)]
        assert len(set(images)) == len(images)
        assert set(images) == set(cmp.enumerate_e2_fiber(bp, g))


def test_base_change_theorem(torus_sl2_n2_model):
    bp1, bp2 = torus_sl2_n2_model.base_points
    fm = torus_sl2_n2_model.fm
    b = cmp.solve_base_change(bp1, bp2)
    for g in fm.galois_elements():
        for p in cmp.enumerate_pi1_fiber(bp1, g):
            moved = cmp.base_change_iota(bp1, bp2, p, b=b)
            assert (cmp.comparison_image(bp2, moved) ==
                    cmp.comparison_image(bp1, p))


def test_base_change_needs_shared_model(sl2_n2_model, torus_sl2_n2_model):
    with pytest.raises(cmp.ComparisonError):
        cmp.solve_base_change(sl2_n2_model.base_points[0],
                              torus_sl2_n2_model.base_points[0])


def test_unsolvable_model_reports_diagnostic():
    """A hand-built SL2, n = 4 model whose ratio gamma^{-1}s/s is a
    nontrivial mu_n-element on the torsion direction: every candidate tau
    violates the center-dual condition, so the fiber is empty and must be
    reported as a diagnostic, not an error."""
    from mlg import fieldmodel as fdm
    from mlg import metaplectic as mp
    from mlg.bdmodel import build_d_model
    from mlg.rootdatum import QuadraticForm

    dd = mp.compute_dual_datum(
        mp.CoverDatum(bundled_datum("sl2"), QuadraticForm((1,)), 4))
    fm = fdm.build_field_model(5, 4)          # N = 624
    w = 1
    c1 = [(fm.q - 1) * w % fm.N]
    # invariant e over the modified coroot shifted by half a base-field
    # generator: forces phi = t * w off the base field
    e = (-2 * w + fm.base_subgroup_index) % fm.N
    dm = build_d_model(dd, fm, c1, [e])
    t = None
    for cand in range(fm.N):
        if (2 * cand) % fm.N == dm.s_psi[0]:
            t = cand
            break
    assert t is not None
    bp = cmp.make_base_point(dm, Splitting((t,)))
    with pytest.raises(cmp.ModelDiagnostic):
        cmp.enumerate_pi1_fiber(bp, fm.galois(1))


def test_extension_closure(sl2_n2_model):
    bp = sl2_n2_model.base_points[0]
    ext_pi1 = cmp.pi1_extension(bp)
    ext_e2 = cmp.e2_extension(bp)
    assert xc.cohomologous(ext_pi1.cocycle, ext_e2.cocycle)


def test_suite_reports_counterexamples_for_corrupted_s_psi(sl2_n2_model):
    """Tamper with a base point after construction: the suite must fail
    with a serialized witness rather than crash."""
    bp = sl2_n2_model.base_points[0]
    bad_bp = cmp.ConvenientBasePoint(
        bp.dm, bp.s, tuple((u + 1) % bp.fm.N for u in bp.lifts),
        bp.zeta_level)
    report = cmp.verify_comparison_suite(
        [{"name": "tampered", "base_points": [bad_bp]}])
    assert not report["ok"]
    checks = report["models"][0]["checks"]
    assert any(not v["ok"] for v in checks.values())
