"""Acceptance gate: the six package-level criteria, exact (zero tolerance)
and within their stated runtime budgets."""

import time
from fractions import Fraction

import pytest

from conftest import config_path
from mlg import cli
from mlg import comparison as cmp
from mlg import extcalc as xc
from mlg import metaplectic as mp
from mlg import rootdatum as rdm
from mlg.harness import bundled_datum, grid_models, q_form_for
from mlg.rootdatum import FiniteAbelianPresentation


@pytest.fixture(scope="module")
def grid_suite():
    """Criteria 4 and 5 share one grid run; closure is part of the suite."""
    t0 = time.perf_counter()
    models = grid_models()
    entries = [{"name": m.name, "base_points": list(m.base_points)}
               for m in models]
    report = cmp.verify_comparison_suite(entries, check_closure=True)
    return report, time.perf_counter() - t0


def test_criterion_1_dual_datum_correctness():
    t0 = time.perf_counter()
    dd = mp.compute_dual_datum(
        mp.CoverDatum(bundled_datum("sl2"), rdm.QuadraticForm((1,)), 2))
    assert dd.y_qn_basis == ((1,),)                   # Y_{Q,2} = Y
    assert dd.modified_coroots[0] == (2,)             # alpha~vee = 2 alpha_vee
    assert (dd.center.free_rank, dd.center.invariant_factors) == (0, (2,))

    for group in ("sl2", "sl3", "torus_sl2"):
        rd = bundled_datum(group)
        dd1 = mp.compute_dual_datum(mp.CoverDatum(rd, q_form_for(group, 2), 1))
        assert dd1.modified_datum() == rdm.langlands_dual(rd)

    dd3 = mp.compute_dual_datum(
        mp.CoverDatum(bundled_datum("sl3"),
                      rdm.QuadraticForm((1, 1), ((0, 1, -1),)), 2))
    assert dd3.y_qn_basis == ((2, 0), (0, 2))         # Y_{Q,2} = 2Y
    assert dd3.center.is_trivial()
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_n_alpha_oracle_equivalence():
    t0 = time.perf_counter()
    forms = {
        "sl2": [rdm.QuadraticForm((m,)) for m in (1, 2, 5)],
        "sl3": [rdm.QuadraticForm((m, m), ((0, 1, -m),)) for m in (1, 2)],
        "torus_sl2": [rdm.QuadraticForm((a, m))
                      for a in (0, 2) for m in (1, 3)],
    }
    for group, qfs in forms.items():
        rd = bundled_datum(group)
        for qf in qfs:
            for n in range(1, 13):
                cd = mp.CoverDatum(rd, qf, n)
                for i in range(len(rd.roots)):
                    assert (mp.compute_n_alpha(cd, i) ==
                            mp.n_alpha_oracle(cd, i))
    assert time.perf_counter() - t0 < 1.0


def test_criterion_3_ext_calculus_laws():
    t0 = time.perf_counter()
    groups = [xc.cyclic_group(2), xc.cyclic_group(4),
              xc.direct_product(xc.cyclic_group(2), xc.cyclic_group(2))]
    kernels = [FiniteAbelianPresentation(0, (2,)),
               FiniteAbelianPresentation(0, (4,))]
    import random
    rng = random.Random(20260824)
    for group in groups:
        for kernel in kernels:
            elems = xc.kernel_elements(kernel)
            split = xc.split_extension(group, kernel)

            def random_class():
                cochain = {g: (xc.kernel_zero(kernel) if g == group.identity
                               else rng.choice(elems))
                           for g in range(group.order)}
                base = xc.coboundary_of(group, kernel, cochain)
                # shift some coboundaries by the order-2 class when it exists
                return base

            cocycles = [random_class() for _ in range(3)]
            for c1 in cocycles:
                # identity: split class is neutral
                e1 = xc.make_extension(c1)
                assert xc.cohomologous(xc.baer_sum(e1, split).cocycle, c1)
                for c2 in cocycles:
                    e2 = xc.make_extension(c2)
                    # commutativity up to coboundary (exact here)
                    ab = xc.baer_sum(e1, e2).cocycle
                    ba = xc.baer_sum(e2, e1).cocycle
                    assert xc.cohomologous(ab, ba)
                    assert xc.coboundary_solve_exhaustive(
                        xc.cocycle_difference(ab, ba)) is not None
                # inverses: c + (-c) is split
                neg = xc.make_cocycle(
                    group, kernel,
                    [[xc.kernel_neg(kernel, c1.value(i, j))
                      for j in range(group.order)]
                     for i in range(group.order)])
                total = xc.baer_sum(e1, xc.make_extension(neg)).cocycle
                assert xc.cohomologous(total, split.cocycle)

    # pushout/pullback functoriality on the nontrivial Z/2-class
    z, h = (Fraction(0),), (Fraction(1, 2),)
    z2 = FiniteAbelianPresentation(0, (2,))
    c = xc.make_cocycle(xc.cyclic_group(2), z2, [[z, z], [z, h]])
    e = xc.make_extension(c)
    f = xc.make_abelian_hom(z2, FiniteAbelianPresentation(0, (4,)),
                            [(Fraction(1, 2),)])
    g_ident = xc.make_group_hom(xc.cyclic_group(2), xc.cyclic_group(2), [0, 1])
    assert xc.pullback_extension(xc.pushout_extension(e, f),
                                 g_ident).cocycle.value(1, 1) == \
        (Fraction(1, 2),)
    assert time.perf_counter() - t0 < 10.0


def test_criterion_4_comparison_suite(grid_suite):
    report, elapsed = grid_suite
    assert len(report["models"]) == 12
    for m in report["models"]:
        for key in ("fiber_bijection", "torsor_equivariance",
                    "multiplicativity", "evaluation_independence",
                    "base_point_change"):
            assert m["checks"][key]["ok"], (m["name"], key,
                                            m["checks"][key])
    assert elapsed < 60.0


def test_criterion_5_extension_level_closure(grid_suite):
    report, _ = grid_suite
    for m in report["models"]:
        check = m["checks"]["extension_closure"]
        assert check["ok"], (m["name"], check)


def test_criterion_6_negative_controls():
    # corrupted cocycle entry
    assert cli.main(["verify", config_path("bad_cocycle.json")]) == 1
    # flipped r_alpha sign
    assert cli.main(["verify", config_path("bad_sign.json")]) == 1
    # corrupted multiplication rule
    assert cli.main(["ext-calc", config_path("bad_mult.json")]) == 1
    # the positive twins of the same fixtures pass
    assert cli.main(["verify", config_path("sl2_n2_explicit.json")]) == 0
    assert cli.main(["ext-calc", config_path("ext_laws.json")]) == 0
