"""Dual-datum layer: frozen small examples and the n_alpha oracle."""

from fractions import Fraction

import pytest

from mlg import metaplectic as mp
from mlg import rootdatum as rdm
from mlg.harness import bundled_datum, q_form_for


def dual(group, n, q_form=None):
    rd = bundled_datum(group)
    qf = q_form if q_form is not None else q_form_for(group, n)
    return mp.compute_dual_datum(mp.CoverDatum(rd, qf, n))


def test_sl2_n2_frozen():
    dd = dual("sl2", 2)
    assert dd.y_qn_basis == ((1,),)                       # Y_{Q,2} = Y
    assert dd.n_alpha == (2, 2)
    assert dd.modified_coroots[0] == (2,)                 # 2 alpha_vee
    assert dd.modified_roots[0] == (Fraction(1),)         # alpha / 2
    assert dd.center.invariant_factors == (2,)
    assert dd.center.free_rank == 0


def test_sl2_n4_frozen():
    dd = dual("sl2", 4)
    assert dd.y_qn_basis == ((2,),)                       # Y_{Q,4} = 2Y
    assert dd.n_alpha == (4, 4)
    assert dd.modified_coroots[0] == (4,)
    assert dd.center.invariant_factors == (2,)


def test_sl3_n2_frozen():
    dd = dual("sl3", 2)
    assert dd.y_qn_basis == ((2, 0), (0, 2))              # Y_{Q,2} = 2Y
    assert dd.n_alpha == (2,) * 6
    assert dd.center.is_trivial()


def test_n1_recovers_the_langlands_dual():
    for group in ("sl2", "sl3", "torus_sl2"):
        rd = bundled_datum(group)
        dd = dual(group, 1)
        assert dd.y_qn_basis == tuple(tuple(int(i == j)
                                            for j in range(rd.rank))
                                      for i in range(rd.rank))
        assert dd.modified_datum() == rdm.langlands_dual(rd)


def test_torus_center_is_free():
    rd = rdm.torus(2)
    dd = mp.compute_dual_datum(mp.CoverDatum(rd, rdm.QuadraticForm((1, 1)), 2))
    assert dd.center.free_rank == 2
    assert dd.center.invariant_factors == ()


def test_r_alpha_frozen():
    cd2 = mp.CoverDatum(bundled_datum("sl2"), rdm.QuadraticForm((1,)), 2)
    assert mp.compute_r_alpha(cd2, 0) == -1               # n_alpha = 2, Q = 1
    cd4 = mp.CoverDatum(bundled_datum("sl2"), rdm.QuadraticForm((1,)), 4)
    assert mp.compute_r_alpha(cd4, 0) == 1                # exponent 6, even
    cd3 = mp.CoverDatum(bundled_datum("sl2"), rdm.QuadraticForm((2,)), 3)
    assert mp.compute_r_alpha(cd3, 0) == 1                # even Q


def test_odd_degree_requires_even_q():
    cd = mp.CoverDatum(bundled_datum("sl2"), rdm.QuadraticForm((1,)), 3)
    ok, witness = mp.check_cover_assumption(cd)
    assert not ok and witness == (1,)
    with pytest.raises(mp.CoverAssumptionError):
        mp.compute_dual_datum(cd)


def test_non_weyl_invariant_q_rejected():
    qf = rdm.QuadraticForm((1, 1), ((0, 1, 1),))          # bad cross term
    with pytest.raises(mp.DualDatumError):
        mp.compute_dual_datum(mp.CoverDatum(bundled_datum("torus_sl2"), qf, 2))


def test_n_alpha_matches_oracle_on_all_bundled_data():
    forms = {
        "sl2": [rdm.QuadraticForm((m,)) for m in (1, 2, 3)],
        "sl3": [rdm.QuadraticForm((m, m), ((0, 1, -m),)) for m in (1, 2, 3)],
        "torus_sl2": [rdm.QuadraticForm((a, m)) for a in (0, 1) for m in (1, 2)],
    }
    for group, qfs in forms.items():
        rd = bundled_datum(group)
        for qf in qfs:
            for n in range(1, 13):
                cd = mp.CoverDatum(rd, qf, n)
                for i in range(len(rd.roots)):
                    assert (mp.compute_n_alpha(cd, i) ==
                            mp.n_alpha_oracle(cd, i)), (group, qf, n, i)


def test_modified_datum_is_a_valid_root_datum():
    for group in ("sl2", "sl3", "torus_sl2"):
        for n in (1, 2, 3, 4, 6):
            dd = dual(group, n)
            report = rdm.validate_root_datum(dd.modified_datum())
            assert report.ok, (group, n, report.failures)


def test_y_qn_contains_n_y_and_pairs_integrally():
    for group in ("sl2", "sl3", "torus_sl2"):
        for n in (2, 4):
            dd = dual(group, n)
            rd = dd.cd.rd
            g = dd.cd.q.gram()
            r = rd.rank
            for j in range(r):
                col = [dd.y_qn_basis[i][j] for i in range(r)]
                for b in range(r):
                    basis_vec = [int(t == b) for t in range(r)]
                    val = sum(col[s] * g[s][t] * basis_vec[t]
                              for s in range(r) for t in range(r))
                    assert val % n == 0
