"""D-model layer: cocycle validation, distinguished splitting, invariant
points, splitting extension."""

import pytest

from mlg import bdmodel as bdm
from mlg import fieldmodel as fdm
from mlg import metaplectic as mp
from mlg.harness import build_model, bundled_datum, q_form_for
from mlg.rootdatum import QuadraticForm


def small_dd(n=2):
    return mp.compute_dual_datum(
        mp.CoverDatum(bundled_datum("sl2"), QuadraticForm((1,)), n))


def test_cocycle_norm_condition_enforced():
    dd = small_dd()
    fm = fdm.build_field_model(5, 2)
    # c_1 = coboundary of w: always closes
    w = 7
    c1 = [((fm.q - 1) * w) % fm.N]
    # invariant element over the modified coroot (coords (2,) here)
    u = (-2 * w) % (fm.N // (fm.q - 1))
    dm = bdm.build_d_model(dd, fm, c1, [u])
    assert dm.fm is fm
    # corrupt a single entry: the norm condition must fail
    with pytest.raises(bdm.DModelError):
        bdm.build_d_model(dd, fm, [c1[0] + 1], [u])


def test_full_c_table_must_satisfy_cocycle_identity():
    dd = small_dd()
    fm = fdm.build_field_model(5, 2)
    bad_table = [(0,), (1,)]   # c_0 must be trivial, c identity fails
    with pytest.raises(bdm.DModelError):
        bdm.build_d_model(dd, fm, None, [0], full_c_table=bad_table)


def test_non_invariant_e_input_rejected():
    dd = small_dd()
    fm = fdm.build_field_model(5, 2)
    w = 7
    c1 = [((fm.q - 1) * w) % fm.N]
    u = (-2 * w) % (fm.N // (fm.q - 1))
    with pytest.raises(bdm.DModelError):
        bdm.build_d_model(dd, fm, c1, [u + 1])


def test_harness_model_structure(sl2_n2_model):
    dm = sl2_n2_model.dm
    fm = sl2_n2_model.fm
    # the action table is a genuine 1-cocycle
    for i in range(fm.k):
        for j in range(fm.k):
            lhs = dm.cocycle_at(i + j)
            rhs = bdm.char_mul(bdm.char_frob(fm, dm.cocycle_at(j), i),
                               dm.cocycle_at(i), fm.N)
            assert lhs == rhs
    # s_psi is invariant over the modified simple coroots
    for pos, coords in enumerate(dm.simple_coords):
        assert dm.is_invariant_element(coords, dm.s_psi[pos])


def test_invariant_points_are_invariant(sl2_n2_model, torus_sl2_n2_model):
    for bundle in (sl2_n2_model, torus_sl2_n2_model):
        dm = bundle.dm
        ip = bdm.invariant_points(dm)
        for coords, u in zip(ip.basis_coords, ip.lifts):
            assert dm.is_invariant_element(coords, u)
        assert ip.kernel_exponent == bundle.fm.base_subgroup_index


def test_invariant_lift_is_unique_mod_base_field(sl2_n2_model):
    dm = sl2_n2_model.dm
    fm = sl2_n2_model.fm
    ip = bdm.invariant_points(dm)
    coords, u = ip.basis_coords[0], ip.lifts[0]
    others = [v for v in range(fm.N)
              if dm.is_invariant_element(coords, v)]
    assert others == sorted((u + j * fm.base_subgroup_index) % fm.N
                            for j in range(fm.q - 1))


def test_extend_splitting_round_trip(torus_sl2_n2_model):
    dm = torus_sl2_n2_model.dm
    s = bdm.extend_splitting(dm, dm.s_psi, free_values=[11])
    assert bdm.restricts_to_s_psi(dm, s)


def test_gamma_s_over_s_is_trivial_on_ysc(sl2_n2_model):
    dm = sl2_n2_model.dm
    fm = sl2_n2_model.fm
    s = sl2_n2_model.base_points[0].s
    for gamma in fm.galois_elements():
        ratio = bdm.gamma_s_over_s(dm, gamma, s)
        for _, _, w in dm.ysc_basis_coords():
            assert bdm.char_eval(ratio, w, fm.N) == 0


def test_splitting_restriction(sl2_n2_model):
    dm = sl2_n2_model.dm
    for bp in sl2_n2_model.base_points:
        assert bdm.restricts_to_s_psi(dm, bp.s)


def test_lattice_data_adapted_property():
    bundle = build_model(bundled_datum("torus_sl2"),
                         q_form_for("torus_sl2", 4), 4, 5, name="t4")
    dm = bundle.dm
    # d_i * u_i generate Y^{SC}: each is an integral combination of the
    # modified simple coroots, and conversely
    for _, d, w in dm.ysc_basis_coords():
        dm.s_psi_at(w)   # raises if outside Y^{SC}
    assert sorted(dm.dlist) == [0, 2]
