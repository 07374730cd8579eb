"""Cyclic field model: invariants, roots, epsilon, the Artin character."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlg import fieldmodel as fdm


def test_minimal_extension_degrees_frozen():
    assert fdm.minimal_extension_degree(5, 2) == 2
    assert fdm.minimal_extension_degree(5, 4) == 4
    assert fdm.minimal_extension_degree(7, 3) == 3
    assert fdm.minimal_extension_degree(13, 4) == 4


def test_model_invariants():
    fm = fdm.build_field_model(5, 4)
    assert fm.k == 4 and fm.N == 5 ** 4 - 1
    assert ((fm.q ** fm.k - 1) // (fm.q - 1)) % fm.n == 0
    assert fm.N % fm.base_subgroup_index == 0
    assert fm.registry_N == fm.N * fm.embed_factor


def test_invalid_parameters_rejected():
    with pytest.raises(fdm.FieldModelError):
        fdm.build_field_model(6, 2)          # not a prime power
    with pytest.raises(fdm.FieldModelError):
        fdm.build_field_model(5, 3)          # 3 does not divide q - 1
    with pytest.raises(fdm.FieldModelError):
        fdm.FieldModel(5, 4, 3)              # 4 does not divide (5^3-1)/4


def test_frobenius_has_order_k():
    fm = fdm.build_field_model(7, 3)
    e = 5
    x = e
    for _ in range(fm.k):
        x = fm.frobenius(x)
    assert x == e
    assert fm.frobenius(e, 0) == e


def test_nth_root_examples():
    fm = fdm.build_field_model(5, 4)
    root = fm.nth_root(4)
    assert root.in_base and root.exponent == 1           # (g^4)^(1/4) = g
    # base-field units always have in-model roots
    u = fm.base_subgroup_index
    root = fm.nth_root(u)
    assert root.in_base
    assert (4 * root.exponent) % fm.N == u
    # registry root of a non-divisible exponent stays upstairs
    assert not fm.nth_root(1).in_base


@given(st.integers(0, 5 ** 4 - 2))
@settings(max_examples=80, deadline=None)
def test_registry_root_is_a_root(e):
    fm = fdm.build_field_model(5, 4)
    v = fm.nth_root_registry(e)
    assert (fm.n * v) % fm.registry_N == (e * fm.embed_factor) % fm.registry_N


def test_epsilon_is_injective_on_mu_n():
    fm = fdm.build_field_model(5, 4)
    vals = {fm.epsilon(j * fm.mu_n_index) for j in range(4)}
    assert vals == {Fraction(0), Fraction(1, 4), Fraction(1, 2),
                    Fraction(3, 4)}
    with pytest.raises(fdm.FieldModelError):
        fm.epsilon(1)


def test_epsilon_alternative_unit():
    fm = fdm.build_field_model(5, 4, epsilon_unit=3)
    assert fm.epsilon(fm.mu_n_index) == Fraction(3, 4)
    with pytest.raises(fdm.FieldModelError):
        fdm.build_field_model(5, 4, epsilon_unit=2)      # not coprime to n


def test_artin_character_frozen_example():
    # q = 5, n = 4, k = 4, u = g^156 = generator of the base subgroup
    fm = fdm.build_field_model(5, 4)
    gamma = fm.galois(1)
    val = fm.artin_character(gamma, fm.base_subgroup_index)
    assert val == Fraction(3, 4)


def test_artin_character_is_a_homomorphism_in_gamma():
    fm = fdm.build_field_model(5, 4)
    u = 2 * fm.base_subgroup_index
    for i in range(fm.k):
        for j in range(fm.k):
            lhs = fm.artin_character(fm.galois(i + j), u)
            rhs = (fm.artin_character(fm.galois(i), u) +
                   fm.artin_character(fm.galois(j), u)) % 1
            assert lhs == rhs


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_artin_character_is_multiplicative_in_u(a, b, i):
    fm = fdm.build_field_model(5, 4)
    g = fm.galois(i)
    m = fm.base_subgroup_index
    lhs = fm.artin_character(g, ((a + b) * m) % fm.N)
    rhs = (fm.artin_character(g, a * m) + fm.artin_character(g, b * m)) % 1
    assert lhs == rhs


def test_artin_character_rejects_non_base_elements():
    fm = fdm.build_field_model(5, 2)
    with pytest.raises(fdm.FieldModelError):
        fm.artin_character(fm.galois(1), 1)
