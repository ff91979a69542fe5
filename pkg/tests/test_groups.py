import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from onereg.errors import CapacityError, DomainError, ValidationError
from onereg.groups import (
    GroupSpec,
    aut_order_formula,
    automorphisms,
    element_order,
    generated_subgroup,
    invert,
    make_group,
    multiply,
    set_stabilizing_automorphisms,
)
from onereg.modarith import nontrivial_fifth_roots

SMALL_SPECS = [
    GroupSpec.cyclic(35),
    GroupSpec.cyclic(245),
    GroupSpec.direct(7),
    GroupSpec.meta1(11, 3),
    GroupSpec.meta1(11, 9),
    GroupSpec.meta2(11, 3),
    GroupSpec.meta2(11, 27),
]


def test_construction_examples():
    assert make_group(GroupSpec.cyclic(245)).order == 245
    M = make_group(GroupSpec.meta1(11, 3))
    assert M.order == 605 and not M.is_abelian
    with pytest.raises(DomainError, match="i\\^5"):
        make_group(GroupSpec.meta1(7, 2))
    with pytest.raises(DomainError):
        make_group(GroupSpec.meta2(11, 3 + 11))  # 14^5 != 1 mod 121


def test_multiply_examples(meta1_11, direct7):
    assert multiply(meta1_11, (1, 0, 0), (0, 1, 0)) == (1, 1, 0)
    assert multiply(meta1_11, (0, 1, 0), (1, 0, 0)) == (4, 1, 0)
    assert multiply(direct7, (2, 3), (5, 33)) == (0, 1)


def test_invert_examples(meta1_11):
    assert invert(meta1_11, (0, 1, 0)) == (0, 4, 0)
    assert invert(meta1_11, (1, 1, 0)) == (8, 4, 0)
    assert invert(make_group(GroupSpec.cyclic(35)), (6,)) == (29,)


def test_order_examples(meta1_11):
    assert element_order(meta1_11, (1, 0, 0)) == 11
    assert element_order(meta1_11, (1, 1, 1)) == 55
    for i in nontrivial_fifth_roots(121):
        M2 = make_group(GroupSpec.meta2(11, i))
        assert element_order(M2, (11, 0)) == 11


def test_generated_subgroup_examples(meta1_11):
    assert len(generated_subgroup(meta1_11, [(1, 0, 0), (0, 0, 1)])) == 121
    g = meta1_11.parse("xyz")
    assert len(generated_subgroup(meta1_11, [g, invert(meta1_11, g)])) == 55
    assert len(generated_subgroup(make_group(GroupSpec.cyclic(35)), [(1,)])) == 35


def test_automorphism_counts(meta1_11):
    assert len(automorphisms(make_group(GroupSpec.cyclic(35)))) == 24
    assert len(automorphisms(make_group(GroupSpec.direct(7)))) == 8064
    auts = automorphisms(meta1_11)
    assert len(auts) == 10 * 11 * 10
    want = ((2, 0, 0), (0, 1, 0), (0, 0, 3))
    assert any(a.images == want for a in auts)


@pytest.mark.parametrize("spec", [GroupSpec.meta2(11, 3), GroupSpec.direct(7), GroupSpec.cyclic(245)])
def test_automorphism_count_matches_formula(spec):
    G = make_group(spec)
    assert G.automorphism_count() == aut_order_formula(G)


def test_automorphism_capacity():
    with pytest.raises(CapacityError):
        make_group(GroupSpec.direct(13)).automorphism_perms()


def test_set_stabilizer_examples(direct7, meta1_11):
    S = [direct7.parse(w) for w in ("y", "y^-1", "xy", "x^-1y^-1")]
    stab = set_stabilizing_automorphisms(direct7, S)
    inversion = np.array([direct7.index(direct7.invert(g)) for g in direct7.elements()])
    assert any(np.array_equal(p, inversion) for p in stab.perms)
    Z5 = make_group(GroupSpec.cyclic(5))
    st5 = set_stabilizing_automorphisms(Z5, [(1,), (2,), (3,), (4,)])
    assert st5.order == 4 and st5.transitive
    with pytest.raises(ValidationError):
        set_stabilizing_automorphisms(Z5, [(1,), (2,)])


def test_set_stabilizer_routes_agree(direct7):
    S = [direct7.parse(w) for w in ("y", "y^-1", "xy", "x^-1y^-1")]
    stab = set_stabilizing_automorphisms(direct7, S)
    perms = direct7.automorphism_perms()
    idx = sorted(direct7.index(s) for s in S)
    brute = (np.sort(perms[:, idx], axis=1) == idx).all(axis=1).sum()
    assert stab.order == brute


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.name)
def test_normal_form_matches_regular_representation(spec):
    G = make_group(spec)
    T = G.table.astype(np.int64)
    # right multiplications compose: R(g) then R(h) equals R(g h)
    for g in range(0, G.order, max(1, G.order // 40)):
        for h in range(0, G.order, max(1, G.order // 40)):
            assert np.array_equal(T[T[:, g], h], T[:, T[g, h]])
    # scalar multiply agrees with the table
    els = G.elements()
    for a in range(0, G.order, 17):
        for b in range(0, G.order, 13):
            assert G.index(G.multiply(els[a], els[b])) == T[a, b]


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.name)
def test_order_of_inverse(spec):
    G = make_group(spec)
    assert np.array_equal(G.orders, G.orders[G.inverse_index])


@pytest.mark.parametrize("spec", SMALL_SPECS[:5], ids=lambda s: s.name)
@given(data=st.data())
def test_automorphisms_are_homomorphisms(spec, data):
    G = make_group(spec)
    perms = G.automorphism_perms()
    k = data.draw(st.integers(0, len(perms) - 1))
    a, b = data.draw(st.integers(0, G.order - 1)), data.draw(st.integers(0, G.order - 1))
    phi, T = perms[k], G.table
    assert phi[T[a, b]] == T[phi[a], phi[b]]


@pytest.mark.parametrize("i", nontrivial_fifth_roots(11))
def test_meta1_order_5p_elements(i):
    G = make_group(GroupSpec.meta1(11, i))
    c = G.coords
    predicted = (c[:, 1] != 0) & (c[:, 2] != 0)
    assert np.array_equal(G.orders == 55, predicted)


@pytest.mark.parametrize("i", nontrivial_fifth_roots(121))
def test_meta2_order_5_elements(i):
    G = make_group(GroupSpec.meta2(11, i))
    assert np.array_equal(G.orders == 5, G.coords[:, 1] != 0)


def test_parse_and_word_roundtrip(meta1_11):
    for g in meta1_11.elements()[::37]:
        assert meta1_11.parse(meta1_11.word(g)) == g
    assert meta1_11.parse("x^-1y^-1") == meta1_11.invert(meta1_11.parse("yx"))
