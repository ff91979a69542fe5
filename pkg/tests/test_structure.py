import numpy as np
import pytest

from onereg.errors import DomainError, ValidationError
from onereg.families import c_pm1, praeger_wang, theorem_family
from onereg.graphs import cayley, complete_graph, cycle_graph
from onereg.groups import GroupSpec, make_group
from onereg.structure import (
    in_regular_rep,
    is_normal_cayley,
    is_normal_subgroup,
    quotient_by_orbits,
    reduction_case,
    regular_rep,
)
from onereg.symmetry import PermGroup, aut_group, perm_order

Z5 = make_group(GroupSpec.cyclic(5))


def _first_coordinate(G):
    return regular_rep(G, [G.generators["x"]])


def test_regular_rep_examples(meta1_11):
    R = regular_rep(Z5)
    assert perm_order(R) == 5 and R.is_transitive() and R.is_semiregular()
    R = regular_rep(meta1_11)
    assert perm_order(R) == 605
    assert R.point_stabilizer(0).order() == 1 and R.is_semiregular()


@pytest.mark.parametrize("spec", [GroupSpec.cyclic(35), GroupSpec.direct(7), GroupSpec.meta2(11, 3)],
                         ids=lambda s: s.name)
def test_regular_rep_is_faithful(spec):
    G = make_group(spec)
    R = regular_rep(G)
    assert perm_order(R) == G.order
    for g in range(0, G.order, 7):
        assert in_regular_rep(G, G.table[:, g])


def test_normality_examples():
    c5 = is_normal_cayley(cycle_graph(5), Z5, [(1,), (4,)])
    assert c5.is_normal and c5.methods_agree
    k5 = is_normal_cayley(complete_graph(5), Z5, [(1,), (2,), (3,), (4,)])
    assert not k5.is_normal and k5.methods_agree
    assert k5.to_json() == {"is_normal": False, "aut_order": 120, "stabilizer_order": 24,
                            "aut_gs_order": 4, "methods_agree": True}


def test_thm1_13_is_normal():
    G = make_group(GroupSpec.direct(13))
    S = [G.parse(w) for w in ("y", "y^-1", "xy", "x^-1y^-1")]
    rep = is_normal_cayley(theorem_family(13, 1), G, S)
    assert rep.is_normal and rep.methods_agree and rep.aut_order == 3380


def test_quotient_cpm1_13():
    G = make_group(GroupSpec.direct(13))
    q = quotient_by_orbits(c_pm1(13), _first_coordinate(G))
    assert q.is_cycle and q.orbit_count == 65
    assert q.kernel_order == 26 and q.kernel_vertex_stab_order == 2
    assert q.orbit_count * q.orbit_size == 845


def test_quotient_by_trivial_group_is_identity_cover():
    X = praeger_wang(7, 6)
    q = quotient_by_orbits(X, PermGroup([np.arange(X.n)], X.n))
    assert q.quotient == X and q.is_regular_cover and q.orbit_count == X.n


def test_quotient_by_regular_rep_is_single_vertex(direct7):
    X = theorem_family(7, 1)
    q = quotient_by_orbits(X, regular_rep(direct7))
    assert q.orbit_count == 1 and q.quotient.n == 1


def test_quotient_rejects_non_automorphisms():
    X = cycle_graph(5)
    with pytest.raises(ValidationError):
        quotient_by_orbits(X, PermGroup([np.array([1, 0, 2, 3, 4])], 5))


@pytest.mark.parametrize("word,orbits", [("y^7", 49), ("y^5", 35)])
def test_regular_cover_preserves_degree(word, orbits):
    G = make_group(GroupSpec.direct(7))
    X = c_pm1(7)
    q = quotient_by_orbits(X, regular_rep(G, [G.parse(word)]))
    assert q.semiregular and q.orbit_count == orbits
    assert q.orbit_count * q.orbit_size == X.n
    assert q.is_regular_cover and q.quotient.is_regular(4)


def test_reduction_case_cycle(direct7):
    X = c_pm1(7)
    rc = reduction_case(X, _first_coordinate(direct7), aut_group(X).perm_group)
    assert rc.case == 3 and rc.orbit_count == 35
    assert rc.quotient.case_label == 3


def test_reduction_case_transitive_kernel():
    # Z_5 is normal in AGL(1,5), which is arc-transitive on K_5
    agl = PermGroup([np.array([1, 2, 3, 4, 0]), np.array([0, 2, 4, 1, 3])], 5)
    N = regular_rep(Z5)
    assert is_normal_subgroup(N, agl)
    assert reduction_case(complete_graph(5), N, agl).case == 1
    sym5 = aut_group(complete_graph(5)).perm_group
    assert not is_normal_subgroup(N, sym5)
    with pytest.raises(ValidationError):
        reduction_case(complete_graph(5), N, sym5)


@pytest.mark.parametrize("word,r", [("y^7", 49), ("y^5", 35)])
def test_reduction_case_cover(word, r):
    G = make_group(GroupSpec.direct(7))
    X = c_pm1(7)
    A = aut_group(X).perm_group
    N = regular_rep(G, [G.parse(word)])
    assert is_normal_subgroup(N, A)
    rc = reduction_case(X, N, A)
    assert (rc.case, rc.orbit_count) == (4, r)


def test_reduction_case_requires_four_valent():
    with pytest.raises(DomainError):
        reduction_case(cycle_graph(4), PermGroup([np.arange(4)], 4), aut_group(cycle_graph(4)).perm_group)


@pytest.mark.parametrize("p", [7, 11])
def test_kernel_order_for_cycle_quotients(p):
    G = make_group(GroupSpec.direct(p))
    q = quotient_by_orbits(c_pm1(p), _first_coordinate(G))
    assert (q.kernel_order, q.kernel_vertex_stab_order) == (2 * p, 2)
