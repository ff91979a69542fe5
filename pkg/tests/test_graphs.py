import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from onereg.errors import Graph6ParseError, ValidationError
from onereg.families import c_pm1, lemma_candidates, lemma_group
from onereg.graphs import (
    ConnectionSet,
    Graph,
    cayley,
    circulant,
    complete_graph,
    cycle_graph,
    from_graph6,
    is_connected,
    to_graph6,
)
from onereg.groups import GroupSpec, generated_subgroup, make_group

Z5 = make_group(GroupSpec.cyclic(5))


def test_cayley_examples(direct7):
    assert cayley(Z5, [(1,), (4,)]) == cycle_graph(5)
    assert cayley(Z5, [(1,), (2,), (3,), (4,)]) == complete_graph(5)
    X = cayley(direct7, [direct7.parse(w) for w in ("y", "y^-1", "xy", "x^-1y^-1")])
    assert (X.n, X.edge_count) == (245, 490) and X.is_regular(4)


def test_connection_set_validation():
    with pytest.raises(ValidationError):
        ConnectionSet(Z5, frozenset({(0,), (1,), (4,)}))
    with pytest.raises(ValidationError) as exc:
        ConnectionSet(Z5, frozenset({(1,), (2,)}))
    assert exc.value.offenders


def test_circulant_examples():
    X = circulant(35, [1, 34, 6, 29])
    assert X.n == 35 and X.is_regular(4)
    assert circulant(5, [1, 4]) == cycle_graph(5)
    assert not is_connected(circulant(10, [2, 8]))
    assert is_connected(cycle_graph(5))
    with pytest.raises(ValidationError):
        circulant(10, [1, 2])


def test_disconnected_lemma_candidate():
    G = lemma_group(11, "A", 3)
    cand = next(c for c in lemma_candidates(11, "A", 3) if not c.generates)
    X = cayley(G, ConnectionSet(G, frozenset(cand.S)))
    assert not is_connected(X)
    assert len(generated_subgroup(G, cand.S)) < G.order


def test_graph6_examples():
    assert to_graph6(cycle_graph(5)) == "Dhc"
    assert to_graph6(complete_graph(5)) == "D~{"
    X = c_pm1(7)
    assert from_graph6(to_graph6(X)) == X
    assert from_graph6(">>graph6<<Dhc\n") == cycle_graph(5)


@pytest.mark.parametrize("bad,offset", [("D?", 2), ("D~{\x7f", 3), ("", 0)])
def test_graph6_errors_carry_offsets(bad, offset):
    with pytest.raises(Graph6ParseError) as exc:
        from_graph6(bad)
    assert exc.value.offset == offset
    assert "byte offset" in str(exc.value)


def _random_graph(n, seed, p=0.3):
    return Graph.from_adjacency(nx.to_numpy_array(nx.gnp_random_graph(n, p, seed=seed), dtype=np.int8))


SIZES = list(range(5, 101)) + [245, 605, 845]


@given(st.sampled_from(SIZES), st.integers(0, 2**31 - 1))
def test_graph6_roundtrip_and_networkx_agreement(n, seed):
    X = _random_graph(n, seed, p=min(0.3, 6 / n))
    text = to_graph6(X)
    assert from_graph6(text) == X
    ref = nx.to_graph6_bytes(nx.from_numpy_array(X.adjacency_matrix()), header=False).decode().strip()
    assert text == ref


def test_graph6_roundtrip_500_random():
    rng = np.random.default_rng(7)
    for k in range(500):
        n = int(rng.choice(SIZES))
        X = _random_graph(n, int(rng.integers(1 << 30)), p=min(0.3, 5 / n))
        assert from_graph6(to_graph6(X)) == X


@pytest.mark.parametrize("spec", [GroupSpec.direct(7), GroupSpec.meta1(11, 3), GroupSpec.cyclic(245)],
                         ids=lambda s: s.name)
def test_cayley_right_translations_are_automorphisms(spec):
    G = make_group(spec)
    inv = G.inverse_index
    S = None
    for k in range(1, G.order):
        if G.orders[k] > 2:
            S = [G.element(k), G.element(int(inv[k]))]
            break
    X = cayley(G, S)
    for h in range(G.order):
        assert X.is_automorphism(G.table[:, h])


@pytest.mark.parametrize("p", [7, 11, 13])
def test_connected_iff_generating(p):
    X = c_pm1(p)
    assert is_connected(X)
    for cand in list(lemma_candidates(11, "B", 3))[:60]:
        G = lemma_group(11, "B", 3)
        Y = cayley(G, ConnectionSet(G, frozenset(cand.S)))
        assert is_connected(Y) == (len(generated_subgroup(G, cand.S)) == G.order)


def test_graph_json_roundtrip():
    X = c_pm1(7)
    Y = Graph.from_json(X.to_json())
    assert X == Y
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(0, 0)])
