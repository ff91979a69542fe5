import json
import random

import pytest

from onereg.errors import DomainError
from onereg.graphs import cayley
from onereg.groups import GroupSpec, _closure, make_group, set_stabilizing_automorphisms
from onereg.symmetry import canonical_form
from onereg.verify import (
    LemmaVerdict,
    _evaluate,
    census,
    connection_sets,
    orbit_representatives,
    verify_family,
    verify_lemma,
)


@pytest.fixture(scope="module")
def census7():
    return census(7, "abelian")


def test_lemma_precondition():
    with pytest.raises(DomainError, match="fifth root"):
        verify_lemma("A", 7)


@pytest.mark.parametrize("which,i", [("A", 3), ("B", 3)])
def test_lemma_verdict_invariants(which, i):
    (v,) = verify_lemma(which, 11, i)
    assert isinstance(v, LemmaVerdict)
    assert v.normal_oneregular_hits <= v.transitive_autgs_hits <= v.candidates_connected <= v.candidates_total
    assert v.candidates_total <= v.raw_parameter_space
    assert v.confirmed == (v.normal_oneregular_hits == 0)
    assert "elapsed" not in v.to_json(timestamps=False)


def test_transitivity_filter_keeps_normal_one_regular_graphs(direct7):
    # a known normal one-regular Cayley graph passes the group-side filter
    S = [direct7.parse(w) for w in ("y", "y^-1", "xy", "x^-1y^-1")]
    assert set_stabilizing_automorphisms(direct7, S).transitive


def test_verify_family_7():
    rep = verify_family(7)
    assert rep.passed
    normal = [c for c in rep.checks if c.claim.startswith("thm1 is a normal")]
    assert normal and normal[0].informational
    json.dumps(rep.to_json())


def test_verify_family_rejects_non_prime():
    with pytest.raises(DomainError):
        verify_family(4)


def test_connection_set_count():
    G = make_group(GroupSpec.cyclic(245))
    assert len(connection_sets(G)) == 122 * 121 // 2


def test_census_shape(census7):
    names = [s.group for s in census7.stats]
    assert names == ["Z7xZ35", "Z245"]
    assert all(r.methods_agree for r in census7.records)
    for r in census7.records:
        # Cay(Z_7 x Z_35, {x^+-1, y^+-1}) has 980 automorphisms but two arc orbits
        assert r.one_regular == (r.arc_transitive and r.aut_order == 4 * r.group["order"])
    kinds = [r.group["kind"] for r in census7.records]
    assert kinds == sorted(kinds, key=["direct", "cyclic"].index)
    for kind in ("direct", "cyclic"):
        g6 = [r.graph6 for r in census7.records if r.group["kind"] == kind]
        assert g6 == sorted(g6)


def test_census_matches(census7):
    for r in census7.hits:
        if r.group["kind"] == "cyclic":
            assert r.family_match == "circulant"
        else:
            assert r.family_match in ("thm1", "UNMATCHED")
    assert any(r.family_match == "thm1" for r in census7.hits)


def test_census_is_deterministic_and_thread_independent(census7):
    again = census(7, "abelian", threads=2)
    assert [r.to_json() for r in again.records] == [r.to_json() for r in census7.records]


def test_census_checkpoint_resume(tmp_path, census7):
    path = str(tmp_path / "ck.json")
    first = census(7, "abelian", checkpoint=path)
    data = json.loads(open(path).read())
    assert {"scope", "group", "last_candidate_index"} <= set(data)
    resumed = census(7, "abelian", checkpoint=path)
    assert [r.to_json() for r in resumed.records] == [r.to_json() for r in first.records]


def test_dedup_keeps_isomorphism_classes_sampled():
    """Sampled no-dedup check: random connected sets land in a known class."""
    rng = random.Random(5)
    for spec in (GroupSpec.direct(7), GroupSpec.cyclic(245)):
        G = make_group(spec)
        sets = connection_sets(G)
        reps = orbit_representatives(G, sets)
        known = set()
        for S in reps:
            res = _evaluate(spec, S)
            if res is not None:
                known.add((tuple(map(tuple, res["cert"][0])), res["cert"][1]))
        connected = [S for S in sets if len(_closure(G, S)) == G.order]
        for S in rng.sample(connected, 40):
            res = _evaluate(spec, S)
            assert (tuple(map(tuple, res["cert"][0])), res["cert"][1]) in known


def test_census_scope_validation():
    with pytest.raises(DomainError):
        census(17, "abelian")
    with pytest.raises(DomainError):
        census(7, "everything")
    with pytest.raises(DomainError):
        census(7, "abelian", threads=0)


@pytest.mark.slow
def test_census_all_groups_at_11_metacyclic_have_no_hits():
    res = census(11, "all")
    by_group = {s.group: s for s in res.stats}
    assert len(by_group) == 10
    for name, s in by_group.items():
        if name.startswith("meta"):
            assert s.one_regular_hits == 0
    assert by_group["Z11xZ55"].one_regular_hits == 2
    assert by_group["Z605"].one_regular_hits == 1
    assert all(r.methods_agree for r in res.records)
    assert {r.family_match for r in res.hits} == {"thm1", "UNMATCHED", "circulant"}
