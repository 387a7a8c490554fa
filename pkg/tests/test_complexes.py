import json
from itertools import combinations

import pytest

from snapcomplex import (
    RoundCounter,
    WitnessTable,
    boundary_subcomplex,
    build,
    chromatic_check,
    complex_to_dot,
    complex_to_json,
    cone_check,
    delta_v,
    enumerate_top,
    f_top,
    ghost,
    is_simplex,
    path_profile,
    structural_checks,
    vertices,
)
from snapcomplex.complexes import expected_endpoint, has_face
from snapcomplex.errors import PreconditionViolation
from tests.helpers import enumerate_top_brute, m_count_brute


def keys(simplices):
    return {s.key for s in simplices}


def test_is_simplex_examples():
    r = RoundCounter.of(1, 1)
    top = WitnessTable([({0, 1}, ()), ({0, 1}, ())])
    assert is_simplex(top, r)
    assert not is_simplex(WitnessTable([({0, 1}, ())]), r)
    assert is_simplex(WitnessTable([((), {0, 1})]), r)
    # wrong support
    assert not is_simplex(WitnessTable([({0}, ())]), r)


def test_membership_counts_match_brute_force():
    r = RoundCounter.of(1, 1)
    for sigma in build(r).simplices:
        for p in sorted(sigma.supp):
            want = r[p] + 1
            if p in sigma.active_set:
                assert m_count_brute(sigma, p) == want
            else:
                assert m_count_brute(sigma, p) <= want


def test_enumerate_top_examples():
    got = keys(enumerate_top(RoundCounter.of(1, 1)))
    assert got == {
        WitnessTable([({0, 1}, ()), ({0}, ()), ({1}, ())]).key,
        WitnessTable([({0, 1}, ()), ({1}, ()), ({0}, ())]).key,
        WitnessTable([({0, 1}, ()), ({0, 1}, ())]).key,
    }
    assert keys(enumerate_top(RoundCounter.of(0, 0))) == {WitnessTable([({0, 1}, ())]).key}
    assert len(enumerate_top(RoundCounter.of(1, 1, 1))) == 13


def test_enumerate_top_against_unpruned_filter():
    for values in [(1, 1), (2, 0), (1, 1, 1), (2, 1), (0, 0, 1)]:
        r = RoundCounter.of(*values)
        assert set(enumerate_top(r)) == enumerate_top_brute(r)


def test_build_f_vectors():
    assert build(RoundCounter.of(1, 1)).f_vector == (1, 4, 3)
    k = build(RoundCounter.of(1, 1, 1))
    assert k.f_vector == (1, 12, 24, 13)
    assert k.euler == 1
    assert build(RoundCounter.of(0, 0, 0)).f_vector == (1, 3, 3, 1)
    assert build(RoundCounter.of(1)).f_vector == (1, 1)


def test_build_members_satisfy_membership_and_closure():
    for values in [(1, 1), (2, 1), (1, 1, 1), (0, 2)]:
        r = RoundCounter.of(*values)
        k = build(r)
        assert sum(1 for s in k.simplices if s.dim == -1) == 1
        for sigma in k.simplices:
            assert is_simplex(sigma, r)
            act = sorted(sigma.active_set)
            for n in range(len(act) + 1):
                for sub in combinations(act, n):
                    face = ghost(sigma, sub)
                    assert face in k
                    assert has_face(sigma, face)
        assert len(k.tops) == f_top([v for _, v in r])


def test_vertices_examples():
    top = WitnessTable([({0, 1}, ()), ({0, 1}, ())])
    assert keys(vertices(top)) == {
        WitnessTable([({0, 1}, ()), ({0}, {1})]).key,
        WitnessTable([({0, 1}, ()), ({1}, {0})]).key,
    }
    v = WitnessTable([({0, 1}, ()), ({0}, {1})])
    assert vertices(v) == frozenset({v})
    edge = WitnessTable([({0, 1}, ()), ({0}, ()), ({1}, ())])
    assert keys(vertices(edge)) == {
        WitnessTable([({0}, {1}), ({0}, ())]).key,
        WitnessTable([({0, 1}, ()), ({1}, {0})]).key,
    }


def test_boundary_subcomplex_examples():
    r = RoundCounter.of(1, 1)
    k = build(r)
    b0 = boundary_subcomplex(k, {0})
    assert keys(b0.members) == {
        WitnessTable([((), {0, 1})]).key,
        WitnessTable([({1}, {0}), ({1}, ())]).key,
    }
    images = {delta_v(s, {0}) for s in b0.members}
    assert images == set(build(r.delete({0})).simplices)
    assert boundary_subcomplex(k, ()).members == frozenset(k.simplices)
    assert keys(boundary_subcomplex(k, {0, 1}).members) == {WitnessTable([((), {0, 1})]).key}
    with pytest.raises(PreconditionViolation):
        boundary_subcomplex(k, {5})
    with pytest.raises(PreconditionViolation):
        delta_v(WitnessTable([({0, 1}, ())]), {0})


def test_boundary_slice_is_isomorphic_image():
    for values in [(1, 1), (1, 1, 1), (2, 1)]:
        r = RoundCounter.of(*values)
        k = build(r)
        for p in sorted(r.support):
            b = boundary_subcomplex(k, {p})
            assert b.is_closed()
            target = build(r.delete({p}))
            mapped = {delta_v(s, {p}): s for s in b.members}
            assert set(mapped) == set(target.simplices)
            for tau, sigma in mapped.items():
                for q in sorted(sigma.active_set):
                    assert delta_v(ghost(sigma, (q,)), {p}) == ghost(tau, (q,))


def test_structural_checks_small():
    for values in [(1, 1), (0, 0, 0), (1, 1, 1), (2, 1)]:
        rep = structural_checks(build(RoundCounter.of(*values)))
        assert rep.ok, (values, rep)


def test_boundary_edge_split_of_three_process_one_round():
    k = build(RoundCounter.of(1, 1, 1))
    edges = k.by_dim[1]
    boundary = [e for e in edges if len(k.cofacets[e]) == 1]
    interior = [e for e in edges if len(k.cofacets[e]) == 2]
    assert (len(boundary), len(interior)) == (9, 15)
    assert all(e.g(0) for e in boundary)
    assert not any(e.g(0) for e in interior)


def test_path_profiles():
    rep = path_profile(build(RoundCounter.of(1, 1)))
    assert rep.ok and rep.edges == 3
    assert path_profile(build(RoundCounter.of(2, 1))).edges == 5
    rep10 = path_profile(build(RoundCounter.of(1, 0)))
    assert rep10.ok and rep10.edges == 1
    assert expected_endpoint(RoundCounter.of(1, 1), 0) == WitnessTable([({0}, {1}), ({0}, ())])
    with pytest.raises(PreconditionViolation):
        path_profile(build(RoundCounter.of(1, 1, 1)))


def test_cone_examples():
    assert cone_check(RoundCounter.of(1, 0), 1)
    assert cone_check(RoundCounter.of(0, 0), 1)
    assert cone_check(RoundCounter.of(1, 1, 0), 2)
    with pytest.raises(PreconditionViolation):
        cone_check(RoundCounter.of(1, 1), 1)


def test_chromatic_examples():
    assert chromatic_check(RoundCounter.of(1, 1, 1))
    assert chromatic_check(RoundCounter.of(1))
    assert chromatic_check(RoundCounter.of(1, 1, 0))
    with pytest.raises(PreconditionViolation):
        chromatic_check(RoundCounter.of(2, 1))


def test_relabel_equivariance_and_canonical_invariance():
    r = RoundCounter({0: 1, 2: 1})
    k = build(r)
    pi = {0: 2, 2: 0}

    def relabel_table(sigma, mapping):
        return WitnessTable(
            [
                (tuple(sorted(mapping.get(p, p) for p in w)), tuple(sorted(mapping.get(p, p) for p in g)))
                for w, g in sigma.pairs
            ]
        )

    image = {relabel_table(s, {2: 0, 0: 2}) for s in k.simplices}
    assert image == set(build(r.relabel(pi)).simplices)
    # canonical form: order-preserving bijection supp -> 0..n
    order = {p: i for i, p in enumerate(sorted(r.support))}
    canon_image = {relabel_table(s, order) for s in k.simplices}
    assert canon_image == set(build(r.canonical()).simplices)


def test_exports():
    k = build(RoundCounter.of(1, 1))
    obj = json.loads(complex_to_json(k))
    assert obj["f_vector"] == [1, 4, 3]
    assert len(obj["tops"]) == 3
    assert {entry["key"] for entry in obj["simplices"]} == keys(k.simplices)
    empty_key = WitnessTable([((), {0, 1})]).key
    by_key = {entry["key"]: entry for entry in obj["simplices"]}
    assert by_key[empty_key]["dim"] == -1
    dot = complex_to_dot(k)
    assert dot.startswith("graph dual {")
    assert dot.count(" -- ") == 2
    assert dot.count("boundary=true") == 2
