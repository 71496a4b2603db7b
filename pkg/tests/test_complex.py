from __future__ import annotations

import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings

from conftest import complexes, random_complex, relabel_random
from kwcomplex import (
    Complex2,
    ComplexError,
    canonical_form,
    classify_surface,
    euler_characteristic,
    is_isomorphic,
    link,
    star,
    star_cover_nerve,
    validate,
)
from kwcomplex.constructions import bouquet, minimal_rp2, minimal_torus, moebius_band


def test_validate_torus_ok():
    rep = validate(minimal_torus())
    assert rep.ok and rep.connected and rep.problems == []


def test_validate_missing_edge_reported():
    K = Complex2(3, ((0, 2), (1, 2)), ((0, 1, 2),))
    rep = validate(K)
    assert not rep.ok
    assert any("[0, 1]" in p and "closure" in p for p in rep.problems)


def test_validate_disconnected_is_reported_not_rejected():
    K = Complex2.build([(0, 1, 2), (3, 4, 5)])
    rep = validate(K)
    assert rep.is_simplicial and not rep.connected and rep.components == 2
    assert not rep.ok


def test_validate_duplicates_and_degenerates():
    K = Complex2(3, ((0, 1), (0, 1), (1, 1)), ())
    probs = validate(K).problems
    assert any("duplicate edge" in p for p in probs)
    assert any("degenerate edge" in p for p in probs)


def test_from_dict_rejects_unclosed():
    with pytest.raises(ComplexError):
        Complex2.from_dict({"vertices": 3, "edges": [[0, 1]], "triangles": [[0, 1, 2]]})


def test_json_round_trip():
    K = minimal_rp2()
    assert Complex2.from_json(K.to_json()) == K
    assert Complex2.from_dict(K.to_dict()).to_json() == K.to_json()


def test_euler_characteristics():
    assert euler_characteristic(minimal_torus()) == 0
    assert euler_characteristic(minimal_rp2()) == 1
    assert euler_characteristic(Complex2(1)) == 1


def test_torus_links_are_hexagons():
    T = minimal_torus()
    for v in T.vertices:
        L = link(T, v)
        assert L.f_vector == (6, 6, 0)
        assert all(len(L.neighbors[u]) == 2 for u in L.vertices)
        assert L.is_connected()


def test_triangle_corner_link_and_star():
    K = Complex2.build([(0, 1, 2)])
    assert link(K, 0).f_vector == (2, 1, 0)
    assert star(K, 0) == K


def test_bouquet_base_link_is_discrete():
    for n in (1, 2, 4):
        L = link(bouquet(n).complex, 0)
        assert L.f_vector == (2 * n, 0, 0)


def test_star_of_missing_vertex():
    with pytest.raises(ComplexError):
        star(minimal_torus(), 7)


def test_classify_known_surfaces():
    t = classify_surface(minimal_torus())
    assert (t.is_closed_surface, t.orientable, t.genus) == (True, True, 1)
    p = classify_surface(minimal_rp2())
    assert (p.is_closed_surface, p.orientable, p.genus) == (True, False, 1)
    m = classify_surface(moebius_band().complex)
    assert not m.is_closed_surface and m.genus is None


def test_boundary_of_tetrahedron_is_sphere():
    S = Complex2.build(combinations(range(4), 3))
    rep = classify_surface(S)
    assert rep.is_closed_surface and rep.orientable and rep.genus == 0


def test_pinched_complex_is_not_a_surface():
    # Two tetrahedron boundaries sharing a vertex: every edge has degree 2,
    # but the shared vertex has a disconnected link.
    A = list(combinations(range(4), 3))
    B = [tuple(v if v == 0 else v + 3 for v in t) for t in A]
    K = Complex2.build(A + B)
    assert all(d == 2 for d in K.edge_degrees.values())
    assert not classify_surface(K).is_closed_surface


def test_canonical_form_permutation_invariant():
    rng = random.Random(7)
    for _ in range(100):
        K = random_complex(rng, rng.randint(3, 7))
        assert canonical_form(relabel_random(K, rng)) == canonical_form(K)


def test_canonical_form_separates():
    assert canonical_form(minimal_torus()) != canonical_form(minimal_rp2())


def _brute_key(K: Complex2):
    best = None
    for p in permutations(range(K.n)):
        L = K.relabel(p)
        key = (L.triangles, L.edges)
        if best is None or key < best:
            best = key
    return best


def test_canonical_form_complete_on_four_vertices():
    # Compare canonical forms with a brute-force minimum over all relabellings.
    seen = {}
    tris = list(combinations(range(4), 3))
    edges = list(combinations(range(4), 2))
    for tm in range(1 << 4):
        T = [tris[i] for i in range(4) if tm >> i & 1]
        for em in range(1 << 6):
            K = Complex2.build(T, [edges[i] for i in range(6) if em >> i & 1], 4)
            seen.setdefault(_brute_key(K), set()).add(canonical_form(K))
    assert all(len(v) == 1 for v in seen.values())
    forms = [next(iter(v)) for v in seen.values()]
    assert len(set(forms)) == len(forms)


def test_equal_f_vectors_non_isomorphic_pair():
    # A path and a claw: both (4, 3, 0).
    path = Complex2.build((), [(0, 1), (1, 2), (2, 3)], 4)
    claw = Complex2.build((), [(0, 1), (0, 2), (0, 3)], 4)
    assert path.f_vector == claw.f_vector
    assert not is_isomorphic(path, claw)


def test_nerve_examples():
    assert is_isomorphic(star_cover_nerve(minimal_rp2()), minimal_rp2())
    tri = Complex2.build([(0, 1, 2)])
    assert star_cover_nerve(tri) == tri
    B = bouquet(2).complex
    assert is_isomorphic(star_cover_nerve(B), B)


@settings(max_examples=150, deadline=None)
@given(complexes())
def test_nerve_reproduces_complex(K):
    N = star_cover_nerve(K)
    assert N == K
    assert star_cover_nerve(N) == N


@settings(max_examples=100, deadline=None)
@given(complexes(min_n=3))
def test_surface_report_consistent_with_euler(K):
    rep = classify_surface(K)
    assert rep.euler_characteristic == euler_characteristic(K)
    if rep.is_closed_surface:
        if rep.orientable:
            assert rep.euler_characteristic % 2 == 0
            assert rep.euler_characteristic == 2 - 2 * rep.genus
        else:
            assert rep.euler_characteristic == 2 - rep.genus
    else:
        assert rep.genus is None
