from __future__ import annotations

import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complexes
from kwcomplex.complex import Complex2, euler_characteristic
from kwcomplex.constructions import (
    CoxeterMatrix,
    bouquet,
    genus2_surface,
    minimal_rp2,
    minimal_torus,
    raag_complex,
    telescope,
)
from kwcomplex.invariants import (
    AbelianGroup,
    Presentation,
    abelianization,
    betti_bound_check,
    count_homomorphisms_s3,
    cyclic_reduce,
    edge_path_presentation,
    free_reduce,
    homology,
    inverse,
    is_collapsible_to_graph,
    is_cyclically_reduced,
    loop_class,
    smith_diagonal,
    tietze_simplify,
)


def _det(M):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


def _determinant_divisors(A):
    """d_k = gcd of all k x k minors, by brute force."""
    rows, cols = len(A), len(A[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for R in combinations(range(rows), k):
            for C in combinations(range(cols), k):
                g = gcd(g, _det([[A[i][j] for j in C] for i in R]))
        out.append(g)
    return out


def test_snf_matches_minor_gcds():
    rng = random.Random(11)
    for _ in range(40):
        A = [[rng.randint(-6, 6) for _ in range(5)] for _ in range(5)]
        diag = smith_diagonal(A)
        assert all(diag[i + 1] % diag[i] == 0 for i in range(len(diag) - 1) if diag[i])
        prods, acc = [], 1
        for d in diag + [0] * (5 - len(diag)):
            acc *= d
            prods.append(acc)
        assert prods == _determinant_divisors(A)


def test_snf_large_entries_exact():
    A = [[10 ** 30, 0], [0, 6 * 10 ** 30]]
    assert smith_diagonal(A) == [10 ** 30, 6 * 10 ** 30]


def test_abelian_group_chain():
    with pytest.raises(ValueError):
        AbelianGroup(0, (2, 3))
    assert str(AbelianGroup(1, (2, 4))) == "Z + Z/2 + Z/4"


def test_words():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    assert inverse((1, -2)) == (2, -1)
    assert is_cyclically_reduced((1, 2)) and not is_cyclically_reduced((1, 2, -1))


def test_abelianization_examples():
    assert abelianization(Presentation(1, [(1,) * 6])) == AbelianGroup(0, (6,))
    assert abelianization(Presentation(2, [(1, 2, 1, -2)])) == AbelianGroup(1, (2,))
    assert abelianization(Presentation(2, [(1, 2, 1, -2, -1, -2)])) == AbelianGroup(1, ())


def test_torus_presentation():
    P = edge_path_presentation(minimal_torus())
    assert (P.generator_count, len(P.relators)) == (15, 14)
    assert abelianization(P) == AbelianGroup(2, ())
    Q = tietze_simplify(P)
    assert Q.generator_count == 2 and len(Q.relators) == 1
    r = Q.relators[0]
    assert len(r) == 4 and sorted(r) == [-2, -1, 1, 2]
    assert r[0] == -r[2] and r[1] == -r[3]


def test_single_triangle_trivial():
    P = edge_path_presentation(Complex2.build([(0, 1, 2)]))
    assert (P.generator_count, len(P.relators)) == (1, 1)
    assert abelianization(P).is_trivial
    assert tietze_simplify(P).generator_count == 0


def test_bouquet_is_free():
    for n in (1, 3):
        Q = tietze_simplify(edge_path_presentation(bouquet(n).complex))
        assert Q.generator_count == n and not Q.relators


def test_tietze_leaves_minimal_presentation():
    P = Presentation(2, [(1, 2, -1, -2)])
    Q = tietze_simplify(P)
    assert (Q.generator_count, Q.relators) == (2, [(1, 2, -1, -2)])


def test_tietze_budget_zero_is_identity():
    P = edge_path_presentation(minimal_torus())
    Q = tietze_simplify(P, move_budget=0)
    assert Q.generator_count == P.generator_count and Q.relators == P.relators


def test_disconnected_presentation_rejected():
    with pytest.raises(ValueError):
        edge_path_presentation(Complex2.build([(0, 1, 2), (3, 4, 5)]))


def test_homology_examples():
    h = homology(minimal_rp2())
    assert (h.b0, h.b1, h.b2, h.h1_torsion) == (1, 0, 0, (2,))
    M = CoxeterMatrix(3, ((1, 2, 2), (1, 3, 2), (2, 3, 2)))
    h = homology(raag_complex(M).complex)
    assert (h.b1, h.b2, h.h1_torsion) == (3, 3, ())
    h = homology(genus2_surface())
    assert (h.b1, h.b2, h.h1_torsion) == (4, 1, ())


def test_betti_bound_check():
    assert betti_bound_check(minimal_torus())
    assert betti_bound_check(genus2_surface())


def test_collapsibility_examples():
    assert is_collapsible_to_graph(Complex2.build([(0, 1, 2)]))
    assert not is_collapsible_to_graph(minimal_rp2())


def test_four_vertex_collapsibility_exhaustive():
    # Every connected complex on at most four vertices collapses to a graph,
    # except the boundary of the tetrahedron (a 2-sphere, b2 = 1).
    sphere = Complex2.build(combinations(range(4), 3))
    failures = set()
    for n in range(1, 5):
        tris = list(combinations(range(n), 3))
        edges = list(combinations(range(n), 2))
        for tm in range(1 << len(tris)):
            T = [tris[i] for i in range(len(tris)) if tm >> i & 1]
            for em in range(1 << len(edges)):
                K = Complex2.build(T, [edges[i] for i in range(len(edges)) if em >> i & 1], n)
                if K.is_connected() and not is_collapsible_to_graph(K):
                    failures.add(K)
    assert failures == {sphere}


def test_loop_classes_in_telescope():
    T = telescope(4)
    for i in range(4):
        assert loop_class(T, f"gamma{i}") == (2 ** i,)
    assert loop_class(T, "boundary3") == (16,)


def test_loop_class_errors():
    T = telescope(1)
    with pytest.raises(KeyError):
        loop_class(T, "nope")


def test_s3_count_distinguishes():
    P = tietze_simplify(edge_path_presentation(minimal_rp2()))
    assert count_homomorphisms_s3(P) == 4
    assert count_homomorphisms_s3(Presentation(2, [])) == 36
    assert count_homomorphisms_s3(Presentation(2, [(1, 2, -1, -2)])) == 18


@settings(max_examples=120, deadline=None)
@given(complexes(min_n=2))
def test_two_pipelines_agree(K):
    if not K.is_connected():
        return
    h = homology(K)
    ab = abelianization(edge_path_presentation(K))
    assert (ab.free_rank, ab.invariant_factors) == (h.b1, h.h1_torsion)
    assert euler_characteristic(K) == h.b0 - h.b1 + h.b2
    if is_collapsible_to_graph(K):
        assert h.b2 == 0 and not h.h1_torsion


@settings(max_examples=60, deadline=None)
@given(complexes(min_n=3, max_n=6))
def test_tietze_preserves_invariants(K):
    if not K.is_connected():
        return
    P = edge_path_presentation(K)
    Q = tietze_simplify(P)
    assert abelianization(P) == abelianization(Q)
    assert Q.generator_count <= P.generator_count
    if P.generator_count <= 5:
        assert count_homomorphisms_s3(Q) == count_homomorphisms_s3(P)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.lists(st.lists(st.integers(-4, 4).filter(bool), max_size=6), max_size=4))
def test_each_tietze_budget_preserves_abelianization(g, rels):
    rels = [tuple(x for x in r if abs(x) <= g) for r in rels]
    P = Presentation(g, rels)
    base = abelianization(P)
    for budget in range(6):
        assert abelianization(tietze_simplify(P, budget)) == base
