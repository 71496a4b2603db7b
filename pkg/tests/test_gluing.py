from __future__ import annotations

import random
from itertools import combinations

import pytest

from conftest import random_gluing

from kwcomplex.complex import Complex2, ComplexError, classify_surface, is_isomorphic, validate
from kwcomplex.constructions import genus2_gluing, minimal_torus, TORUS_CIRCLES
from kwcomplex.gluing import (
    Embedding,
    GluingError,
    attach,
    condition_one_violations,
    direct_violations,
    glue,
    identify_curves,
    is_maximal,
    path_embeddings,
)

K4 = list(combinations(range(4), 2))


def _skeleton_split():
    Z = Complex2(4, tuple(K4), ())
    X = Complex2.build([(0, 1, 2), (0, 1, 3)], K4, 4)
    Y = Complex2.build([(0, 2, 3), (1, 2, 3)], K4, 4)
    return X, Y, Embedding(Z, X, range(4)), Embedding(Z, Y, range(4))


def test_wedge_of_circles_maximal_in_torus():
    T = minimal_torus()
    iZ, _ = path_embeddings(T, T, TORUS_CIRCLES, TORUS_CIRCLES)
    assert iZ.source.f_vector == (5, 6, 0)
    assert is_maximal(iZ)


def test_triangle_boundary_not_maximal():
    tri = Complex2.build([(0, 1, 2)])
    Z = Complex2.build((), [(0, 1), (1, 2), (0, 2)], 3)
    assert not is_maximal(Embedding(Z, tri, range(3)))


def test_skeleton_in_two_faces_not_maximal():
    X, Y, iZ, jZ = _skeleton_split()
    assert not is_maximal(iZ) and not is_maximal(jZ)


def test_invalid_embedding_rejected():
    Z = Complex2.build((), [(0, 1)], 2)
    with pytest.raises(ComplexError):
        Embedding(Z, Complex2(2), (0, 1))
    with pytest.raises(ComplexError):
        Embedding(Complex2(2), Complex2(3), (1, 1))


def test_sphere_from_two_disks_via_direct_validation():
    X, Y, iZ, jZ = _skeleton_split()
    res = glue(X, Y, iZ, jZ)
    assert res.lemma22_condition2 is False and res.directly_validated
    assert res.route == "direct"
    assert is_isomorphic(res.complex, Complex2.build(combinations(range(4), 3)))


def test_genus_two_shifted():
    res = glue(*genus2_gluing(1))
    assert res.complex.n == 10
    rep = classify_surface(res.complex)
    assert (rep.is_closed_surface, rep.orientable, rep.genus) == (True, True, 2)
    assert res.route == "sufficient-conditions"


def test_genus_two_aligned_rejected():
    with pytest.raises(GluingError) as err:
        glue(*genus2_gluing(0))
    # Z vertex i is x_(i+1) = y_(i+1); the offending pair is x1 = y1 and x3 = y3.
    assert err.value.edge_pairs == [(0, 2)]
    assert "two distinct edges join Z vertices 0 and 2" in err.value.diagnostics[0]


def test_direct_violation_names_simplices():
    # Two triangles sharing all three vertices but glued along only two of them.
    X = Complex2.build([(0, 1, 2)])
    Y = Complex2.build([(0, 1, 2)])
    Z = Complex2(3, ((0, 1), (1, 2)), ())
    iZ, jZ = Embedding(Z, X, range(3)), Embedding(Z, Y, range(3))
    with pytest.raises(GluingError) as err:
        glue(X, Y, iZ, jZ)
    assert any("two distinct edges" in d for d in err.value.diagnostics)


def test_sufficient_conditions_imply_direct_validity():
    rng = random.Random(2024)
    checked = 0
    while checked < 300:
        X, Y, iZ, jZ = random_gluing(rng)
        if condition_one_violations(X, Y, iZ, jZ) or not (is_maximal(iZ) or is_maximal(jZ)):
            continue
        checked += 1
        assert direct_violations(X, Y, iZ, jZ) == []
        W = glue(X, Y, iZ, jZ).complex
        assert validate(W).is_simplicial


def test_additivity_and_symmetry():
    rng = random.Random(5)
    done = 0
    while done < 100:
        X, Y, iZ, jZ = random_gluing(rng)
        try:
            res = glue(X, Y, iZ, jZ)
        except GluingError:
            continue
        done += 1
        Z = iZ.source
        W = res.complex
        assert W.f_vector == tuple(x + y - z for x, y, z in zip(X.f_vector, Y.f_vector, Z.f_vector))
        assert is_isomorphic(W, glue(Y, X, jZ, iZ).complex)


def test_identify_circles():
    K = Complex2.build((), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6)
    res = identify_curves(K, (0, 1, 2, 0), (3, 4, 5, 3))
    assert res.complex.f_vector == (3, 3, 0)


def test_identify_filled_triangles_duplicate():
    K = Complex2.build([(0, 1, 2), (3, 4, 5)])
    with pytest.raises(GluingError):
        identify_curves(K, (0, 1, 2, 0), (3, 4, 5, 3))


def test_identify_requires_bijection():
    K = Complex2.build((), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6)
    with pytest.raises(ComplexError):
        identify_curves(K, (0, 1, 2), (3, 4, 5), {0: 3, 1: 3, 2: 5})


def test_identify_reversed_order_allowed():
    K = Complex2.build((), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 6)
    res = identify_curves(K, (0, 1, 2), (3, 4, 5), {0: 3, 1: 5, 2: 4})
    assert res.complex.f_vector == (3, 3, 0)


def test_attach_disk_twice_around_circle():
    # A hexagon disk whose boundary runs twice round a triangle circle is not
    # simplicial; a disk whose boundary runs once round is.
    circle = Complex2.build((), [(0, 1), (1, 2), (0, 2)], 3)
    disk = Complex2.build([(0, 1, 3), (1, 2, 3), (0, 2, 3)])
    K, ids = attach(circle, disk, {0: 0, 1: 1, 2: 2}, [(0, 1), (1, 2), (0, 2)])
    assert K.f_vector == (4, 6, 3) and ids[3] == 3
    hexagon = Complex2.build([(i, (i + 1) % 6, 6) for i in range(6)])
    with pytest.raises(GluingError):
        attach(circle, hexagon, {i: i % 3 for i in range(6)}, [(i, (i + 1) % 6) for i in range(6)])
