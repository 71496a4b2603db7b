from __future__ import annotations

import random
from itertools import combinations

from hypothesis import strategies as st

from kwcomplex.complex import Complex2
from kwcomplex.gluing import Embedding


def random_complex(rng: random.Random, n: int, p_tri: float = 0.3, p_edge: float = 0.2) -> Complex2:
    tris = [t for t in combinations(range(n), 3) if rng.random() < p_tri]
    edges = [e for e in combinations(range(n), 2) if rng.random() < p_edge]
    return Complex2.build(tris, edges, n)


@st.composite
def complexes(draw, min_n: int = 1, max_n: int = 7) -> Complex2:
    n = draw(st.integers(min_n, max_n))
    tris = draw(st.lists(st.sampled_from(list(combinations(range(n), 3)) or [None]), max_size=12))
    edges = draw(st.lists(st.sampled_from(list(combinations(range(n), 2)) or [None]), max_size=8))
    return Complex2.build([t for t in tris if t], [e for e in edges if e], n)


def relabel_random(K: Complex2, rng: random.Random) -> Complex2:
    perm = list(range(K.n))
    rng.shuffle(perm)
    return K.relabel(perm)


def random_gluing(rng: random.Random):
    """Random X, a random subcomplex Z of it, and a random Y containing a copy of Z."""
    nx = rng.randint(3, 7)
    X = Complex2.build([t for t in combinations(range(nx), 3) if rng.random() < 0.35],
                       [e for e in combinations(range(nx), 2) if rng.random() < 0.3], nx)
    S = sorted(rng.sample(range(nx), rng.randint(1, nx)))
    pos = {v: i for i, v in enumerate(S)}
    z_edges = [(pos[a], pos[b]) for a, b in X.edges if a in pos and b in pos and rng.random() < 0.8]
    ze = set(z_edges)
    z_tris = [tuple(pos[v] for v in t) for t in X.triangles
              if all(v in pos for v in t) and rng.random() < 0.7
              and all(e in ze for e in combinations(tuple(pos[v] for v in t), 2))]
    Z = Complex2.build(z_tris, z_edges, len(S))
    ny = len(S) + rng.randint(0, 4)
    Y = Complex2.build(list(Z.triangles) + [t for t in combinations(range(ny), 3) if rng.random() < 0.25],
                       list(Z.edges) + [e for e in combinations(range(ny), 2) if rng.random() < 0.2], ny)
    return X, Y, Embedding(Z, X, S), Embedding(Z, Y, range(len(S)))


# Acceptance lines collected during the run and repeated in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
