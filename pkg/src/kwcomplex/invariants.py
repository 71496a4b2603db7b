"""Group and homology invariants of 2-complexes.

Words in a free group are tuples of non-zero integers: ``k`` is the k-th
generator (1-based) and ``-k`` its inverse.  All integer linear algebra is
exact; Python ints never overflow.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations, product
from math import comb
from typing import Iterable, Sequence

from kwcomplex.complex import Complex2, ComplexError, _require_valid

Word = tuple[int, ...]


# -- Smith normal form --------------------------------------------------------

def _dense_snf(A: list[list[int]], Q: list[list[int]] | None = None) -> list[int]:
    """Diagonalise ``A`` in place; returns the invariant factors (zeros dropped).

    When ``Q`` is given, every column operation on ``A`` is mirrored on ``Q``.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag: list[int] = []
    t = 0

    def swap_cols(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        if Q is not None:
            for r in Q:
                r[j], r[k] = r[k], r[j]

    def add_col(dst, src, q):
        # col_dst -= q * col_src
        for r in A:
            if r[src]:
                r[dst] -= q * r[src]
        if Q is not None:
            for r in Q:
                if r[src]:
                    r[dst] -= q * r[src]

    while t < rows and t < cols:
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                a = A[i][j]
                if a and (piv is None or abs(a) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
                    if abs(a) == 1:
                        break
            if piv is not None and abs(A[piv[0]][piv[1]]) == 1:
                break
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        if j != t:
            swap_cols(t, j)
        while True:
            p = A[t][t]
            moved = False
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        row_t, row_i = A[t], A[i]
                        for k in range(t, cols):
                            if row_t[k]:
                                row_i[k] -= q * row_t[k]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        add_col(j, t, q)
                    if A[t][j]:
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_t, row_b = A[t], A[bad]
            for k in range(t, cols):
                row_t[k] += row_b[k]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
        diag.append(A[t][t])
        t += 1
    return diag


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Non-zero invariant factors ``d1 | d2 | ...`` of an integer matrix."""
    rows = [{j: int(v) for j, v in enumerate(r) if v} for r in matrix]
    ncols = max((len(r) for r in matrix), default=0)
    return _sparse_snf(rows, ncols)


def _sparse_snf(rows: list[dict[int, int]], ncols: int) -> list[int]:
    """Invariant factors of a sparse matrix given as ``{col: value}`` rows.

    Unit pivots are eliminated sparsely (boundary matrices are mostly
    ``+-1``), shortest row first and then sparsest column; whatever remains
    is handed to the dense routine.
    """
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    heap = [(len(r), i) for i, r in enumerate(rows)]
    heapq.heapify(heap)
    ones = 0
    while heap:
        length, pi = heapq.heappop(heap)
        if pi not in alive or length != len(rows[pi]):
            continue
        prow = rows[pi]
        if not prow:
            alive.discard(pi)
            continue
        units = [j for j, v in prow.items() if v in (1, -1)]
        if not units:
            # Revisited if a later elimination changes this row.
            continue
        pj = min(units, key=lambda j: (len(cols[j]), j))
        pv = prow[pj]
        for i in list(cols[pj]):
            if i == pi:
                continue
            r = rows[i]
            q = r[pj] * pv
            for j, v in prow.items():
                nv = r.get(j, 0) - q * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if r:
                heapq.heappush(heap, (len(r), i))
            else:
                alive.discard(i)
        for j in prow:
            cols[j].discard(pi)
        alive.discard(pi)
        ones += 1
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    if not rest:
        return [1] * ones
    used = sorted({j for r in rest for j in r})
    index = {j: k for k, j in enumerate(used)}
    dense = [[0] * len(used) for _ in rest]
    for a, r in enumerate(rest):
        for j, v in r.items():
            dense[a][index[j]] = v
    return [1] * ones + _dense_snf(dense)


# -- abelian groups and homology ------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = self.invariant_factors
        if any(d < 2 for d in f) or any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError(f"not an invariant-factor chain: {f}")

    @classmethod
    def from_diagonal(cls, ngens: int, diag: Iterable[int]) -> AbelianGroup:
        diag = [d for d in diag if d]
        return cls(ngens - len(diag), tuple(d for d in diag if d > 1))

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.invariant_factors

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class HomologyProfile:
    b0: int
    b1: int
    b2: int
    h1_torsion: tuple[int, ...] = ()

    @property
    def h1(self) -> AbelianGroup:
        return AbelianGroup(self.b1, self.h1_torsion)


def boundary_two(K: Complex2) -> list[dict[int, int]]:
    """Rows of the transposed boundary map: one row per triangle, indexed by edge."""
    index = {e: i for i, e in enumerate(K.edges)}
    return [{index[(a, b)]: 1, index[(b, c)]: 1, index[(a, c)]: -1} for a, b, c in K.triangles]


def homology(K: Complex2) -> HomologyProfile:
    _require_valid(K)
    rank1 = K.n - len(K.components())
    diag = _sparse_snf(boundary_two(K), len(K.edges))
    rank2 = len(diag)
    return HomologyProfile(
        b0=K.n - rank1,
        b1=len(K.edges) - rank1 - rank2,
        b2=len(K.triangles) - rank2,
        h1_torsion=tuple(d for d in diag if d > 1),
    )


def betti_bound_check(K: Complex2) -> bool:
    """``b1 <= C(s0-1, 2)`` and ``b2 <= C(s0-1, 3)``."""
    h = homology(K)
    return h.b1 <= comb(max(K.n - 1, 0), 2) and h.b2 <= comb(max(K.n - 1, 0), 3)


# -- words and presentations ------------------------------------------------------

def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def is_cyclically_reduced(word: Sequence[int]) -> bool:
    return len(word) > 0 and tuple(word) == cyclic_reduce(word) and tuple(word) == free_reduce(word)


@dataclass
class Presentation:
    generator_count: int
    relators: list[Word]
    edge_map: dict[tuple[int, int], int] | None = field(default=None, repr=False)

    def __post_init__(self):
        self.relators = [tuple(r) for r in self.relators]
        for r in self.relators:
            for x in r:
                if x == 0 or abs(x) > self.generator_count:
                    raise ValueError(f"relator {r} uses a generator outside 1..{self.generator_count}")

    def exponent_matrix(self) -> list[list[int]]:
        rows = []
        for r in self.relators:
            row = [0] * self.generator_count
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        return rows

    def path_word(self, path: Sequence[int]) -> Word:
        """Word of an edge path in the presentation's generators (edge-path presentations only)."""
        if self.edge_map is None:
            raise ValueError("presentation has no edge map")
        out = []
        for u, v in zip(path, path[1:]):
            key = (min(u, v), max(u, v))
            if key not in self.edge_map:
                raise ValueError(f"{u}-{v} is not an edge")
            g = self.edge_map[key]
            if g:
                out.append(g if u < v else -g)
        return free_reduce(out)


def spanning_tree(K: Complex2, base: int = 0) -> set[tuple[int, int]]:
    """Breadth-first tree from ``base``, neighbours visited in increasing order."""
    seen = {base}
    tree = set()
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for u in sorted(K.neighbors[v]):
            if u not in seen:
                seen.add(u)
                tree.add((min(u, v), max(u, v)))
                queue.append(u)
    return tree


def edge_path_presentation(K: Complex2, base: int = 0) -> Presentation:
    """Edge-path group: non-tree edges generate, triangle boundaries relate."""
    _require_valid(K)
    if not K.is_connected():
        raise ComplexError("edge-path presentation needs a connected complex")
    if not 0 <= base < K.n:
        raise ComplexError(f"base vertex {base} not in complex")
    tree = spanning_tree(K, base)
    edge_map: dict[tuple[int, int], int] = {}
    g = 0
    for e in K.edges:
        if e in tree:
            edge_map[e] = 0
        else:
            g += 1
            edge_map[e] = g
    relators = []
    for a, b, c in K.triangles:
        word = []
        for x, sign in ((edge_map[(a, b)], 1), (edge_map[(b, c)], 1), (edge_map[(a, c)], -1)):
            if x:
                word.append(sign * x)
        relators.append(tuple(word))
    return Presentation(g, relators, edge_map)


def abelianization(P: Presentation) -> AbelianGroup:
    diag = smith_diagonal(P.exponent_matrix()) if P.relators else []
    return AbelianGroup.from_diagonal(P.generator_count, diag)


def _same_relator(r: Word, s: Word) -> bool:
    if len(r) != len(s):
        return False
    for cand in (s, inverse(s)):
        doubled = cand + cand
        for i in range(len(cand)):
            if doubled[i:i + len(r)] == r:
                return True
    return False


def tietze_simplify(P: Presentation, move_budget: int = 10_000) -> Presentation:
    """Greedy Tietze simplification; never performs more than ``move_budget`` moves.

    Moves: free/cyclic cancellation of a relator, deletion of a trivial or
    repeated relator, and elimination of a generator occurring exactly once
    in some relator (shortest such relator first).
    """
    gens = P.generator_count
    rels = list(P.relators)
    moves = 0

    def spend() -> bool:
        nonlocal moves
        if moves >= move_budget:
            return False
        moves += 1
        return True

    while True:
        changed = False
        out = []
        for r in rels:
            c = cyclic_reduce(r)
            if c != r:
                if not spend():
                    return Presentation(gens, out + [r] + rels[len(out) + 1:])
                changed = True
            out.append(c)
        rels = out
        kept: list[Word] = []
        for r in rels:
            if not r or any(_same_relator(r, s) for s in kept):
                if spend():
                    changed = True
                    continue
            kept.append(r)
        rels = kept
        choice = None
        for idx in sorted(range(len(rels)), key=lambda i: (len(rels[i]), i)):
            r = rels[idx]
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = sorted(g for g, k in counts.items() if k == 1)
            if once:
                choice = (idx, once[0])
                break
        if choice is None or moves >= move_budget:
            if not changed or moves >= move_budget:
                return Presentation(gens, rels)
            continue
        spend()
        idx, x = choice
        r = rels[idx]
        pos = next(i for i, y in enumerate(r) if abs(y) == x)
        rotated = r[pos:] + r[:pos]
        rest = rotated[1:]
        value = inverse(rest) if rotated[0] > 0 else rest
        value_inv = inverse(value)
        new_rels = []
        for i, s in enumerate(rels):
            if i == idx:
                continue
            sub: list[int] = []
            for y in s:
                if y == x:
                    sub.extend(value)
                elif y == -x:
                    sub.extend(value_inv)
                else:
                    sub.append(y)
            new_rels.append(tuple(y - 1 if y > x else y + 1 if y < -x else y for y in free_reduce(sub)))
        rels = new_rels
        gens -= 1


def is_free_certified(P: Presentation, move_budget: int = 10_000) -> int | None:
    """Rank of the free group if Tietze moves clear every relator, else None."""
    Q = tietze_simplify(P, move_budget)
    return Q.generator_count if not Q.relators else None


# -- homomorphism counting (a non-freeness certificate) ---------------------------

_S3 = list(permutations(range(3)))


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def _inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def count_homomorphisms_s3(P: Presentation, max_generators: int = 7) -> int | None:
    """Number of homomorphisms to the symmetric group S3, or None if too many generators."""
    if P.generator_count > max_generators:
        return None
    ident = (0, 1, 2)
    total = 0
    for images in product(_S3, repeat=P.generator_count):
        inv = [_inv(p) for p in images]
        for r in P.relators:
            acc = ident
            for x in r:
                acc = _compose(acc, images[x - 1] if x > 0 else inv[-x - 1])
            if acc != ident:
                break
        else:
            total += 1
    return total


# -- collapsibility -------------------------------------------------------------

def collapse_triangles(K: Complex2) -> set[tuple[int, int, int]]:
    """Triangles left after exhausting elementary (edge, triangle) collapses.

    Removing a triangle only lowers edge degrees, so a free edge stays free
    until its triangle is gone; the residue is therefore independent of the
    collapse order and no backtracking is needed.
    """
    deg = dict(K.edge_degrees)
    by_edge: dict[tuple[int, int], list] = {}
    for t in K.triangles:
        a, b, c = t
        for e in ((a, b), (a, c), (b, c)):
            by_edge.setdefault(e, []).append(t)
    alive = set(K.triangles)
    stack = [e for e, d in deg.items() if d == 1]
    while stack:
        e = stack.pop()
        if deg.get(e) != 1:
            continue
        t = next(u for u in by_edge[e] if u in alive)
        alive.discard(t)
        a, b, c = t
        for f in ((a, b), (a, c), (b, c)):
            deg[f] -= 1
            if deg[f] == 1:
                stack.append(f)
    return alive


def is_collapsible_to_graph(K: Complex2) -> bool:
    _require_valid(K)
    return not collapse_triangles(K)


# -- H1 classes of loops --------------------------------------------------------

def h1_coordinates(K: Complex2, path: Sequence[int], base: int | None = None) -> tuple[int, ...]:
    """Coordinates of a closed edge path in H1(K) = Z^r + (+)Z/d_i.

    The first ``r`` entries are free coordinates, the remaining ones are
    residues modulo the torsion factors, in a fixed basis derived from the
    Smith form of the edge-path relator matrix.
    """
    path = list(path)
    if len(path) < 2 or path[0] != path[-1]:
        raise ValueError("path must be closed")
    P = edge_path_presentation(K, path[0] if base is None else base)
    word = P.path_word(path)
    g = P.generator_count
    vec = [0] * g
    for x in word:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    A = [row[:] for row in P.exponent_matrix()] or [[0] * g]
    Q = [[int(i == j) for j in range(g)] for i in range(g)]
    diag = _dense_snf(A, Q)
    y = [sum(vec[i] * Q[i][j] for i in range(g)) for j in range(g)]
    free = y[len(diag):]
    tors = [y[j] % d for j, d in enumerate(diag) if d > 1]
    return tuple(free) + tuple(tors)


def loop_class(marked, path_name: str) -> tuple[int, ...]:
    """H1 class of a named closed path of a :class:`MarkedComplex`."""
    if path_name not in marked.paths:
        raise KeyError(f"unknown path {path_name!r}")
    path = marked.paths[path_name]
    if path[0] != path[-1]:
        raise ValueError(f"path {path_name!r} is not closed")
    return h1_coordinates(marked.complex, path, marked.base)
