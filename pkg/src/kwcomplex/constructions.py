"""Explicit vertex-economical complexes.

Conventions.  A bouquet of ``n`` circles has base vertex ``0`` and circle
``i`` (1-based) running ``0 -> 2i-1 -> 2i -> 0``.  Words are tuples of
non-zero ints, ``k`` for the k-th generator and ``-k`` for its inverse.
Closed edge paths are vertex lists whose last entry repeats the first.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import chain
from typing import Iterable, Iterator, Sequence

from kwcomplex.complex import Complex2, ComplexError, _require_valid
from kwcomplex.gluing import (
    Embedding,
    GluingError,
    attach,
    glue,
    glue_paths,
    identify_curves,
    path_embeddings,
)
from kwcomplex.invariants import Presentation, Word, cyclic_reduce, free_reduce, inverse

# 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
TORUS_TRIANGLES = tuple(sorted(
    tuple(sorted(t)) for i in range(7) for t in ((i, (i + 1) % 7, (i + 3) % 7), (i, (i + 2) % 7, (i + 3) % 7))
))
# Two non-face triangles through 0 whose classes form a basis of H1 = Z^2.
TORUS_CIRCLES = ((0, 1, 2, 0), (0, 3, 4, 0))

# 6-vertex projective plane.  With p_k = k - 1: (p1, p4, p5) is a non-face
# circle generating H1 = Z/2, (p1, p4, p6) is the face removed to get the
# Moebius band, whose core p1 p3 p2 satisfies [boundary] = 2 [core].
RP2_TRIANGLES = (
    (0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 3, 5),
    (1, 2, 3), (1, 2, 5), (1, 3, 4), (2, 4, 5), (3, 4, 5),
)
RP2_CIRCLE = (0, 3, 4, 0)
MOEBIUS_FACE = (0, 3, 5)
MOEBIUS_CORE = (0, 2, 1, 0)
MOEBIUS_BOUNDARY = (0, 3, 5, 0)


@dataclass
class MarkedComplex:
    complex: Complex2
    base: int = 0
    paths: dict[str, tuple[int, ...]] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        _require_valid(self.complex)
        for name, path in self.paths.items():
            path = tuple(path)
            self.paths[name] = path
            for u, v in zip(path, path[1:]):
                if not self.complex.has_edge(u, v):
                    raise ComplexError(f"path {name}: {u}-{v} is not an edge")

    def to_dict(self) -> dict:
        return {
            "complex": self.complex.to_dict(),
            "base": self.base,
            "paths": {k: list(v) for k, v in self.paths.items()},
            "meta": self.meta,
        }


# -- words and Coxeter matrices -----------------------------------------------------

def parse_word(text: str | Sequence[int]) -> Word:
    """``"a1 a2^-1 a1"`` or ``"1 -2 1"`` or a list of ints."""
    if not isinstance(text, str):
        return tuple(int(x) for x in text)
    out = []
    for tok in text.replace(",", " ").split():
        sign = 1
        if tok.endswith("^-1"):
            sign, tok = -1, tok[:-3]
        tok = tok.lstrip("aA")
        k = int(tok)
        out.append(sign * k)
    return tuple(out)


def check_word(w: Sequence[int], n: int, min_length: int = 1) -> Word:
    w = tuple(w)
    if len(w) < min_length:
        raise ValueError(f"word {w} is shorter than {min_length}")
    for x in w:
        if x == 0 or abs(x) > n:
            raise ValueError(f"word {w} uses a generator outside 1..{n}")
    if cyclic_reduce(w) != w:
        raise ValueError(f"word {w} is not cyclically reduced")
    return w


@dataclass(frozen=True)
class CoxeterMatrix:
    """Off-diagonal entries ``m_ij`` for ``i < j`` (1-based); missing pairs are infinite."""

    n: int
    entries: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one generator")
        seen = {}
        for i, j, m in self.entries:
            if i > j:
                i, j = j, i
            if not 1 <= i < j <= self.n:
                raise ValueError(f"pair ({i},{j}) out of range for n={self.n}")
            if m == 0:
                continue
            if m < 2:
                raise ValueError(f"m_{i}{j} = {m} must be at least 2 (or 0 for infinity)")
            if (i, j) in seen and seen[(i, j)] != m:
                raise ValueError(f"conflicting entries for ({i},{j})")
            seen[(i, j)] = m
        object.__setattr__(self, "entries", tuple(sorted((i, j, m) for (i, j), m in seen.items())))

    def m(self, i: int, j: int) -> int | None:
        if i == j:
            return 1
        i, j = min(i, j), max(i, j)
        for a, b, m in self.entries:
            if (a, b) == (i, j):
                return m
        return None

    def finite_pairs(self) -> list[tuple[int, int, int]]:
        return list(self.entries)

    @property
    def finite_count(self) -> int:
        return len(self.entries)

    @classmethod
    def from_dict(cls, data: dict) -> CoxeterMatrix:
        return cls(int(data["n"]), tuple(tuple(int(x) for x in e) for e in data.get("m", [])))

    @classmethod
    def from_json(cls, text: str) -> CoxeterMatrix:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"n": self.n, "m": [list(e) for e in self.entries]}


# -- symbolic presentations --------------------------------------------------------

def alternating(i: int, j: int, length: int) -> Word:
    """The word ``a_i a_j a_i ...`` with ``length`` letters."""
    return tuple(i if t % 2 == 0 else j for t in range(length))


def one_relator_presentation(n: int, w: Word, v: Word, m: int) -> Presentation:
    return Presentation(n, [free_reduce(tuple(w) * m + inverse(tuple(v) * m))])


def raag_presentation(M: CoxeterMatrix) -> Presentation:
    return Presentation(M.n, [(i, j, -i, -j) for i, j, _ in M.finite_pairs()])


def racg_presentation(M: CoxeterMatrix) -> Presentation:
    rels = [(i, i) for i in range(1, M.n + 1)]
    return Presentation(M.n, rels + [(i, j, -i, -j) for i, j, _ in M.finite_pairs()])


def artin_presentation(M: CoxeterMatrix) -> Presentation:
    return Presentation(M.n, [alternating(i, j, m) + inverse(alternating(j, i, m)) for i, j, m in M.finite_pairs()])


def coxeter_presentation(M: CoxeterMatrix) -> Presentation:
    rels = [(i, i) for i in range(1, M.n + 1)]
    return Presentation(M.n, rels + artin_presentation(M).relators)


# -- fixed pieces ---------------------------------------------------------------

def bouquet(n: int) -> MarkedComplex:
    """Wedge of ``n`` triangle circles at vertex 0: ``2n+1`` vertices, ``3n`` edges."""
    if n < 1:
        raise ValueError("bouquet needs n >= 1")
    edges = []
    paths = {}
    for i in range(1, n + 1):
        a, b = 2 * i - 1, 2 * i
        edges += [(0, a), (a, b), (0, b)]
        paths[f"a{i}"] = (0, a, b, 0)
    return MarkedComplex(Complex2(2 * n + 1, tuple(edges), ()), 0, paths, {"n": n})


def minimal_torus() -> Complex2:
    return Complex2.build(TORUS_TRIANGLES)


def marked_torus() -> MarkedComplex:
    return MarkedComplex(minimal_torus(), 0, {"a": TORUS_CIRCLES[0], "b": TORUS_CIRCLES[1]})


def minimal_rp2() -> Complex2:
    return Complex2.build(RP2_TRIANGLES)


def marked_rp2() -> MarkedComplex:
    return MarkedComplex(minimal_rp2(), 0, {"a": RP2_CIRCLE})


def moebius_band() -> MarkedComplex:
    """Projective plane minus one triangle; core and boundary both pass through vertex 0."""
    K = Complex2.build([t for t in RP2_TRIANGLES if t != MOEBIUS_FACE])
    return MarkedComplex(K, 0, {"gamma": MOEBIUS_CORE, "boundary": MOEBIUS_BOUNDARY})


def _remove_triangle(K: Complex2, t: Sequence[int]) -> Complex2:
    t = tuple(sorted(t))
    if t not in K.triangle_set:
        raise ComplexError(f"{t} is not a triangle")
    return Complex2(K.n, K.edges, tuple(x for x in K.triangles if x != t))


def _map_path(path: Iterable[int], f: Sequence[int]) -> tuple[int, ...]:
    return tuple(f[v] for v in path)


# -- right-angled groups ---------------------------------------------------------

def _require_right_angled(M: CoxeterMatrix) -> None:
    bad = [(i, j, m) for i, j, m in M.finite_pairs() if m != 2]
    if bad:
        raise ValueError(f"right-angled construction needs every finite entry equal to 2, got {bad}")


def _glue_tori(B: MarkedComplex, M: CoxeterMatrix) -> MarkedComplex:
    K = B.complex
    torus = marked_torus()
    for i, j, _ in M.finite_pairs():
        res = glue_paths(K, torus.complex, [B.paths[f"a{i}"], B.paths[f"a{j}"]], [torus.paths["a"], torus.paths["b"]])
        K = res.complex
    return MarkedComplex(K, 0, dict(B.paths), dict(B.meta))


def raag_complex(M: CoxeterMatrix) -> MarkedComplex:
    """Bouquet plus one 7-vertex torus per commuting pair: ``2n + 2m + 1`` vertices."""
    _require_right_angled(M)
    out = _glue_tori(bouquet(M.n), M)
    out.meta = {"n": M.n, "m": M.finite_count}
    return out


def racg_complex(M: CoxeterMatrix) -> MarkedComplex:
    """Bouquet, a projective plane on every circle, a torus per commuting pair: ``5n + 2m + 1`` vertices."""
    _require_right_angled(M)
    B = _glue_projective_planes(bouquet(M.n))
    out = _glue_tori(B, M)
    out.meta = {"n": M.n, "m": M.finite_count}
    return out


def _glue_projective_planes(B: MarkedComplex) -> MarkedComplex:
    K = B.complex
    rp2 = marked_rp2()
    for name in sorted(B.paths, key=lambda s: int(s[1:])):
        K = glue_paths(K, rp2.complex, [B.paths[name]], [rp2.paths["a"]]).complex
    return MarkedComplex(K, B.base, dict(B.paths), dict(B.meta))


# -- abstract disks ----------------------------------------------------------------
#
# A disk is given on boundary vertices 0..N-1 (in boundary order) plus
# interior vertices N, N+1, ...  The ring disk splits the boundary edges
# into consecutive windows; window t is coned to an interior vertex R_t,
# neighbouring ring vertices share a triangle with the boundary vertex where
# their windows meet, and the inner polygon R_0 ... R_{r-1} is fanned from R_0.

def ring_disk(N: int, starts: Sequence[int]) -> list[tuple[int, int, int]]:
    r = len(starts)
    tris = []
    for t in range(r):
        lo = starts[t]
        hi = starts[(t + 1) % r] if r > 1 else lo + N
        if hi <= lo:
            hi += N
        for j in range(lo, hi):
            tris.append((N + t, j % N, (j + 1) % N))
    if r >= 2:
        for t in range(r):
            tris.append((N + t, N + (t + 1) % r, starts[(t + 1) % r]))
    for t in range(1, r - 1):
        tris.append((N, N + t, N + t + 1))
    return [tuple(sorted(t)) for t in tris]


def ear_disk(q: int, apex: int) -> list[tuple[int, int, int]]:
    """Disk on ``3q`` boundary vertices with no interior vertex.

    Boundary vertices ``3j`` are cut off by ears; the remaining ``2q``-gon is
    fanned from its ``apex``-th vertex.
    """
    N = 3 * q
    tris = [((3 * j - 1) % N, 3 * j, 3 * j + 1) for j in range(q)]
    poly = [v for v in range(N) if v % 3]
    a = apex % len(poly)
    rot = poly[a:] + poly[:a]
    tris += [(rot[0], rot[i], rot[i + 1]) for i in range(1, len(rot) - 1)]
    return [tuple(sorted(t)) for t in tris]


def _oriented(tris: Sequence[tuple[int, int, int]]) -> dict[tuple, tuple]:
    """Orient a triangulated disk so that boundary edge 0 -> 1 is positive."""
    by_edge: dict[tuple[int, int], list] = {}
    for t in tris:
        a, b, c = t
        for e in ((a, b), (a, c), (b, c)):
            by_edge.setdefault(e, []).append(t)
    seed = by_edge[(0, 1)][0]
    x = next(v for v in seed if v not in (0, 1))
    out = {seed: (0, 1, x)}
    queue = deque([seed])
    while queue:
        t = queue.popleft()
        a, b, c = out[t]
        for u, v in ((a, b), (b, c), (c, a)):
            for s in by_edge[(min(u, v), max(u, v))]:
                if s not in out:
                    w = next(z for z in s if z not in (u, v))
                    out[s] = (v, u, w)
                    queue.append(s)
    return out


def loops_at_start(tris: Sequence[tuple[int, int, int]]) -> list[tuple[tuple[int, int, int], tuple[int, int, int]]]:
    """Triangles containing boundary vertex 0, each with its positively oriented boundary read from 0.

    Removing such a triangle leaves its boundary homotopic, as a loop based
    at vertex 0, to the disk boundary ``0 -> 1 -> ... -> 0``.
    """
    orient = _oriented(tris)
    out = []
    for t in sorted(tris):
        if 0 in t:
            o = orient[t]
            k = o.index(0)
            out.append((t, o[k:] + o[:k]))
    return out


def _attach_disk(K: Complex2, labels: Sequence[int], tris: Sequence[tuple[int, int, int]]):
    N = len(labels)
    piece = Complex2.build(tris)
    vmap = {i: labels[i] for i in range(N)}
    boundary = [(i, (i + 1) % N) for i in range(N)]
    return attach(K, piece, vmap, boundary)


# -- word disks ----------------------------------------------------------------

def word_labels(w: Word) -> list[int]:
    """Bouquet vertices met by the ``3l``-edge boundary path spelling ``w``."""
    out = []
    for x in w:
        a, b = 2 * abs(x) - 1, 2 * abs(x)
        out += [0, a, b] if x > 0 else [0, b, a]
    return out


def word_windows(w: Word, lean: bool = False) -> list[int]:
    N = 3 * len(w)
    if lean:
        l = len(w)
        if any(abs(w[t]) == abs(w[(t + 1) % l]) for t in range(l)):
            raise ValueError("the lean disk needs consecutive letters on different generators")
        return [3 * t + 1 for t in range(l)]
    return list(range(0, N, 2))


def _word_disk_parts(w: Word, n: int, lean: bool):
    B = bouquet(n)
    labels = word_labels(w)
    tris = ring_disk(len(labels), word_windows(w, lean))
    K, ids = _attach_disk(B.complex, labels, tris)
    options = [(tuple(sorted(ids[v] for v in t)), _map_path(loop, ids)) for t, loop in loops_at_start(tris)]
    return B, K, options, K.n - B.complex.n


def word_disk(w: Sequence[int], n: int | None = None, lean: bool = False) -> MarkedComplex:
    """Bouquet with a disk glued along the boundary path spelling ``w``.

    Paths: the generator circles, ``boundary`` (the ``3l`` edges of the disk
    boundary) and ``delta_p``, the boundary of a triangle at the base vertex
    whose removal leaves a loop reading exactly ``w``.
    """
    w = tuple(w)
    n = max((abs(x) for x in w), default=0) if n is None else n
    w = check_word(w, n, min_length=2)
    B, K, options, interior = _word_disk_parts(w, n, lean)
    tri, loop = options[-1]
    labels = word_labels(w)
    paths = dict(B.paths)
    paths["boundary"] = tuple(labels) + (0,)
    paths["delta_p"] = loop + (loop[0],)
    return MarkedComplex(K, 0, paths, {"word": list(w), "interior_vertices": interior,
                                       "windows": len(word_windows(w, lean)), "delta_p": list(tri),
                                       "lean": lean})


# -- Moebius telescopes -----------------------------------------------------------

def telescope(k: int) -> MarkedComplex:
    """Tower of ``k`` Moebius bands, the core of each glued onto the boundary of the previous.

    Paths ``gamma{i}`` (core of band i) and ``boundary{i}`` (its boundary);
    every path starts at vertex 0 and ``boundary{i}`` coincides with
    ``gamma{i+1}``.  ``3k + 3`` vertices.
    """
    if k < 1:
        raise ValueError("telescope length must be at least 1")
    band = moebius_band()
    K = band.complex
    paths = {"gamma0": band.paths["gamma"], "boundary0": band.paths["boundary"]}
    for i in range(1, k):
        res = glue_paths(K, band.complex, [paths[f"boundary{i - 1}"]], [band.paths["gamma"]])
        K = res.complex
        paths[f"gamma{i}"] = paths[f"boundary{i - 1}"]
        paths[f"boundary{i}"] = _map_path(band.paths["boundary"], res.y_map)
    return MarkedComplex(K, 0, paths, {"k": k})


def dyadic_digits(m: int) -> list[int]:
    return [i for i in range(m.bit_length()) if m >> i & 1]


def telescope_length(m: int) -> int:
    """Least ``k`` with ``m < 2^(k+1)``."""
    if m < 1:
        raise ValueError("m must be positive")
    return m.bit_length() - 1


def _curve_loops(T: MarkedComplex, m: int) -> list[tuple[int, ...]]:
    k = T.meta["k"]
    loops = []
    for d in dyadic_digits(m):
        path = T.paths[f"gamma{d}"] if d < k else T.paths[f"boundary{k - 1}"]
        loops.append(path[:-1])
    return loops


def dyadic_curve(m: int, T: MarkedComplex) -> tuple[int, ...]:
    """Closed path concatenating ``gamma_d`` over the binary digits ``d`` of ``m``.

    Digit ``d = k`` of a length-``k`` telescope uses its last boundary, so
    any ``m < 2^(k+1)`` fits.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    k = telescope_length(m)
    if T.meta.get("k", -1) < k:
        raise ValueError(f"m = {m} needs a telescope of length at least {k}, got {T.meta.get('k')}")
    return tuple(chain.from_iterable(_curve_loops(T, m))) + (T.base,)


def _telescope_onto(K: Complex2, loop: tuple[int, ...], k: int) -> tuple[Complex2, list[tuple[int, ...]]]:
    """Glue ``telescope(k)`` by its first core onto a 3-cycle ``loop`` of ``K``.

    Returns the union and the loops ``gamma_0 .. gamma_k`` in its ids, where
    ``gamma_k`` is the last band's boundary.
    """
    if k == 0:
        return K, [tuple(loop)]
    T = telescope(k)
    res = glue_paths(K, T.complex, [tuple(loop) + (loop[0],)], [T.paths["gamma0"]])
    loops = [_map_path(T.paths[f"gamma{i}"][:-1], res.y_map) for i in range(k)]
    loops.append(_map_path(T.paths[f"boundary{k - 1}"][:-1], res.y_map))
    return res.complex, loops


# -- caps -------------------------------------------------------------------------

def _cap_triangulations(q: int) -> Iterator[tuple[str, list[tuple[int, int, int]]]]:
    """Disks on ``3q`` boundary vertices, fewest interior vertices first."""
    if q == 1:
        yield "triangle", [(0, 1, 2)]
        return
    for apex in range(2 * q):
        yield f"ears/{apex}", ear_disk(q, apex)
    yield "ring", ring_disk(3 * q, [3 * j + 1 for j in range(q)])


def cap_options(K: Complex2, loops: Sequence[tuple[int, ...]]):
    """Every valid way to cap the concatenation of based 3-cycles ``loops`` by a disk.

    Yields ``(complex, style, [(triangle, loop at the base)])``.
    """
    labels = list(chain.from_iterable(loops))
    for style, tris in _cap_triangulations(len(loops)):
        try:
            C, ids = _attach_disk(K, labels, tris)
        except GluingError:
            continue
        starts = [(tuple(sorted(ids[v] for v in t)), _map_path(loop, ids)) for t, loop in loops_at_start(tris)]
        yield C, style, starts


def cyclic_complex(m: int) -> Complex2:
    """Telescope of length ``floor(log2 m)`` capped along the dyadic curve of ``m``; ``H1 = Z/m``."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return Complex2(1)
    k = telescope_length(m)
    T = telescope(k)
    for C, _, _ in cap_options(T.complex, _curve_loops(T, m)):
        return C
    raise GluingError([f"no valid cap for m = {m}"])


# -- power relations w^m = v^m ------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """``(w^m) x = (v^m) y``, with optional single trailing letters ``x``, ``y``."""

    w: Word
    v: Word
    m: int
    w_tail: int | None = None
    v_tail: int | None = None

    def relator(self) -> Word:
        left = tuple(self.w) * self.m + ((self.w_tail,) if self.w_tail else ())
        right = tuple(self.v) * self.m + ((self.v_tail,) if self.v_tail else ())
        return free_reduce(left + inverse(right))


def _circle_loop(B: MarkedComplex, letter: int) -> tuple[int, ...]:
    path = B.paths[f"a{abs(letter)}"]
    return path[:-1] if letter > 0 else tuple(reversed(path[1:]))


def _side_variants(w: Word, tail: int | None) -> list[tuple[int | None, Word, int | None]]:
    """Ways to read ``w^m tail`` as ``head u^m tail'``; ``(xu)^m x = x (ux)^m``."""
    out = [(None, w, tail)]
    if tail is not None and w[0] == tail:
        out.append((tail, w[1:] + w[:1], None))
    return out


def _side_options(n: int, w: Word, power: int, tail: int | None, lean: bool | None):
    """Candidate halves: word disk with a triangle removed, telescope on its boundary,
    cap along the dyadic curve (with the extra circle before or after it), one cap
    triangle at the base removed.  Each candidate is ``(complex, loop, style)``
    where ``loop`` is the based boundary of the removed cap triangle, reading
    ``w^power tail``.
    """
    B = bouquet(n)
    k = telescope_length(power)
    out = []
    styles = (False, True) if lean is None else (lean,)
    for (head, word, tl), lean_disk in ((v, s) for v in _side_variants(w, tail) for s in styles):
        try:
            _, P, deltas, _ = _word_disk_parts(word, n, lean_disk)
        except ValueError:
            continue
        for dtri, dloop in reversed(deltas):
            Pp = _remove_triangle(P, dtri)
            J, gammas = _telescope_onto(Pp, dloop, k)
            loops = [gammas[d] for d in dyadic_digits(power)]
            if head is not None:
                loops.insert(0, _circle_loop(B, head))
            if tl is not None:
                loops.append(_circle_loop(B, tl))
            for C, style, starts in cap_options(J, loops):
                for ttri, tloop in starts:
                    out.append((C.n, len(out), _remove_triangle(C, ttri), tloop, style))
    out.sort(key=lambda o: (o[0], o[1]))
    return B, [(K, loop, style) for _, _, K, loop, style in out]


def relation_complexes(n: int, rel: Relation, lean: bool | None = False) -> Iterator[MarkedComplex]:
    """Simplicial complexes for one relation over a bouquet at ids ``0..2n``, fewest vertices first.

    ``lean=None`` tries both word-disk styles.

    Two halves share the bouquet; the boundaries of their removed cap
    triangles (both read from the base vertex) are then identified.
    """
    B, lefts = _side_options(n, rel.w, rel.m, rel.w_tail, lean)
    _, rights = _side_options(n, rel.v, rel.m, rel.v_tail, lean)
    circles = [B.paths[f"a{i}"] for i in range(1, n + 1)]
    pairs = sorted(((a.n + b.n, i, j) for i, (a, _, _) in enumerate(lefts) for j, (b, _, _) in enumerate(rights)))
    bq = set(range(2 * n + 1))
    for _, i, j in pairs:
        Kw, lw, sw = lefts[i]
        Kv, lv, sv = rights[j]
        try:
            res = glue_paths(Kw, Kv, circles, circles)
        except GluingError:
            continue
        lv = _map_path(lv, res.y_map)
        if any(a != b and a in bq and b in bq for a, b in zip(lw, lv)):
            continue
        try:
            q = identify_curves(res.complex, lw, lv)
        except (GluingError, ComplexError):
            continue
        yield MarkedComplex(q.complex, 0, dict(B.paths), {"relation": _relation_meta(rel), "caps": [sw, sv]})


def _relation_meta(rel: Relation) -> dict:
    return {"w": list(rel.w), "v": list(rel.v), "m": rel.m, "w_tail": rel.w_tail, "v_tail": rel.v_tail}


def multi_relation_complex(n: int, relations: Sequence[Relation], lean: bool | None = False) -> MarkedComplex:
    """Union over the shared bouquet of one complex per relation."""
    acc = bouquet(n)
    K = acc.complex
    circles = [acc.paths[f"a{i}"] for i in range(1, n + 1)]
    metas = []
    for rel in relations:
        for cand in relation_complexes(n, rel, lean):
            try:
                K2 = glue_paths(K, cand.complex, circles, circles).complex
            except GluingError:
                continue
            K = K2
            metas.append(cand.meta)
            break
        else:
            raise GluingError([f"no simplicial complex found for relation {_relation_meta(rel)}"])
    return MarkedComplex(K, 0, dict(acc.paths), {"relations": metas})


def one_relator_power_complex(n: int, w: Sequence[int], v: Sequence[int], m: int, lean: bool = False) -> Complex2:
    """Complex with fundamental group ``<a_1..a_n | w^m = v^m>``."""
    w, v = check_word(w, n), check_word(v, n)
    if m < 2:
        raise ValueError("m must be at least 2")
    return multi_relation_complex(n, [Relation(w, v, m)], lean).complex


def multi_relator_complex(n: int, relations: Sequence[tuple[Sequence[int], Sequence[int], int]],
                          lean: bool = False) -> Complex2:
    rels = []
    for w, v, m in relations:
        if m < 2:
            raise ValueError("every power must be at least 2")
        rels.append(Relation(check_word(w, n), check_word(v, n), m))
    return multi_relation_complex(n, rels, lean).complex


def _large_relations(M: CoxeterMatrix) -> list[Relation]:
    rels = []
    for i, j, m in M.finite_pairs():
        if m < 3:
            raise ValueError(f"large type needs every finite entry >= 3, got m_{i}{j} = {m}")
        if m % 2 == 0:
            rels.append(Relation((i, j), (j, i), m // 2))
        else:
            rels.append(Relation((i, j), (j, i), m // 2, i, j))
    return rels


def artin_large_complex(M: CoxeterMatrix) -> Complex2:
    """Even entries as ``(a_i a_j)^k = (a_j a_i)^k``; odd ones as ``(a_i a_j)^k a_i = (a_j a_i)^k a_j``.

    The words ``a_i a_j`` alternate generators, so the leaner word disk is
    allowed and used whenever it saves vertices.
    """
    return multi_relation_complex(M.n, _large_relations(M), lean=None).complex


def coxeter_large_complex(M: CoxeterMatrix) -> Complex2:
    """The Artin complex with a 6-vertex projective plane on every generator circle (``3n`` more vertices)."""
    K = multi_relation_complex(M.n, _large_relations(M), lean=None)
    return _glue_projective_planes(K).complex


# -- genus two -------------------------------------------------------------------

# Adjacent torus triangles [x1, x2, x4] and [x2, x3, x4]; removing both and
# their common edge x2 x4 leaves a torus with boundary x1 x2 x3 x4.
PUNCTURE = (1, 0, 2, 3)


def punctured_torus() -> MarkedComplex:
    x1, x2, x3, x4 = PUNCTURE
    drop = {tuple(sorted((x1, x2, x4))), tuple(sorted((x2, x3, x4)))}
    T = minimal_torus()
    edges = tuple(e for e in T.edges if e != tuple(sorted((x2, x4))))
    K = Complex2(7, edges, tuple(t for t in T.triangles if t not in drop))
    return MarkedComplex(K, x1, {"boundary": PUNCTURE + (x1,)})


def genus2_gluing(shift: int = 1) -> tuple[Complex2, Complex2, Embedding, Embedding]:
    """Two punctured tori and the embeddings of their boundary square, ``x_i -> y_(i+shift)``.

    ``Z`` vertex ``i`` is ``x_(i+1)``.
    """
    P = punctured_torus()
    xs = list(PUNCTURE)
    ys = [xs[(i + shift) % 4] for i in range(4)]
    iZ, jZ = path_embeddings(P.complex, P.complex, [xs + xs[:1]], [ys + ys[:1]])
    return P.complex, P.complex, iZ, jZ


def genus2_surface() -> Complex2:
    """10-vertex closed orientable surface of genus 2 (not vertex-minimal for its group)."""
    return glue(*genus2_gluing(1)).complex
