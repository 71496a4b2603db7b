"""Gluing simplicial 2-complexes along common subcomplexes, and curve quotients.

A gluing is the pushout ``W = X u_Z Y`` of two injective simplicial maps
``Z -> X`` and ``Z -> Y``.  ``W`` is always a Delta-complex; it is a
simplicial complex exactly when no simplex of ``X`` outside ``Z`` meets a
simplex of ``Y`` outside ``Z`` in a vertex set that is not a simplex of ``Z``.
Two sufficient conditions for this are checked and reported separately:

1. two vertices of ``Z`` are joined by at most one edge of ``W``;
2. at least one of the two embeddings is maximal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from kwcomplex.complex import Complex2, ComplexError, _require_valid


class GluingError(ValueError):
    """The requested gluing or quotient is not a simplicial complex.

    ``diagnostics`` holds readable messages; ``edge_pairs`` lists vertex
    pairs (in ``Z`` ids for gluings, in input ids for quotients) that end
    up joined by two distinct edges.
    """

    def __init__(self, diagnostics: list[str], edge_pairs: list[tuple[int, int]] | None = None):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = diagnostics
        self.edge_pairs = edge_pairs or []


@dataclass(frozen=True)
class Embedding:
    source: Complex2
    target: Complex2
    vertex_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(self.vertex_map))
        problems = embedding_problems(self.source, self.target, self.vertex_map)
        if problems:
            raise ComplexError("invalid embedding: " + "; ".join(problems))

    def image_vertices(self) -> set[int]:
        return set(self.vertex_map)

    def image_edges(self) -> set[tuple[int, int]]:
        f = self.vertex_map
        return {tuple(sorted((f[a], f[b]))) for a, b in self.source.edges}

    def image_triangles(self) -> set[tuple[int, int, int]]:
        f = self.vertex_map
        return {tuple(sorted((f[a], f[b], f[c]))) for a, b, c in self.source.triangles}


def embedding_problems(Z: Complex2, X: Complex2, f: Sequence[int]) -> list[str]:
    out = []
    if len(f) != Z.n:
        return [f"vertex map has {len(f)} entries, source has {Z.n} vertices"]
    if len(set(f)) != len(f):
        out.append("vertex map is not injective")
    bad = [v for v in f if not 0 <= v < X.n]
    if bad:
        return out + [f"vertex map leaves the target: {bad}"]
    for a, b in Z.edges:
        if not X.has_edge(f[a], f[b]):
            out.append(f"edge {a}-{b} maps to non-edge {f[a]}-{f[b]}")
    for a, b, c in Z.triangles:
        if not X.has_triangle(f[a], f[b], f[c]):
            out.append(f"triangle {a}{b}{c} maps to a non-triangle")
    return out


def is_maximal(e: Embedding) -> bool:
    """Every target simplex whose 1-skeleton lies in the image lies in the image.

    Vertices and edges are their own 1-skeletons, so only triangles can fail.
    """
    edges = e.image_edges()
    tris = e.image_triangles()
    for a, b, c in e.target.triangles:
        if (a, b) in edges and (a, c) in edges and (b, c) in edges and (a, b, c) not in tris:
            return False
    return True


@dataclass(frozen=True)
class GlueResult:
    complex: Complex2
    lemma22_condition1: bool | None
    lemma22_condition2: bool | None
    directly_validated: bool
    x_map: tuple[int, ...] = field(default=(), repr=False)
    y_map: tuple[int, ...] = field(default=(), repr=False)

    @property
    def route(self) -> str:
        """How validity was established: both sufficient conditions, or direct checking."""
        if self.lemma22_condition1 and self.lemma22_condition2:
            return "sufficient-conditions"
        return "direct"


def _pushout_maps(X: Complex2, Y: Complex2, iZ: Embedding, jZ: Embedding) -> list[int]:
    y_to_z = {y: z for z, y in enumerate(jZ.vertex_map)}
    y_map = [0] * Y.n
    nxt = X.n
    for v in range(Y.n):
        if v in y_to_z:
            y_map[v] = iZ.vertex_map[y_to_z[v]]
        else:
            y_map[v] = nxt
            nxt += 1
    return y_map


def condition_one_violations(X: Complex2, Y: Complex2, iZ: Embedding, jZ: Embedding) -> list[tuple[int, int]]:
    """Pairs of ``Z`` vertices joined by an edge in both ``X`` and ``Y`` that is not a ``Z`` edge."""
    out = []
    zi, zj = iZ.vertex_map, jZ.vertex_map
    zedges = set(iZ.source.edges)
    for a in range(iZ.source.n):
        for b in range(a + 1, iZ.source.n):
            if (a, b) in zedges:
                continue
            if X.has_edge(zi[a], zi[b]) and Y.has_edge(zj[a], zj[b]):
                out.append((a, b))
    return out


def direct_violations(X: Complex2, Y: Complex2, iZ: Embedding, jZ: Embedding,
                      y_map: Sequence[int] | None = None) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """Pairs (sigma in X-Z, tau in Y-Z) meeting in a vertex set that is not a Z-simplex.

    Returns ``(sigma, tau, common)`` triples in pushout ids, one per distinct
    common vertex set.
    """
    if y_map is None:
        y_map = _pushout_maps(X, Y, iZ, jZ)
    zsimp = {(v,) for v in iZ.vertex_map}
    zsimp |= iZ.image_edges() | iZ.image_triangles()
    zverts = iZ.image_vertices()
    # Only simplices touching Z can meet the image of Y - Z.
    xs = [s for s in (*X.edges, *X.triangles) if s not in zsimp and any(v in zverts for v in s)]
    ys = []
    for s in (*Y.edges, *Y.triangles):
        t = tuple(sorted(y_map[v] for v in s))
        if t not in zsimp:
            ys.append(t)
    by_vertex: dict[int, list[int]] = {}
    for k, t in enumerate(ys):
        for v in t:
            if v in zverts:
                by_vertex.setdefault(v, []).append(k)
    seen = set()
    out = []
    for s in xs:
        cand = set()
        for v in s:
            cand.update(by_vertex.get(v, ()))
        for k in sorted(cand):
            common = tuple(sorted(set(s) & set(ys[k])))
            if common not in zsimp and common not in seen:
                seen.add(common)
                out.append((s, ys[k], common))
    return out


def glue(X: Complex2, Y: Complex2, iZ: Embedding, jZ: Embedding) -> GlueResult:
    """Pushout of ``X <- Z -> Y``.

    ``X`` keeps its vertex ids and the vertices of ``Y`` outside ``Z`` are
    appended in increasing order; ``GlueResult.y_map`` records where every
    ``Y`` vertex went.  Raises :class:`GluingError` when the pushout is not
    simplicial.
    """
    _require_valid(X)
    _require_valid(Y)
    if iZ.source != jZ.source:
        raise ComplexError("embeddings have different sources")
    if iZ.target != X or jZ.target != Y:
        raise ComplexError("embedding targets do not match the complexes being glued")
    Z = iZ.source
    y_map = _pushout_maps(X, Y, iZ, jZ)
    bad_pairs = condition_one_violations(X, Y, iZ, jZ)
    cond2 = is_maximal(iZ) or is_maximal(jZ)
    violations = direct_violations(X, Y, iZ, jZ, y_map)
    if bad_pairs or violations:
        diags = []
        for a, b in bad_pairs:
            diags.append(
                f"two distinct edges join Z vertices {a} and {b} "
                f"(X edge {iZ.vertex_map[a]}-{iZ.vertex_map[b]}, Y edge {jZ.vertex_map[a]}-{jZ.vertex_map[b]})"
            )
        for s, t, common in violations:
            if len(common) == 2 and tuple(sorted(common)) in {
                tuple(sorted((iZ.vertex_map[a], iZ.vertex_map[b]))) for a, b in bad_pairs
            }:
                continue
            diags.append(f"X simplex {list(s)} and Y simplex {list(t)} meet in {list(common)}, which is not a simplex of Z")
        raise GluingError(diags, bad_pairs)
    edges = set(X.edges) | {tuple(sorted((y_map[a], y_map[b]))) for a, b in Y.edges}
    tris = set(X.triangles) | {tuple(sorted((y_map[a], y_map[b], y_map[c]))) for a, b, c in Y.triangles}
    W = Complex2(X.n + Y.n - Z.n, tuple(edges), tuple(tris))
    _require_valid(W)
    return GlueResult(W, True, cond2, True, tuple(range(X.n)), tuple(y_map))


def path_embeddings(X: Complex2, Y: Complex2, x_paths: Sequence[Sequence[int]],
                    y_paths: Sequence[Sequence[int]]) -> tuple[Embedding, Embedding]:
    """Embeddings of the 1-complex traced by matching edge paths in ``X`` and ``Y``.

    The k-th vertex of each ``x_path`` is identified with the k-th vertex of
    the matching ``y_path``; the common source ``Z`` has the union of the
    path edges.  A single-vertex path glues at a point.
    """
    if len(x_paths) != len(y_paths):
        raise ComplexError("path lists differ in length")
    index: dict[int, int] = {}
    pairs: list[tuple[int, int]] = []
    edges = set()
    for xp, yp in zip(x_paths, y_paths):
        if len(xp) != len(yp):
            raise ComplexError(f"paths {list(xp)} and {list(yp)} differ in length")
        ids = []
        for u, v in zip(xp, yp):
            if u in index:
                if pairs[index[u]][1] != v:
                    raise ComplexError(f"X vertex {u} matched to two Y vertices")
            else:
                if any(q == v for _, q in pairs):
                    raise ComplexError(f"Y vertex {v} matched to two X vertices")
                index[u] = len(pairs)
                pairs.append((u, v))
            ids.append(index[u])
        for a, b in zip(ids, ids[1:]):
            if a != b:
                edges.add((min(a, b), max(a, b)))
    Z = Complex2(len(pairs), tuple(edges), ())
    return Embedding(Z, X, [u for u, _ in pairs]), Embedding(Z, Y, [v for _, v in pairs])


def glue_paths(X: Complex2, Y: Complex2, x_paths: Sequence[Sequence[int]],
               y_paths: Sequence[Sequence[int]]) -> GlueResult:
    iZ, jZ = path_embeddings(X, Y, x_paths, y_paths)
    return glue(X, Y, iZ, jZ)


# -- quotients identifying two curves --------------------------------------------

def _find(parent: dict, x):
    while parent.setdefault(x, x) != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _cycle_vertices(c: Sequence[int]) -> list[int]:
    c = list(c)
    if len(c) >= 2 and c[0] == c[-1]:
        c = c[:-1]
    return c


def identify_curves(K: Complex2, c1: Sequence[int], c2: Sequence[int],
                    phi: Mapping[int, int] | None = None) -> GlueResult:
    """Quotient of ``K`` identifying the closed edge path ``c1`` with ``c2``.

    Paths are vertex lists (a repeated first vertex at the end is allowed).
    ``phi`` maps the vertices of ``c1`` onto those of ``c2``; by default the
    i-th vertex goes to the i-th vertex.  Surviving vertices are renumbered
    in increasing order of their smallest original id; ``x_map`` of the
    result sends each input vertex to its class.
    """
    _require_valid(K)
    a, b = _cycle_vertices(c1), _cycle_vertices(c2)
    if len(a) != len(b) or len(a) < 3:
        raise ComplexError("curves must be closed paths of equal length >= 3")
    for c in (a, b):
        if len(set(c)) != len(c):
            raise ComplexError(f"curve {c} is not simple")
        for u, v in zip(c, c[1:] + c[:1]):
            if not K.has_edge(u, v):
                raise ComplexError(f"curve step {u}-{v} is not an edge")
    if phi is None:
        phi = dict(zip(a, b))
    phi = dict(phi)
    if set(phi) != set(a) or sorted(phi.values()) != sorted(b):
        raise ComplexError("vertex correspondence must be a bijection between the curve vertices")
    pos = {v: i for i, v in enumerate(b)}
    L = len(b)
    for u, v in zip(a, a[1:] + a[:1]):
        if (pos[phi[u]] - pos[phi[v]]) % L not in (1, L - 1):
            raise ComplexError(f"correspondence does not respect the cyclic order at {u}-{v}")
    parent: dict[int, int] = {}
    for u, v in phi.items():
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    reps = sorted({_find(parent, v) for v in range(K.n)})
    new_id = {r: i for i, r in enumerate(reps)}
    vmap = tuple(new_id[_find(parent, v)] for v in range(K.n))

    eparent: dict = {}
    for u, v in zip(a, a[1:] + a[:1]):
        e1 = (min(u, v), max(u, v))
        e2 = tuple(sorted((phi[u], phi[v])))
        r1, r2 = _find(eparent, e1), _find(eparent, e2)
        if r1 != r2:
            eparent[max(r1, r2)] = min(r1, r2)

    diags: list[str] = []
    pairs: list[tuple[int, int]] = []
    images: dict[tuple, list] = {}
    for s in (*K.edges, *K.triangles):
        t = tuple(sorted(vmap[v] for v in s))
        if len(set(t)) < len(t):
            diags.append(f"simplex {list(s)} collapses in the quotient")
            continue
        images.setdefault(t, []).append(s)
    for t, group in images.items():
        if len(group) < 2:
            continue
        if len(t) == 2 and len({_find(eparent, s) for s in group}) == 1:
            continue
        if len(t) == 2:
            pairs.append(tuple(group[0]))
            diags.append(f"edges {[list(s) for s in group]} become two distinct edges on {list(t)}")
        else:
            diags.append(f"triangles {[list(s) for s in group]} land on the same triple {list(t)}")
    if diags:
        raise GluingError(diags, pairs)
    Q = Complex2(len(reps), tuple(k for k in images if len(k) == 2), tuple(k for k in images if len(k) == 3))
    _require_valid(Q)
    return GlueResult(Q, None, None, True, vmap, ())


# -- attaching a disk along a (possibly non-injective) boundary map --------------

def attach(base: Complex2, piece: Complex2, vmap: Mapping[int, int],
           attach_edges: Sequence[tuple[int, int]]) -> tuple[Complex2, tuple[int, ...]]:
    """Attach ``piece`` to ``base`` by sending the vertices in ``vmap`` to base vertices.

    Only the edges listed in ``attach_edges`` are glued onto existing base
    edges; the map may identify several of them with one base edge (a disk
    whose boundary runs twice around a circle, say).  Every other simplex of
    ``piece`` must land on a new vertex set.  Unmapped piece vertices get new
    ids after those of ``base``, in increasing order.  Returns the result and
    the id of every piece vertex in it.
    """
    _require_valid(base)
    _require_valid(piece)
    ids = [0] * piece.n
    nxt = base.n
    for v in range(piece.n):
        if v in vmap:
            if not 0 <= vmap[v] < base.n:
                raise ComplexError(f"piece vertex {v} maps outside the base")
            ids[v] = vmap[v]
        else:
            ids[v] = nxt
            nxt += 1
    glued = {tuple(sorted(e)) for e in attach_edges}
    diags = []
    for a, b in glued:
        if a not in vmap or b not in vmap:
            raise ComplexError(f"attaching edge {a}-{b} has an unmapped end")
        if not base.has_edge(ids[a], ids[b]):
            diags.append(f"attaching edge {a}-{b} lands on non-edge {ids[a]}-{ids[b]}")
    present = set(base.edges) | set(base.triangles)
    new = {}
    for s in (*piece.edges, *piece.triangles):
        if s in glued:
            continue
        t = tuple(sorted(ids[v] for v in s))
        if len(set(t)) < len(t):
            diags.append(f"piece simplex {list(s)} degenerates to {list(t)}")
        elif t in present:
            diags.append(f"piece simplex {list(s)} lands on existing simplex {list(t)}")
        elif t in new:
            diags.append(f"piece simplices {list(new[t])} and {list(s)} land on the same simplex {list(t)}")
        else:
            new[t] = s
    if diags:
        raise GluingError(diags)
    K = Complex2(nxt, tuple(set(base.edges) | {t for t in new if len(t) == 2}),
                 tuple(set(base.triangles) | {t for t in new if len(t) == 3}))
    _require_valid(K)
    return K, tuple(ids)
