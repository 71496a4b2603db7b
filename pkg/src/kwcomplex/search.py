"""Exhaustive isomorphism-free enumeration of small 2-complexes.

Three generators share one interface:

* triangle sets on ``n`` vertices, grown one triangle at a time with
  canonical-form deduplication per level;
* arbitrary 2-complexes, obtained from each triangle class by adding every
  subset of the remaining edges (again deduplicated canonically);
* closed surfaces, grown lexicographically from the triangle ``012`` by
  always closing the smallest edge that lies in exactly one triangle, with
  edge-degree and vertex-link pruning.

Parallel runs split the work into independent branches and merge the
results in a fixed order, so serial and parallel output are identical.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator

from kwcomplex.complex import Complex2, canonical_form, classify_surface
from kwcomplex.invariants import (
    collapse_triangles,
    count_homomorphisms_s3,
    edge_path_presentation,
    homology,
    tietze_simplify,
)

HARD_CAP = 8
THREADS_ENV = "KWCOMPLEX_THREADS"


class SearchError(ValueError):
    pass


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(value))
    except ValueError:
        raise SearchError(f"{THREADS_ENV} must be an integer, got {value!r}") from None


def _key(K: Complex2) -> tuple:
    return (K.n, len(K.triangles), K.triangles, K.edges)


# -- homology filters ------------------------------------------------------------

HOMOLOGY_FILTERS: dict[str, Callable[[Complex2], bool]] = {
    "h1-torsion": lambda K: bool(homology(K).h1_torsion),
    "h1-torsion-free": lambda K: not homology(K).h1_torsion,
    "b2-positive": lambda K: homology(K).b2 > 0,
    "b2-zero": lambda K: homology(K).b2 == 0,
}


@dataclass(frozen=True)
class EnumerationConstraints:
    max_vertices: int
    min_vertices: int = 1
    require_connected: bool = True
    require_pure2: bool = False
    require_closed_surface: bool = False
    orientable: bool | None = None
    homology_filter: str | None = None
    euler_characteristic: int | None = None
    allow_over_cap: bool = False
    cap: int = HARD_CAP

    def __post_init__(self):
        if self.max_vertices > self.cap and not self.allow_over_cap:
            raise SearchError(
                f"max_vertices={self.max_vertices} exceeds the cap of {self.cap}; "
                "pass allow_over_cap=True to acknowledge the cost"
            )
        if self.min_vertices < 1 or self.max_vertices < self.min_vertices:
            raise SearchError("need 1 <= min_vertices <= max_vertices")
        if self.homology_filter is not None and self.homology_filter not in HOMOLOGY_FILTERS:
            raise SearchError(f"unknown homology filter {self.homology_filter!r}; "
                              f"choose from {sorted(HOMOLOGY_FILTERS)}")

    def accepts(self, K: Complex2) -> bool:
        """Check every constraint that the generator does not already guarantee."""
        if self.require_connected and not K.is_connected():
            return False
        if self.require_pure2 and not _is_pure2(K):
            return False
        if self.euler_characteristic is not None and K.n - len(K.edges) + len(K.triangles) != self.euler_characteristic:
            return False
        if self.require_closed_surface or self.orientable is not None:
            rep = classify_surface(K)
            if self.require_closed_surface and not rep.is_closed_surface:
                return False
            if self.orientable is not None and rep.orientable is not self.orientable:
                return False
        if self.homology_filter is not None and not HOMOLOGY_FILTERS[self.homology_filter](K):
            return False
        return True


def _is_pure2(K: Complex2) -> bool:
    if not K.triangles:
        return False
    covered_v = {v for t in K.triangles for v in t}
    covered_e = {e for a, b, c in K.triangles for e in ((a, b), (a, c), (b, c))}
    return len(covered_v) == K.n and covered_e == set(K.edges)


def _pure(n: int, triangles: Iterable[tuple[int, int, int]]) -> Complex2:
    return Complex2.build(triangles, (), n)


# -- triangle classes --------------------------------------------------------------

def triangle_classes(n: int, cover_all: bool = False) -> list[Complex2]:
    """One complex per isomorphism class of triangle sets on ``n`` vertices.

    Each complex has exactly the edges of its triangles; with ``cover_all``
    only sets touching every vertex are returned.  Order is by triangle
    count, then lexicographic on the canonical labelling.
    """
    all_tris = list(combinations(range(n), 3))
    level = {canonical_form(Complex2(n, (), ()))}
    out: list[Complex2] = []
    while level:
        ordered = sorted(level, key=_key)
        out.extend(ordered)
        nxt: set[Complex2] = set()
        for K in ordered:
            have = set(K.triangles)
            for t in all_tris:
                if t not in have:
                    nxt.add(canonical_form(_pure(n, list(have) + [t])))
        level = nxt
    if cover_all:
        out = [K for K in out if len({v for t in K.triangles for v in t}) == n]
    return out


def edge_extensions(T: Complex2) -> list[Complex2]:
    """All complexes whose triangles are exactly those of ``T``, one per isomorphism class."""
    free = [e for e in combinations(range(T.n), 2) if e not in set(T.edges)]
    found: set[Complex2] = set()
    for mask in range(1 << len(free)):
        extra = [free[i] for i in range(len(free)) if mask >> i & 1]
        found.add(canonical_form(Complex2.build(T.triangles, list(T.edges) + extra, T.n)))
    return sorted(found, key=_key)


# -- closed surfaces ---------------------------------------------------------------

def _link_ok(tris: set[tuple[int, int, int]], v: int) -> bool:
    """Link of ``v`` is a disjoint union of paths, or a single cycle."""
    adj: dict[int, list[int]] = {}
    for t in tris:
        if v in t:
            a, b = (u for u in t if u != v)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    if any(len(x) > 2 for x in adj.values()):
        return False
    seen: set[int] = set()
    components = 0
    has_cycle = False
    for s in adj:
        if s in seen:
            continue
        components += 1
        stack, nodes, degsum = [s], 0, 0
        seen.add(s)
        while stack:
            u = stack.pop()
            nodes += 1
            degsum += len(adj[u])
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if degsum // 2 == nodes:
            has_cycle = True
    return not (has_cycle and components > 1)


@dataclass
class _SurfaceState:
    n: int
    tris: set
    deg: dict
    used: int

    def open_edge(self):
        opened = [e for e, d in self.deg.items() if d == 1]
        return min(opened) if opened else None

    def children(self, max_tris: int | None) -> list[_SurfaceState]:
        e = self.open_edge()
        if e is None or (max_tris is not None and len(self.tris) >= max_tris):
            return []
        a, b = e
        out = []
        # Unused vertices are interchangeable, so only the first one is tried.
        for w in range(min(self.used + 1, self.n)):
            if w in e:
                continue
            t = tuple(sorted((a, b, w)))
            if t in self.tris:
                continue
            ea, eb = tuple(sorted((a, w))), tuple(sorted((b, w)))
            if self.deg.get(ea, 0) >= 2 or self.deg.get(eb, 0) >= 2:
                continue
            tris = self.tris | {t}
            if not all(_link_ok(tris, x) for x in t):
                continue
            deg = dict(self.deg)
            for x in (e, ea, eb):
                deg[x] = deg.get(x, 0) + 1
            out.append(_SurfaceState(self.n, tris, deg, max(self.used, w + 1)))
        return out


def _surface_target(n: int, chi: int | None) -> int | None:
    # Closed surface: 3 f2 = 2 f1 and chi = n - f1 + f2, so f2 = 2 (n - chi).
    return None if chi is None else 2 * (n - chi)


def _surface_leaves(args) -> list[Complex2]:
    state, n, chi, orientable = args
    target = _surface_target(n, chi)
    found: set[Complex2] = set()
    stack = [state]
    while stack:
        s = stack.pop()
        if s.open_edge() is None:
            if s.used == n and (target is None or len(s.tris) == target):
                K = _pure(n, s.tris)
                rep = classify_surface(K)
                if rep.is_closed_surface and (orientable is None or rep.orientable is orientable):
                    found.add(canonical_form(K))
            continue
        stack.extend(reversed(s.children(target)))
    return sorted(found, key=_key)


def _surface_frontier(n: int, chi: int | None, depth: int) -> list[_SurfaceState]:
    target = _surface_target(n, chi)
    root = _SurfaceState(n, {(0, 1, 2)}, {(0, 1): 1, (0, 2): 1, (1, 2): 1}, 3)
    frontier = [root]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            kids = s.children(target)
            nxt.extend(kids if kids or s.open_edge() is not None else [s])
        frontier = nxt
    return frontier


def closed_surfaces(n: int, chi: int | None = None, orientable: bool | None = None,
                    threads: int = 1, split_depth: int = 4) -> list[Complex2]:
    """Isomorphism classes of closed surface triangulations on exactly ``n`` vertices."""
    if n < 4:
        return []
    if chi is not None and 2 * (n - chi) * 3 // 2 > n * (n - 1) // 2:
        return []
    frontier = _surface_frontier(n, chi, split_depth)
    jobs = [(s, n, chi, orientable) for s in frontier]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_surface_leaves, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        parts = [_surface_leaves(j) for j in jobs]
    merged = {K for part in parts for K in part}
    return sorted(merged, key=_key)


# -- general enumeration -----------------------------------------------------------

def _level(n: int, c: EnumerationConstraints, threads: int) -> list[Complex2]:
    if c.require_closed_surface:
        return closed_surfaces(n, c.euler_characteristic, c.orientable, threads)
    if c.require_pure2:
        return triangle_classes(n, cover_all=True)
    classes = triangle_classes(n)
    if threads > 1 and len(classes) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(edge_extensions, classes))
    else:
        parts = [edge_extensions(T) for T in classes]
    return [K for part in parts for K in part]


def enumerate_complexes(c: EnumerationConstraints, threads: int = 1) -> Iterator[Complex2]:
    """Yield one canonical complex per isomorphism class meeting ``c``.

    Vertex counts run from ``min_vertices`` to ``max_vertices``; every
    yielded complex uses exactly its ``n`` vertices in the sense that
    ``Complex2.n`` is the level (isolated vertices are allowed unless the
    complex must be connected).
    """
    for n in range(c.min_vertices, c.max_vertices + 1):
        for K in _level(n, c, threads):
            if c.accepts(K):
                yield K


# Public alias; nothing in this module uses the builtin of the same name.
enumerate = enumerate_complexes  # noqa: A001


# -- freeness ------------------------------------------------------------------------

@dataclass(frozen=True)
class FreenessVerdict:
    verdict: str  # "free", "non-free" or "undecided"
    reason: str

    @property
    def free(self) -> bool | None:
        return {"free": True, "non-free": False}.get(self.verdict)


def freeness_screen(K: Complex2, move_budget: int = 10_000) -> FreenessVerdict:
    """Decide freeness of pi_1 where a certificate exists.

    Free: the complex collapses to a graph, or Tietze moves clear every
    relator of the edge-path presentation.  Non-free: H1 has torsion, or
    the number of homomorphisms to S3 differs from 6^b1 (the count for a
    free group of rank b1).
    """
    hom = homology(K)
    if hom.h1_torsion:
        return FreenessVerdict("non-free", f"H1 torsion {list(hom.h1_torsion)}")
    if not collapse_triangles(K):
        return FreenessVerdict("free", "collapses to a graph")
    if not K.is_connected():
        # Free products of free groups are free and vice versa, so the
        # components can be screened separately.
        verdicts = [freeness_screen(_component(K, comp), move_budget) for comp in K.components()]
        for v in verdicts:
            if v.verdict != "free":
                return v
        return FreenessVerdict("free", "every component is free")
    P = tietze_simplify(edge_path_presentation(K, 0), move_budget)
    if not P.relators:
        return FreenessVerdict("free", f"Tietze moves give a free presentation of rank {P.generator_count}")
    count = count_homomorphisms_s3(P)
    if count is not None and count != 6 ** hom.b1:
        return FreenessVerdict("non-free", f"{count} homomorphisms to S3, a free group of rank {hom.b1} has {6 ** hom.b1}")
    return FreenessVerdict("undecided", f"{len(P.relators)} relators survive Tietze moves")


def _component(K: Complex2, verts: list[int]) -> Complex2:
    index = dict(zip(sorted(verts), range(len(verts))))
    vs = set(verts)
    return Complex2.build(
        [tuple(index[v] for v in t) for t in K.triangles if t[0] in vs],
        [tuple(index[v] for v in e) for e in K.edges if e[0] in vs],
        len(verts),
    )


# -- certification --------------------------------------------------------------------

@dataclass(frozen=True)
class Property:
    """A predicate together with the class of complexes it must be scanned over.

    ``test`` returns True, False or None (undecided).  ``constraints`` maps a
    vertex count to the enumeration constraints for that level; ``reduction``
    explains why the restricted class suffices.
    """

    name: str
    description: str
    test: Callable[[Complex2], bool | None]
    constraints: Callable[[int], EnumerationConstraints]
    reduction: str = ""


def _level_constraints(**kw) -> Callable[[int], EnumerationConstraints]:
    def make(n: int) -> EnumerationConstraints:
        return EnumerationConstraints(max_vertices=n, min_vertices=n, allow_over_cap=True, **kw)
    return make


def _non_free(K: Complex2) -> bool | None:
    v = freeness_screen(K).free
    return None if v is None else not v


PROPERTIES: dict[str, Property] = {
    "h1-torsion": Property(
        "h1-torsion", "H1 has non-trivial torsion",
        lambda K: bool(homology(K).h1_torsion),
        _level_constraints(require_connected=True, require_pure2=True),
        "edges and vertices outside triangles only add free summands or components, "
        "so connected complexes in which every simplex lies in a triangle suffice",
    ),
    "non-free": Property(
        "non-free", "fundamental group is not free",
        _non_free,
        _level_constraints(require_connected=True, require_pure2=True),
        "the fundamental group is a free product of those of the triangle-covered "
        "components and a free group, and is free only if every factor is",
    ),
    "closed-orientable-chi0": Property(
        "closed-orientable-chi0", "closed orientable surface with Euler characteristic 0",
        lambda K: True,
        _level_constraints(require_closed_surface=True, orientable=True, euler_characteristic=0),
    ),
    "closed-orientable-chi-2": Property(
        "closed-orientable-chi-2", "closed orientable surface with Euler characteristic -2",
        lambda K: True,
        _level_constraints(require_closed_surface=True, orientable=True, euler_characteristic=-2),
    ),
    "closed-nonorientable-chi1": Property(
        "closed-nonorientable-chi1", "closed non-orientable surface with Euler characteristic 1",
        lambda K: True,
        _level_constraints(require_closed_surface=True, orientable=False, euler_characteristic=1),
    ),
    "closed-nonorientable-chi0": Property(
        "closed-nonorientable-chi0", "closed non-orientable surface with Euler characteristic 0",
        lambda K: True,
        _level_constraints(require_closed_surface=True, orientable=False, euler_characteristic=0),
    ),
}


@dataclass
class CertResult:
    property: str
    minimal_vertex_count: int | None
    witness: Complex2 | None
    exhaustively_checked_below: bool
    complexes_examined: dict[int, int] = field(default_factory=dict)
    undecided: list[Complex2] = field(default_factory=list)
    reduction: str = ""

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "minimal_vertex_count": self.minimal_vertex_count,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "exhaustively_checked_below": self.exhaustively_checked_below,
            "complexes_examined": {str(k): v for k, v in sorted(self.complexes_examined.items())},
            "undecided": [K.to_dict() for K in self.undecided],
            "reduction": self.reduction,
        }


def certify_min_vertices(prop: str | Property, n_start: int = 1, max_vertices: int = HARD_CAP,
                         threads: int = 1, allow_over_cap: bool = False,
                         progress: Callable[[int, int], None] | None = None) -> CertResult:
    """Scan vertex counts upward from ``n_start`` until a complex has the property.

    The scan stops at the first level holding a witness (the first one in
    enumeration order is returned).  Undecided complexes below that level
    make the result non-exhaustive and are listed.
    """
    if isinstance(prop, str):
        if prop not in PROPERTIES:
            raise SearchError(f"unknown property {prop!r}; choose from {sorted(PROPERTIES)}")
        prop = PROPERTIES[prop]
    if max_vertices > HARD_CAP and not allow_over_cap:
        raise SearchError(f"max_vertices={max_vertices} exceeds the cap of {HARD_CAP}; "
                          "pass allow_over_cap=True to acknowledge the cost")
    result = CertResult(prop.name, None, None, True, reduction=prop.reduction)
    for n in range(n_start, max_vertices + 1):
        c = prop.constraints(n)
        examined = 0
        for K in enumerate_complexes(c, threads):
            examined += 1
            verdict = prop.test(K)
            if verdict is None:
                result.undecided.append(K)
                result.exhaustively_checked_below = False
            elif verdict:
                result.complexes_examined[n] = examined
                result.minimal_vertex_count = n
                result.witness = K
                return result
        result.complexes_examined[n] = examined
        if progress is not None:
            progress(n, examined)
    return result
