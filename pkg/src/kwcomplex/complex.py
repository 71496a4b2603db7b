"""Finite simplicial complexes of dimension at most two.

A :class:`Complex2` stores its vertices as the dense range ``0..n-1``, edges
as sorted pairs and triangles as sorted triples.  The raw constructor keeps
whatever it is given so that :func:`validate` can report broken input;
:meth:`Complex2.build` closes and deduplicates.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


class ComplexError(ValueError):
    """Raised when an operation needs a valid complex and does not get one."""


@dataclass(frozen=True)
class Complex2:
    n: int
    edges: tuple[Edge, ...] = ()
    triangles: tuple[Triangle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges)))
        object.__setattr__(self, "triangles", tuple(sorted(tuple(sorted(t)) for t in self.triangles)))

    @classmethod
    def build(cls, triangles: Iterable[Sequence[int]] = (), edges: Iterable[Sequence[int]] = (),
              n: int | None = None) -> Complex2:
        """Downward-closed complex generated by the given simplices."""
        tris = {tuple(sorted(t)) for t in triangles}
        eds = {tuple(sorted(e)) for e in edges}
        for a, b, c in tris:
            eds.update(((a, b), (a, c), (b, c)))
        if n is None:
            n = 1 + max((v for s in (*eds, *tris) for v in s), default=-1)
        return cls(n, tuple(eds), tuple(tris))

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def s0(self) -> int:
        return self.n

    @property
    def s1(self) -> int:
        return len(self.edges)

    @property
    def s2(self) -> int:
        return len(self.triangles)

    @property
    def f_vector(self) -> tuple[int, int, int]:
        return (self.n, len(self.edges), len(self.triangles))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def triangle_set(self) -> frozenset[Triangle]:
        return frozenset(self.triangles)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            if 0 <= a < self.n and 0 <= b < self.n:
                nb[a].add(b)
                nb[b].add(a)
        return tuple(frozenset(s) for s in nb)

    @cached_property
    def triangles_at(self) -> tuple[tuple[Triangle, ...], ...]:
        at: list[list[Triangle]] = [[] for _ in range(self.n)]
        for t in self.triangles:
            for v in t:
                if 0 <= v < self.n:
                    at[v].append(t)
        return tuple(tuple(x) for x in at)

    @cached_property
    def edge_degrees(self) -> dict[Edge, int]:
        deg = {e: 0 for e in self.edges}
        for a, b, c in self.triangles:
            for e in ((a, b), (a, c), (b, c)):
                deg[e] = deg.get(e, 0) + 1
        return deg

    @cached_property
    def _structural_problems(self) -> tuple[str, ...]:
        # Complexes are immutable, so the check runs once per instance.
        return tuple(structural_problems(self))

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edge_set

    def has_triangle(self, a: int, b: int, c: int) -> bool:
        return tuple(sorted((a, b, c))) in self.triangle_set

    def components(self) -> list[list[int]]:
        """Connected components of the 1-skeleton."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], deque([s])
            while queue:
                v = queue.popleft()
                comp.append(v)
                for u in sorted(self.neighbors[v]):
                    if not seen[u]:
                        seen[u] = True
                        queue.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def relabel(self, perm: Sequence[int]) -> Complex2:
        """Complex with vertex ``v`` renamed ``perm[v]``; ``perm`` must be a permutation."""
        return Complex2(self.n,
                        tuple((perm[a], perm[b]) for a, b in self.edges),
                        tuple((perm[a], perm[b], perm[c]) for a, b, c in self.triangles))

    def subcomplex(self, vertices: Iterable[int], edges: Iterable[Edge] = (),
                   triangles: Iterable[Triangle] = ()) -> tuple[Complex2, list[int]]:
        """Densely relabelled subcomplex plus the list of original ids."""
        tris = {tuple(sorted(t)) for t in triangles}
        eds = {tuple(sorted(e)) for e in edges}
        for a, b, c in tris:
            eds.update(((a, b), (a, c), (b, c)))
        vs = set(vertices) | {v for e in eds for v in e}
        ids = sorted(vs)
        index = {v: i for i, v in enumerate(ids)}
        sub = Complex2(len(ids),
                       tuple((index[a], index[b]) for a, b in eds),
                       tuple((index[a], index[b], index[c]) for a, b, c in tris))
        return sub, ids

    def to_dict(self) -> dict:
        return {"vertices": self.n,
                "edges": [list(e) for e in self.edges],
                "triangles": [list(t) for t in self.triangles]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> Complex2:
        """Load the interchange form; the stored edges must match the re-derived closure."""
        try:
            n = int(data["vertices"])
            edges = [tuple(int(v) for v in e) for e in data.get("edges", [])]
            tris = [tuple(int(v) for v in t) for t in data.get("triangles", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"malformed complex: {exc}") from exc
        K = cls(n, tuple(edges), tuple(tris))
        report = validate(K)
        if report.violations:
            raise ComplexError("; ".join(report.violations))
        return K

    @classmethod
    def from_json(cls, text: str) -> Complex2:
        return cls.from_dict(json.loads(text))


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    connected: bool = True
    components: int = 1

    @property
    def is_simplicial(self) -> bool:
        return not self.violations

    @property
    def problems(self) -> list[str]:
        out = list(self.violations)
        if not self.connected:
            out.append(f"disconnected: {self.components} components")
        return out

    @property
    def ok(self) -> bool:
        return not self.problems


def structural_problems(K: Complex2) -> list[str]:
    """Closure, duplicate, degenerate and range problems (connectivity is not checked)."""
    bad: list[str] = []
    if K.n < 0:
        bad.append("negative vertex count")
    for kind, simplices, size in (("edge", K.edges, 2), ("triangle", K.triangles, 3)):
        seen = set()
        for s in simplices:
            if len(s) != size:
                bad.append(f"{kind} {list(s)} has {len(s)} vertices")
                continue
            if any(not 0 <= v < K.n for v in s):
                bad.append(f"{kind} {list(s)} references a vertex outside 0..{K.n - 1}")
            if len(set(s)) != size:
                bad.append(f"degenerate {kind} {list(s)}")
            if s in seen:
                bad.append(f"duplicate {kind} {list(s)}")
            seen.add(s)
    eds = K.edge_set
    for t in K.triangles:
        if len(t) != 3:
            continue
        for e in combinations(t, 2):
            if e not in eds:
                bad.append(f"closure: edge {list(e)} of triangle {list(t)} is missing")
    return bad


def validate(K: Complex2) -> ValidationReport:
    """Check closure, duplicates, degenerate simplices and connectivity.  Never raises."""
    bad = list(K._structural_problems)
    comps = len(K.components()) if K.n > 0 else 0
    return ValidationReport(bad, comps == 1, comps)


def _require_valid(K: Complex2) -> None:
    problems = K._structural_problems
    if problems:
        raise ComplexError("invalid complex: " + "; ".join(problems[:5]))


def euler_characteristic(K: Complex2) -> int:
    _require_valid(K)
    return K.n - len(K.edges) + len(K.triangles)


def _check_vertex(K: Complex2, v: int) -> None:
    if not 0 <= v < K.n:
        raise ComplexError(f"vertex {v} not in complex with {K.n} vertices")


def star(K: Complex2, v: int) -> Complex2:
    """Closed star of ``v``, relabelled densely in increasing order of the original ids."""
    _check_vertex(K, v)
    tris = K.triangles_at[v]
    eds = [(min(v, u), max(v, u)) for u in K.neighbors[v]]
    sub, _ = K.subcomplex([v], eds, tris)
    return sub


def link_simplices(K: Complex2, v: int) -> tuple[set[int], set[Edge]]:
    """Vertices and edges of the link of ``v`` in the original labelling."""
    _check_vertex(K, v)
    verts = set(K.neighbors[v])
    eds = {tuple(u for u in t if u != v) for t in K.triangles_at[v]}
    return verts, eds


def link(K: Complex2, v: int) -> Complex2:
    verts, eds = link_simplices(K, v)
    sub, _ = K.subcomplex(verts, eds)
    return sub


@dataclass(frozen=True)
class SurfaceReport:
    is_closed_surface: bool
    orientable: bool | None
    euler_characteristic: int
    genus: int | None


def _link_is_cycle(K: Complex2, v: int) -> bool:
    verts, eds = link_simplices(K, v)
    if len(verts) < 3 or len(eds) != len(verts):
        return False
    adj: dict[int, list[int]] = {u: [] for u in verts}
    for a, b in eds:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(x) != 2 for x in adj.values()):
        return False
    start = next(iter(verts))
    prev, cur, steps = None, start, 0
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev, cur = cur, nxt
        steps += 1
        if cur == start:
            return steps == len(verts)


def orientable_pure(K: Complex2) -> bool | None:
    """Try to orient the triangles coherently across every edge of degree two.

    Returns None when some edge has degree other than 1 or 2 (no surface-like
    orientation question to answer).
    """
    if any(d > 2 for d in K.edge_degrees.values()):
        return None
    by_edge: dict[Edge, list[Triangle]] = {}
    for t in K.triangles:
        for e in combinations(t, 2):
            by_edge.setdefault(e, []).append(t)
    orient: dict[Triangle, tuple[int, int, int]] = {}
    for seed in K.triangles:
        if seed in orient:
            continue
        orient[seed] = seed
        queue = deque([seed])
        while queue:
            t = queue.popleft()
            a, b, c = orient[t]
            for x, y in ((a, b), (b, c), (c, a)):
                for u in by_edge[(min(x, y), max(x, y))]:
                    if u == t:
                        continue
                    # the neighbour must traverse the shared edge as y -> x
                    w = next(z for z in u if z not in (x, y))
                    want = (y, x, w)
                    if u in orient:
                        if not _same_cyclic(orient[u], want):
                            return False
                    else:
                        orient[u] = want
                        queue.append(u)
    return True


def _same_cyclic(p: Sequence[int], q: Sequence[int]) -> bool:
    return tuple(q) in (tuple(p), (p[1], p[2], p[0]), (p[2], p[0], p[1]))


def classify_surface(K: Complex2) -> SurfaceReport:
    chi = euler_characteristic(K)
    closed = (
        K.n > 0
        and K.is_connected()
        and all(d == 2 for d in K.edge_degrees.values())
        and all(_link_is_cycle(K, v) for v in K.vertices)
    )
    if not closed:
        return SurfaceReport(False, None, chi, None)
    orientable = bool(orientable_pure(K))
    genus = (2 - chi) // 2 if orientable else 2 - chi
    return SurfaceReport(True, orientable, chi, genus)


# -- canonical form ---------------------------------------------------------

def _refine(K: Complex2, colors: list[int]) -> list[int]:
    ncells = len(set(colors))
    while True:
        sigs = []
        for v in range(K.n):
            nb = tuple(sorted(colors[u] for u in K.neighbors[v]))
            tr = tuple(sorted(
                (min(colors[a], colors[b]), max(colors[a], colors[b]))
                for a, b in (tuple(u for u in t if u != v) for t in K.triangles_at[v])
            ))
            sigs.append((colors[v], nb, tr))
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colors = [order[s] for s in sigs]
        if len(order) == ncells:
            return colors
        ncells = len(order)


def _encode(K: Complex2, perm: Sequence[int]) -> tuple:
    tris = tuple(sorted(tuple(sorted((perm[a], perm[b], perm[c]))) for a, b, c in K.triangles))
    eds = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in K.edges))
    return (tris, eds)


def canonical_labeling(K: Complex2) -> list[int]:
    """Vertex relabelling under which isomorphic complexes coincide.

    Colour refinement on (degree, neighbour colours, link-edge colours)
    followed by individualisation backtracking; the lexicographically least
    encoding over all leaves wins.
    """
    _require_valid(K)
    if K.n == 0:
        return []
    init = [(len(K.neighbors[v]), len(K.triangles_at[v])) for v in range(K.n)]
    order = {s: i for i, s in enumerate(sorted(set(init)))}
    start = _refine(K, [order[s] for s in init])
    best: list = [None, None]

    def search(colors: list[int]) -> None:
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min((c for c, k in counts.items() if k > 1), default=None)
        if target is None:
            key = _encode(K, colors)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, list(colors)
            return
        for v in [u for u in range(K.n) if colors[u] == target]:
            split = [2 * c for c in colors]
            split[v] -= 1
            search(_refine(K, split))

    search(start)
    colors = best[1]
    ranks = {c: i for i, c in enumerate(sorted(colors))}
    return [ranks[c] for c in colors]


def canonical_form(K: Complex2) -> Complex2:
    return K.relabel(canonical_labeling(K))


def is_isomorphic(K: Complex2, L: Complex2) -> bool:
    if K.f_vector != L.f_vector:
        return False
    return canonical_form(K) == canonical_form(L)


# -- nerve of the open-star cover -------------------------------------------

def star_cover_nerve(K: Complex2) -> Complex2:
    """2-skeleton of the nerve of the open stars ``{St(v)}``.

    A set of vertices spans a nerve simplex when some simplex of ``K``
    contains all of them, i.e. the intersection of their open stars is
    non-empty.  Computed directly from the stars, not from the answer.
    """
    _require_valid(K)
    simplices = [(v,) for v in range(K.n)] + list(K.edges) + list(K.triangles)
    open_star: list[set[int]] = [set() for _ in range(K.n)]
    for idx, s in enumerate(simplices):
        for v in s:
            open_star[v].add(idx)
    edges = [(a, b) for a, b in combinations(range(K.n), 2)
             if open_star[a] & open_star[b]]
    adj: list[set[int]] = [set() for _ in range(K.n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    tris = []
    for a, b in edges:
        for c in adj[a] & adj[b]:
            if c > b and open_star[a] & open_star[b] & open_star[c]:
                tris.append((a, b, c))
    return Complex2(K.n, tuple(edges), tuple(tris))
