"""Command line front end.

Every command prints one JSON document::

    {"schema_version": 1, "command": ..., "status": "ok" | "error",
     "payload": {...}, "diagnostics": [...], "timing_seconds": ...}

Complex arguments are files holding either a bare complex
(``{"vertices", "edges", "triangles"}``) or the output of another command
with a complex in its payload; ``-`` reads standard input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable, Sequence

from kwcomplex import bounds as B
from kwcomplex import constructions as C
from kwcomplex.complex import (
    Complex2,
    ComplexError,
    classify_surface,
    euler_characteristic,
    star_cover_nerve,
    validate,
)
from kwcomplex.gluing import Embedding, GluingError, glue, is_maximal
from kwcomplex.invariants import (
    abelianization,
    betti_bound_check,
    edge_path_presentation,
    homology,
    is_collapsible_to_graph,
    tietze_simplify,
)
from kwcomplex import search as S

SCHEMA_VERSION = 1


@dataclass
class CommandResult:
    command: str
    status: str = "ok"
    payload: dict = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    timing: float | None = None

    def __post_init__(self):
        if self.status not in ("ok", "error"):
            raise ValueError(f"bad status {self.status!r}")

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 1

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": self.status,
            "payload": self.payload,
            "diagnostics": self.diagnostics,
        }
        if timing and self.timing is not None:
            out["timing_seconds"] = round(self.timing, 6)
        return out


class UsageError(Exception):
    pass


# -- input helpers -------------------------------------------------------------------

def _read_text(arg: str) -> str:
    return sys.stdin.read() if arg == "-" else Path(arg).read_text()


def load_complex(arg: str) -> Complex2:
    data = json.loads(_read_text(arg))
    if isinstance(data, dict) and "payload" in data:
        data = data["payload"]
    if isinstance(data, dict) and "complex" in data:
        data = data["complex"]
    return Complex2.from_dict(data)


def _matrix(arg: str) -> C.CoxeterMatrix:
    return C.CoxeterMatrix.from_json(Path(arg).read_text())


def _relations_file(arg: str) -> dict:
    """``{"n": 2, "relations": [{"w": "1 2", "v": "2 1", "m": 3}, ...]}`` or a single ``w, v, m``."""
    data = json.loads(Path(arg).read_text())
    if "relations" not in data:
        data = {"n": data["n"], "relations": [{"w": data["w"], "v": data["v"], "m": data["m"]}]}
    return data


# -- construct -----------------------------------------------------------------------

def _marked(M: C.MarkedComplex, bound: float | None = None, source: str = "") -> dict:
    out = M.to_dict()
    out["vertices"] = M.complex.n
    if bound is not None:
        out["claimed_bound"] = {"value": bound, "source": source}
    return out


def _plain(K: Complex2, bound: float | None = None, source: str = "", meta: dict | None = None) -> dict:
    return _marked(C.MarkedComplex(K, 0, {}, meta or {}), bound, source)


def construct(target: str, lean: bool = False) -> dict:
    name, _, arg = target.partition(":")
    if name == "torus":
        return _marked(C.marked_torus(), 7, "KW of Z^2")
    if name == "rp2":
        return _marked(C.marked_rp2(), 6, "KW of Z/2")
    if name == "moebius":
        return _marked(C.moebius_band())
    if name == "genus2":
        return _plain(C.genus2_surface(), 10, "shifted gluing of two punctured 7-vertex tori")
    if name == "bouquet":
        return _marked(C.bouquet(int(arg)))
    if name == "telescope":
        k = int(arg)
        return _marked(C.telescope(k), 3 * k + 3, "3k + 3")
    if name == "cyclic":
        m = int(arg)
        K = C.cyclic_complex(m)
        if m == 1:
            return _plain(K)
        return _plain(K, B.cyclic_bounds(m).upper, "4 log_2 m + 4", {"m": m})
    if name == "word-disk":
        return _marked(C.word_disk(C.parse_word(arg), lean=lean))
    if name in ("raag", "racg"):
        M = _matrix(arg)
        if name == "raag":
            return _marked(C.raag_complex(M), 2 * (M.n + M.finite_count) + 1, "2(n+m)+1")
        return _marked(C.racg_complex(M), 5 * M.n + 2 * M.finite_count + 1, "5n+2m+1")
    if name in ("one-relator", "multi-relator"):
        data = _relations_file(arg)
        n = int(data["n"])
        rels = [C.Relation(C.check_word(C.parse_word(r["w"]), n), C.check_word(C.parse_word(r["v"]), n), int(r["m"]))
                for r in data["relations"]]
        M = C.multi_relation_complex(n, rels, lean)
        if len(rels) == 1:
            r = rels[0]
            bound = B.one_relator_upper(n, len(r.w), len(r.v), r.m)
            src = "8 log_2 m + 2n + (3/2)(l+l') + 5"
        else:
            bound = B.multi_relator_upper(n, [(len(r.w), len(r.v), r.m) for r in rels])
            src = "sum(8 log_2 m_i + (3/2)(l_i+l'_i)) + 2n + r + 1"
        return _marked(M, bound, src)
    if name == "artin-large":
        M = _matrix(arg)
        return _plain(C.artin_large_complex(M), B.artin_large_upper(M),
                      "8(sum_even log2 m + sum_odd log2(m-1)) + 2n - r + 1", M.to_dict())
    if name == "coxeter-large":
        M = _matrix(arg)
        return _plain(C.coxeter_large_complex(M), B.coxeter_large_upper(M),
                      "8(sum_even log2 m + sum_odd log2(m-1)) + 5n - r + 1", M.to_dict())
    raise UsageError(f"unknown construction {target!r}")


# -- other commands --------------------------------------------------------------------

def describe_validation(K: Complex2) -> tuple[dict, list[str]]:
    rep = validate(K)
    surf = classify_surface(K) if rep.ok else None
    payload = {
        "valid": rep.ok,
        "f_vector": list(K.f_vector),
        "vertices": K.n,
        "connected": K.is_connected() if rep.ok else None,
    }
    if surf is not None:
        payload["surface"] = {
            "closed": surf.is_closed_surface,
            "orientable": surf.orientable,
            "euler_characteristic": surf.euler_characteristic,
            "genus": surf.genus,
        }
    return payload, rep.problems


def invariants(K: Complex2, base: int = 0, budget: int = 10_000) -> dict:
    h = homology(K)
    out = {
        "vertices": K.n,
        "f_vector": list(K.f_vector),
        "euler_characteristic": euler_characteristic(K),
        "betti": [h.b0, h.b1, h.b2],
        "h1_torsion": list(h.h1_torsion),
        "betti_bound_ok": betti_bound_check(K),
        "collapsible_to_graph": is_collapsible_to_graph(K),
    }
    if K.is_connected():
        P = edge_path_presentation(K, base)
        Q = tietze_simplify(P, budget)
        ab = abelianization(P)
        out["presentation"] = {"generators": P.generator_count, "relators": [list(r) for r in P.relators]}
        out["simplified"] = {"generators": Q.generator_count, "relators": [list(r) for r in Q.relators]}
        out["abelianization"] = {"free_rank": ab.free_rank, "invariant_factors": list(ab.invariant_factors)}
        out["freeness"] = S.freeness_screen(K, budget).__dict__
    return out


def _z_complex(data: dict, X: Complex2, Y: Complex2) -> Complex2:
    """Z from the embedding description; missing simplices default to those present on both sides."""
    n = int(data["z_vertices"])
    fx, fy = data["into_x"], data["into_y"]
    if len(fx) != n or len(fy) != n:
        raise UsageError("into_x and into_y must list one target vertex per Z vertex")
    if "z_edges" in data or "z_triangles" in data:
        return Complex2.build(data.get("z_triangles", []), data.get("z_edges", []), n)
    edges = [(a, b) for a, b in combinations(range(n), 2)
             if X.has_edge(fx[a], fx[b]) and Y.has_edge(fy[a], fy[b])]
    tris = [(a, b, c) for a, b, c in combinations(range(n), 3)
            if X.has_triangle(*sorted((fx[a], fx[b], fx[c]))) and Y.has_triangle(*sorted((fy[a], fy[b], fy[c])))]
    return Complex2.build(tris, edges, n)


def glue_command(x_arg: str, y_arg: str, emb_arg: str) -> CommandResult:
    X, Y = load_complex(x_arg), load_complex(y_arg)
    data = json.loads(_read_text(emb_arg))
    Z = _z_complex(data, X, Y)
    iZ, jZ = Embedding(Z, X, data["into_x"]), Embedding(Z, Y, data["into_y"])
    info = {"z_f_vector": list(Z.f_vector), "x_maximal": is_maximal(iZ), "y_maximal": is_maximal(jZ)}
    try:
        res = glue(X, Y, iZ, jZ)
    except GluingError as exc:
        return CommandResult("glue", "error", info, list(exc.diagnostics))
    info.update({
        "complex": res.complex.to_dict(),
        "vertices": res.complex.n,
        "condition_one": res.lemma22_condition1,
        "condition_two": res.lemma22_condition2,
        "route": res.route,
        "y_map": list(res.y_map),
    })
    return CommandResult("glue", "ok", info)


def search_command(args: argparse.Namespace) -> CommandResult:
    threads = 1 if args.serial else (args.threads or S.default_threads())
    diagnostics: list[str] = []

    def progress(n: int, count: int) -> None:
        if args.report_every and n % args.report_every == 0:
            print(f"level {n}: {count} complexes", file=sys.stderr)

    if args.property:
        res = S.certify_min_vertices(args.property, args.min_vertices, args.max_vertices, threads,
                                     args.allow_over_cap, progress)
        if res.undecided:
            diagnostics.append(f"{len(res.undecided)} complexes could not be decided")
        if res.minimal_vertex_count is None:
            diagnostics.append(f"no complex with {args.max_vertices} or fewer vertices has the property")
        return CommandResult("search", "ok", res.to_dict(), diagnostics)
    c = S.EnumerationConstraints(
        max_vertices=args.max_vertices, min_vertices=args.min_vertices,
        require_connected=not args.allow_disconnected, require_pure2=args.pure2,
        require_closed_surface=args.closed_surface, orientable=args.orientable,
        homology_filter=args.homology, euler_characteristic=args.chi,
        allow_over_cap=args.allow_over_cap,
    )
    counts: dict[str, int] = {}
    listed = []
    for K in S.enumerate_complexes(c, threads):
        counts[str(K.n)] = counts.get(str(K.n), 0) + 1
        if args.list:
            listed.append(K.to_dict())
    payload = {"counts": counts, "total": sum(counts.values())}
    if args.list:
        payload["complexes"] = listed
    return CommandResult("search", "ok", payload, diagnostics)


# -- argument parsing ------------------------------------------------------------------

def _orientation(text: str) -> bool:
    if text in ("yes", "true", "orientable"):
        return True
    if text in ("no", "false", "nonorientable"):
        return False
    raise argparse.ArgumentTypeError("use orientable or nonorientable")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kwcomplex", description="Small simplicial 2-complexes with prescribed fundamental groups.")
    p.add_argument("--pretty", action="store_true", help="indent the JSON output")
    p.add_argument("--no-timing", action="store_true", help="omit the timing field")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build a named complex")
    c.add_argument("target", help="torus | rp2 | moebius | genus2 | bouquet:n | telescope:k | cyclic:m | "
                                  "word-disk:WORD | raag:FILE | racg:FILE | one-relator:FILE | "
                                  "multi-relator:FILE | artin-large:FILE | coxeter-large:FILE")
    c.add_argument("--lean", action="store_true", help="use the leaner word disk where allowed")

    v = sub.add_parser("validate", help="check simpliciality and classify")
    v.add_argument("complex")

    i = sub.add_parser("invariants", help="homology, presentation and collapsibility")
    i.add_argument("complex")
    i.add_argument("--base", type=int, default=0)
    i.add_argument("--budget", type=int, default=10_000, help="Tietze move budget")

    g = sub.add_parser("glue", help="glue two complexes along a common subcomplex")
    g.add_argument("x")
    g.add_argument("y")
    g.add_argument("embedding", help='JSON {"z_vertices": N, "into_x": [...], "into_y": [...]}')

    b = sub.add_parser("bounds", help="bounds on KW-complexity for a group")
    b.add_argument("group", help="free:n | cyclic:m | abelian:d1,d2,... | free-abelian:n | z2-sum:n | "
                                 "surface:+g | surface:-q | raag:FILE | racg:FILE | artin-large:FILE | "
                                 "coxeter-large:FILE | one-relator:FILE")

    s = sub.add_parser("search", help="exhaustive enumeration and minimal-vertex certification")
    s.add_argument("--property", choices=sorted(S.PROPERTIES))
    s.add_argument("--max-vertices", type=int, required=True)
    s.add_argument("--min-vertices", type=int, default=1)
    s.add_argument("--serial", action="store_true")
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("--report-every", type=int, default=0)
    s.add_argument("--allow-over-cap", action="store_true")
    s.add_argument("--pure2", action="store_true")
    s.add_argument("--closed-surface", action="store_true")
    s.add_argument("--orientable", type=_orientation, default=None)
    s.add_argument("--chi", type=int, default=None)
    s.add_argument("--homology", choices=sorted(S.HOMOLOGY_FILTERS), default=None)
    s.add_argument("--allow-disconnected", action="store_true")
    s.add_argument("--list", action="store_true", help="include every complex in the output")

    n = sub.add_parser("nerve", help="nerve of the open-star cover")
    n.add_argument("complex")
    return p


def _dispatch(args: argparse.Namespace) -> CommandResult:
    cmd = args.command
    if cmd == "construct":
        return CommandResult(cmd, "ok", construct(args.target, args.lean))
    if cmd == "validate":
        payload, problems = describe_validation(load_complex(args.complex))
        return CommandResult(cmd, "ok" if payload["valid"] else "error", payload, problems)
    if cmd == "invariants":
        K = load_complex(args.complex)
        problems = validate(K).problems
        if problems:
            return CommandResult(cmd, "error", {}, problems)
        return CommandResult(cmd, "ok", invariants(K, args.base, args.budget))
    if cmd == "glue":
        return glue_command(args.x, args.y, args.embedding)
    if cmd == "bounds":
        spec = B.GroupSpec.parse(args.group)
        return CommandResult(cmd, "ok", {"group": args.group, **B.bounds_for(spec).to_dict()})
    if cmd == "search":
        return search_command(args)
    if cmd == "nerve":
        K = load_complex(args.complex)
        N = star_cover_nerve(K)
        return CommandResult(cmd, "ok", {"complex": N.to_dict(), "vertices": N.n, "equals_input": N == K})
    raise UsageError(f"unknown command {cmd!r}")


def run(argv: Sequence[str]) -> tuple[CommandResult, argparse.Namespace | None]:
    """Parse and execute; usage problems raise :class:`UsageError`."""
    args = build_parser().parse_args(list(argv))
    start = time.perf_counter()
    try:
        result = _dispatch(args)
    except (ValueError, ComplexError, OSError, KeyError, json.JSONDecodeError) as exc:
        diagnostics = list(getattr(exc, "diagnostics", []) or [f"{type(exc).__name__}: {exc}"])
        result = CommandResult(args.command, "error", {}, diagnostics)
    result.timing = time.perf_counter() - start
    return result, args


def main(argv: Sequence[str] | None = None, out: Callable[[str], None] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    write = out or (lambda text: print(text))
    try:
        result, args = run(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    doc = result.to_dict(timing=not args.no_timing)
    write(json.dumps(doc, indent=2 if args.pretty else None, sort_keys=False))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
