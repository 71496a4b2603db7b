"""Closed-form upper and lower bounds on KW-complexity.

KW(G) is the least vertex count of a simplicial 2-complex with fundamental
group G.  Real-valued bounds are evaluated in double precision; the integer
ceiling (for lower bounds) or floor (for upper bounds) is reported next to
them and computed with a small tolerance so that exact integers survive
rounding noise.  Integer-valued formulas are evaluated exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from kwcomplex.constructions import (
    CoxeterMatrix,
    artin_presentation,
    check_word,
    parse_word,
)
from kwcomplex.invariants import Presentation, abelianization, free_reduce, inverse

# Relative error of the floating point evaluation.  Ceilings and floors are
# taken after nudging by this much so that e.g. 4.000000000001 ceils to 4.
REL_TOL = 1e-9


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1 / 3), x)


def _ceil(x: float) -> int:
    return math.ceil(x - REL_TOL * max(1.0, abs(x)))


def _floor(x: float) -> int:
    return math.floor(x + REL_TOL * max(1.0, abs(x)))


@dataclass
class BoundReport:
    """``lower <= KW(G) <= upper`` with a description of where each side comes from."""

    lower: float
    upper: float
    lower_source: str
    upper_source: str
    extras: dict[str, float] = field(default_factory=dict)
    exact: bool = False

    def __post_init__(self):
        if self.lower > self.upper * (1 + REL_TOL):
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @property
    def lower_int(self) -> int:
        return _ceil(self.lower)

    @property
    def upper_int(self) -> int:
        return _floor(self.upper)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_int": self.lower_int,
            "upper_int": self.upper_int,
            "lower_source": self.lower_source,
            "upper_source": self.upper_source,
            "exact": self.exact,
            "extras": dict(self.extras),
        }


# -- exact values ------------------------------------------------------------------

def _least_k(rhs: int, offset: int) -> int:
    """Least ``k >= offset/2`` with ``(2k - offset)^2 >= rhs``."""
    r = math.isqrt(rhs)
    if r * r < rhs:
        r += 1
    # 2k - offset >= r, and 2k - offset must have the parity that makes k an integer.
    return (r + offset + 1) // 2


def kw_free(n: int) -> int:
    """KW of the free group of rank ``n``: the least k with n <= (k-1)(k-2)/2."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    # (k-1)(k-2)/2 >= n  <=>  (2k-3)^2 >= 8n+1
    return _least_k(8 * n + 1, 3)


def chromatic_orientable(g: int) -> int:
    """Chromatic number of the orientable surface of genus ``g``."""
    if g < 0:
        raise ValueError("genus must be non-negative")
    if g == 2:
        return 10
    return _least_k(48 * g + 1, 7)


def chromatic_nonorientable(q: int) -> int:
    """Chromatic number of the non-orientable surface of genus ``q``."""
    if q < 1:
        raise ValueError("non-orientable genus must be at least 1")
    if q == 2:
        return 8
    if q == 3:
        return 9
    return _least_k(24 * q + 1, 7)


def kw_surface(genus: int, orientable: bool = True) -> int:
    """KW of a closed surface group; the chromatic number except 9 for genus two."""
    if genus < 1:
        raise ValueError("genus must be at least 1 (the sphere has trivial group)")
    if orientable:
        return 9 if genus == 2 else chromatic_orientable(genus)
    return chromatic_nonorientable(genus)


# -- Artin / Coxeter counting bounds -------------------------------------------------

def below_curve(n: int, m: int) -> bool:
    """Whether ``m <= (n/6)(sqrt(8n+1) - 3)``, decided exactly."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    # 6m/n + 3 <= sqrt(8n+1)  <=>  (6m + 3n)^2 <= n^2 (8n+1)
    return (6 * m + 3 * n) ** 2 <= n * n * (8 * n + 1)


def cubic_root_bound(r: int) -> float:
    """The real root t >= 3 of (t-1)(t-2)(t-3) = 6r."""
    if r < 0:
        raise ValueError("relation count must be non-negative")
    target = 6 * r
    lo, hi = 3.0, 4.0 + _cbrt(target)
    for _ in range(200):
        mid = (lo + hi) / 2
        if (mid - 1) * (mid - 2) * (mid - 3) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _counting_lower(n: int, r: int) -> float:
    if below_curve(n, r):
        return (math.sqrt(8 * n + 1) + 3) / 2
    return _cbrt(6 * r) + 2


def k_A(n: int, m: int) -> float:
    """Counting lower bound for an n-generator, m-relation Artin presentation.

    Above the curve this is cbrt(6m) + 2, a closed-form under-estimate of the
    root of (t-1)(t-2)(t-3) = 6m (see :func:`cubic_root_bound`).
    """
    return _counting_lower(n, m)


def k_C(n: int, m: int) -> float:
    """As :func:`k_A` with the relation count r = m + n (the n involution relations added)."""
    return _counting_lower(n, m + n)


def _matrix_counts(M: CoxeterMatrix, right_angled: bool) -> tuple[int, int]:
    if right_angled and any(m != 2 for _, _, m in M.finite_pairs()):
        raise ValueError("right-angled bounds need every finite entry equal to 2")
    return M.n, M.finite_count


def raag_bounds(n: int, m: int) -> BoundReport:
    if not 0 <= m <= n * (n - 1) // 2:
        raise ValueError(f"m = {m} out of range for n = {n}")
    lower = k_A(n, m)
    branch = "(sqrt(8n+1)+3)/2" if below_curve(n, m) else "cbrt(6m)+2"
    return BoundReport(
        lower, 2 * (n + m) + 1,
        f"generator/relation counting: {branch}",
        "bouquet plus one 7-vertex torus per commuting pair: 2(n+m)+1",
        {"cubic_root": cubic_root_bound(m)},
    )


def racg_bounds(n: int, m: int) -> BoundReport:
    if not 0 <= m <= n * (n - 1) // 2:
        raise ValueError(f"m = {m} out of range for n = {n}")
    r = m + n
    lower = k_C(n, m)
    branch = "(sqrt(8n+1)+3)/2" if below_curve(n, r) else "cbrt(6r)+2 with r = m+n"
    # Any right-angled Coxeter group has Z/2 torsion, so it is not free.
    return BoundReport(
        max(lower, 6.0), 5 * n + 2 * m + 1,
        f"generator/relation counting: {branch}; non-free groups need 6 vertices",
        "6-vertex projective plane per generator plus tori: 5n+2m+1",
        {"counting": lower, "cubic_root": cubic_root_bound(r)},
    )


def free_abelian_bounds(n: int) -> BoundReport:
    if n < 1:
        raise ValueError("rank must be at least 1")
    cube = 3 * n * (n - 1)
    c = round(cube ** (1 / 3))
    while c ** 3 < cube:
        c += 1
    while c > 0 and (c - 1) ** 3 >= cube:
        c -= 1
    report = BoundReport(
        c + 2, n * n + n + 1,
        "ceil((3n(n-1))^(1/3)) + 2",
        "n^2 + n + 1",
        {},
    )
    if n == 1:
        report.extras["kw_free"] = kw_free(1)
    return report


def z2_sum_bounds(n: int) -> BoundReport:
    if n < 1:
        raise ValueError("n must be at least 1")
    return BoundReport(
        (4 / 3) * n ** (2 / 3) + 1, n * n + 4 * n + 1,
        "(4/3) n^(2/3) + 1",
        "n^2 + 4n + 1",
    )


def cyclic_bounds(m: int) -> BoundReport:
    if m < 2:
        raise ValueError("m must be at least 2")
    extras = {"alt_upper": 3 * math.log2(m) + 8}
    if m == 4:
        extras["improved_upper"] = 11
    if m == 2:
        extras["exact"] = 6
    return BoundReport(
        _cbrt(12 * math.log(m, 3)), 4 * math.log2(m) + 4,
        "cbrt(12 log_3 m)",
        "Moebius telescope capped along the dyadic curve: 4 log_2 m + 4",
        extras,
    )


def finite_abelian_bounds(factors: Sequence[int]) -> BoundReport:
    factors = list(factors)
    if not factors:
        raise ValueError("need at least one invariant factor")
    if any(d < 2 for d in factors) or any(factors[i + 1] % factors[i] for i in range(len(factors) - 1)):
        raise ValueError(f"not an invariant-factor chain: {factors}")
    s = len(factors)
    log_order = sum(math.log2(d) for d in factors)
    order_log3 = log_order / math.log2(3)
    return BoundReport(
        (12 * order_log3) ** (1 / 3), (3 / s * log_order + 8) ** s,
        "(12 log_3 |G|)^(1/3)",
        "((3/s) log_2 |G| + 8)^s",
        {"product_upper": math.prod(3 * math.log2(d) + 8 for d in factors),
         "product_cyclic_upper": math.prod(4 * math.log2(d) + 4 for d in factors)},
    )


def _require_large(M: CoxeterMatrix) -> None:
    for i, j, m in M.finite_pairs():
        if m < 3:
            raise ValueError(f"large type needs every finite entry >= 3, got m_{i}{j} = {m}")


def artin_large_upper(M: CoxeterMatrix) -> float:
    """8(sum_even log2 m + sum_odd log2(m-1)) + 2n - r + 1, accumulated in the log domain."""
    _require_large(M)
    total = 0.0
    for _, _, m in M.finite_pairs():
        total += math.log2(m) if m % 2 == 0 else math.log2(m - 1)
    return 8 * total + 2 * M.n - M.finite_count + 1


def coxeter_large_upper(M: CoxeterMatrix) -> float:
    """The Artin value plus 3n for the projective planes on the generator circles."""
    return artin_large_upper(M) + 3 * M.n


def betti_floor(b1: int) -> int:
    """A group with first Betti number b1 needs at least KW(F_b1) vertices (1 if b1 = 0)."""
    return kw_free(b1) if b1 >= 1 else 1


def artin_large_bounds(M: CoxeterMatrix) -> BoundReport:
    b1 = abelianization(artin_presentation(M)).free_rank
    return BoundReport(
        betti_floor(b1), artin_large_upper(M),
        "first Betti number b1 needs (k-1)(k-2)/2 >= b1",
        "telescope relation complexes: 8(sum_even log2 m + sum_odd log2(m-1)) + 2n - r + 1",
        {"b1": b1},
    )


def coxeter_large_bounds(M: CoxeterMatrix) -> BoundReport:
    return BoundReport(
        6, coxeter_large_upper(M),
        "non-free groups need 6 vertices",
        "Artin large-type complex plus 3n: 8(sum_even log2 m + sum_odd log2(m-1)) + 5n - r + 1",
        {"artin_upper": artin_large_upper(M)},
    )


def one_relator_upper(n: int, l: int, l2: int, m: int) -> float:
    """8 log2 m + 2n + (3/2)(l + l') + 5."""
    return 8 * math.log2(m) + 2 * n + 1.5 * (l + l2) + 5


def one_relator_upper_sharp(n: int, l: int, l2: int, m: int) -> float:
    """The same count with the constant 2 instead of 5."""
    return 8 * math.log2(m) + 2 * n + 1.5 * (l + l2) + 2


def multi_relator_upper(n: int, relations: Sequence[tuple[int, int, int]]) -> float:
    """sum_i (8 log2 m_i + (3/2)(l_i + l'_i)) + 2n + r + 1 for relations given as (l, l', m)."""
    total = sum(8 * math.log2(m) + 1.5 * (l + l2) for l, l2, m in relations)
    return total + 2 * n + len(relations) + 1


def one_relator_bounds(n: int, w: Sequence[int], v: Sequence[int], m: int) -> BoundReport:
    w, v = check_word(w, n), check_word(v, n)
    rel = free_reduce(tuple(w) * m + inverse(tuple(v) * m))
    b1 = abelianization(Presentation(n, [rel] if rel else [])).free_rank
    return BoundReport(
        betti_floor(b1), one_relator_upper(n, len(w), len(v), m),
        "first Betti number b1 needs (k-1)(k-2)/2 >= b1",
        "two word disks, telescopes and caps: 8 log2 m + 2n + (3/2)(l+l') + 5",
        {"b1": b1, "sharper_upper": one_relator_upper_sharp(n, len(w), len(v), m)},
    )


# -- counting and geometry ---------------------------------------------------------

def group_count_log2(T: int) -> float:
    """log2 of the bound on the number of groups with KW <= T: 3 T^3 log2 T."""
    if T < 2:
        raise ValueError("T must be at least 2")
    return 3 * T ** 3 * math.log2(T)


def group_count_exponents(T: int) -> dict[str, float]:
    if T < 2:
        raise ValueError("T must be at least 2")
    return {
        "coarse": group_count_log2(T),
        "intermediate": T ** 3 * math.log2(T ** 3 / 6),
        "presentation_count": 6 * (T ** 3 / 6) * math.log2(T ** 3 / 6),
    }


def systolic_bounds(kw: int, zero_free_index: bool = True) -> BoundReport:
    """Systolic area: kw/576 (free index zero) or pi/16 below, kw^3/(27 pi) above."""
    if kw < 3:
        raise ValueError("kw must be at least 3")
    if zero_free_index:
        lower, source = kw / 576, "kw/576 for groups of zero free index"
    else:
        lower, source = math.pi / 16, "pi/16 for every non-free group"
    return BoundReport(lower, kw ** 3 / (27 * math.pi), source, "kw^3/(27 pi)")


def entropy_upper(kw: int) -> float:
    """(1/3) log(kw) kw^(3/2), natural log."""
    if kw < 3:
        raise ValueError("kw must be at least 3")
    return math.log(kw) * kw ** 1.5 / 3


def entropy_upper_sharp(kw: int) -> float:
    """(1/3) log(kw - 1) kw^(3/2)."""
    if kw < 3:
        raise ValueError("kw must be at least 3")
    return math.log(kw - 1) * kw ** 1.5 / 3


def free_entropy(n: int) -> float:
    """Minimal volume entropy of the free group of rank n: 3(n-1) log 2."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    return 3 * (n - 1) * math.log(2)


# -- combination rules ---------------------------------------------------------------

def _nontrivial_floor(*reports: BoundReport) -> tuple[float, str]:
    # A complex on one or two vertices is contractible or disconnected, so a
    # non-trivial group needs at least three.
    if any(r.lower > 1 for r in reports):
        return 3.0, "non-trivial group needs 3 vertices"
    return 1.0, "trivial floor"


def combine_product(b1: BoundReport, b2: BoundReport) -> BoundReport:
    lower, src = _nontrivial_floor(b1, b2)
    return BoundReport(lower, b1.upper * b2.upper, src, "KW(G1 x G2) <= KW(G1) KW(G2)")


def combine_free_product(b1: BoundReport, b2: BoundReport, free_flags: tuple[bool, bool]) -> BoundReport:
    """``a`` is 0 when both factors are non-free and 1 otherwise; the caller declares freeness."""
    a = 0 if not any(free_flags) else 1
    lower, src = _nontrivial_floor(b1, b2)
    return BoundReport(lower, b1.upper + b2.upper - 3 + a, src,
                       f"KW(G1 * G2) <= KW(G1) + KW(G2) - 3 + a with a = {a}")


def subgroup_bound(b: BoundReport, index: int) -> BoundReport:
    if index < 1:
        raise ValueError("index must be positive")
    return BoundReport(1.0, index * b.upper, "trivial floor", "KW(H) <= k KW(G) for index k")


# -- group specifications ------------------------------------------------------------

KINDS = (
    "free", "cyclic", "abelian", "free-abelian", "z2-sum", "surface",
    "raag", "racg", "artin-large", "coxeter-large", "one-relator",
)


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str, base: Path | None = None) -> GroupSpec:
        """Parse ``kind:argument`` strings such as ``free:3``, ``surface:-2`` or ``raag:matrix.json``.

        One-relator specs read a JSON file ``{"n": 2, "w": "1 2", "v": "2 1", "m": 3}``.
        """
        kind, _, arg = text.partition(":")
        kind = kind.strip().lower()
        arg = arg.strip()
        if kind not in KINDS:
            raise ValueError(f"unknown group kind {kind!r}; choose from {', '.join(KINDS)}")
        if not arg:
            raise ValueError(f"missing argument in {text!r}")
        if kind in ("free", "cyclic", "free-abelian", "z2-sum"):
            return cls(kind, (int(arg),))
        if kind == "abelian":
            return cls(kind, tuple(int(x) for x in arg.split(",")))
        if kind == "surface":
            if arg[0] not in "+-":
                raise ValueError("surface spec needs a sign: surface:+g or surface:-q")
            return cls(kind, (int(arg[1:]), arg[0] == "+"))
        path = Path(arg) if base is None else base / arg
        text = path.read_text()
        if kind in ("raag", "racg", "artin-large", "coxeter-large"):
            return cls(kind, (CoxeterMatrix.from_json(text),))
        if kind == "one-relator":
            import json

            data = json.loads(text)
            return cls(kind, (int(data["n"]), parse_word(data["w"]), parse_word(data["v"]), int(data["m"])))
        raise ValueError(f"unknown group kind {kind!r}")


def bounds_for(spec: GroupSpec) -> BoundReport:
    k, p = spec.kind, spec.params
    if k == "free":
        v = kw_free(p[0])
        return BoundReport(v, v, "(k-1)(k-2)/2 >= n", "complete graph K_k", exact=True)
    if k == "surface":
        g, orientable = p
        v = kw_surface(g, orientable)
        chrom = chromatic_orientable(g) if orientable else chromatic_nonorientable(g)
        src = "chromatic number of the surface" + (" (genus two exception: 9)" if orientable and g == 2 else "")
        return BoundReport(v, v, src, src, {"chromatic": chrom}, exact=True)
    if k == "cyclic":
        return cyclic_bounds(p[0])
    if k == "abelian":
        return finite_abelian_bounds(p)
    if k == "free-abelian":
        return free_abelian_bounds(p[0])
    if k == "z2-sum":
        return z2_sum_bounds(p[0])
    if k in ("raag", "racg"):
        n, m = _matrix_counts(p[0], right_angled=True)
        return raag_bounds(n, m) if k == "raag" else racg_bounds(n, m)
    if k == "artin-large":
        return artin_large_bounds(p[0])
    if k == "coxeter-large":
        return coxeter_large_bounds(p[0])
    n, w, v, m = p
    return one_relator_bounds(n, w, v, m)
