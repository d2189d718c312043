"""Explicit extremal constructions.

Three generators live here: Behrend-style progression-free integer sets,
the Ruzsa-Szemeredi triangle packing built from such a set, and the blowup
of that packing whose K_{1,1,2} density is extremally small relative to
its triangle density.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .counting import list_triangles
from .errors import (
    DomainError,
    GraphFormatError,
    MalformedInputError,
    PreconditionError,
    ResourceBudgetError,
)
from .graph import Graph, VertexPartition, blowup, from_edge_list

APFREE_MAGIC = "#apfree v1"

BRUTEFORCE_LIMIT = 30


def is_3ap_free(S) -> bool:
    """True iff no three distinct elements x < y < z satisfy x + z == 2y."""
    elems = sorted(_elements_of(S))
    present = set(elems)
    for i, x in enumerate(elems):
        for y in elems[i + 1 :]:
            z = 2 * y - x
            if z > y and z in present:
                return False
    return True


def _elements_of(S) -> Sequence[int]:
    if isinstance(S, ApFreeSet):
        return S.elements
    return tuple(int(v) for v in S)


@dataclass(frozen=True)
class ApFreeSet:
    """A 3AP-free subset of [1, universe_n] with its construction method."""

    universe_n: int
    elements: tuple[int, ...]
    method: str  # behrend | brute_force | explicit

    def __post_init__(self):
        if self.universe_n < 1:
            raise MalformedInputError("universe must be >= 1")
        prev = 0
        for v in self.elements:
            if v <= prev:
                raise MalformedInputError("elements must be strictly ascending")
            if not 1 <= v <= self.universe_n:
                raise MalformedInputError(f"element {v} outside [1, {self.universe_n}]")
            prev = v
        if not is_3ap_free(self.elements):
            raise MalformedInputError("set contains a 3-term arithmetic progression")

    def __len__(self) -> int:
        return len(self.elements)


def behrend_set(n: int) -> ApFreeSet:
    """Sphere-construction 3AP-free subset of [1, n].

    Integers are read as k-digit base-(2d-1) vectors with digits <= d-1 and
    grouped by squared norm; digit sums then never carry, so each norm class
    is progression-free.  The grid d in [2, ceil(sqrt(n))], k in
    [1, floor(log n / log(2d-1))] is scanned in order (d asc, k asc, norm
    asc) and the first class of maximal size wins; {1, 2} (truncated to the
    universe) is the floor candidate, replaced only by a strictly larger
    class.
    """
    if n < 1:
        raise DomainError("universe must be >= 1")
    best: tuple[int, ...] = ()
    for d in range(2, math.isqrt(n - 1) + 2):
        base = 2 * d - 1
        if base > n:
            break
        k = 1
        while base**k <= n:
            powers = [base**i for i in range(k)]
            classes: dict[int, list[int]] = {}
            for digits in itertools.product(range(d), repeat=k):
                norm = sum(x * x for x in digits)
                value = sum(x * p for x, p in zip(digits, powers))
                classes.setdefault(norm, []).append(value + 1)
            for norm in sorted(classes):
                cls = classes[norm]
                if len(cls) > len(best):
                    best = tuple(sorted(cls))
            k += 1
    floor_candidate = tuple(range(1, min(n, 2) + 1))
    if len(floor_candidate) > len(best):
        best = floor_candidate
    return ApFreeSet(universe_n=n, elements=best, method="behrend")


def max_3ap_free_bruteforce(n: int) -> tuple[int, tuple[int, ...]]:
    """Exact maximum 3AP-free subset of [1, n] with one witness.

    Depth-first search over ascending extensions with a size-bound prune;
    exponential, so capped at n <= 30.
    """
    if n < 1:
        raise DomainError("universe must be >= 1")
    if n > BRUTEFORCE_LIMIT:
        raise ResourceBudgetError(
            f"exhaustive 3AP search capped at n <= {BRUTEFORCE_LIMIT}, got {n}", cost=2**n
        )
    best_size = 0
    best: tuple[int, ...] = ()
    chosen: list[int] = []
    in_set = [False] * (2 * n + 2)

    def extend(start: int) -> None:
        nonlocal best_size, best
        if len(chosen) > best_size:
            best_size = len(chosen)
            best = tuple(chosen)
        for z in range(start, n + 1):
            if len(chosen) + (n - z + 1) <= best_size:
                return
            # z completes an AP iff 2y - z is already chosen for some y
            ok = True
            for y in chosen:
                if 2 * y - z >= 1 and in_set[2 * y - z]:
                    ok = False
                    break
            if not ok:
                continue
            chosen.append(z)
            in_set[z] = True
            extend(z + 1)
            chosen.pop()
            in_set[z] = False

    extend(1)
    return best_size, best


@dataclass(frozen=True)
class RsCertificate:
    """Triangle-packing evidence for a Ruzsa-Szemeredi graph.

    One triangle per (i, s) pair; the graph's edges are exactly the
    disjoint union of the listed triangles and no others exist.
    """

    m: int
    set: ApFreeSet
    triangles: tuple[tuple[int, int, int], ...]
    part_sizes: tuple[int, int, int]


def rs_graph(m: int, S) -> tuple[Graph, RsCertificate]:
    """Ruzsa-Szemeredi construction over [1, m] and a 3AP-free S subset of [1, m].

    Parts A, B, C of sizes m, 2m, 3m occupy vertex ranges [0, m), [m, 3m),
    [3m, 6m); integer j of part X maps to the (j-1)-th vertex of X.  For
    each i in [1, m] and s in S the triangle {i in A, i+s in B, i+2s in C}
    is added; the edge set is their disjoint union.
    """
    if m < 1:
        raise DomainError("base parameter m must be >= 1")
    elems = _elements_of(S)
    if any(not 1 <= s <= m for s in elems):
        raise DomainError(f"set elements must lie in [1, {m}]")
    if not is_3ap_free(elems):
        raise PreconditionError("S must be 3AP-free")
    apset = S if isinstance(S, ApFreeSet) else ApFreeSet(m, tuple(sorted(elems)), "explicit")

    n = 6 * m
    triangles = []
    edges = []
    for i in range(1, m + 1):
        for s in apset.elements:
            va = i - 1
            vb = m + (i + s - 1)
            vc = 3 * m + (i + 2 * s - 1)
            triangles.append((va, vb, vc))
            edges.extend([(va, vb), (va, vc), (vb, vc)])
    if apset.method == "behrend" and apset.universe_n == m:
        set_label = "behrend"
    else:
        set_label = "[" + ",".join(map(str, apset.elements)) + "]"
    label = f"rs(m={m};set={set_label})"
    g = from_edge_list(n, edges, label=label)
    cert = RsCertificate(
        m=m, set=apset, triangles=tuple(triangles), part_sizes=(m, 2 * m, 3 * m)
    )
    return g, cert


def k112_extremal_graph(
    m: int, q: int, vertex_budget: int = 10**6
) -> tuple[Graph, VertexPartition, RsCertificate]:
    """Uniform q-blowup of rs_graph(m, behrend_set(m)); n = 6mq vertices."""
    if m < 1 or q < 1:
        raise DomainError("m and q must be >= 1")
    n = 6 * m * q
    if n > vertex_budget:
        raise ResourceBudgetError(
            f"k112 extremal graph needs {n} vertices, budget is {vertex_budget}", cost=n
        )
    base, cert = rs_graph(m, behrend_set(m))
    g, part = blowup(base, [q] * base.n)
    g = Graph(g.n, g.rows, label=f"k112-extremal(m={m};q={q})")
    return g, part, cert


# -- certificate verification -------------------------------------------------


@dataclass(frozen=True)
class RsVerification:
    ok: bool
    failures: tuple[str, ...]
    triangle_count: int
    expected_triangles: int
    edge_count: int
    expected_edges: int


def verify_rs_certificate(G: Graph, cert: RsCertificate) -> RsVerification:
    """Re-check a triangle packing against its graph.

    Confirms the vertex count, that every listed triangle is present, that
    the listed triangles are pairwise edge-disjoint and cover the edge set,
    and that exhaustive enumeration finds no further triangles.
    """
    failures = []
    expected = cert.m * len(cert.set)
    if G.n != 6 * cert.m:
        failures.append(f"graph has {G.n} vertices, expected {6 * cert.m}")
    if len(cert.triangles) != expected:
        failures.append(
            f"certificate lists {len(cert.triangles)} triangles, expected {expected}"
        )
    seen_edges: set[tuple[int, int]] = set()
    for tri in cert.triangles:
        a, b, c = tri
        for u, v in ((a, b), (a, c), (b, c)):
            u, v = min(u, v), max(u, v)
            if not (0 <= u < G.n and v < G.n) or not G.has_edge(u, v):
                failures.append(f"triangle {tri} uses missing edge ({u}, {v})")
                break
            if (u, v) in seen_edges:
                failures.append(f"edge ({u}, {v}) shared by two listed triangles")
                break
            seen_edges.add((u, v))
    if not failures and len(seen_edges) != G.m:
        failures.append(
            f"listed triangles cover {len(seen_edges)} edges, graph has {G.m}"
        )
    found = list_triangles(G)
    if not failures and len(found) != expected:
        extras = sorted(set(found) - {tuple(sorted(t)) for t in cert.triangles})
        failures.append(
            f"exhaustive enumeration finds {len(found)} triangles, expected "
            f"{expected}; first extra: {extras[0] if extras else None}"
        )
    return RsVerification(
        ok=not failures,
        failures=tuple(failures),
        triangle_count=len(found),
        expected_triangles=expected,
        edge_count=G.m,
        expected_edges=3 * expected,
    )


# -- file formats --------------------------------------------------------------


def write_apfree(S: ApFreeSet, destination: str | Path) -> None:
    lines = [
        f"{APFREE_MAGIC} {S.universe_n} {S.method}",
        " ".join(map(str, S.elements)),
    ]
    Path(destination).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_apfree(source: str | Path) -> ApFreeSet:
    lines = Path(source).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith(APFREE_MAGIC + " "):
        raise GraphFormatError(1, f"bad header, expected {APFREE_MAGIC!r}")
    fields = lines[0][len(APFREE_MAGIC) + 1 :].split()
    if len(fields) != 2:
        raise GraphFormatError(1, "expected '<n> <method>' after magic")
    try:
        n = int(fields[0])
    except ValueError:
        raise GraphFormatError(1, "universe size must be an integer") from None
    method = fields[1]
    body = lines[1] if len(lines) > 1 else ""
    try:
        elements = tuple(int(v) for v in body.split())
    except ValueError:
        raise GraphFormatError(2, "elements must be integers") from None
    try:
        return ApFreeSet(universe_n=n, elements=elements, method=method)
    except MalformedInputError as exc:
        raise GraphFormatError(2, str(exc)) from None


def write_certificate(
    cert: RsCertificate, destination: str | Path, set_file: str | None = None
) -> None:
    """Serialize to JSON; set_file is recorded as given (resolved on load
    relative to the certificate's directory)."""
    payload = {
        "m": cert.m,
        "set_file": set_file,
        "triangles": [list(t) for t in cert.triangles],
    }
    Path(destination).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def read_certificate(source: str | Path) -> RsCertificate:
    path = Path(source)
    payload = json.loads(path.read_text(encoding="utf-8"))
    m = int(payload["m"])
    triangles = tuple(tuple(int(v) for v in t) for t in payload["triangles"])
    if payload.get("set_file"):
        apset = read_apfree(path.parent / payload["set_file"])
    else:
        # reconstruct S from the triangles: s = (b - m + 1) - (a + 1)
        svals = sorted({(b - m + 1) - (a + 1) for a, b, _ in triangles})
        apset = ApFreeSet(m, tuple(svals), "explicit")
    return RsCertificate(
        m=m, set=apset, triangles=triangles, part_sizes=(m, 2 * m, 3 * m)
    )
