"""Immutable bitset-backed graphs, generators, densities, and file I/O.

A Graph stores one Python integer per vertex whose bits are the adjacency
row; all counting kernels in this package reduce to AND + popcount on
those rows.  Vertices are 0-indexed contiguous integers.  Graphs produced
by a generator carry a label string from which the graph can be rebuilt
bit-exactly (see labels.regenerate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import rng
from .errors import DomainError, GraphFormatError, MalformedInputError, ResourceBudgetError

GRAPH_MAGIC = "#blowup-lab-graph v1"

DEFAULT_VERTEX_BUDGET = 10**6


def iter_bits(x: int) -> Iterator[int]:
    """Yield the set bit positions of x in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class Graph:
    """Simple undirected loopless graph with dense bitset adjacency.

    Immutable after construction; safe to share across workers.  `rows[u]`
    has bit v set iff (u, v) is an edge.
    """

    __slots__ = ("n", "rows", "m", "label")

    def __init__(self, n: int, rows: Sequence[int], label: str | None = None):
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        if len(rows) != n:
            raise MalformedInputError(f"expected {n} adjacency rows, got {len(rows)}")
        rows = tuple(rows)
        bits = 0
        for u, row in enumerate(rows):
            if row >> n:
                raise MalformedInputError(f"row {u} has bits beyond vertex range")
            if (row >> u) & 1:
                raise MalformedInputError(f"self-loop at vertex {u}")
            bits += row.bit_count()
        if bits % 2:
            raise MalformedInputError("adjacency matrix is not symmetric")
        if label is not None and "\n" in label:
            raise MalformedInputError("labels are single-line (graph file header)")
        self.n = n
        self.rows = rows
        self.m = bits // 2
        self.label = label

    # -- queries ----------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def neighbors(self, u: int) -> Iterator[int]:
        return iter_bits(self.rows[u])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Unordered edges (u, v) with u < v, ascending lexicographic."""
        for u in range(self.n):
            high = self.rows[u] >> (u + 1)
            for off in iter_bits(high):
                yield (u, u + 1 + off)

    def check_symmetry(self) -> bool:
        """Full O(n^2) symmetry check; generators guarantee it, tests verify."""
        return all(
            ((self.rows[u] >> v) & 1) == ((self.rows[v] >> u) & 1)
            for u in range(self.n)
            for v in range(u + 1, self.n)
        )

    def bool_matrix(self) -> np.ndarray:
        """Adjacency as an (n, n) bool array (built fresh on each call)."""
        n = self.n
        out = np.zeros((n, n), dtype=bool)
        nbytes = (n + 7) // 8
        for u, row in enumerate(self.rows):
            packed = np.frombuffer(row.to_bytes(nbytes, "little"), dtype=np.uint8)
            out[u] = np.unpackbits(packed, bitorder="little")[:n].astype(bool)
        return out

    def __eq__(self, other: object) -> bool:
        # Structural equality; labels are provenance, not structure.
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    __hash__ = None  # mutable-free but big; not meant for dict keys

    def __repr__(self) -> str:
        tag = f", label={self.label!r}" if self.label else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"


@dataclass(frozen=True)
class VertexPartition:
    """Pairwise disjoint vertex classes covering a subset of [0, n)."""

    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for cls in self.classes:
            for v in cls:
                if v in seen:
                    raise MalformedInputError(f"vertex {v} appears in two classes")
                seen.add(v)

    def masks(self) -> tuple[int, ...]:
        out = []
        for cls in self.classes:
            mask = 0
            for v in cls:
                mask |= 1 << v
            out.append(mask)
        return tuple(out)

    def validate(self, n: int) -> None:
        for cls in self.classes:
            for v in cls:
                if not 0 <= v < n:
                    raise MalformedInputError(f"vertex {v} outside [0, {n})")


def complete_graph(h: int) -> Graph:
    """K_h."""
    if h < 0:
        raise DomainError("vertex count must be non-negative")
    full = (1 << h) - 1
    rows = [full ^ (1 << v) for v in range(h)]
    return Graph(h, rows, label=f"complete(h={h})")


_K3 = None


def triangle_pattern() -> Graph:
    """The shared K_3 pattern instance."""
    global _K3
    if _K3 is None:
        _K3 = complete_graph(3)
    return _K3


@dataclass(frozen=True)
class BlowupShape:
    """Multiplicity vector (a_1, ..., a_h) over a base pattern (K_3 here)."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise DomainError("shape needs at least one part")
        if any(a < 1 for a in self.parts):
            raise DomainError("all shape parts must be >= 1")

    @property
    def order(self) -> int:
        """Vertex count of the blown-up pattern."""
        return sum(self.parts)

    def pattern(self) -> Graph:
        return complete_graph(len(self.parts))


def as_parts(shape) -> tuple[int, ...]:
    """Coerce a BlowupShape or bare int sequence to a validated parts tuple."""
    if isinstance(shape, BlowupShape):
        return shape.parts
    parts = tuple(int(a) for a in shape)
    return BlowupShape(parts).parts


# -- construction from explicit data ---------------------------------------


def from_edge_list(n: int, edges: Iterable[tuple[int, int]], label: str | None = None) -> Graph:
    """Build a graph from unordered vertex pairs; duplicates are merged."""
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedInputError(f"endpoint out of range in edge ({u}, {v})")
        if u == v:
            raise MalformedInputError(f"self-loop ({u}, {v}) not allowed")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, rows, label=label)


def _rows_from_bool_matrix(adj: np.ndarray) -> list[int]:
    n = adj.shape[0]
    packed = np.packbits(adj, axis=1, bitorder="little")
    return [int.from_bytes(packed[u].tobytes(), "little") for u in range(n)]


# -- random generators ------------------------------------------------------

_PAIR_BATCH = 1 << 20


def random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each unordered pair is an edge independently with probability p.

    Pair randomness is consumed in row-major order over pairs (u, v), u < v,
    so the same (n, p, seed) gives the same graph everywhere.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"edge probability {p!r} outside [0, 1]")
    if n < 0:
        raise DomainError("vertex count must be non-negative")
    threshold = rng.bernoulli_threshold(p)
    adj = np.zeros((n, n), dtype=bool)
    base = 0
    u = 0
    while u < n:
        # group consecutive rows into one stream slice
        u_end, count = u, 0
        while u_end < n and count + (n - 1 - u_end) <= _PAIR_BATCH:
            count += n - 1 - u_end
            u_end += 1
        if count == 0:  # single huge row
            u_end, count = u + 1, n - 1 - u
        if threshold >= 2**64:
            hits = np.ones(count, dtype=bool)
        else:
            hits = rng.words(seed, base, count) < np.uint64(threshold)
        off = 0
        for uu in range(u, u_end):
            cnt = n - 1 - uu
            adj[uu, uu + 1 : n] = hits[off : off + cnt]
            off += cnt
        base += count
        u = u_end
    adj |= adj.T
    label = f"random(n={n};p={p!r};seed={seed};rng={rng.ALGORITHM})"
    return Graph(n, _rows_from_bool_matrix(adj), label=label)


def random_tripartite(
    m: int, alphas: tuple[float, float, float], seed: int
) -> tuple[Graph, VertexPartition]:
    """3-partite graph on parts of size m with independent cross edges.

    Cross pairs are filled block by block (A-B, A-C, B-C), each block in
    row-major order, at densities alphas = (d(A,B), d(A,C), d(B,C)).
    """
    if m < 1:
        raise DomainError("part size must be >= 1")
    a1, a2, a3 = alphas
    for a in (a1, a2, a3):
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"cross density {a!r} outside [0, 1]")
    n = 3 * m
    adj = np.zeros((n, n), dtype=bool)
    blocks = [(0, m, a1), (0, 2 * m, a2), (m, 2 * m, a3)]
    base = 0
    for row_off, col_off, alpha in blocks:
        threshold = rng.bernoulli_threshold(alpha)
        if threshold >= 2**64:
            adj[row_off : row_off + m, col_off : col_off + m] = True
        elif threshold > 0:
            w = rng.words(seed, base, m * m).reshape(m, m)
            adj[row_off : row_off + m, col_off : col_off + m] = w < np.uint64(threshold)
        base += m * m
    adj |= adj.T
    label = (
        f"tripartite(m={m};a1={a1!r};a2={a2!r};a3={a3!r};seed={seed};rng={rng.ALGORITHM})"
    )
    part = VertexPartition(
        (tuple(range(m)), tuple(range(m, 2 * m)), tuple(range(2 * m, 3 * m)))
    )
    return Graph(n, _rows_from_bool_matrix(adj), label=label), part


# -- structural generators ---------------------------------------------------


def blowup(G: Graph, sizes: Sequence[int]) -> tuple[Graph, VertexPartition]:
    """Replace vertex i of G by an independent class of sizes[i] vertices.

    Classes are laid out contiguously in vertex order; class i and class j
    are joined completely iff (i, j) is an edge of G.  Returns the class
    partition as a certificate.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) != G.n:
        raise DomainError(f"need {G.n} class sizes, got {len(sizes)}")
    if any(s < 1 for s in sizes):
        raise DomainError("all class sizes must be >= 1")
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    total = offsets[-1]
    class_masks = [((1 << sizes[i]) - 1) << offsets[i] for i in range(G.n)]
    rows = [0] * total
    for i in range(G.n):
        nbr_mask = 0
        for j in iter_bits(G.rows[i]):
            nbr_mask |= class_masks[j]
        for v in range(offsets[i], offsets[i + 1]):
            rows[v] = nbr_mask
    classes = tuple(tuple(range(offsets[i], offsets[i + 1])) for i in range(G.n))
    label = None
    if G.label is not None:
        if len(set(sizes)) == 1:
            label = f"blowup(q={sizes[0]};base={G.label})"
        else:
            label = f"blowup(sizes=[{','.join(map(str, sizes))}];base={G.label})"
    return Graph(total, rows, label=label), VertexPartition(classes)


def tensor_power(G: Graph, k: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> Graph:
    """k-th tensor power: k-tuples of vertices, adjacent iff coordinatewise adjacent.

    Vertex order is lexicographic over tuples (first coordinate most
    significant).  Refuses to build more than vertex_budget vertices.
    """
    if k < 1:
        raise DomainError("tensor power exponent must be >= 1")
    total = G.n**k
    if total > vertex_budget:
        raise ResourceBudgetError(
            f"tensor power needs {total} vertices, budget is {vertex_budget}",
            cost=total,
        )
    rows = list(G.rows)
    size = G.n
    for _ in range(k - 1):
        new_rows = []
        for v in range(G.n):
            shifts = [u * size for u in iter_bits(G.rows[v])]
            for prev in rows:
                acc = 0
                for sh in shifts:
                    acc |= prev << sh
                new_rows.append(acc)
        rows = new_rows
        size *= G.n
    label = f"tensor(k={k};base={G.label})" if G.label is not None else None
    return Graph(size, rows, label=label)


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    """Blowup of the complete graph on len(sizes) vertices."""
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise DomainError("need at least one class size")
    g, _ = blowup(complete_graph(len(sizes)), sizes)
    return Graph(g.n, g.rows, label=f"multipartite(sizes=[{','.join(map(str, sizes))}])")


# -- densities ---------------------------------------------------------------


def edge_density(G: Graph) -> Fraction:
    """m / C(n, 2) as an exact rational."""
    if G.n < 2:
        raise DomainError("edge density needs at least 2 vertices")
    return Fraction(G.m, math.comb(G.n, 2))


def pair_density(G: Graph, A: Iterable[int], B: Iterable[int]) -> Fraction:
    """e(A, B) / (|A| |B|) for nonempty disjoint vertex sets A and B."""
    sa, sb = set(A), set(B)
    if not sa or not sb:
        raise DomainError("pair density needs nonempty sets")
    if sa & sb:
        raise DomainError("pair density needs disjoint sets")
    for v in sa | sb:
        if not 0 <= v < G.n:
            raise DomainError(f"vertex {v} outside [0, {G.n})")
    mask_b = 0
    for v in sb:
        mask_b |= 1 << v
    crossing = sum((G.rows[u] & mask_b).bit_count() for u in sa)
    return Fraction(crossing, len(sa) * len(sb))


# -- file format --------------------------------------------------------------


def write_graph(G: Graph, destination: str | Path) -> None:
    """Write the v1 text format; round-trips bit-exactly including the label."""
    lines = [GRAPH_MAGIC if G.label is None else f"{GRAPH_MAGIC} {G.label}"]
    lines.append(f"{G.n} {G.m}")
    lines.extend(f"{u} {v}" for u, v in G.edges())
    Path(destination).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_graph(source: str | Path) -> Graph:
    """Parse the v1 text format; errors carry the offending line number."""
    text = Path(source).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise GraphFormatError(1, "empty file, expected header")
    header = lines[0]
    if header != GRAPH_MAGIC and not header.startswith(GRAPH_MAGIC + " "):
        raise GraphFormatError(1, f"bad header, expected {GRAPH_MAGIC!r}")
    label = header[len(GRAPH_MAGIC) + 1 :] if len(header) > len(GRAPH_MAGIC) else None
    if label == "":
        label = None
    if len(lines) < 2:
        raise GraphFormatError(2, "missing '<n> <m>' line")
    fields = lines[1].split()
    if len(fields) != 2:
        raise GraphFormatError(2, "expected two integers '<n> <m>'")
    try:
        n, m = int(fields[0]), int(fields[1])
    except ValueError:
        raise GraphFormatError(2, "expected two integers '<n> <m>'") from None
    if n < 0 or m < 0:
        raise GraphFormatError(2, "n and m must be non-negative")
    rows = [0] * n
    prev: tuple[int, int] | None = None
    count = 0
    for offset, line in enumerate(lines[2:], start=3):
        if line == "" and offset == len(lines):  # ignore a single trailing blank
            break
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(offset, "expected edge line '<u> <v>'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(offset, "expected edge line '<u> <v>'") from None
        if u == v:
            raise GraphFormatError(offset, f"self-loop '{u} {v}' is not allowed")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(offset, f"endpoint outside [0, {n}) in '{u} {v}'")
        if u > v:
            raise GraphFormatError(offset, f"edge '{u} {v}' must satisfy u < v")
        if prev is not None and (u, v) <= prev:
            raise GraphFormatError(offset, "edges must be strictly ascending lexicographic")
        count += 1
        if count > m:
            raise GraphFormatError(offset, f"more edge lines than declared m={m}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        prev = (u, v)
    if count != m:
        raise GraphFormatError(
            len(lines) + 1, f"header declares m={m} but file lists {count} edges"
        )
    return Graph(n, rows, label=label)
