"""Exact and Monte-Carlo homomorphism counting for triangle blowups.

The exact kernels reduce everything to bitset intersections: the count of
maps of K_{a,b,c} into G is the sum over ordered a-tuples U and b-tuples W
drawn from the common neighborhood of U of |N(U) & N(W)|^c.  Tuples are
enumerated as multisets with multinomial weights, with the largest class
innermost, so the cost is n^(a'+b') for sorted parts a' <= b' <= c'.

The independent brute-force oracle enumerates every map V(H) -> V(G) and
checks every pattern edge; it shares nothing with the specialized path.

The sampler derives each sample's randomness from (seed, sample index), so
estimates are order-independent, parallel-safe, and platform-independent.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import rng
from .errors import DomainError, ResourceBudgetError
from .graph import Graph, as_parts, iter_bits

DEFAULT_MAP_BUDGET = 10**9
DEFAULT_TUPLE_BUDGET = 10**9
DEFAULT_WITNESS_BUDGET = 10**6

Z99 = 2.5758293035489004  # two-sided 99% normal quantile

_CHUNK = 1 << 18


@dataclass(frozen=True)
class HomCount:
    """Exact homomorphism count with exact-rational and log2 densities."""

    count: int
    pattern_size: int
    host_size: int
    shape: tuple[int, ...] | None = None

    @property
    def density(self) -> Fraction:
        if self.count == 0:
            return Fraction(0)
        return Fraction(self.count, self.host_size**self.pattern_size)

    @property
    def log2_density(self) -> float:
        if self.count == 0:
            return float("-inf")
        d = self.density
        return math.log2(d.numerator) - math.log2(d.denominator)

    def to_json_dict(self) -> dict:
        d = self.density
        l2 = self.log2_density
        return {
            "pattern": list(self.shape) if self.shape is not None else None,
            "n": self.host_size,
            "count": str(self.count),
            "density_num": d.numerator,
            "density_den": d.denominator,
            "log2_density": "-inf" if math.isinf(l2) else l2,
        }


@dataclass(frozen=True)
class DensityEstimate:
    """Monte-Carlo density estimate with a 99% normal-approximation half-width."""

    point: float
    samples: int
    successes: int
    half_width: float
    seed: int
    shape: tuple[int, ...]
    host_size: int

    @property
    def lower_edge(self) -> float:
        return max(self.point - self.half_width, 0.0)

    def to_json_dict(self) -> dict:
        return {
            "pattern": list(self.shape),
            "n": self.host_size,
            "samples": self.samples,
            "successes": self.successes,
            "point": self.point,
            "half_width": self.half_width,
            "seed": self.seed,
        }


# -- brute-force oracle --------------------------------------------------------


@lru_cache(maxsize=32)
def _full_map_columns(n: int, h: int) -> tuple[np.ndarray, ...]:
    idx = np.arange(n**h, dtype=np.int64)
    return tuple((idx // (n ** (h - 1 - s))) % n for s in range(h))


@lru_cache(maxsize=256)
def _pair_flat_index(n: int, h: int, u: int, v: int) -> np.ndarray:
    cols = _full_map_columns(n, h)
    return cols[u] * n + cols[v]


def hom_count_bruteforce(H: Graph, G: Graph, budget: int = DEFAULT_MAP_BUDGET) -> HomCount:
    """Count maps V(H) -> V(G) sending every edge of H to an edge of G.

    Enumerates all n^h maps (chunked), so it stays independent of the
    specialized bitset counters it serves as an oracle for.
    """
    h, n = H.n, G.n
    if h == 0:
        return HomCount(1, 0, n)
    if n == 0:
        return HomCount(0, h, 0)
    total_maps = n**h
    if total_maps > budget:
        raise ResourceBudgetError(
            f"brute force would evaluate n^h = {total_maps} maps, budget {budget}",
            cost=total_maps,
            suggestion="use sample_hom_density for an estimate",
        )
    pattern_edges = tuple(H.edges())
    if not pattern_edges:
        return HomCount(total_maps, h, n)
    adj_flat = np.ascontiguousarray(G.bool_matrix().reshape(-1))
    count = 0
    if total_maps <= _CHUNK:
        valid = adj_flat[_pair_flat_index(n, h, *pattern_edges[0])].copy()
        for u, v in pattern_edges[1:]:
            valid &= adj_flat[_pair_flat_index(n, h, u, v)]
        count = int(np.count_nonzero(valid))
    else:
        powers = [n ** (h - 1 - s) for s in range(h)]
        for lo in range(0, total_maps, _CHUNK):
            hi = min(lo + _CHUNK, total_maps)
            idx = np.arange(lo, hi, dtype=np.int64)
            cols = [(idx // p) % n for p in powers]
            valid = np.ones(hi - lo, dtype=bool)
            for u, v in pattern_edges:
                valid &= adj_flat[cols[u] * n + cols[v]]
            count += int(np.count_nonzero(valid))
    return HomCount(count, h, n)


# -- specialized exact counters --------------------------------------------------


def triangle_hom_count(G: Graph) -> HomCount:
    """Hom count of K_3 via codegree sums over ordered adjacent pairs."""
    rows = G.rows
    total = 0
    for u, v in G.edges():
        total += (rows[u] & rows[v]).bit_count()
    return HomCount(2 * total, 3, G.n, shape=(1, 1, 1))


def k112_hom_count(G: Graph) -> HomCount:
    """Hom count of K_{1,1,2}: codegree squared over ordered adjacent pairs."""
    rows = G.rows
    total = 0
    for u, v in G.edges():
        total += (rows[u] & rows[v]).bit_count() ** 2
    return HomCount(2 * total, 4, G.n, shape=(1, 1, 2))


def _class_tuple_sum(rows, pool: int, size: int, mask: int, leaf, facts, coef=None) -> int:
    """Sum leaf(mask & N(tuple)) over ordered size-tuples from bits(pool).

    Tuples may repeat vertices; enumeration is by support multiset with
    multinomial weights (ordered count = size! / prod multiplicities!),
    `coef` being the weight numerator still to distribute.  Requires
    leaf(0) == 0, which lets empty intersections prune whole subtrees.
    """
    total = 0

    def rec(cands: int, left: int, cur: int, coef: int) -> None:
        nonlocal total
        m = cands
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            vm = cur & rows[v]
            if vm == 0:
                continue
            for k in range(1, left):
                rec(m, left - k, vm, coef // facts[k])
            total += (coef // facts[left]) * leaf(vm)

    rec(pool, size, mask, facts[size] if coef is None else coef)
    return total


def _blowup_sum(
    rows,
    n: int,
    a: int,
    b: int,
    c: int,
    pool_a: int,
    mask_b: int,
    mask_c: int,
    firsts=None,
) -> int:
    """Core triple sum; pool/mask arguments restrict each class's universe.

    With all masks full this is Hom_{K_{a,b,c}}(G); restricting them to
    tripartition masks counts homomorphisms with one class per part.  When
    `firsts` is given, only outer tuples whose smallest support vertex is
    in `firsts` are counted (the worker partition for parallel runs).
    """
    facts = [math.factorial(i) for i in range(max(a, b) + 1)]
    full = (1 << n) - 1

    def inner(nu: int) -> int:
        pool = nu & mask_b
        if pool == 0:
            return 0
        return _class_tuple_sum(
            rows, pool, b, nu & mask_c, lambda mx: mx.bit_count() ** c, facts
        )

    if firsts is None:
        return _class_tuple_sum(rows, pool_a, a, full, inner, facts)
    # replay the top level of the multiset recursion for the given first
    # support vertices only; deeper levels draw from pool_a above v
    total = 0
    for v in firsts:
        if not (pool_a >> v) & 1:
            continue
        vm = rows[v]
        if vm == 0:
            continue
        above = pool_a & (-1 << (v + 1))
        for k in range(1, a):
            total += _class_tuple_sum(
                rows, above, a - k, vm, inner, facts, coef=facts[a] // facts[k]
            )
        total += inner(vm)  # v taken with multiplicity a; weight a!/a! = 1
    return total


def _blowup_worker(payload) -> int:
    rows, n, a, b, c, firsts = payload
    full = (1 << n) - 1
    return _blowup_sum(rows, n, a, b, c, full, full, full, firsts=firsts)


def blowup_hom_count(
    shape, G: Graph, budget: int = DEFAULT_TUPLE_BUDGET, workers: int = 1
) -> HomCount:
    """Exact Hom count of K_{a,b,c} in G.

    Parts are sorted internally so the largest multiplicity becomes the
    innermost power; refuses to run when n^(a'+b') exceeds the budget.
    With workers > 1 the outer tuple range is partitioned and partial sums
    added, so the result is identical for any worker count.
    """
    parts = as_parts(shape)
    if len(parts) != 3:
        raise DomainError("blowup shapes here are triples (a, b, c) over K_3")
    a, b, c = sorted(parts)
    n = G.n
    cost = n ** (a + b)
    if cost > budget:
        raise ResourceBudgetError(
            f"exact count costs ~n^(a'+b') = {cost} tuple expansions, budget {budget}",
            cost=cost,
            suggestion="use sample_hom_density (CLI: count --mode sample)",
        )
    h = a + b + c
    if n == 0 or G.m == 0:
        return HomCount(0, h, n, shape=parts)
    full = (1 << n) - 1
    if workers > 1:
        chunks = [list(range(w, n, workers)) for w in range(workers)]
        payloads = [(G.rows, n, a, b, c, ch) for ch in chunks if ch]
        with multiprocessing.Pool(len(payloads)) as pool:
            count = sum(pool.map(_blowup_worker, payloads))
    else:
        count = _blowup_sum(G.rows, n, a, b, c, full, full, full)
    return HomCount(count, h, n, shape=parts)


# -- triangle utilities ----------------------------------------------------------


def list_triangles(G: Graph) -> list[tuple[int, int, int]]:
    """Exhaustively enumerate unordered triangles as ascending triples."""
    out = []
    rows = G.rows
    for u, v in G.edges():
        w = (rows[u] & rows[v]) >> (v + 1)
        shift = v + 1
        while w:
            low = w & -w
            out.append((u, v, shift + low.bit_length() - 1))
            w ^= low
    return out


def edge_triangle_multiplicities(G: Graph) -> dict[tuple[int, int], int]:
    """t(e): for every edge, how many triangles contain it (the codegree)."""
    rows = G.rows
    return {(u, v): (rows[u] & rows[v]).bit_count() for u, v in G.edges()}


# -- Monte-Carlo sampler -----------------------------------------------------------

_SAMPLE_BATCH = 1 << 17


def _cross_slot_pairs(parts: tuple[int, ...]) -> list[tuple[int, int]]:
    slot_class = [i for i, a in enumerate(parts) for _ in range(a)]
    h = len(slot_class)
    return [
        (i, j)
        for i in range(h)
        for j in range(i + 1, h)
        if slot_class[i] != slot_class[j]
    ]


def _run_sampler(G: Graph, parts, samples: int, seed: int, slot_universes) -> DensityEstimate:
    if samples < 1:
        raise DomainError("need at least one sample")
    n = G.n
    if n == 0:
        raise DomainError("cannot sample maps into an empty host")
    h = sum(parts)
    pairs = _cross_slot_pairs(parts)
    adj_flat = np.ascontiguousarray(G.bool_matrix().reshape(-1))
    successes = 0
    lo = 0
    while lo < samples:
        hi = min(lo + _SAMPLE_BATCH, samples)
        cnt = hi - lo
        w = rng.words(seed, lo * h, cnt * h).reshape(cnt, h)
        if slot_universes is None:
            vs = (w % np.uint64(n)).astype(np.int64)
        else:
            vs = np.empty((cnt, h), dtype=np.int64)
            for j, universe in enumerate(slot_universes):
                vs[:, j] = universe[(w[:, j] % np.uint64(len(universe))).astype(np.int64)]
        valid = np.ones(cnt, dtype=bool)
        for i, j in pairs:
            valid &= adj_flat[vs[:, i] * n + vs[:, j]]
        successes += int(np.count_nonzero(valid))
        lo = hi
    point = successes / samples
    half_width = Z99 * math.sqrt(point * (1.0 - point) / samples)
    return DensityEstimate(
        point=point,
        samples=samples,
        successes=successes,
        half_width=half_width,
        seed=seed,
        shape=tuple(parts),
        host_size=n,
    )


def sample_hom_density(shape, G: Graph, samples: int, seed: int) -> DensityEstimate:
    """Estimate d_{K_{a,b,c}}(G) from `samples` uniform maps.

    Vertex images are derived from (seed, sample index), so the estimate
    is reproducible and independent of batching or evaluation order; the
    estimator is unbiased up to the < n * 2^-64 range-reduction bias.
    """
    parts = as_parts(shape)
    if len(parts) != 3:
        raise DomainError("blowup shapes here are triples (a, b, c) over K_3")
    return _run_sampler(G, parts, samples, seed, None)


def sample_cross_blowup_density(
    G: Graph, parts_classes, t: int, samples: int, seed: int
) -> DensityEstimate:
    """Estimate the density of K_{t,t,t} maps sending class i into part i.

    Normalization is over the m1^t * m2^t * m3^t maps that respect the
    partition, matching the exact cross counters.
    """
    if t < 1:
        raise DomainError("t must be >= 1")
    universes = []
    for cls in parts_classes:
        arr = np.asarray(sorted(cls), dtype=np.int64)
        if arr.size == 0:
            raise DomainError("parts must be nonempty")
        universes.extend([arr] * t)
    return _run_sampler(G, (t, t, t), samples, seed, universes)


# -- partition-restricted exact counters ---------------------------------------------


def _masks_of(parts_classes) -> tuple[int, int, int]:
    masks = []
    for cls in parts_classes:
        mask = 0
        for v in cls:
            mask |= 1 << v
        masks.append(mask)
    if len(masks) != 3:
        raise DomainError("need exactly three parts")
    return tuple(masks)


def cross_triangle_count(G: Graph, parts_classes) -> int:
    """Exact count of triangles with one vertex in each given part."""
    mask_a, mask_b, mask_c = _masks_of(parts_classes)
    rows = G.rows
    total = 0
    for a in iter_bits(mask_a):
        row_a = rows[a]
        for b in iter_bits(row_a & mask_b):
            total += (row_a & rows[b] & mask_c).bit_count()
    return total


def cross_blowup_hom_count(
    G: Graph, parts_classes, t: int, budget: int = DEFAULT_TUPLE_BUDGET
) -> int:
    """Exact count of K_{t,t,t} homomorphisms sending class i into part i."""
    if t < 1:
        raise DomainError("t must be >= 1")
    mask_a, mask_b, mask_c = _masks_of(parts_classes)
    sizes = sorted(m.bit_count() for m in (mask_a, mask_b, mask_c))
    cost = (sizes[0] * sizes[1]) ** t
    if cost > budget:
        raise ResourceBudgetError(
            f"restricted count costs ~(m1*m2)^t = {cost} tuple expansions, budget {budget}",
            cost=cost,
            suggestion="use sample_cross_blowup_density",
        )
    return _blowup_sum(G.rows, G.n, t, t, t, mask_a, mask_b, mask_c)


# -- balanced-blowup witness search ----------------------------------------------


@dataclass(frozen=True)
class BlowupWitness:
    """Three disjoint size-t vertex classes with every cross pair an edge."""

    classes: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    t: int


@dataclass(frozen=True)
class WitnessSearch:
    status: str  # found | exhausted | budget
    witness: BlowupWitness | None
    expansions: int
    budget: int

    @property
    def found(self) -> bool:
        return self.status == "found"

    @property
    def complete(self) -> bool:
        """True iff absence (or presence) is certified."""
        return self.status in ("found", "exhausted")


class _BudgetStop(Exception):
    pass


def find_blowup_witness(G: Graph, t: int, budget: int = DEFAULT_WITNESS_BUDGET) -> WitnessSearch:
    """Backtracking search for a K_{t,t,t} copy (classes need not be independent).

    Vertices are tried in degree-descending order (ties: lowest index
    first); the three classes grow maintaining the all-cross-edges
    invariant, and a branch is pruned when any class's candidate pool is
    smaller than its remaining need.  Exhausting the search certifies
    absence; running out of budget does not.
    """
    if t < 1:
        raise DomainError("t must be >= 1")
    n = G.n
    if 3 * t > n:
        return WitnessSearch("exhausted", None, 0, budget)
    order = sorted(range(n), key=lambda v: (-G.degree(v), v))
    rank_of = [0] * n
    for r, v in enumerate(order):
        rank_of[v] = r
    rrows = [0] * n
    for r, v in enumerate(order):
        acc = 0
        for u in iter_bits(G.rows[v]):
            acc |= 1 << rank_of[u]
        rrows[r] = acc

    full = (1 << n) - 1
    chosen: tuple[list[int], list[int], list[int]] = ([], [], [])
    adj_all = [full, full, full]
    state = {"used": 0, "expansions": 0}
    others = ((1, 2), (0, 2), (0, 1))

    def dfs() -> bool:
        needs = [t - len(chosen[i]) for i in range(3)]
        if not any(needs):
            return True
        pools = [0, 0, 0]
        for i in range(3):
            if needs[i] == 0:
                continue
            j, k = others[i]
            pool = adj_all[j] & adj_all[k] & ~state["used"]
            if chosen[i]:
                pool &= -1 << (chosen[i][-1] + 1)
            elif i > 0 and chosen[i - 1]:
                pool &= -1 << (chosen[i - 1][0] + 1)
            if pool.bit_count() < needs[i]:
                return False
            pools[i] = pool
        eligible = [i for i in range(3) if needs[i] and (i == 0 or chosen[i - 1])]
        pick = min(eligible, key=lambda i: (pools[i].bit_count() - needs[i], i))
        for v in iter_bits(pools[pick]):
            state["expansions"] += 1
            if state["expansions"] > budget:
                raise _BudgetStop
            chosen[pick].append(v)
            saved = adj_all[pick]
            adj_all[pick] &= rrows[v]
            state["used"] |= 1 << v
            if dfs():
                return True
            state["used"] ^= 1 << v
            adj_all[pick] = saved
            chosen[pick].pop()
        return False

    try:
        ok = dfs()
    except _BudgetStop:
        return WitnessSearch("budget", None, state["expansions"], budget)
    if not ok:
        return WitnessSearch("exhausted", None, state["expansions"], budget)
    classes = tuple(tuple(sorted(order[r] for r in chosen[i])) for i in range(3))
    for i in range(3):
        for j in range(i + 1, 3):
            for u in classes[i]:
                for v in classes[j]:
                    if not G.has_edge(u, v):  # defensive: witnesses are verified
                        raise AssertionError("witness verification failed")
    return WitnessSearch(
        "found", BlowupWitness(classes=classes, t=t), state["expansions"], budget
    )
