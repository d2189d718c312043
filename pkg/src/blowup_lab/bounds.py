"""Bound formulas, the balanced-blowup density scan, and counting experiments.

All bound arithmetic happens in the base-2 log domain: quantities like
gamma^(t^2) underflow doubles long before the interesting parameter range
is exhausted.  Absolute constants that the underlying theory leaves
unspecified are caller parameters, never hard-coded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import rng
from .counting import (
    DEFAULT_TUPLE_BUDGET,
    DensityEstimate,
    blowup_hom_count,
    cross_blowup_hom_count,
    cross_triangle_count,
    k112_hom_count,
    sample_cross_blowup_density,
    sample_hom_density,
    triangle_hom_count,
)
from .errors import DomainError, PreconditionError, ResourceBudgetError
from .graph import Graph, as_parts, random_tripartite


def _log2(x) -> float:
    if isinstance(x, Fraction):
        return math.log2(x.numerator) - math.log2(x.denominator)
    return math.log2(x)


def _check_gamma(gamma, allow_one: bool) -> None:
    if gamma <= 0 or gamma > 1 or (not allow_one and gamma == 1):
        top = "1]" if allow_one else "1)"
        raise DomainError(f"triangle density {gamma!r} outside (0, {top}")


@dataclass(frozen=True)
class BoundReport:
    """Lower/upper bounds on the minimal K_{a,b,c} density at triangle density gamma."""

    shape: tuple[int, int, int]
    gamma_log2: float
    lower_log2: float  # exponent a*b*c
    upper_log2: float  # exponent (ab+bc+ca)/3
    alon_log2: float | None = None
    nikiforov_log2: float | None = None
    nikiforov_c: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "shape": list(self.shape),
            "gamma_log2": self.gamma_log2,
            "lower_log2": self.lower_log2,
            "upper_log2": self.upper_log2,
            "alon_log2": self.alon_log2,
            "nikiforov_log2": self.nikiforov_log2,
            "nikiforov_c": self.nikiforov_c,
        }


def trivial_bounds(shape, gamma) -> BoundReport:
    """gamma^(abc) <= min density <= gamma^((ab+bc+ca)/3), in log2 form."""
    a, b, c = as_parts(shape)
    _check_gamma(gamma, allow_one=True)
    lg = _log2(gamma)
    return BoundReport(
        shape=(a, b, c),
        gamma_log2=lg,
        lower_log2=a * b * c * lg,
        upper_log2=(a * b + b * c + a * c) / 3 * lg,
    )


def alon_lower_bound(t: int, gamma) -> float:
    """log2 of gamma^(t^2 / gamma^2); beats the trivial exponent once t >= 1/gamma^2."""
    if t < 1:
        raise DomainError("t must be >= 1")
    _check_gamma(gamma, allow_one=False)
    g = float(gamma)
    return (t * t / (g * g)) * _log2(gamma)


def nikiforov_lower_bound(t: int, gamma, c_param: float) -> float:
    """log2 of 2^(-c * t^2 / gamma^3); the constant is the caller's to supply."""
    if t < 1:
        raise DomainError("t must be >= 1")
    if c_param <= 0:
        raise DomainError("c_param must be positive")
    _check_gamma(gamma, allow_one=True)
    g = float(gamma)
    return -c_param * t * t / (g * g * g)


def compare_lower_bounds(t: int, gamma, c_param: float) -> BoundReport:
    """All three lower bounds for the balanced shape (t, t, t) in one report."""
    report = trivial_bounds((t, t, t), gamma)
    alon = alon_lower_bound(t, gamma) if gamma != 1 else None
    nik = nikiforov_lower_bound(t, gamma, c_param)
    return BoundReport(
        shape=report.shape,
        gamma_log2=report.gamma_log2,
        lower_log2=report.lower_log2,
        upper_log2=report.upper_log2,
        alon_log2=alon,
        nikiforov_log2=nik,
        nikiforov_c=c_param,
    )


def best_lower_bound(report: BoundReport) -> tuple[str, float]:
    """Pointwise largest of the available lower bounds (log2 domain)."""
    candidates = {"trivial": report.lower_log2}
    if report.alon_log2 is not None:
        candidates["alon"] = report.alon_log2
    if report.nikiforov_log2 is not None:
        candidates["nikiforov"] = report.nikiforov_log2
    name = max(candidates, key=lambda k: candidates[k])
    return name, candidates[name]


# -- density scan over balanced blowups -----------------------------------------


@dataclass(frozen=True)
class ScanRow:
    t: int
    density_log2: float
    half_width: float  # 0.0 on exact rows
    threshold_log2: float
    satisfied: bool
    mode: str  # exact | sample


@dataclass(frozen=True)
class ScanReport:
    status: str  # ok | vacuous
    gamma: Fraction
    gamma_log2: float
    delta: float
    t_max: int
    budget: int
    samples: int
    seed: int
    rows: tuple[ScanRow, ...]
    first_t: int | None


def scan_t(
    G: Graph,
    delta: float,
    t_max: int,
    budget: int = DEFAULT_TUPLE_BUDGET,
    seed: int = 0,
    samples: int = 10**6,
) -> ScanReport:
    """For t = 2..t_max, compare d_{K_{t,t,t}}(G) against gamma^((1+delta) t^2).

    gamma is computed exactly; each row is exact when n^(2t) fits the
    budget and sampled otherwise.  Sampled rows use the lower confidence
    edge for the satisfied flag, so noise can only make the scan more
    conservative.  Returns the least satisfying t, or None.
    """
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    if t_max < 2:
        raise DomainError("t_max must be >= 2")
    tri = triangle_hom_count(G)
    if tri.count == 0:
        return ScanReport(
            status="vacuous",
            gamma=Fraction(0),
            gamma_log2=float("-inf"),
            delta=delta,
            t_max=t_max,
            budget=budget,
            samples=samples,
            seed=seed,
            rows=(),
            first_t=None,
        )
    gamma_log2 = tri.log2_density
    rows = []
    first_t = None
    for t in range(2, t_max + 1):
        threshold = (1 + delta) * t * t * gamma_log2
        if G.n ** (2 * t) <= budget:
            hc = blowup_hom_count((t, t, t), G, budget=budget)
            row = ScanRow(
                t=t,
                density_log2=hc.log2_density,
                half_width=0.0,
                threshold_log2=threshold,
                satisfied=hc.log2_density >= threshold,
                mode="exact",
            )
        else:
            est = sample_hom_density((t, t, t), G, samples, rng.word(seed, t))
            lower = est.lower_edge
            row = ScanRow(
                t=t,
                density_log2=math.log2(est.point) if est.point > 0 else float("-inf"),
                half_width=est.half_width,
                threshold_log2=threshold,
                satisfied=lower > 0 and math.log2(lower) >= threshold,
                mode="sample",
            )
        rows.append(row)
        if first_t is None and row.satisfied:
            first_t = t
    return ScanReport(
        status="ok",
        gamma=tri.density,
        gamma_log2=gamma_log2,
        delta=delta,
        t_max=t_max,
        budget=budget,
        samples=samples,
        seed=seed,
        rows=tuple(rows),
        first_t=first_t,
    )


# -- exact-integer inequality check ----------------------------------------------


@dataclass(frozen=True)
class CauchySchwarzReport:
    lhs: int  # Hom_{K_{1,1,2}} * 2m
    rhs: int  # Hom_{K_3}^2
    holds: bool
    edge_count: int
    vacuous: bool


def cauchy_schwarz_check(G: Graph) -> CauchySchwarzReport:
    """Verify Hom_{K112}(G) * 2m >= Hom_{K3}(G)^2 with exact integers.

    The inequality always holds (finite Cauchy-Schwarz over the codegree
    sequence); holds=False means an implementation bug, and callers
    surface it loudly.
    """
    if G.m == 0:
        return CauchySchwarzReport(lhs=0, rhs=0, holds=True, edge_count=0, vacuous=True)
    lhs = k112_hom_count(G).count * 2 * G.m
    rhs = triangle_hom_count(G).count ** 2
    return CauchySchwarzReport(
        lhs=lhs, rhs=rhs, holds=lhs >= rhs, edge_count=G.m, vacuous=False
    )


# -- random-tripartite experiments -------------------------------------------------


@dataclass(frozen=True)
class TripartiteCountReport:
    m: int
    alphas: tuple[float, float, float]
    zeta: float
    t: int | None
    seed: int
    host_label: str
    triangle_count: int
    band_low: float
    band_high: float
    triangle_pass: bool
    blowup_estimate: DensityEstimate | None
    blowup_threshold_log2: float | None
    blowup_pass: bool | None


def tripartite_count_experiment(
    m: int,
    alphas: tuple[float, float, float],
    zeta: float,
    t: int | None,
    seed: int,
    samples: int = 10**6,
) -> TripartiteCountReport:
    """Empirical check that a random tripartite host has the predicted counts.

    Builds independent cross-edges at densities alphas, compares the exact
    cross-triangle count against the (a1*a2*a3 +- zeta) m^3 band, and, when
    t is given, compares the sampled one-class-per-part K_{t,t,t} density
    against (a1*a2*a3 - zeta)^(t^2) using the lower confidence edge.
    """
    if any(not 0 <= a <= 1 for a in alphas):
        raise DomainError("cross densities must lie in [0, 1]")
    G, part = random_tripartite(m, alphas, seed)
    tri = cross_triangle_count(G, part.classes)
    prod = alphas[0] * alphas[1] * alphas[2]
    band_low = (prod - zeta) * m**3
    band_high = (prod + zeta) * m**3
    tri_pass = band_low <= tri <= band_high
    est = threshold = blowup_pass = None
    if t is not None:
        if t < 1:
            raise DomainError("t must be >= 1")
        est = sample_cross_blowup_density(G, part.classes, t, samples, rng.word(seed, t))
        base = prod - zeta
        threshold = t * t * math.log2(base) if base > 0 else float("-inf")
        lower = est.lower_edge
        blowup_pass = (math.log2(lower) >= threshold) if lower > 0 else threshold == float("-inf")
    return TripartiteCountReport(
        m=m,
        alphas=tuple(alphas),
        zeta=zeta,
        t=t,
        seed=seed,
        host_label=G.label or "",
        triangle_count=tri,
        band_low=band_low,
        band_high=band_high,
        triangle_pass=tri_pass,
        blowup_estimate=est,
        blowup_threshold_log2=threshold,
        blowup_pass=blowup_pass,
    )


@dataclass(frozen=True)
class PackingReport:
    m: int
    t: int
    densities: tuple[float, float, float]
    c_param: float
    seed: int
    count: int
    bound: int  # floor(m^(3t) / c_param^(3 t^2))
    holds: bool
    empirical_c: float  # the C that would make the bound tight


def packing_count_experiment(
    m: int,
    t: int,
    densities: tuple[float, float, float],
    c_param: float,
    seed: int,
) -> PackingReport:
    """Exact one-class-per-part K_{t,t,t} count vs the m^(3t)/C^(3t^2) packing bound.

    Requires all three densities >= 15/16 and desk-scale (t <= 3, m <= 60)
    parameters; reports the empirical constant that would make the bound
    tight.
    """
    if m < 1 or t < 1:
        raise DomainError("m and t must be >= 1")
    if c_param <= 0:
        raise DomainError("c_param must be positive")
    if any(d < 15 / 16 for d in densities):
        raise PreconditionError("all three densities must be >= 15/16")
    if t > 3 or m > 60:
        raise ResourceBudgetError(
            f"exact packing count capped at t <= 3, m <= 60 (got t={t}, m={m})",
            cost=(m * m) ** t,
        )
    G, part = random_tripartite(m, densities, seed)
    count = cross_blowup_hom_count(G, part.classes, t)
    bound = int(Fraction(m) ** (3 * t) / Fraction(c_param) ** (3 * t * t))
    if count > 0:
        empirical_c = math.exp(
            (3 * t * math.log(m) - math.log(count)) / (3 * t * t)
        )
    else:
        empirical_c = float("inf")
    return PackingReport(
        m=m,
        t=t,
        densities=tuple(densities),
        c_param=c_param,
        seed=seed,
        count=count,
        bound=bound,
        holds=count >= bound,
        empirical_c=empirical_c,
    )
