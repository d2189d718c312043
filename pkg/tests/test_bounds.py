from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest

from blowup_lab import (
    DomainError,
    PreconditionError,
    ResourceBudgetError,
    alon_lower_bound,
    best_lower_bound,
    cauchy_schwarz_check,
    compare_lower_bounds,
    complete_graph,
    tripartite_count_experiment,
    cross_triangle_count,
    from_edge_list,
    nikiforov_lower_bound,
    packing_count_experiment,
    random_graph,
    random_tripartite,
    scan_t,
    trivial_bounds,
)


# -- bound formulas -----------------------------------------------------------


def test_trivial_bounds_2_2_2():
    rep = trivial_bounds((2, 2, 2), 0.1)
    assert math.isclose(2**rep.lower_log2, 1e-8, rel_tol=1e-9)
    assert math.isclose(2**rep.upper_log2, 1e-4, rel_tol=1e-9)


def test_trivial_bounds_balanced_exponents():
    for t in (2, 3, 5):
        rep = trivial_bounds((t, t, t), 0.5)
        assert math.isclose(rep.lower_log2, t**3 * math.log2(0.5))
        assert math.isclose(rep.upper_log2, t**2 * math.log2(0.5))


def test_trivial_bounds_k3_itself():
    rep = trivial_bounds((1, 1, 1), 0.37)
    assert rep.lower_log2 == rep.upper_log2 == pytest.approx(math.log2(0.37))


def test_trivial_bounds_ordering_all_small_shapes():
    # abc >= (ab+bc+ca)/3 for positive integers, with equality only at (1,1,1)
    for shape in itertools.product(range(1, 6), repeat=3):
        rep = trivial_bounds(shape, Fraction(1, 3))
        assert rep.lower_log2 <= rep.upper_log2 + 1e-12
        if shape != (1, 1, 1):
            assert rep.lower_log2 < rep.upper_log2


def test_trivial_bounds_domain():
    with pytest.raises(DomainError):
        trivial_bounds((1, 1, 1), 0.0)
    with pytest.raises(DomainError):
        trivial_bounds((1, 1, 1), 1.0001)
    assert trivial_bounds((2, 2, 2), 1).lower_log2 == 0


def test_alon_bound_values():
    assert math.isclose(alon_lower_bound(2, 0.5), math.log2(0.5**16))
    assert math.isclose(alon_lower_bound(1, 0.9), (1 / 0.81) * math.log2(0.9))
    with pytest.raises(DomainError):
        alon_lower_bound(2, 1.0)


def test_alon_beats_trivial_exactly_when_t_large():
    # exponent t^2/gamma^2 <= t^3 iff t >= 1/gamma^2
    gamma = 0.6
    cut = 1 / gamma**2
    for t in range(1, 10):
        alon = alon_lower_bound(t, gamma)
        trivial = trivial_bounds((t, t, t), gamma).lower_log2
        if t >= cut:
            assert alon >= trivial - 1e-12
        else:
            assert alon < trivial


def test_nikiforov_bound_values():
    assert nikiforov_lower_bound(2, 0.5, 1.0) == -32.0
    assert nikiforov_lower_bound(3, 1.0, 2.0) == -18.0
    with pytest.raises(DomainError):
        nikiforov_lower_bound(2, 0.5, 0.0)


def test_compare_lower_bounds_reports_pointwise_max():
    rep = compare_lower_bounds(2, 0.5, 1.0)
    name, value = best_lower_bound(rep)
    assert value == max(rep.lower_log2, rep.alon_log2, rep.nikiforov_log2)
    # t = 2 < 1/gamma^2 = 4: the trivial exponent wins here
    assert name == "trivial"
    # t = 5 > 1/gamma^2 = 1.23: the t^2/gamma^2 exponent takes over
    assert best_lower_bound(compare_lower_bounds(5, 0.9, 5.0))[0] == "alon"


# -- scan ---------------------------------------------------------------------


def test_scan_complete_graph_satisfies_at_2():
    rep = scan_t(complete_graph(30), delta=0.5, t_max=3, seed=1)
    assert rep.status == "ok" and rep.first_t == 2
    assert rep.rows[0].mode == "exact"
    assert rep.rows[0].satisfied


def test_scan_vacuous_on_triangle_free_host():
    c5 = from_edge_list(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    rep = scan_t(c5, delta=0.5, t_max=4)
    assert rep.status == "vacuous" and rep.first_t is None and rep.rows == ()


def test_scan_sampled_route_and_determinism():
    g = random_graph(60, 0.5, 21)
    rep = scan_t(g, delta=0.5, t_max=3, budget=10**5, seed=3, samples=50_000)
    assert all(row.mode == "sample" for row in rep.rows)
    assert rep.first_t == 2
    assert rep == scan_t(g, delta=0.5, t_max=3, budget=10**5, seed=3, samples=50_000)


def test_scan_satisfied_uses_lower_confidence_edge():
    g = random_graph(60, 0.5, 21)
    rep = scan_t(g, delta=0.5, t_max=2, budget=10**5, seed=3, samples=50_000)
    row = rep.rows[0]
    point = 2.0**row.density_log2
    lower = point - row.half_width
    assert row.satisfied == (lower > 0 and math.log2(lower) >= row.threshold_log2)


def test_scan_rejects_bad_params():
    g = complete_graph(5)
    with pytest.raises(DomainError):
        scan_t(g, delta=0.0, t_max=3)
    with pytest.raises(DomainError):
        scan_t(g, delta=0.5, t_max=1)


def test_scan_exploratory_table_on_extremal_blowup():
    # sparse-triangle host: the scan emits a full row table without any
    # ground-truth claim; exact rows must still respect the gamma^(t^3) floor
    from blowup_lab import k112_extremal_graph

    g, _, _ = k112_extremal_graph(20, 3)
    rep = scan_t(g, delta=0.9, t_max=3, budget=10**9, seed=2, samples=10**5)
    assert rep.status == "ok"
    assert [row.t for row in rep.rows] == [2, 3]
    for row in rep.rows:
        if row.mode == "exact":
            assert row.density_log2 >= row.t**3 * rep.gamma_log2


# -- exact inequality --------------------------------------------------------------


def test_cauchy_schwarz_equality_on_k4():
    rep = cauchy_schwarz_check(complete_graph(4))
    assert rep.lhs == rep.rhs == 576 and rep.holds


def test_cauchy_schwarz_vacuous_on_empty():
    rep = cauchy_schwarz_check(from_edge_list(4, []))
    assert rep.vacuous and rep.holds


def test_cauchy_schwarz_random_sweep():
    for seed in range(50):
        g = random_graph(30, 0.05 + 0.018 * seed, seed)
        assert cauchy_schwarz_check(g).holds


# -- tripartite count experiment --------------------------------------------------------


def test_tripartite_count_full_density_is_exact_cube():
    rep = tripartite_count_experiment(15, (1.0, 1.0, 1.0), 0.0, t=None, seed=0)
    assert rep.triangle_count == 15**3 and rep.triangle_pass


def test_tripartite_count_zero_density_blocks_triangles():
    rep = tripartite_count_experiment(15, (0.0, 0.8, 0.8), 0.01, t=None, seed=0)
    assert rep.triangle_count == 0


def test_tripartite_count_band_and_blowup_threshold():
    rep = tripartite_count_experiment(300, (0.5, 0.5, 0.5), 0.02, t=2, seed=3, samples=10**5)
    assert rep.triangle_pass
    assert rep.blowup_pass
    assert rep.blowup_estimate is not None
    assert rep.blowup_threshold_log2 == pytest.approx(4 * math.log2(0.125 - 0.02))


# -- packing experiment -----------------------------------------------------------------


def test_packing_full_density_dominates_bound():
    rep = packing_count_experiment(8, 2, (1.0, 1.0, 1.0), 1.0, seed=0)
    assert rep.count == 8 ** (3 * 2)  # complete tripartite: every map lands
    assert rep.holds and rep.bound == 8**6


def test_packing_reported_values_m40_t2():
    rep = packing_count_experiment(40, 2, (15 / 16, 15 / 16, 15 / 16), 2.0, seed=7)
    assert rep.holds  # C = 2 is far from tight at these densities
    assert rep.bound == int(40**6 / 2**12)
    assert 1.0 <= rep.empirical_c < 2.0
    # empirical constant is the C that would make the bound exactly tight
    assert rep.count == pytest.approx(40**6 / rep.empirical_c**12, rel=1e-9)


def test_packing_t3_small_m():
    rep = packing_count_experiment(12, 3, (0.95, 0.95, 0.95), 2.0, seed=1)
    assert rep.count <= 12**9
    assert rep.holds and rep.empirical_c >= 1.0


def test_packing_t1_reduces_to_cross_triangles():
    rep = packing_count_experiment(30, 1, (0.95, 0.95, 0.95), 1.5, seed=4)
    g, part = random_tripartite(30, (0.95, 0.95, 0.95), 4)
    assert rep.count == cross_triangle_count(g, part.classes)


def test_packing_preconditions():
    with pytest.raises(PreconditionError):
        packing_count_experiment(20, 2, (0.5, 0.95, 0.95), 2.0, seed=0)
    with pytest.raises(ResourceBudgetError):
        packing_count_experiment(61, 2, (0.95, 0.95, 0.95), 2.0, seed=0)
    with pytest.raises(ResourceBudgetError):
        packing_count_experiment(20, 4, (0.95, 0.95, 0.95), 2.0, seed=0)
