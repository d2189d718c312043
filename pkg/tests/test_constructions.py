from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest

from blowup_lab import (
    ApFreeSet,
    DomainError,
    GraphFormatError,
    MalformedInputError,
    PreconditionError,
    ResourceBudgetError,
    behrend_set,
    is_3ap_free,
    k112_extremal_graph,
    k112_hom_count,
    list_triangles,
    max_3ap_free_bruteforce,
    read_apfree,
    read_certificate,
    rs_graph,
    triangle_hom_count,
    verify_rs_certificate,
    write_apfree,
    write_certificate,
)
from blowup_lab.counting import edge_triangle_multiplicities


# -- is_3ap_free -------------------------------------------------------------


def test_3ap_detection():
    assert not is_3ap_free([1, 2, 3])
    assert not is_3ap_free([2, 4, 6])
    assert is_3ap_free([1, 2, 4, 8])
    assert is_3ap_free([])
    assert is_3ap_free([5])


def test_3ap_free_matches_exhaustive_triple_scan():
    for bits in range(1 << 10):
        s = [v + 1 for v in range(10) if (bits >> v) & 1]
        naive = all(
            x + z != 2 * y for x, y, z in itertools.combinations(s, 3)
        )
        assert is_3ap_free(s) == naive


# -- behrend_set --------------------------------------------------------------


def test_behrend_singleton():
    s = behrend_set(1)
    assert s.elements == (1,) and s.method == "behrend"


def test_behrend_small_universe():
    s = behrend_set(10)
    assert is_3ap_free(s)
    optimum, _ = max_3ap_free_bruteforce(10)
    assert len(s) <= optimum


def test_behrend_large_universe_vs_asymptotic_benchmark(capsys):
    n = 10**4
    s = behrend_set(n)
    assert is_3ap_free(s)
    benchmark = n / 8 ** math.sqrt(math.log2(n))
    # the asymptotic size guarantee does not kick in at finite n; report both
    print(f"behrend({n}): achieved {len(s)}, asymptotic benchmark {benchmark:.1f}")
    assert len(s) >= 1
    assert max(s.elements) <= n


def test_behrend_dominated_by_bruteforce_optimum():
    for n in range(1, 26):
        assert len(behrend_set(n)) <= max_3ap_free_bruteforce(n)[0]


def test_behrend_deterministic():
    assert behrend_set(500).elements == behrend_set(500).elements


# -- max_3ap_free_bruteforce ------------------------------------------------------


def test_bruteforce_tiny():
    assert max_3ap_free_bruteforce(1) == (1, (1,))
    size, witness = max_3ap_free_bruteforce(3)
    assert size == 2 and is_3ap_free(witness)


def test_bruteforce_n9_matches_subset_scan():
    # independent oracle: scan all 2^9 subsets directly
    best = 0
    for bits in range(1 << 9):
        s = [v + 1 for v in range(9) if (bits >> v) & 1]
        if is_3ap_free(s):
            best = max(best, len(s))
    size, witness = max_3ap_free_bruteforce(9)
    assert size == best == 5
    assert is_3ap_free(witness)


def test_bruteforce_cap():
    with pytest.raises(ResourceBudgetError):
        max_3ap_free_bruteforce(31)


# -- ApFreeSet type ------------------------------------------------------------------


def test_apfree_set_validation():
    with pytest.raises(MalformedInputError):
        ApFreeSet(5, (2, 1), "explicit")  # not ascending
    with pytest.raises(MalformedInputError):
        ApFreeSet(5, (1, 6), "explicit")  # outside universe
    with pytest.raises(MalformedInputError):
        ApFreeSet(5, (1, 2, 3), "explicit")  # contains an AP


# -- rs_graph ------------------------------------------------------------------------


def test_rs_minimal():
    g, cert = rs_graph(1, [1])
    assert g.n == 6 and g.m == 3
    assert list_triangles(g) == [tuple(sorted(cert.triangles[0]))]


def test_rs_m5():
    g, cert = rs_graph(5, [1, 2])
    assert g.n == 30
    assert g.m == 3 * 5 * 2
    tris = list_triangles(g)
    assert len(tris) == 10
    assert all(t == 1 for t in edge_triangle_multiplicities(g).values())
    assert verify_rs_certificate(g, cert).ok


@pytest.mark.parametrize("m,elems", [(3, [1, 2]), (8, [2, 3, 8]), (12, [1, 5, 11])])
def test_rs_no_extra_triangles(m, elems):
    g, cert = rs_graph(m, elems)
    assert len(list_triangles(g)) == m * len(elems)
    assert verify_rs_certificate(g, cert).ok


def test_rs_rejects_bad_sets():
    with pytest.raises(DomainError):
        rs_graph(3, [1, 4])  # element exceeds m
    with pytest.raises(PreconditionError):
        rs_graph(6, [1, 2, 3])  # not 3AP-free


def test_rs_vertex_layout():
    # parts occupy [0, m), [m, 3m), [3m, 6m); integer j of a part maps to its
    # (j-1)-th vertex, so (i=1, s=1) gives A:1 -> 0, B:2 -> m+1, C:3 -> 3m+2
    _, cert = rs_graph(4, [1])
    assert cert.triangles[0] == (0, 5, 14)
    assert cert.part_sizes == (4, 8, 12)


def test_verify_catches_tampered_certificate():
    g, cert = rs_graph(5, [1, 2])
    bad = cert.triangles[:-1] + ((0, 6, 18),)
    tampered = type(cert)(m=cert.m, set=cert.set, triangles=bad, part_sizes=cert.part_sizes)
    verdict = verify_rs_certificate(g, tampered)
    assert not verdict.ok and verdict.failures


# -- k112 extremal construction ----------------------------------------------------------


def test_k112_identity_blowup_is_rs_graph():
    g, part, cert = k112_extremal_graph(1, 1)
    base, _ = rs_graph(1, behrend_set(1))
    assert g == base
    assert len(part.classes) == 6


def test_k112_closed_forms_m5_q2():
    g, _, cert = k112_extremal_graph(5, 2)
    s = len(cert.set)
    assert triangle_hom_count(g).count == 6 * 5 * s * 2**3
    assert k112_hom_count(g).count == 6 * 5 * s * 2**4


@pytest.mark.parametrize("m", [1, 5, 10])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_k112_density_ratio_independent_of_q(m, q):
    g, _, cert = k112_extremal_graph(m, q)
    gamma = triangle_hom_count(g).density
    d112 = k112_hom_count(g).density
    assert d112 / gamma**2 == Fraction(6 * m, len(cert.set))


def test_k112_budget():
    with pytest.raises(ResourceBudgetError):
        k112_extremal_graph(10**4, 100)


# -- file formats ----------------------------------------------------------------------


def test_apfree_round_trip(tmp_path):
    s = behrend_set(200)
    path = tmp_path / "s.txt"
    write_apfree(s, path)
    t = read_apfree(path)
    assert t == s


def test_apfree_rejects_corrupt_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("#apfree v1 10 behrend\n1 2 3\n")
    with pytest.raises(GraphFormatError) as err:
        read_apfree(path)
    assert err.value.line == 2
    path.write_text("#wrong 10 behrend\n1 2\n")
    with pytest.raises(GraphFormatError):
        read_apfree(path)


def test_certificate_round_trip_with_set_file(tmp_path):
    g, cert = rs_graph(20, behrend_set(20))
    write_apfree(cert.set, tmp_path / "s.txt")
    write_certificate(cert, tmp_path / "c.json", set_file="s.txt")
    loaded = read_certificate(tmp_path / "c.json")
    assert loaded.m == cert.m
    assert loaded.set == cert.set
    assert loaded.triangles == cert.triangles
    assert verify_rs_certificate(g, loaded).ok


def test_certificate_reconstructs_set_without_file(tmp_path):
    g, cert = rs_graph(9, [1, 2, 9])
    write_certificate(cert, tmp_path / "c.json", set_file=None)
    loaded = read_certificate(tmp_path / "c.json")
    assert loaded.set.elements == (1, 2, 9)
    assert verify_rs_certificate(g, loaded).ok
