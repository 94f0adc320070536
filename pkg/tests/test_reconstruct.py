import pytest

from clusterdenom import punctured_disc as disc
from clusterdenom.reconstruct import (
    bound2_regression_count,
    enumerate_multisets,
    fan_triangulation,
    fst_crosscheck,
    injectivity_check,
)


def test_enumerate_bound_one():
    # 16 singletons plus the empty multiset
    out = enumerate_multisets(4, 1)
    assert len(out) == 17
    assert sum(1 for m in out if not m) == 1


def test_enumerate_emits_compatible_multisets():
    for m in enumerate_multisets(4, 2):
        arcs = list(m)
        for i, x in enumerate(arcs):
            for y in arcs[i:]:
                assert disc._compatible_ext(x, y, 4)


def test_enumerate_includes_pairs_and_t_members():
    out = enumerate_multisets(4, 2)
    pair = {disc.radius(0, disc.PLAIN): 1, disc.radius(0, disc.NOTCHED): 1}
    assert any(dict(m) == pair for m in out)


def test_enumerate_bound2_regression():
    # recorded on the first run; the domain of the desk-scale theorems
    assert len(enumerate_multisets(4, 2)) == bound2_regression_count()


def test_injectivity_small():
    rep = injectivity_check(4, 2, "all")
    assert rep.ok
    assert rep.triangulations_tested == 50
    assert rep.multisets_enumerated == len(enumerate_multisets(4, 2))


def test_injectivity_sampling_deterministic():
    r1 = injectivity_check(5, 1, 4, seed=11)
    r2 = injectivity_check(5, 1, 4, seed=11)
    assert r1.triangulations_tested == r2.triangulations_tested == 4
    assert r1.ok and r2.ok


def test_identical_multisets_are_not_collisions():
    # the grouping treats equal multisets as one; a duplicate insertion of
    # the same multiset must not be reported
    rep = injectivity_check(4, 1, 1)
    assert rep.ok


def test_fan_triangulation_is_triangulation():
    for n in (4, 5):
        fan = tuple(sorted(fan_triangulation(n)))
        assert fan in disc.tagged_triangulations(n)


def test_fst_crosscheck_n4():
    table = fst_crosscheck(4)
    assert table.ok
    assert len(table.pairs) == 16
    # initial arcs pair with initial variables: both vectors are -e_k
    t0 = table.triangulation
    for k, arc in enumerate(t0):
        iv, dv = table.vectors[arc]
        assert iv == dv == tuple(-1 if i == k else 0 for i in range(4))


def test_fst_crosscheck_multisets():
    table = fst_crosscheck(4, multiset_samples=64, seed=5)
    assert table.multisets_checked == 64
