import random
from fractions import Fraction

import pytest

from fm_oracle import fm_feasible

from clusterdenom.exmat import ExchangeMatrix, mutate, standard_matrix
from clusterdenom.pattern import dmatrices, explore
from clusterdenom.verifier import (
    FeasibilitySystem,
    adjugate,
    det,
    feasible,
    feasible_witness,
    integer_witness,
    inverse,
    shared_columns,
    verify,
)


def test_det_identity_signs():
    minus_i4 = [[-1 if i == j else 0 for j in range(4)] for i in range(4)]
    minus_i3 = [[-1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert det(minus_i4) == 1
    assert det(minus_i3) == -1


def test_det_all_d4_nonzero():
    pat = explore(standard_matrix("D4"))
    assert all(det(d.rows()) != 0 for d in dmatrices(pat))


def test_inverse_examples():
    minus_i = [[-1, 0], [0, -1]]
    assert inverse(minus_i) == ((Fraction(-1), Fraction(0)), (Fraction(0), Fraction(-1)))
    assert inverse([[2, 0], [0, 1]])[0][0] == Fraction(1, 2)
    with pytest.raises(ValueError):
        inverse([[1, 1], [1, 1]])


def _random_unimodular(rng, n):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(12):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-2, 2)
        for col in range(n):
            m[i][col] += c * m[j][col]
    return m


def test_inverse_of_unimodular_is_integer():
    rng = random.Random(12)
    for _ in range(20):
        m = _random_unimodular(rng, 4)
        assert det(m) in (1, -1)
        inv = inverse(m)
        assert all(x.denominator == 1 for row in inv for x in row)
        # exact product equals the identity
        n = len(m)
        for i in range(n):
            for j in range(n):
                s = sum(Fraction(m[i][k]) * inv[k][j] for k in range(n))
                assert s == (1 if i == j else 0)


def test_adjugate_identity():
    rng = random.Random(5)
    for _ in range(20):
        m = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        d = det(m)
        if d == 0:
            continue
        adj, d2 = adjugate(m)
        assert d2 == d
        for i in range(3):
            for j in range(3):
                s = sum(adj[i][k] * m[k][j] for k in range(3))
                assert s == (d if i == j else 0)


def test_feasible_trivial_cases():
    eye = ((1, 0), (0, 1))
    assert feasible(FeasibilitySystem(a=eye, l=0)) is True
    assert feasible_witness(FeasibilitySystem(a=eye, l=0))[0] >= 1
    minus = ((-1, 0), (0, -1))
    for l in (0, 1):
        assert feasible(FeasibilitySystem(a=minus, l=l)) is False


def test_integer_witness_scaling():
    w = integer_witness((Fraction(1, 2), Fraction(2, 3)))
    assert w == (3, 4)


def test_feasible_monotone_in_constraints():
    # dropping a row never turns feasible into infeasible
    rng = random.Random(31)
    for _ in range(200):
        n = rng.randint(2, 3)
        rows = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n)]
        l = rng.randrange(n)
        relaxed = [row for i, row in enumerate(rows) if i != rng.randrange(n)]
        relaxed.append(tuple(0 for _ in range(n)))
        if feasible(FeasibilitySystem(a=tuple(rows), l=l)):
            assert feasible(FeasibilitySystem(a=tuple(relaxed), l=l))


def test_simplex_agrees_with_fourier_motzkin():
    rng = random.Random(77)
    for _ in range(1000):
        n = rng.randint(2, 3)
        rows = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
        l = rng.randrange(n)
        assert feasible(FeasibilitySystem(a=rows, l=l)) == fm_feasible(rows, l)


def test_shared_columns_on_a2():
    pat = explore(standard_matrix("A2"))
    ds = dmatrices(pat)
    ps, pt, r = shared_columns(ds[0], ds[0], pat)
    assert r == 2
    values = set()
    for i in range(5):
        for j in range(5):
            if i == j:
                continue
            perm_s, perm_t, r = shared_columns(ds[i], ds[j], pat)
            values.add(r)
            # the permutations align shared variables position by position
            for a, b in zip(perm_s[:r], perm_t[:r]):
                assert ds[i].cluster[a] == ds[j].cluster[b]
    assert values == {0, 1}


def test_shared_columns_adjacent_clusters():
    pat = explore(standard_matrix("A3"))
    ds = dmatrices(pat)
    seeds = pat.seed_list()
    _, _, r = shared_columns(ds[0], ds[1], pat)
    assert len(set(seeds[0].cluster) & set(seeds[1].cluster)) == r


def test_verify_verdicts_small():
    rep = verify(standard_matrix("A2"), type_name="A2")
    assert rep.verdict == "verified"
    assert rep.clusters_per_class == [5]
    assert rep.variables_per_class == [5]
    assert rep.min_abs_determinant == 1
    assert rep.feasible_systems == [] and rep.determinant_zero == []


def test_verify_mutation_invariance():
    b = standard_matrix("A3")
    assert verify(b).verdict == verify(mutate(b, 0)).verdict == "verified"


def test_verify_bookkeeping_identity():
    rep = verify(standard_matrix("B3"))
    st = rep.pair_stats
    assert st["column_tests"] == st["certified"] + st["presolved"] + st["simplex"]


def test_verify_budget_and_checkpoint(tmp_path):
    ck = tmp_path / "ckpt.json"
    rep = verify(standard_matrix("D4"), max_classes=2, checkpoint=str(ck))
    assert rep.verdict == "budget-exceeded"
    assert rep.classes_checked == 2
    assert ck.exists()
    # resuming picks up the saved classes and completes
    rep2 = verify(standard_matrix("D4"), checkpoint=str(ck), resume=True)
    assert rep2.verdict == "verified"
    assert rep2.classes_checked == rep2.num_classes == 6


def test_verify_rejects_non_finite_type():
    with pytest.raises(ValueError):
        verify(ExchangeMatrix([[0, 2], [-2, 0]]))


def test_report_roundtrip():
    rep = verify(standard_matrix("A2"), type_name="A2")
    data = rep.to_dict()
    assert data["verdict"] == "verified"
    assert data["schema_version"] == 1
    assert any("permutation" in note for note in data["notes"])
