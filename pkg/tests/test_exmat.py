import random

import pytest

from clusterdenom.exmat import (
    BudgetExceededError,
    ExchangeMatrix,
    canonical_form,
    compute_symmetrizer,
    is_finite_type,
    mutate,
    mutation_classes,
    standard_matrix,
)


def test_mutate_rank2_negates():
    b = standard_matrix("A2")
    assert mutate(b, 0).b == ((0, -1), (1, 0))


def test_mutate_is_involution():
    rng = random.Random(1)
    for name in ["A3", "B3", "D4", "F4", "G2"]:
        m = standard_matrix(name)
        for _ in range(5):
            k = rng.randrange(m.n)
            m2 = mutate(m, k)
            assert mutate(m2, k) == m
            m = m2


def test_mutate_preserves_symmetrizer_f4():
    f4 = standard_matrix("F4")
    mutated = mutate(f4, 1)
    # recompute from scratch on the output and compare
    assert compute_symmetrizer(mutated.b) == f4.symmetrizer


def test_mutate_index_range():
    with pytest.raises(IndexError):
        mutate(standard_matrix("A2"), 2)


def test_standard_a2():
    assert standard_matrix("A2").b == ((0, 1), (-1, 0))


def test_standard_d4_cartan_determinant():
    a = standard_matrix("D", 4).cartan_companion()
    # hand expansion of the 4x4 determinant
    def det4(m):
        import itertools
        total = 0
        for perm in itertools.permutations(range(4)):
            sign = 1
            for i in range(4):
                for j in range(i + 1, 4):
                    if perm[i] > perm[j]:
                        sign = -sign
            prod = 1
            for i in range(4):
                prod *= m[i][perm[i]]
            total += sign * prod
        return total
    assert det4(a) == 4


def test_standard_f4_symmetrizer_not_trivial():
    assert set(standard_matrix("F4").symmetrizer) != {1}


def test_standard_invalid_pairs():
    for bad in ["E5", "F3", "G4", "D3"]:
        with pytest.raises(ValueError):
            standard_matrix(bad)


def test_symmetrizer_validation():
    with pytest.raises(ValueError):
        ExchangeMatrix([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        ExchangeMatrix([[0, 1], [-1, 0]], symmetrizer=[1, 2])


def test_finite_type_small():
    assert is_finite_type(standard_matrix("A2")) is True
    assert is_finite_type(ExchangeMatrix([[0, 2], [-2, 0]])) is False


def test_finite_type_budget():
    # rank-3 all-(2)s quiver is already 2-infinite at the root, but a tiny
    # budget must trip before any enumeration of a big class
    with pytest.raises(BudgetExceededError):
        is_finite_type(standard_matrix("E6"), budget=3)


def test_canonical_form_idempotent_and_permutation_invariant():
    rng = random.Random(7)
    for name in ["A3", "B3", "D4", "F4", "D5"]:
        m = standard_matrix(name)
        for _ in range(8):
            m = mutate(m, rng.randrange(m.n))
            canon = canonical_form(m.b)
            assert canonical_form(canon) == canon
            perm = list(range(m.n))
            rng.shuffle(perm)
            assert canonical_form(m.permuted(perm).b) == canon


def test_mutation_classes_a2_single():
    assert len(mutation_classes(standard_matrix("A2"))) == 1


def test_mutation_classes_invariant_under_mutation():
    b = standard_matrix("A3")
    assert mutation_classes(b) == mutation_classes(mutate(b, 1))


# regression baselines recorded on the first run; permutation equivalence only
CLASS_COUNTS = {"A3": 4, "B3": 5, "C3": 5, "D4": 6, "F4": 15, "G2": 2, "D5": 26, "E6": 67}


@pytest.mark.parametrize("name,count", sorted(CLASS_COUNTS.items()))
def test_mutation_class_counts(name, count):
    assert len(mutation_classes(standard_matrix(name))) == count


def test_builders_are_finite_type():
    for name in ["A1", "A2", "A5", "B2", "B4", "C3", "D4", "D6", "E6", "E7", "F4", "G2"]:
        assert is_finite_type(standard_matrix(name)) is True


@pytest.mark.slow
def test_e8_is_finite_type():
    # full class enumeration terminates
    assert is_finite_type(standard_matrix("E8")) is True
