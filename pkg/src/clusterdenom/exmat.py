"""Skew-symmetrizable exchange matrices and their mutation classes.

This module holds the matrix side of the machinery: validation of
skew-symmetrizability (with an explicit positive integer symmetrizer),
Fomin-Zelevinsky matrix mutation, builders for the standard finite-type
matrices in bipartite orientation, a 2-finiteness test for finite type,
and breadth-first enumeration of the mutation class up to simultaneous
row/column permutation.

Indices are 0-based throughout the Python API.
"""

from __future__ import annotations

from collections import deque
from math import gcd

__all__ = [
    "BudgetExceededError",
    "ExchangeMatrix",
    "MatrixClassSet",
    "canonical_form",
    "compute_symmetrizer",
    "is_finite_type",
    "mutate",
    "mutation_classes",
    "standard_matrix",
    "FINITE_TYPE_RANKS",
]


class BudgetExceededError(RuntimeError):
    """Raised when mutation-class enumeration exceeds its node budget.

    Distinct from a negative finite-type answer: the search was cut off,
    nothing was decided.
    """


def compute_symmetrizer(b):
    """Return positive integers (d_1..d_n) with d_i*b[i][j] == -d_j*b[j][i].

    Returns None when the matrix is not skew-symmetrizable with a positive
    symmetrizer.  The symmetrizer is reduced so that gcd of its entries is 1.
    """
    n = len(b)
    for i in range(n):
        if b[i][i] != 0:
            return None
        for j in range(n):
            # sign-skew-symmetry: b_ij and b_ji are both zero or of opposite sign
            if (b[i][j] == 0) != (b[j][i] == 0):
                return None
            if b[i][j] != 0 and b[i][j] * b[j][i] > 0:
                return None

    # Propagate ratios d_j/d_i = -b_ij/b_ji along the nonzero entries.
    # Work with integer pairs (num, den) to stay exact.
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = (1, 1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if b[i][j] == 0:
                    continue
                # d_j = d_i * b_ij / (-b_ji)
                num = d[i][0] * abs(b[i][j])
                den = d[i][1] * abs(b[j][i])
                g = gcd(num, den)
                ratio = (num // g, den // g)
                if d[j] is None:
                    d[j] = ratio
                    stack.append(j)
                elif d[j] != ratio:
                    return None

    # Clear denominators componentwise, then reduce.
    lcm = 1
    for _, den in d:
        lcm = lcm * den // gcd(lcm, den)
    vals = [num * (lcm // den) for num, den in d]
    g = 0
    for v in vals:
        g = gcd(g, v)
    return tuple(v // g for v in vals)


class ExchangeMatrix:
    """Immutable skew-symmetrizable integer matrix with its symmetrizer."""

    __slots__ = ("n", "b", "symmetrizer", "_canon")

    def __init__(self, b, symmetrizer=None):
        rows = tuple(tuple(int(x) for x in row) for row in b)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("exchange matrix must be square")
        if n == 0:
            raise ValueError("exchange matrix must have positive rank")
        d = compute_symmetrizer(rows)
        if d is None:
            raise ValueError("matrix is not skew-symmetrizable")
        if symmetrizer is not None:
            symmetrizer = tuple(int(x) for x in symmetrizer)
            if len(symmetrizer) != n or any(x <= 0 for x in symmetrizer):
                raise ValueError("symmetrizer must be n positive integers")
            for i in range(n):
                for j in range(n):
                    if symmetrizer[i] * rows[i][j] != -symmetrizer[j] * rows[j][i]:
                        raise ValueError("symmetrizer does not skew-symmetrize the matrix")
            g = 0
            for x in symmetrizer:
                g = gcd(g, x)
            d = tuple(x // g for x in symmetrizer)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "b", rows)
        object.__setattr__(self, "symmetrizer", d)
        object.__setattr__(self, "_canon", None)

    def __setattr__(self, name, value):
        raise AttributeError("ExchangeMatrix is immutable")

    def __eq__(self, other):
        return isinstance(other, ExchangeMatrix) and self.b == other.b

    def __hash__(self):
        return hash(self.b)

    def __repr__(self):
        return f"ExchangeMatrix({[list(r) for r in self.b]})"

    def mutate(self, k):
        """Fomin-Zelevinsky mutation at direction k (0-based)."""
        return mutate(self, k)

    def cartan_companion(self):
        """A with a_ii = 2 and a_ij = -|b_ij| off the diagonal."""
        return tuple(
            tuple(2 if i == j else -abs(self.b[i][j]) for j in range(self.n))
            for i in range(self.n)
        )

    def canonical_form(self):
        """Lexicographically minimal row-major flattening over simultaneous permutations."""
        cached = object.__getattribute__(self, "_canon")
        if cached is None:
            cached = canonical_form(self.b)
            object.__setattr__(self, "_canon", cached)
        return cached

    def permuted(self, perm):
        """Simultaneous row/column permutation: entry (i, j) becomes b[perm[i]][perm[j]]."""
        b = tuple(tuple(self.b[perm[i]][perm[j]] for j in range(self.n)) for i in range(self.n))
        d = tuple(self.symmetrizer[perm[i]] for i in range(self.n))
        return ExchangeMatrix(b, d)

    def to_dict(self):
        return {"n": self.n, "b": [list(r) for r in self.b], "symmetrizer": list(self.symmetrizer)}


def mutate(matrix, k):
    """Mutate at index k: b'_ij = -b_ij if k in (i, j), else b_ij + [b_ik]+[b_kj]+ - [-b_ik]+[-b_kj]+."""
    n = matrix.n
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range for rank {n}")
    b = matrix.b
    new = []
    for i in range(n):
        row = []
        bik = b[i][k]
        for j in range(n):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                bkj = b[k][j]
                row.append(
                    b[i][j]
                    + max(bik, 0) * max(bkj, 0)
                    - max(-bik, 0) * max(-bkj, 0)
                )
        new.append(tuple(row))
    return ExchangeMatrix(new, matrix.symmetrizer)


# Valid (letter, rank) pairs for the named finite types.
FINITE_TYPE_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def _dynkin_edges(letter, n):
    """Edges (i, j, m_ij, m_ji) of the Dynkin diagram; m's are |a_ij|, |a_ji|."""
    path = [(i, i + 1, 1, 1) for i in range(n - 1)]
    if letter == "A":
        return path
    if letter == "B":
        # last edge doubled: a_{n,n-1} = -2 (short root at the end)
        return path[:-1] + [(n - 2, n - 1, 1, 2)]
    if letter == "C":
        return path[:-1] + [(n - 2, n - 1, 2, 1)]
    if letter == "D":
        return [(i, i + 1, 1, 1) for i in range(n - 2)] + [(n - 3, n - 1, 1, 1)]
    if letter == "E":
        return [(i, i + 1, 1, 1) for i in range(n - 2)] + [(2, n - 1, 1, 1)]
    if letter == "F":
        return [(0, 1, 1, 1), (1, 2, 1, 2), (2, 3, 1, 1)]
    if letter == "G":
        return [(0, 1, 1, 3)]
    raise ValueError(f"unknown type letter {letter!r}")


def parse_type_name(name):
    """Split a token like 'F4' or ('D', 5) into (letter, rank), validating the pair."""
    if isinstance(name, (tuple, list)):
        letter, n = name[0].upper(), int(name[1])
    else:
        s = str(name).strip().upper()
        if len(s) < 2 or not s[0].isalpha() or not s[1:].isdigit():
            raise ValueError(f"cannot parse type name {name!r}; expected e.g. 'A2', 'F4'")
        letter, n = s[0], int(s[1:])
    if letter not in FINITE_TYPE_RANKS:
        raise ValueError(f"unknown type letter {letter!r}")
    if not FINITE_TYPE_RANKS[letter](n):
        raise ValueError(f"invalid finite-type pair ({letter}, {n})")
    return letter, n


def standard_matrix(type_name, n=None):
    """Bipartite-orientation exchange matrix whose Cartan companion is the standard one.

    Accepts either standard_matrix('F4') or standard_matrix('F', 4).
    """
    if n is not None:
        letter, rank = parse_type_name((type_name, n))
    else:
        letter, rank = parse_type_name(type_name)
    edges = _dynkin_edges(letter, rank)
    # 2-color the tree so every arrow sign is determined by its source color
    color = [None] * rank
    adj = [[] for _ in range(rank)]
    for i, j, _, _ in edges:
        adj[i].append(j)
        adj[j].append(i)
    color[0] = 1
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if color[w] is None:
                color[w] = -color[v]
                stack.append(w)
    b = [[0] * rank for _ in range(rank)]
    for i, j, mij, mji in edges:
        b[i][j] = color[i] * mij
        b[j][i] = color[j] * mji
    return ExchangeMatrix(b)


def canonical_form(b):
    """Canonical representative of b under simultaneous row/column permutation.

    Returns the matrix (tuple of row tuples) whose row-major flattening is
    lexicographically minimal over all permutations P applied as
    b[P[i]][P[j]].  Branch-and-bound: positions are fixed one row at a time;
    the still-free columns are kept as an ordered partition of vertices that
    are indistinguishable so far, so each new row's value sequence is already
    determined and can be compared against the incumbent before recursing.
    """
    n = len(b)
    best = [None]  # list of n row tuples once found

    def rec(prefix, groups, rows):
        i = len(prefix)
        if i == n:
            if best[0] is None or rows < best[0]:
                best[0] = list(rows)
            return
        # Within a fixed prefix, only the minimal achievable row i matters:
        # any candidate realizing a larger row loses lexicographically.
        candidates = []
        for v in groups[0]:
            head = tuple(b[v][u] for u in prefix) + (0,)
            tail = []
            rest0 = [w for w in groups[0] if w != v]
            for g in ([rest0] if rest0 else []) + groups[1:]:
                tail.extend(sorted(b[v][w] for w in g))
            candidates.append((head + tuple(tail), v))
        row_min = min(row for row, _ in candidates)
        if best[0] is not None and rows + [row_min] > best[0][: i + 1]:
            return
        for row, v in candidates:
            if row != row_min:
                continue
            rest0 = [w for w in groups[0] if w != v]
            refined = []
            for g in ([rest0] if rest0 else []) + groups[1:]:
                buckets = {}
                for w in g:
                    buckets.setdefault(b[v][w], []).append(w)
                for val in sorted(buckets):
                    refined.append(buckets[val])
            rec(prefix + [v], refined, rows + [row])

    rec([], [list(range(n))], [])
    return tuple(best[0])


def _class_bfs(matrix, budget):
    """Shared BFS over canonical forms. Returns (members, finite) or raises."""
    start = canonical_form(matrix.b)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        n = len(cur)
        for i in range(n):
            for j in range(n):
                if abs(cur[i][j] * cur[j][i]) > 3:
                    return order, False
        em = ExchangeMatrix(cur)
        for k in range(n):
            child = canonical_form(em.mutate(k).b)
            if child not in seen:
                if len(seen) >= budget:
                    raise BudgetExceededError(
                        f"mutation-class enumeration exceeded budget of {budget} classes"
                    )
                seen.add(child)
                order.append(child)
                queue.append(child)
    return order, True


DEFAULT_CLASS_BUDGET = 100_000


def is_finite_type(matrix, budget=DEFAULT_CLASS_BUDGET):
    """2-finiteness test: every matrix in the mutation class has |b_ij * b_ji| <= 3.

    Enumerates the class with a visited set and rejects on the first
    violation.  Raises BudgetExceededError when the class outgrows the
    budget before being decided.
    """
    _, finite = _class_bfs(matrix, budget)
    return finite


class MatrixClassSet:
    """Mutation class of a finite-type matrix, one canonical representative per class."""

    __slots__ = ("representatives",)

    def __init__(self, representatives):
        self.representatives = tuple(representatives)

    def __len__(self):
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)

    def __contains__(self, matrix):
        key = matrix.canonical_form() if isinstance(matrix, ExchangeMatrix) else canonical_form(matrix)
        return any(rep.b == key for rep in self.representatives)

    def __eq__(self, other):
        return (
            isinstance(other, MatrixClassSet)
            and set(r.b for r in self.representatives) == set(r.b for r in other.representatives)
        )

    def __hash__(self):
        return hash(frozenset(r.b for r in self.representatives))


def mutation_classes(matrix, budget=DEFAULT_CLASS_BUDGET):
    """BFS closure of the matrix under mutation, deduplicated by canonical form.

    Equivalence is simultaneous permutation only (no global sign flip), so
    counts are reproducible; sign-flipped representatives merely repeat work
    downstream, they never change answers.
    """
    order, finite = _class_bfs(matrix, budget)
    if not finite:
        raise ValueError("mutation_classes requires a finite-type matrix")
    return MatrixClassSet(ExchangeMatrix(b) for b in order)
