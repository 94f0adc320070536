"""Exhaustive exploration of finite-type cluster patterns.

Two engines compute the same D-matrices:

* ``explore`` is the ground truth.  It runs the exchange relation in exact
  Laurent arithmetic, registers every cluster variable by its canonical
  polynomial (never by d-vector, whose injectivity is the statement under
  test), and deduplicates seeds by their unordered variable sets.

* ``explore_dvectors`` is the fast engine used for the heavy exceptional
  runs.  It propagates denominator vectors with the componentwise-max
  recurrence and tracks c-vectors so seeds can be deduplicated without
  touching polynomials.  It is only trusted because the test suite checks
  full agreement with the Laurent engine on A3, D4 and F4, and it asserts
  internal consistency (every variable keeps one d-vector no matter which
  mutation path produced it).
"""

from __future__ import annotations

from collections import deque

from .exmat import BudgetExceededError, ExchangeMatrix
from .laurent import LaurentPolynomial, exchange_step

__all__ = [
    "ClusterPattern",
    "DMatrix",
    "DVectorPattern",
    "EngineError",
    "Seed",
    "dmatrices",
    "dvector_mutation",
    "explore",
    "explore_dvectors",
]

DEFAULT_SEED_BUDGET = 2_000_000


class EngineError(RuntimeError):
    """An internal invariant of the exploration engines failed."""


class Seed:
    """A seed: exchange matrix plus ordered cluster of variable ids."""

    __slots__ = ("matrix", "cluster")

    def __init__(self, matrix, cluster):
        self.matrix = matrix
        self.cluster = tuple(cluster)

    def key(self):
        return frozenset(self.cluster)

    def __repr__(self):
        return f"Seed(cluster={self.cluster})"


class DMatrix:
    """Integer matrix whose k-th column is the d-vector of the cluster's k-th variable."""

    __slots__ = ("columns", "cluster")

    def __init__(self, columns, cluster=None):
        self.columns = tuple(tuple(col) for col in columns)
        self.cluster = tuple(cluster) if cluster is not None else None

    @property
    def n(self):
        return len(self.columns)

    def rows(self):
        n = self.n
        return tuple(tuple(self.columns[j][i] for j in range(n)) for i in range(n))

    def column(self, k):
        return self.columns[k]

    def sorted_columns(self):
        """Column multiset, order-independent form for cross-engine comparison."""
        return tuple(sorted(self.columns))

    def __eq__(self, other):
        return isinstance(other, DMatrix) and self.columns == other.columns

    def __hash__(self):
        return hash(self.columns)

    def __repr__(self):
        return f"DMatrix(columns={self.columns})"


def initial_dmatrix(n):
    """The initial cluster's D-matrix: minus the identity."""
    return DMatrix(
        tuple(tuple(-1 if i == j else 0 for i in range(n)) for j in range(n)),
        cluster=tuple(range(n)),
    )


class ClusterPattern:
    """Result of a Laurent-engine exploration."""

    def __init__(self, initial_matrix):
        n = initial_matrix.n
        self.n = n
        self.initial_matrix = initial_matrix
        self.registry = []          # variable id -> LaurentPolynomial
        self._poly_ids = {}         # canonical text -> variable id
        self.seeds = {}             # frozenset of ids -> Seed, in BFS discovery order
        self.exchange_edges = []    # (seed key, seed key, direction)

    def register(self, poly):
        key = poly.serialize()
        vid = self._poly_ids.get(key)
        if vid is None:
            if not poly.has_positive_coefficients():
                raise EngineError(
                    "cluster variable with a non-positive coefficient: "
                    "arithmetic bug in the exchange engine"
                )
            vid = len(self.registry)
            self.registry.append(poly)
            self._poly_ids[key] = vid
        return vid

    @property
    def num_variables(self):
        return len(self.registry)

    @property
    def num_clusters(self):
        return len(self.seeds)

    def seed_list(self):
        return list(self.seeds.values())

    def dvector(self, vid):
        return self.registry[vid].denom_vector()

    def dmatrix(self, seed):
        return DMatrix([self.dvector(v) for v in seed.cluster], cluster=seed.cluster)


def _assert_seed_consistent(stored, candidate):
    """Two seeds with the same unordered cluster must agree up to permutation."""
    order_a = sorted(range(len(stored.cluster)), key=lambda i: stored.cluster[i])
    order_b = sorted(range(len(candidate.cluster)), key=lambda i: candidate.cluster[i])
    pa = stored.matrix.permuted(order_a)
    pb = candidate.matrix.permuted(order_b)
    if pa.b != pb.b:
        raise EngineError(
            "seed dedup unsound: equal clusters with non-permutation-equivalent matrices"
        )


def explore(matrix, budget=DEFAULT_SEED_BUDGET):
    """BFS closure of the initial seed under all mutations, Laurent ground truth.

    Seeds are deduplicated by unordered cluster; the finite-type property
    that a cluster determines its seed is guarded by an explicit
    permutation-equivalence check on every collision.
    """
    n = matrix.n
    pattern = ClusterPattern(matrix)
    initial = Seed(matrix, [pattern.register(LaurentPolynomial.variable(i, n)) for i in range(n)])
    pattern.seeds[initial.key()] = initial
    queue = deque([initial])
    # reverse exchange edges: mutating the target seed at k returns the replaced variable
    back = {}
    while queue:
        seed = queue.popleft()
        skey = seed.key()
        polys = None
        for k in range(n):
            vid = back.get((skey, k))
            if vid is None:
                if polys is None:
                    polys = [pattern.registry[v] for v in seed.cluster]
                vid = pattern.register(exchange_step(polys, seed.matrix, k))
            child = Seed(seed.matrix.mutate(k), seed.cluster[:k] + (vid,) + seed.cluster[k + 1:])
            ckey = child.key()
            pattern.exchange_edges.append((skey, ckey, k))
            stored = pattern.seeds.get(ckey)
            if stored is not None:
                _assert_seed_consistent(stored, child)
                continue
            if len(pattern.seeds) >= budget:
                raise BudgetExceededError(f"seed enumeration exceeded budget of {budget}")
            pattern.seeds[ckey] = child
            back[(ckey, k)] = seed.cluster[k]
            queue.append(child)
    return pattern


def dmatrices(pattern):
    """One D-matrix per cluster, in BFS discovery order."""
    return [pattern.dmatrix(seed) for seed in pattern.seeds.values()]


def dvector_mutation(dmat, matrix, k):
    """Fast candidate for the mutated D-matrix.

    Column k becomes -d_k + max(sum_j [b_jk]+ d_j, sum_j [-b_jk]+ d_j)
    componentwise; all other columns are kept.  Must equal the
    Laurent-derived D-matrix wherever both are computed.
    """
    n = dmat.n
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range")
    cols = list(dmat.columns)
    pos = [0] * n
    neg = [0] * n
    for j in range(n):
        bjk = matrix.b[j][k]
        if bjk > 0:
            for i in range(n):
                pos[i] += bjk * cols[j][i]
        elif bjk < 0:
            for i in range(n):
                neg[i] -= bjk * cols[j][i]
    old = cols[k]
    cols[k] = tuple(max(p, q) - d for p, q, d in zip(pos, neg, old))
    return DMatrix(cols, cluster=None)


class DVectorPattern:
    """Result of a recurrence-engine exploration.

    ``seeds`` holds (cluster tokens, D-matrix) per distinct cluster; tokens
    are opaque variable identities propagated along mutations, usable for
    shared-column matching exactly like registry ids.  Tokens minted on
    different mutation paths are merged by union-find when the paths meet,
    so callers should compare tokens through :meth:`resolve`.
    """

    def __init__(self, initial_matrix):
        self.n = initial_matrix.n
        self.initial_matrix = initial_matrix
        self.seeds = []              # list of (tokens tuple, DMatrix)
        self._parent = []            # union-find over minted tokens
        self._token_d = []           # d-vector per minted token

    def _mint(self, dvec):
        tok = len(self._parent)
        self._parent.append(tok)
        self._token_d.append(dvec)
        return tok

    def resolve(self, tok):
        root = tok
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[tok] != root:
            self._parent[tok], tok = root, self._parent[tok]
        return root

    def _union(self, a, b):
        ra, rb = self.resolve(a), self.resolve(b)
        if ra == rb:
            return
        if self._token_d[ra] != self._token_d[rb]:
            raise EngineError("recurrence inconsistency: one variable, two d-vectors")
        self._parent[rb] = ra

    @property
    def num_clusters(self):
        return len(self.seeds)

    @property
    def num_variables(self):
        return len({self.resolve(t) for t in range(len(self._parent))})

    def resolved_seeds(self):
        """(tokens, DMatrix) pairs with tokens replaced by their union-find roots."""
        return [
            (tuple(self.resolve(t) for t in toks), d) for toks, d in self.seeds
        ]

    def dmatrices(self):
        return [d for _, d in self.seeds]


def _cmatrix_mutate(cols, matrix, k):
    """Mutate the C-matrix held as a tuple of column tuples, using sign coherence."""
    n = len(cols)
    ck = cols[k]
    pos = any(x > 0 for x in ck)
    neg = any(x < 0 for x in ck)
    if pos and neg:
        raise EngineError("sign-coherence violated in c-vector mutation")
    eps = 1 if pos else -1
    new = list(cols)
    new[k] = tuple(-x for x in ck)
    for j in range(n):
        if j == k:
            continue
        coef = max(eps * matrix.b[k][j], 0)
        if coef:
            new[j] = tuple(a + coef * b for a, b in zip(cols[j], ck))
    return tuple(new)


def explore_dvectors(matrix, budget=DEFAULT_SEED_BUDGET, progress=None):
    """Enumerate all clusters and their D-matrices with the validated recurrence.

    Seeds are deduplicated by their c-vector sets (distinct within a seed
    because the C-matrix is unimodular), which avoids the circularity of
    keying anything on d-vectors.  Every time two mutation paths meet, the
    aligned d-vectors and exchange matrices are checked for agreement.
    """
    n = matrix.n
    pattern = DVectorPattern(matrix)
    ident = tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n))
    d0 = initial_dmatrix(n)
    tokens0 = tuple(pattern._mint(d0.columns[i]) for i in range(n))

    def ckey(cols):
        return tuple(sorted(cols))

    # state per seed: (matrix, cvec columns, d columns, tokens)
    start = (matrix, ident, d0.columns, tokens0)
    index = {ckey(ident): 0}
    pattern.seeds.append((tokens0, DMatrix(d0.columns, cluster=tokens0)))
    states = [start]
    queue = deque([0])
    processed = 0
    while queue:
        si = queue.popleft()
        mat, cc, dd, toks = states[si]
        processed += 1
        if progress is not None and processed % 2048 == 0:
            progress(processed, len(states))
        for k in range(n):
            new_c = _cmatrix_mutate(cc, mat, k)
            key = ckey(new_c)
            new_d = dvector_mutation(DMatrix(dd), mat, k).columns
            existing = index.get(key)
            if existing is not None:
                _, ecc, edd, etoks = states[existing]
                # align our columns onto the stored seed via the c-vectors
                lookup = {c: i for i, c in enumerate(ecc)}
                for pos in range(n):
                    epos = lookup.get(new_c[pos])
                    if epos is None:
                        raise EngineError("c-vector key collision without column match")
                    if new_d[pos] != edd[epos]:
                        raise EngineError(
                            "recurrence inconsistency: one cluster, two d-vectors"
                        )
                    if pos != k:
                        # same variable reached along two paths
                        pattern._union(toks[pos], etoks[epos])
                continue
            if len(states) >= budget:
                raise BudgetExceededError(f"seed enumeration exceeded budget of {budget}")
            new_toks = list(toks)
            new_toks[k] = pattern._mint(new_d[k])
            new_mat = mat.mutate(k)
            new_state = (new_mat, new_c, new_d, tuple(new_toks))
            index[key] = len(states)
            states.append(new_state)
            pattern.seeds.append((new_state[3], DMatrix(new_d, cluster=new_state[3])))
            queue.append(len(states) - 1)
    return pattern
