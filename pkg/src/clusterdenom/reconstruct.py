"""Brute-force harnesses for the structural theorems.

Two claims get direct exhaustive confirmation at desk scale:

* intersection vectors are injective on multisets of pairwise compatible
  admissible tagged arcs (collision search over an enumerated domain);
* the arc <-> cluster-variable correspondence carries intersection vectors
  to denominator vectors (a synchronized walk that flips a triangulation
  and mutates a seed in lockstep, comparing vectors at every step).

The synchronized walk bootstraps its initial exchange matrix: the fan
triangulation determines the diagram shape, and the orientation is fixed by
demanding zero mismatches on the first level of flips before anything
deeper is trusted.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field

from .exmat import ExchangeMatrix
from .laurent import LaurentPolynomial
from .pattern import explore
from . import punctured_disc as disc

__all__ = [
    "InjectivityReport",
    "CorrespondenceTable",
    "SyncError",
    "enumerate_multisets",
    "injectivity_check",
    "fst_crosscheck",
    "fan_triangulation",
]


class SyncError(RuntimeError):
    """Flip and mutation disagreed; wrong pairing or a crossing-rule bug."""


def enumerate_multisets(n, bound, arcs=None):
    """All multisets of pairwise compatible admissible tagged arcs with
    total multiplicity <= bound, the empty multiset included.

    The domain deliberately allows multisets meeting a triangulation and
    conjugate pairs: the uniqueness theorem is stated for all of them.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if arcs is None:
        arcs = disc.all_tagged_arcs(n)
    out = []

    def extend(start, current, remaining):
        out.append(Counter(current))
        if remaining == 0:
            return
        for i in range(start, len(arcs)):
            arc = arcs[i]
            if all(disc._compatible_ext(arc, other, n) for other in current):
                for mult in range(1, remaining + 1):
                    extend(i + 1, current + [arc] * mult, remaining - mult)

    extend(0, [], bound)
    # deduplicate (same support, different multiplicity splits never repeat,
    # but keep the invariant explicit)
    seen = {}
    for m in out:
        seen[tuple(sorted(m.items()))] = m
    return list(seen.values())


def bound2_regression_count():
    """Frozen size of the n=4, total-multiplicity-2 domain (first-run value)."""
    return 99


@dataclass
class InjectivityReport:
    n: int
    bound: int
    triangulations_tested: int
    multisets_enumerated: int
    collisions: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.collisions

    def to_dict(self):
        return {
            "n": self.n,
            "bound": self.bound,
            "triangulations_tested": self.triangulations_tested,
            "multisets_enumerated": self.multisets_enumerated,
            "collisions": [
                {
                    "triangulation": [disc.arc_to_dict(a) for a in t],
                    "vector": list(v),
                    "multisets": [sorted(map(repr, m.elements())) for m in (m1, m2)],
                }
                for t, v, m1, m2 in self.collisions
            ],
            "ok": self.ok,
        }


def injectivity_check(n, bound, triangulation_sample="all", seed=0):
    """Group the enumerated multisets by intersection vector per triangulation.

    ``triangulation_sample`` is "all" or an integer count drawn with a fixed
    seed.  Any two distinct multisets sharing a vector are reported; the
    theorem says the list stays empty.
    """
    tris = list(disc.tagged_triangulations(n))
    if triangulation_sample != "all":
        rng = random.Random(seed)
        tris = rng.sample(tris, min(int(triangulation_sample), len(tris)))
    multisets = enumerate_multisets(n, bound)
    report = InjectivityReport(
        n=n,
        bound=bound,
        triangulations_tested=len(tris),
        multisets_enumerated=len(multisets),
    )
    for t in tris:
        groups = {}
        for m in multisets:
            vec = disc.intersection_vector(t, m, n)
            other = groups.get(vec)
            if other is None:
                groups[vec] = m
            elif other != m:
                report.collisions.append((t, vec, other, m))
    return report


def fan_triangulation(n):
    """Chords fanning out of vertex 0 plus the conjugate radius pair at 0."""
    arcs = [disc.chord(0, j) for j in range(2, n)]
    arcs.append(disc.radius(0, disc.PLAIN))
    arcs.append(disc.radius(0, disc.NOTCHED))
    return tuple(arcs)


def _fan_candidate_matrices(n):
    """Orientations of the D_n diagram matching the fan's adjacency."""
    edges = [(i, i + 1) for i in range(n - 3)] + [(n - 3, n - 2), (n - 3, n - 1)]
    for signs in itertools.product((1, -1), repeat=len(edges)):
        b = [[0] * n for _ in range(n)]
        for (i, j), s in zip(edges, signs):
            b[i][j] = s
            b[j][i] = -s
        yield ExchangeMatrix(b)


@dataclass
class CorrespondenceTable:
    n: int
    matrix: ExchangeMatrix
    triangulation: tuple
    pairs: dict               # TaggedArc -> variable id
    vectors: dict             # TaggedArc -> (intersection vector, d-vector)
    multisets_checked: int = 0

    @property
    def ok(self):
        return all(iv == dv for iv, dv in self.vectors.values())

    def to_dict(self):
        return {
            "n": self.n,
            "pairs": len(self.pairs),
            "multisets_checked": self.multisets_checked,
            "ok": self.ok,
        }


def _level_one_matches(matrix, t0, n):
    """Every first-level flip agrees with the corresponding mutation."""
    cluster = [LaurentPolynomial.variable(i, n) for i in range(n)]
    from .laurent import exchange_step

    for k in range(n):
        new_arc = disc.flip(t0, k, n)[k]
        iv = disc.intersection_vector(t0, [new_arc], n)
        dv = exchange_step(cluster, matrix, k).denom_vector()
        if iv != dv:
            return False
    return True


def fst_crosscheck(n, multiset_samples=200, multiset_bound=3, seed=0):
    """Synchronized BFS pairing tagged arcs with cluster variables.

    Starts from the fan triangulation and the matching bipartite-free
    orientation of the diagram (chosen by the level-one test), walks flips
    and mutations together, and demands that every arc's intersection
    vector equal its variable's denominator vector.  A sample of compatible
    multisets is then checked through the product monomial.
    """
    t0 = fan_triangulation(n)
    matrix = None
    for candidate in _fan_candidate_matrices(n):
        if _level_one_matches(candidate, t0, n):
            matrix = candidate
            break
    if matrix is None:
        raise SyncError("no diagram orientation matches the fan triangulation")

    pattern = explore(matrix)
    # synchronized walk over the already-explored pattern: seeds are keyed by
    # unordered clusters, so walk the exchange graph once more with arcs
    table = {}       # variable id -> TaggedArc
    start_seed = pattern.seeds[frozenset(range(n))]
    state_key = lambda t: frozenset(t)
    seen = {state_key(t0)}
    queue = [(t0, start_seed)]
    while queue:
        tri, seed = queue.pop()
        for pos, arc in enumerate(tri):
            vid = seed.cluster[pos]
            if table.setdefault(vid, arc) != arc:
                raise SyncError("one variable paired with two arcs")
        for k in range(n):
            tri2 = disc.flip(tri, k, n)
            new_cluster = _mutated_cluster(pattern, seed, k)
            mutated = pattern.seeds.get(frozenset(new_cluster))
            if mutated is None:
                raise SyncError("mutation left the explored pattern")
            key = state_key(tri2)
            if key not in seen:
                seen.add(key)
                queue.append((tri2, _reordered_seed(mutated, new_cluster)))
    if len(seen) != pattern.num_clusters:
        raise SyncError("flip graph and exchange graph have different sizes")

    vectors = {}
    for vid, arc in table.items():
        iv = disc.intersection_vector(t0, [arc], n)
        dv = pattern.dvector(vid)
        vectors[arc] = (iv, dv)
        if iv != dv:
            raise SyncError(f"vector mismatch for {arc}: {iv} != {dv}")
    if len(table) != pattern.num_variables:
        raise SyncError("correspondence is not total on variables")

    out = CorrespondenceTable(
        n=n,
        matrix=matrix,
        triangulation=t0,
        pairs={arc: vid for vid, arc in table.items()},
        vectors=vectors,
    )

    # multiset extension: product monomial versus summed intersection vector
    rng = random.Random(seed)
    arcs = disc.all_tagged_arcs(n)
    pool = enumerate_multisets(n, multiset_bound, arcs=arcs)
    pool = [m for m in pool if m]
    samples = pool if len(pool) <= multiset_samples else rng.sample(pool, multiset_samples)
    for m in samples:
        product = LaurentPolynomial.one(n)
        for arc, mult in m.items():
            vid = out.pairs[arc]
            product = product * pattern.registry[vid].pow(mult)
        if product.denom_vector() != disc.intersection_vector(t0, m, n):
            raise SyncError(f"multiset vector mismatch for {dict(m)}")
    out.multisets_checked = len(samples)
    return out


def _mutated_cluster(pattern, seed, k):
    from .laurent import exchange_step

    polys = [pattern.registry[v] for v in seed.cluster]
    new_poly = exchange_step(polys, seed.matrix, k)
    before = pattern.num_variables
    vid = pattern.register(new_poly)
    if pattern.num_variables != before:
        raise SyncError("synchronized walk produced a variable outside the pattern")
    return seed.cluster[:k] + (vid,) + seed.cluster[k + 1:]


def _reordered_seed(stored_seed, cluster):
    """The stored seed with its columns permuted to match the walk's order."""
    from .pattern import Seed

    perm = [stored_seed.cluster.index(v) for v in cluster]
    matrix = stored_seed.matrix.permuted(perm)
    return Seed(matrix, cluster)
