"""Denominator-conjecture verification for a finite-type exchange matrix.

The algorithm follows the four steps: enumerate the mutation classes of the
input matrix, enumerate every D-matrix of a cluster pattern per class, check
every determinant (Case 1), then for every ordered pair of D-matrices in a
class decide rational feasibility of

    D_s^{-1} D_t X >= 0,   X >= 0,   X_l >= 1

for every l beyond the shared columns (Case 2).  A single feasible system or
a vanishing determinant is a counterexample; exhausting everything verifies
the conjecture for the cluster algebra of the input.

Rational feasibility suffices: the constraints cut a rational cone
intersected with X_l >= 1, so any rational point scales to an integer one.

The decision procedure is an exact phase-1 simplex over Fractions with
Bland's rule.  Because the pair count grows quadratically in the cluster
count, verify() first tries a sound shortcut per ordered pair: the
nonnegative row combination that sums the rows of D_s^{-1} D_t indexed by
the variables of s *not* shared with t is a Farkas certificate whenever it
is strictly negative on every non-shared column (it is identically zero on
shared columns).  Certificates are validated in exact integer arithmetic;
anything they leave open goes to the simplex, so the shortcut can never
flip an answer.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from .exmat import (
    DEFAULT_CLASS_BUDGET,
    BudgetExceededError,
    ExchangeMatrix,
    mutation_classes,
)
from .pattern import DEFAULT_SEED_BUDGET, DMatrix, EngineError, explore_dvectors

__all__ = [
    "FeasibilitySystem",
    "Report",
    "det",
    "inverse",
    "adjugate",
    "feasible",
    "feasible_witness",
    "shared_columns",
    "verify",
    "REPORT_SCHEMA_VERSION",
]

REPORT_SCHEMA_VERSION = 1

MUT_EQUIVALENCE_NOTE = (
    "Mut(B) equivalence is simultaneous row/column permutation only (no global "
    "sign flip); class counts are reproducible under that convention."
)


def _rows_of(m):
    if isinstance(m, DMatrix):
        return m.rows()
    return tuple(tuple(int(x) for x in row) for row in m)


def det(matrix):
    """Exact integer determinant by fraction-free Bareiss elimination."""
    a = [list(row) for row in _rows_of(matrix)]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def inverse(matrix):
    """Exact rational inverse as a tuple of row tuples of Fractions."""
    rows = _rows_of(matrix)
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def adjugate(matrix):
    """(adjugate, determinant) with integer entries; adj @ M == det * I."""
    rows = _rows_of(matrix)
    d = det(rows)
    if d == 0:
        raise ValueError("adjugate via inverse needs a nonsingular matrix")
    inv = inverse(rows)
    adj = []
    for row in inv:
        out = []
        for x in row:
            v = x * d
            if v.denominator != 1:
                raise AssertionError("adjugate entry not integral")
            out.append(int(v))
        adj.append(tuple(out))
    return tuple(adj), d


@dataclass(frozen=True)
class FeasibilitySystem:
    """The Case-2 system: A X >= 0, X >= 0, X_l >= 1, with r shared leading columns."""

    a: tuple  # tuple of row tuples, Fractions or ints
    l: int    # distinguished index, 0-based, r <= l < n
    r: int = 0

    def __post_init__(self):
        n = len(self.a)
        if any(len(row) != n for row in self.a):
            raise ValueError("A must be square")
        if not self.r <= self.l < n:
            raise ValueError("need r <= l < n")


def _phase1_simplex(a_rows, l):
    """Solve the feasibility problem exactly; return a solution vector or None.

    Minimizes one artificial variable over {A X - s = 0, X_l - u + art = 1,
    all variables nonnegative} with Bland's rule, so termination is
    guaranteed.  Optimum zero means the original system is feasible.
    """
    n = len(a_rows)
    # columns: x_0..x_{n-1} | s_0..s_{n-1} | u | art
    nx, ns = n, n
    ncols = nx + ns + 2
    art = ncols - 1
    u = ncols - 2
    zero = Fraction(0)
    one = Fraction(1)
    tab = []
    basis = []
    for i in range(n):
        # -A_i . X + s_i = 0  (so the slack starts basic at zero)
        row = [-Fraction(x) for x in a_rows[i]] + [zero] * (ns + 2) + [zero]
        row[nx + i] = one
        tab.append(row)
        basis.append(nx + i)
    row = [zero] * (ncols + 1)
    row[l] = one
    row[u] = -one
    row[art] = one
    row[-1] = one
    tab.append(row)
    basis.append(art)

    # reduced costs for min(art): c - c_B . B^{-1} A, basis cost only on art row
    z = [zero] * (ncols + 1)
    z[art] = one
    for j in range(ncols + 1):
        z[j] -= tab[n][j]
    # z[-1] now holds -objective

    while True:
        enter = -1
        for j in range(ncols):
            if z[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(n + 1):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise AssertionError("phase-1 objective is bounded; no unbounded ray exists")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(n + 1):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        if z[enter]:
            f = z[enter]
            z = [x - f * y for x, y in zip(z, tab[leave])]
        basis[leave] = enter

    if -z[-1] != 0:
        return None
    x = [zero] * nx
    for i, b in enumerate(basis):
        if b < nx:
            x[b] = tab[i][-1]
    return tuple(x)


def feasible(system):
    """True iff {A X >= 0, X >= 0, X_l >= 1} has a rational solution."""
    return _phase1_simplex(system.a, system.l) is not None


def feasible_witness(system):
    """A rational solution of the system, or None; scaled copies stay solutions."""
    return _phase1_simplex(system.a, system.l)


def integer_witness(solution):
    """Scale a rational solution to integers (the constraint cone is rational)."""
    denom = lcm(*(Fraction(x).denominator for x in solution)) if solution else 1
    return tuple(int(Fraction(x) * denom) for x in solution)


def shared_columns(ds, dt, pattern=None):
    """Column permutations moving the shared cluster variables to the front.

    Variables are matched by identity in the pattern registry, never by
    d-vector (that equality is the statement under test).  Returns
    (perm_s, perm_t, r): applying perm to the columns of the respective
    matrix lists the r shared variables first, in the same variable order
    on both sides, followed by the rest in original order.
    """
    if ds.cluster is None or dt.cluster is None:
        raise ValueError("shared_columns needs D-matrices that carry cluster ids")
    resolve = getattr(pattern, "resolve", None) if pattern is not None else None
    ids_s = [resolve(v) if resolve else v for v in ds.cluster]
    ids_t = [resolve(v) if resolve else v for v in dt.cluster]
    pos_t = {v: i for i, v in enumerate(ids_t)}
    perm_s = [i for i, v in enumerate(ids_s) if v in pos_t]
    perm_t = [pos_t[ids_s[i]] for i in perm_s]
    r = len(perm_s)
    perm_s += [i for i, v in enumerate(ids_s) if v not in pos_t]
    seen_t = set(perm_t)
    perm_t += [i for i in range(len(ids_t)) if i not in seen_t]
    return tuple(perm_s), tuple(perm_t), r


@dataclass
class Report:
    """Machine-readable verdict of one verification run."""

    input_matrix: list
    input_symmetrizer: list
    type_name: str | None
    num_classes: int
    clusters_per_class: list
    variables_per_class: list
    min_abs_determinant: int | None
    determinant_zero: list
    feasible_systems: list
    classes_checked: int
    verdict: str
    pair_stats: dict
    notes: list = field(default_factory=lambda: [MUT_EQUIVALENCE_NOTE])
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "input_matrix": self.input_matrix,
            "input_symmetrizer": self.input_symmetrizer,
            "type": self.type_name,
            "num_classes": self.num_classes,
            "clusters_per_class": self.clusters_per_class,
            "variables_per_class": self.variables_per_class,
            "min_abs_determinant": self.min_abs_determinant,
            "determinant_zero": self.determinant_zero,
            "feasible_systems": self.feasible_systems,
            "classes_checked": self.classes_checked,
            "verdict": self.verdict,
            "pair_stats": self.pair_stats,
            "notes": self.notes,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _check_class(rep, seed_budget, stats):
    """Run steps 2-4 for one mutation-class representative.

    Returns (cluster_count, variable_count, min_abs_det, det_zero, feasible_list).
    """
    pat = explore_dvectors(rep, budget=seed_budget)
    seeds = pat.resolved_seeds()
    s = len(seeds)
    n = rep.n

    d_np = np.empty((s, n, n), dtype=np.int64)
    adj_np = np.empty((s, n, n), dtype=np.int64)
    sign_np = np.empty(s, dtype=np.int64)
    tok_np = np.empty((s, n), dtype=np.int64)
    dets = []
    min_abs = None
    det_zero = []
    for j, (toks, dmat) in enumerate(seeds):
        rows = dmat.rows()
        dj = det(rows)
        if dj == 0:
            det_zero.append({"cluster": j, "kernel": _kernel_vector(rows)})
            min_abs = 0
            continue
        if min_abs is None or abs(dj) < min_abs:
            min_abs = abs(dj)
        adj, _ = adjugate(rows)
        d_np[j] = rows
        adj_np[j] = adj
        sign_np[j] = 1 if dj > 0 else -1
        tok_np[j] = toks
        dets.append(dj)
    if det_zero:
        return s, pat.num_variables, 0, det_zero, []

    # entries of sign*adj(D_k) @ D_j are bounded by n * (n-1)! * max|D|^n;
    # keep everything far inside int64
    max_entry = int(np.abs(d_np).max())
    bound = n * _factorial(n - 1) * max(max_entry, 1) ** n
    if bound >= 2 ** 62:
        raise EngineError("adjugate products would overflow int64")

    feas = []
    for k in range(s):
        m_sig = sign_np[k] * np.matmul(adj_np[k], d_np)          # (s, n, n)
        eq = tok_np[:, :, None] == tok_np[k][None, None, :]       # (s, n_j, n_k)
        shared_col = eq.any(axis=2)
        nonshared_row = ~eq.any(axis=1)
        sums = np.einsum("ji,jic->jc", nonshared_row.astype(np.int64), m_sig)
        if not np.all(sums[shared_col] == 0):
            raise EngineError("shared columns must vanish under the row certificate")
        nonshared_col = ~shared_col
        stats["column_tests"] += int(np.count_nonzero(nonshared_col))
        pair_invalid = ((sums > 0) & nonshared_col).any(axis=1)
        # columns not settled by the summed-row certificate
        open_cols = nonshared_col & (pair_invalid[:, None] | (sums >= 0))
        # second vectorized pass: any single nonshared nonpositive row
        # certifies the columns where it is strictly negative
        row_ok = nonshared_row & ~(m_sig > 0).any(axis=2)
        covered = ((m_sig < 0) & row_ok[:, :, None]).any(axis=1)
        open_cols &= ~covered
        stats["certified"] += int(np.count_nonzero(nonshared_col & ~open_cols))
        for j in np.nonzero(open_cols.any(axis=1))[0]:
            if j == k:
                continue
            remaining = set(np.nonzero(open_cols[j])[0].tolist())
            rows_jk = [tuple(int(x) for x in m_sig[j][i]) for i in range(n)]
            # implied inequalities compound inside the fixpoint: the
            # nonshared row sum plus all two-row sums crack almost every
            # pair the vectorized passes leave open
            ns_rows = [i for i in range(n) if nonshared_row[j][i]]
            family = list(rows_jk)
            family.append(tuple(sum(rows_jk[i][c] for i in ns_rows) for c in range(n)))
            for i1 in range(n):
                for i2 in range(i1 + 1, n):
                    family.append(
                        tuple(a + b for a, b in zip(rows_jk[i1], rows_jk[i2]))
                    )
            alive = _support_fixpoint(family)
            stats["presolved"] += len(remaining - alive)
            remaining &= alive
            if not remaining:
                continue
            denom = Fraction(abs(dets[k]))
            a_rows = tuple(
                tuple(Fraction(x) / denom for x in row) for row in rows_jk
            )
            r = int(np.count_nonzero(shared_col[j]))
            for l in sorted(remaining):
                stats["simplex"] += 1
                sol = _phase1_simplex(a_rows, int(l))
                if sol is not None:
                    feas.append(
                        {
                            "clusters": [int(j), int(k)],
                            "column": int(l),
                            "r": r,
                            "witness": list(integer_witness(sol)),
                        }
                    )
    return s, pat.num_variables, min_abs, det_zero, feas


def _support_fixpoint(rows):
    """Columns of {M X >= 0, X >= 0} not provably zero by iterated elimination.

    A row that is nonpositive on every still-alive column forces each of its
    strictly negative alive columns to zero; iterating to a fixpoint yields
    a superset of the cone's support, and every elimination is a valid
    Farkas argument, so columns removed here are certified infeasible.
    """
    ncols = len(rows[0])
    alive = list(range(ncols))
    changed = True
    while changed and alive:
        changed = False
        for row in rows:
            pos = neg = False
            for c in alive:
                if row[c] > 0:
                    pos = True
                    break
                if row[c] < 0:
                    neg = True
            if pos or not neg:
                continue
            alive = [c for c in alive if row[c] >= 0]
            changed = True
    return set(alive)


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _kernel_vector(rows):
    """An integer kernel vector of a singular integer matrix."""
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    # row-reduce, track pivots
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    free = next(c for c in range(n) if c not in piv_cols)
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for i, c in enumerate(piv_cols):
        v[c] = -a[i][free]
    return list(integer_witness(v))


def _run_class_job(args):
    """Module-level worker so ProcessPoolExecutor can pickle it."""
    idx, b_rows, seed_budget = args
    stats = {"certified": 0, "presolved": 0, "simplex": 0, "column_tests": 0}
    out = _check_class(ExchangeMatrix(b_rows), seed_budget, stats)
    return idx, out, stats


def verify(
    matrix,
    *,
    type_name=None,
    seed_budget=DEFAULT_SEED_BUDGET,
    class_budget=None,
    max_classes=None,
    max_seconds=None,
    checkpoint=None,
    resume=False,
    jobs=1,
    progress=None,
):
    """Run the full verification and return a Report.

    ``max_classes``/``max_seconds`` stop the run early with verdict
    "budget-exceeded"; ``checkpoint`` names a JSON file updated after every
    completed class (and consumed by ``resume=True``), so long exceptional
    runs survive interruption.  ``jobs > 1`` distributes classes over a
    process pool; results are merged in class order, so reports do not
    depend on scheduling.
    """
    t0 = time.monotonic()
    classes = mutation_classes(matrix, budget=class_budget or DEFAULT_CLASS_BUDGET)
    m = len(classes)

    done = {}
    if resume and checkpoint:
        try:
            with open(checkpoint) as fh:
                saved = json.load(fh)
            if saved.get("input_matrix") == [list(r) for r in matrix.b]:
                done = {int(k): v for k, v in saved.get("classes", {}).items()}
        except (OSError, ValueError):
            done = {}

    stats = {"certified": 0, "presolved": 0, "simplex": 0, "column_tests": 0}
    clusters_per_class = []
    variables_per_class = []
    det_zero = []
    feas = []
    min_abs = None
    checked = 0
    budget_hit = False

    def out_of_budget():
        if max_classes is not None and checked >= max_classes + len(done):
            return True
        return max_seconds is not None and time.monotonic() - t0 > max_seconds

    pool = None
    futures = {}
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        pool = ProcessPoolExecutor(max_workers=jobs)
        for idx, rep in enumerate(classes):
            if idx not in done:
                futures[idx] = pool.submit(_run_class_job, (idx, rep.b, seed_budget))

    ckpt_classes = {str(k): v for k, v in done.items()}
    try:
        for idx, rep in enumerate(classes):
            if idx in done:
                s, nv, mad, dz, fe = done[idx]
                local_stats = None
            else:
                if out_of_budget():
                    budget_hit = True
                    break
                if pool is not None:
                    _, out, local_stats = futures[idx].result()
                else:
                    local_stats = {"certified": 0, "presolved": 0, "simplex": 0, "column_tests": 0}
                    out = _check_class(rep, seed_budget, local_stats)
                s, nv, mad, dz, fe = out
            clusters_per_class.append(s)
            variables_per_class.append(nv)
            if mad is not None:
                min_abs = mad if min_abs is None else min(min_abs, mad)
            for item in dz:
                det_zero.append({"class": idx, **item})
            for item in fe:
                feas.append({"class": idx, **item})
            if local_stats:
                for key, val in local_stats.items():
                    stats[key] = stats.get(key, 0) + val
            checked += 1
            if progress is not None:
                progress(idx, m, s)
            if checkpoint:
                ckpt_classes[str(idx)] = [s, nv, mad, dz, fe]
                _write_checkpoint(checkpoint, matrix, type_name, m, ckpt_classes)
            if det_zero or feas:
                break  # counterexample: no need to continue
    finally:
        if pool is not None:
            pool.shutdown(wait=False, cancel_futures=True)

    if det_zero or feas:
        verdict = "counterexample"
    elif budget_hit or checked < m:
        verdict = "budget-exceeded"
    else:
        verdict = "verified"

    return Report(
        input_matrix=[list(r) for r in matrix.b],
        input_symmetrizer=list(matrix.symmetrizer),
        type_name=type_name,
        num_classes=m,
        clusters_per_class=clusters_per_class,
        variables_per_class=variables_per_class,
        min_abs_determinant=min_abs,
        determinant_zero=det_zero,
        feasible_systems=feas,
        classes_checked=checked,
        verdict=verdict,
        pair_stats=stats,
    )


def _write_checkpoint(path, matrix, type_name, num_classes, classes):
    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "input_matrix": [list(r) for r in matrix.b],
        "type": type_name,
        "num_classes": num_classes,
        "classes": classes,
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
    import os

    os.replace(tmp, path)
