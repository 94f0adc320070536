"""Fourier-Motzkin elimination, used in tests as a second opinion on the
simplex.  Exponential and exact; only sensible at rank <= 3."""

from fractions import Fraction


def fm_feasible(a_rows, l):
    """Feasibility of {A X >= 0, X >= 0, X_l >= 1} by variable elimination."""
    n = len(a_rows)
    ineqs = []  # (coeff tuple, rhs) meaning coeffs . X >= rhs
    for row in a_rows:
        ineqs.append((tuple(Fraction(x) for x in row), Fraction(0)))
    for i in range(n):
        e = tuple(Fraction(int(i == j)) for j in range(n))
        ineqs.append((e, Fraction(1) if i == l else Fraction(0)))

    for j in range(n):
        pos, neg, rest = [], [], []
        for coeffs, rhs in ineqs:
            if coeffs[j] > 0:
                pos.append((coeffs, rhs))
            elif coeffs[j] < 0:
                neg.append((coeffs, rhs))
            else:
                rest.append((coeffs, rhs))
        new = list(rest)
        for pc, pr in pos:
            for nc, nr in neg:
                a, b = pc[j], -nc[j]
                coeffs = tuple(b * x + a * y for x, y in zip(pc, nc))
                new.append((coeffs, b * pr + a * nr))
        # light redundancy pruning keeps the blowup in check
        seen = set()
        ineqs = []
        for coeffs, rhs in new:
            scale = None
            for x in coeffs + (rhs,):
                if x != 0:
                    scale = abs(x)
                    break
            if scale is None:
                if rhs > 0:
                    return False
                continue
            key = (tuple(x / scale for x in coeffs), rhs / scale)
            if key not in seen:
                seen.add(key)
                ineqs.append((coeffs, rhs))

    return all(rhs <= 0 for _, rhs in ineqs)
