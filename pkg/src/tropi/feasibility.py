"""Exact rational linear feasibility.

Two independent decision procedures over `fractions.Fraction`:

* Fourier-Motzkin elimination, which also back-substitutes a witness point;
* a phase-one simplex with Bland's rule, used as a cross-checking oracle.

Systems mix equalities and non-strict inequalities over free variables.
Callers encode strict inequalities themselves (homogeneous systems replace
`> 0` by `>= 1`, which is exact for convex cones).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from .linalg import QVector, vec_dot

Row = tuple[tuple[Fraction, ...], Fraction]


def _row(coeffs: Sequence, rhs) -> Row:
    return tuple(Fraction(c) for c in coeffs), Fraction(rhs)


@dataclass
class LinearSystem:
    """Constraints coeffs . x = rhs (eqs) and coeffs . x >= rhs (ineqs)."""

    n_vars: int
    eqs: list[Row] = field(default_factory=list)
    ineqs: list[Row] = field(default_factory=list)

    def add_eq(self, coeffs: Sequence, rhs=0) -> None:
        c, r = _row(coeffs, rhs)
        if len(c) != self.n_vars:
            raise ValueError("constraint length does not match variable count")
        self.eqs.append((c, r))

    def add_ge(self, coeffs: Sequence, rhs=0) -> None:
        c, r = _row(coeffs, rhs)
        if len(c) != self.n_vars:
            raise ValueError("constraint length does not match variable count")
        self.ineqs.append((c, r))

    def satisfied_by(self, x: Sequence) -> bool:
        return all(vec_dot(c, x) == r for c, r in self.eqs) and all(
            vec_dot(c, x) >= r for c, r in self.ineqs
        )


def _normalize(row: Row) -> Row:
    """Scale to integer entries with gcd 1, keeping inequality direction."""
    coeffs, rhs = row
    denom = 1
    for x in (*coeffs, rhs):
        denom = lcm(denom, x.denominator)
    ints = [int(x * denom) for x in coeffs] + [int(rhs * denom)]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints[:-1]), Fraction(ints[-1])


def fm_feasible(system: LinearSystem) -> Optional[QVector]:
    """Decide feasibility by Fourier-Motzkin; return a witness or None.

    Equalities are eliminated first by substitution, then the remaining
    inequalities are projected one variable at a time.  The witness is
    recovered by walking the elimination stack backwards.
    """
    n = system.n_vars
    ineqs = [(list(c), r) for c, r in system.ineqs]
    eqs = [(list(c), r) for c, r in system.eqs]

    # use each equality to solve for one variable and substitute everywhere
    subs: list[tuple[int, list[Fraction], Fraction]] = []
    for _ in range(len(eqs)):
        if not eqs:
            break
        coeffs, rhs = eqs.pop()
        piv = next((j for j in range(n) if coeffs[j] != 0), None)
        if piv is None:
            if rhs != 0:
                return None
            continue
        pv = coeffs[piv]
        expr = [-c / pv for c in coeffs]
        expr[piv] = Fraction(0)
        const = rhs / pv
        # x[piv] = expr . x + const
        def apply(row):
            c, r = row
            f = c[piv]
            if f == 0:
                return row
            nc = [a + f * e for a, e in zip(c, expr)]
            nc[piv] = Fraction(0)
            return nc, r - f * const

        eqs = [apply(row) for row in eqs]
        ineqs = [apply(row) for row in ineqs]
        subs.append((piv, expr, const))

    # eliminate remaining variables from the inequalities
    live = [j for j in range(n) if any(c[j] != 0 for c, _ in ineqs)]
    cons = {_normalize((tuple(c), r)) for c, r in ineqs}
    stack: list[tuple[int, list[Row], list[Row]]] = []
    while live:
        # cheapest variable first keeps the blowup down
        var = min(
            live,
            key=lambda j: sum(1 for c, _ in cons if c[j] > 0)
            * sum(1 for c, _ in cons if c[j] < 0),
        )
        lowers = [(c, r) for c, r in cons if c[var] > 0]
        uppers = [(c, r) for c, r in cons if c[var] < 0]
        keeps = {(c, r) for c, r in cons if c[var] == 0}
        stack.append((var, lowers, uppers))
        for lc, lr in lowers:
            for uc, ur in uppers:
                # combine so the var cancels; direction stays >=
                a, b = lc[var], -uc[var]
                nc = tuple(b * x + a * y for x, y in zip(lc, uc))
                keeps.add(_normalize((nc, b * lr + a * ur)))
        cons = keeps
        live = [j for j in live if j != var and any(c[j] != 0 for c, _ in cons)]

    for c, r in cons:
        if r > 0:  # 0 >= r with r > 0
            return None

    # back-substitute a witness
    x: list[Fraction] = [Fraction(0)] * n
    for var, lowers, uppers in reversed(stack):
        lo = None
        for c, r in lowers:
            bound = (r - sum(c[j] * x[j] for j in range(n) if j != var)) / c[var]
            lo = bound if lo is None else max(lo, bound)
        hi = None
        for c, r in uppers:
            bound = (r - sum(c[j] * x[j] for j in range(n) if j != var)) / c[var]
            hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            x[var] = (lo + hi) / 2
        elif lo is not None:
            x[var] = lo
        elif hi is not None:
            x[var] = hi
    for piv, expr, const in reversed(subs):
        x[piv] = sum(e * v for e, v in zip(expr, x)) + const

    witness = tuple(x)
    assert system.satisfied_by(witness)
    return witness


def simplex_feasible(system: LinearSystem) -> bool:
    """Phase-one simplex with Bland's rule over exact rationals.

    Free variables are split as x = x+ - x-; inequalities get surplus
    variables; every row gets an artificial variable.  Feasible iff the
    artificial objective reaches zero.
    """
    n = system.n_vars
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for c, r in system.eqs:
        rows.append((list(c), r, False))
    for c, r in system.ineqs:
        rows.append((list(c), r, True))
    m = len(rows)
    if m == 0:
        return True
    n_surplus = sum(1 for _, _, s in rows if s)
    total = 2 * n + n_surplus + m  # x+, x-, surplus, artificial
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    si = 0
    for i, (c, r, has_surplus) in enumerate(rows):
        row = [Fraction(0)] * (total + 1)
        for j in range(n):
            row[j] = Fraction(c[j])
            row[n + j] = -Fraction(c[j])
        if has_surplus:
            row[2 * n + si] = Fraction(-1)
            si += 1
        rhs = Fraction(r)
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        art = 2 * n + n_surplus + i
        row[art] = Fraction(1)
        row[total] = rhs
        tableau.append(row)
        basis.append(art)
    # objective: minimize sum of artificials, expressed in nonbasic terms
    obj = [Fraction(0)] * (total + 1)
    for row in tableau:
        for j in range(total + 1):
            obj[j] -= row[j]
    for i in range(m):
        obj[2 * n + n_surplus + i] = Fraction(0)

    while True:
        enter = next(
            (j for j in range(total) if obj[j] < 0 and j not in basis), None
        )
        if enter is None:
            break
        ratios = [
            (tableau[i][total] / tableau[i][enter], basis[i], i)
            for i in range(m)
            if tableau[i][enter] > 0
        ]
        if not ratios:
            break  # unbounded below cannot happen for this objective
        _, _, leave = min(ratios)
        pv = tableau[leave][enter]
        tableau[leave] = [x / pv for x in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [
                    a - f * b for a, b in zip(tableau[i], tableau[leave])
                ]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * b for a, b in zip(obj, tableau[leave])]
        basis[leave] = enter

    return -obj[total] == 0
