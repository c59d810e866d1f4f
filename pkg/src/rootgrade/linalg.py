"""Exact linear algebra over the rationals and integers.

Everything here works on plain Python ``Fraction`` and ``int`` values so the
results are exact. Matrices are sequences of rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[Fraction, ...]
Matrix = list[list[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = to_fraction_matrix(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : M x = 0}."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    ncols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """One solution of M x = rhs, or None when inconsistent."""
    ncols = len(rows[0])
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(reduced, pivots):
        x[p] = row[-1]
    return tuple(x)


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)]


def primitive_integer_vector(v: Sequence, fix_sign: bool = True) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector.

    With ``fix_sign`` the first nonzero entry is made positive, so the result
    names the line through v; otherwise only positive scalings are used.
    """
    fracs = [Fraction(x) for x in v]
    denominator = 1
    for x in fracs:
        denominator = denominator * x.denominator // gcd(denominator, x.denominator)
    ints = [int(x * denominator) for x in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if fix_sign and lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of an integer matrix by fraction-free elimination.

    Rows are divided by their content after each step, which keeps the
    entries small for the sparse structured matrices used here.
    """
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        prow = m[r]
        pc = prow[c]
        for i in range(r + 1, len(m)):
            row = m[i]
            x = row[c]
            if x == 0:
                continue
            new = [pc * a - x * b for a, b in zip(row, prow)]
            g = 0
            for a in new:
                if a:
                    g = gcd(g, a)
                    if g == 1:
                        break
            if g > 1:
                new = [a // g for a in new]
            m[i] = new
        r += 1
        if r == len(m):
            break
    return r


def simplex_maximize(objective: Sequence, constraints: Sequence[Sequence], bounds: Sequence):
    """Maximize objective·x subject to constraints·x <= bounds and x >= 0.

    All bounds must be nonnegative so the origin is a feasible start. Uses a
    dense tableau over Fractions with Bland's anti-cycling rule. Returns
    (optimal value, optimal x).
    """
    nvars = len(objective)
    nrows = len(constraints)
    if any(Fraction(b) < 0 for b in bounds):
        raise ValueError("simplex_maximize needs nonnegative bounds")
    width = nvars + nrows + 1
    tableau: list[list[Fraction]] = []
    for i, row in enumerate(constraints):
        line = [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(nrows)]
        line.append(Fraction(bounds[i]))
        tableau.append(line)
    cost = [-Fraction(x) for x in objective] + [Fraction(0)] * (nrows + 1)
    basis = [nvars + i for i in range(nrows)]
    while True:
        entering = next((j for j in range(width - 1) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(nrows):
            a = tableau[i][entering]
            if a > 0:
                ratio = tableau[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise ArithmeticError("linear program is unbounded")
        leave = best[1]
        prow = tableau[leave]
        inv = 1 / prow[entering]
        prow = [x * inv for x in prow]
        tableau[leave] = prow
        for i in range(nrows):
            if i != leave and tableau[i][entering] != 0:
                factor = tableau[i][entering]
                tableau[i] = [a - factor * b for a, b in zip(tableau[i], prow)]
        factor = cost[entering]
        cost = [a - factor * b for a, b in zip(cost, prow)]
        basis[leave] = entering
    x = [Fraction(0)] * nvars
    for i, var in enumerate(basis):
        if var < nvars:
            x[var] = tableau[i][-1]
    return cost[-1], tuple(x)


def strictly_feasible_point(normals: Sequence[Sequence]) -> Vector | None:
    """A rational x with n·x > 0 for every row n, or None if none exists.

    Maximizes a slack s subject to n·x >= s inside the box |x_j| <= 1; the
    system is strictly feasible exactly when the optimum is positive.
    """
    dim = len(normals[0])
    # variables: u (dim), v (dim), s; x = u - v
    nvars = 2 * dim + 1
    rows = []
    bounds = []
    for n in normals:
        n = [Fraction(a) for a in n]
        rows.append([-a for a in n] + list(n) + [Fraction(1)])
        bounds.append(0)
    for j in range(nvars):
        rows.append([Fraction(int(i == j)) for i in range(nvars)])
        bounds.append(1)
    objective = [0] * (2 * dim) + [1]
    value, x = simplex_maximize(objective, rows, bounds)
    if value <= 0:
        return None
    return tuple(x[j] - x[dim + j] for j in range(dim))
