"""Exact linear algebra over the rationals and integer lattice routines.

Everything works on tuples of tuples of Fraction (matrices are rows).  The
matrices here are tiny (4x4 up to 16x4), so plain fraction-free-ish Gaussian
elimination beats any heavyweight dependency.
"""

from __future__ import annotations

from fractions import Fraction

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def frac_rows(rows) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n)) for i in range(n)
    )


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Mat, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_det(a: Mat) -> Fraction:
    n = len(a)
    m = [list(row) for row in a]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


def mat_inv(a: Mat) -> Mat:
    n = len(a)
    m = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def rref(rows: Mat) -> list[list[Fraction]]:
    """Reduced row echelon form; returns only the nonzero rows."""
    m = [list(row) for row in rows]
    nrows, ncols = len(m), len(m[0]) if m else 0
    piv_r = 0
    for col in range(ncols):
        piv = next((r for r in range(piv_r, nrows) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[piv_r], m[piv] = m[piv], m[piv_r]
        inv = 1 / m[piv_r][col]
        m[piv_r] = [x * inv for x in m[piv_r]]
        for r in range(nrows):
            if r != piv_r and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[piv_r])]
        piv_r += 1
        if piv_r == nrows:
            break
    return [row for row in m[:piv_r]]


def nullspace(rows: Mat, ncols: int) -> list[Vec]:
    """Canonical basis of {x : A x = 0}, one vector per free column of rref(A).

    Each basis vector has a 1 in its free column, so re-running rref on the
    result reproduces it; callers rely on that canonical shape.
    """
    red = rref(rows) if rows else []
    pivots: dict[int, list[Fraction]] = {}
    for row in red:
        col = next(c for c in range(ncols) if row[c] != 0)
        pivots[col] = row
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for col, row in pivots.items():
            vec[col] = -row[free]
        basis.append(tuple(vec))
    return basis


def hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix of full column rank.

    Result is upper triangular with positive pivots and entries above each
    pivot reduced into [0, pivot); this is the canonical lattice basis used
    to compare and hash lattices.
    """
    m = [list(r) for r in rows if any(r)]
    ncols = len(rows[0])
    out: list[list[int]] = []
    for col in range(ncols):
        work = [r for r in m if r[col] != 0]
        rest = [r for r in m if r[col] == 0]
        if not work:
            continue
        # gcd elimination in this column
        while len(work) > 1:
            work.sort(key=lambda r: abs(r[col]))
            base = work[0]
            new_work = [base]
            for r in work[1:]:
                q = r[col] // base[col]
                reduced = [x - q * y for x, y in zip(r, base)]
                if reduced[col] != 0:
                    new_work.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            if len(new_work) == 1:
                work = new_work
                break
            work = new_work
        pivot_row = work[0]
        if pivot_row[col] < 0:
            pivot_row = [-x for x in pivot_row]
        # reduce earlier pivot rows above this pivot
        for prev in out:
            q = prev[col] // pivot_row[col]
            if q:
                for c in range(ncols):
                    prev[c] -= q * pivot_row[c]
        out.append(list(pivot_row))
        m = rest
    if len(out) != ncols:
        raise ValueError("matrix does not have full column rank")
    return out
