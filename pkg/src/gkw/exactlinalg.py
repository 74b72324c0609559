"""Small exact linear-algebra helpers over Fraction and QI matrices.

Desk-scale Gaussian elimination; used by the polytope machinery (kernel
weights, feasibility) and by exact pullbacks.  Matrices are lists of lists.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from .poly import QI


def qi_matrix_inverse(A):
    """Inverse of a square matrix with QI entries, by Gauss-Jordan."""
    n = len(A)
    M = [[QI.of(A[i][j]) for j in range(n)] + [QI(1 if j == i else 0) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = QI(1) / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def rref(A):
    """Reduced row echelon form over Fraction; returns (R, pivot_columns)."""
    R = [[Fraction(x) for x in row] for row in A]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def nullspace_basis(A):
    """Exact rational basis of ker(A) for A with Fraction entries."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    R, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def solve_exact(A, b):
    """One exact solution x of A x = b, or None if inconsistent."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [[Fraction(A[i][j]) for j in range(cols)] + [Fraction(b[i])] for i in range(rows)]
    R, pivots = rref(aug)
    for row in R:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        if pc == cols:
            return None
        x[pc] = R[r][-1]
    return x


def primitive_integer_vector(v):
    """Scale a rational vector to a primitive integer vector (first nonzero > 0)."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def integer_kernel_basis(columns):
    """Primitive integer basis of the rational kernel of the map e_i -> columns[i].

    ``columns`` is a list of integer vectors (the images); the returned rows
    span ker over Q and are primitive integers (a finite-index sublattice of
    the integer kernel is acceptable for the workbench's purposes).
    """
    d = len(columns[0])
    A = [[Fraction(columns[j][i]) for j in range(len(columns))] for i in range(d)]
    return [primitive_integer_vector(v) for v in nullspace_basis(A)]
