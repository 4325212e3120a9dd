"""Integer lattices for quantum-torus arguments: Smith normal form, kernels, centers.

The center criterion assumes q is not a root of unity: a monomial X^v of a quantum
torus with X_i X_j = q^{M_ij} X_j X_i is central exactly when M v = 0.
"""

from __future__ import annotations

import json
from typing import Sequence

Matrix = list  # list of integer rows


def _copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, r)) for r in M]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def shape(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise ValueError("matrix is not rectangular")
    return rows, cols


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise ValueError("shape mismatch")
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def det(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n, m = shape(M)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    A = _copy(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


def snf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (S, U, V) with U M V = S diagonal, S[i][i] | S[i+1][i+1], U and V unimodular."""
    rows, cols = shape(M)
    S = _copy(M)
    U, V = identity(rows), identity(cols)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for X in (S, V):
            for r in X:
                r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):  # row dst += k * row src
        for X in (S, U):
            X[dst] = [a + k * b for a, b in zip(X[dst], X[src])]

    def add_col(src, dst, k):
        for X in (S, V):
            for r in X:
                r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(S[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if S[i][t]:
                    add_row(t, i, -(S[i][t] // S[t][t]))
                    if S[i][t]:
                        done = False
                        swap_rows(t, i)
            for j in range(t + 1, cols):
                if S[t][j]:
                    add_col(t, j, -(S[t][j] // S[t][t]))
                    if S[t][j]:
                        done = False
                        swap_cols(t, j)
            if done:
                # divisibility: fold a non-divisible entry into row t
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if S[i][j] % S[t][t]), None)
                if bad is None:
                    break
                add_row(bad[0], t, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return S, U, V


def rank(M: Sequence[Sequence[int]]) -> int:
    S, _, _ = snf(M)
    return sum(1 for i in range(min(shape(M))) if S[i][i])


def kernel(M: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {v in Z^cols : M v = 0}: the columns of V beyond the rank."""
    rows, cols = shape(M)
    if rows == 0:
        return [list(r) for r in identity(cols)]
    S, _, V = snf(M)
    r = sum(1 for i in range(min(rows, cols)) if S[i][i])
    return [[V[i][j] for i in range(cols)] for j in range(r, cols)]


def is_antisymmetric(M: Sequence[Sequence[int]]) -> bool:
    n, m = shape(M)
    return n == m and all(M[i][j] == -M[j][i] for i in range(n) for j in range(n))


def torus_center(skew: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exponent lattice of the central monomials; empty means the center is the ground field."""
    if not is_antisymmetric(skew):
        raise ValueError("skew-exponent matrix must be antisymmetric")
    return kernel(skew)


def drop(M: Sequence[Sequence[int]], indices: Sequence[int]) -> Matrix:
    """Delete rows and columns with the given 1-based indices."""
    keep = [k for k in range(len(M)) if k + 1 not in indices]
    return [[M[i][j] for j in keep] for i in keep]


# built-in matrices ---------------------------------------------------------------

def derive_skew_matrix(algebra_id: str, names: Sequence[str]) -> Matrix:
    """Exponents e with g h = q^e h g for the given elements, computed by normal forms."""
    from .catalog import build
    from .parser import parse_element
    from .scalar import ScalarFraction

    spec = build(algebra_id)
    els = [parse_element(n, spec) for n in names]
    out = []
    for g in els:
        row = []
        for h in els:
            gh, hg = g * h, h * g
            mono, c = hg.leading()
            ratio = gh.terms.get(mono, ScalarFraction.zero()) / c
            e = _q_exponent(ratio)
            if e is None or not (gh - hg * ratio).is_zero():
                raise ValueError(f"{g.render()} and {h.render()} do not q-commute")
            row.append(e)
        out.append(row)
    return out


def _q_exponent(s) -> int | None:
    from .scalar import ScalarFraction

    if s.is_zero() or len(s.num.terms) != 1 or len(s.den.terms) != 1:
        return None
    (mn, _), = s.num.terms.items()
    (md, _), = s.den.terms.items()
    e = dict(mn).get("q", 0) - dict(md).get("q", 0)
    return e if s == ScalarFraction.qpow(e) else None


def builtin(name: str) -> Matrix:
    from .catalog import D_MATRIX

    if name == "D":
        return _copy(D_MATRIX)
    if name == "D56":
        return drop(D_MATRIX, (5, 6))
    if name == "CX":
        # over (K, x1, x2, u, v) in the localization of C at x1, x2
        return derive_skew_matrix("C", ("K", "x1", "x2", "u", "v"))
    if name == "UqE":
        # k[E^+-1][K^+-1; tau] over (E, K)
        return derive_skew_matrix("Uq", ("E", "K"))
    raise KeyError(f"unknown builtin matrix {name!r}")


BUILTINS = ("D", "D56", "CX", "UqE")


def load(source: str) -> Matrix:
    """A builtin name or a path to a JSON array of integer rows."""
    if source in BUILTINS:
        return builtin(source)
    with open(source) as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in data):
        raise ValueError("matrix file must be a JSON array of integer rows")
    shape(data)
    return data
