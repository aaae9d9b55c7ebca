"""Exact integer/rational linear algebra.

Normal forms (Hermite, Smith), symplectic reduction of integral
alternating forms, polarization types, and the GL(X,Y)-action on
quadratic forms.  All arithmetic is exact: matrices are numpy arrays
with dtype=object holding python ints or Fractions.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Tuple

import numpy as np

from .errors import (Degenerate, NotInGLXY, NotInjective, NotSkew,
                     NotUnimodular)


def as_int_matrix(m) -> np.ndarray:
    """Copy input into an object-dtype integer matrix, validating entries."""
    a = np.array(m, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    out = np.empty(a.shape, dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            x = a[i, j]
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError("non-integer entry %r" % (x,))
                x = x.numerator
            out[i, j] = int(x)
    return out


def as_frac_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    out = np.empty(a.shape, dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i, j] = Fraction(a[i, j])
    return out


def eye(n) -> np.ndarray:
    return np.eye(n, dtype=object)


def frac_det(m) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    a = as_frac_matrix(m)
    n = a.shape[0]
    assert a.shape[1] == n
    det = Fraction(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r, col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det *= a[col, col]
        inv = 1 / a[col, col]
        for r in range(col + 1, n):
            if a[r, col] != 0:
                f = a[r, col] * inv
                a[r, col:] = a[r, col:] - f * a[col, col:]
    return det


def frac_inv(m) -> np.ndarray:
    """Exact inverse by Gauss-Jordan; raises Degenerate if singular."""
    a = as_frac_matrix(m)
    n = a.shape[0]
    assert a.shape[1] == n
    aug = np.concatenate([a, as_frac_matrix(eye(n))], axis=1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r, col] != 0:
                piv = r
                break
        if piv is None:
            raise Degenerate("matrix is singular")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * (1 / aug[col, col])
        for r in range(n):
            if r != col and aug[r, col] != 0:
                aug[r] = aug[r] - aug[r, col] * aug[col]
    return aug[:, n:]


def is_symmetric(m) -> bool:
    a = np.array(m, dtype=object)
    return a.shape[0] == a.shape[1] and (a == a.T).all()


def is_positive_definite(m) -> bool:
    """Sylvester criterion: all leading principal minors positive (exact)."""
    a = as_frac_matrix(m)
    if not is_symmetric(a):
        return False
    n = a.shape[0]
    for k in range(1, n + 1):
        if frac_det(a[:k, :k]) <= 0:
            return False
    return True


def is_positive_semidefinite(m) -> bool:
    """All principal minors nonnegative.  Exponential in rank; desk scale."""
    a = as_frac_matrix(m)
    if not is_symmetric(a):
        return False
    n = a.shape[0]
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if frac_det(a[np.ix_(idx, idx)]) < 0:
                return False
    return True


@dataclass(frozen=True)
class PolarizationType:
    """A divisor chain d_1 | d_2 | ... | d_r of positive integers."""

    diag: Tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.diag)
        object.__setattr__(self, "diag", d)
        if any(x <= 0 for x in d):
            raise ValueError("polarization type entries must be positive")
        for a, b in zip(d, d[1:]):
            if b % a != 0:
                raise ValueError("divisibility chain violated: %d | %d" % (a, b))

    @property
    def degree(self) -> int:
        out = 1
        for x in self.diag:
            out *= x
        return out

    def matrix(self) -> np.ndarray:
        n = len(self.diag)
        m = np.zeros((n, n), dtype=object)
        for i, x in enumerate(self.diag):
            m[i, i] = x
        return m


@dataclass(frozen=True)
class SymplecticDecomposition:
    type: PolarizationType
    basis_change: np.ndarray  # unimodular B with B e B^T in standard form


def hermite_normal_form(m) -> Tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite normal form.

    Returns (h, u) with h = u @ m, u unimodular, h in upper echelon form
    with positive pivots and the entries above each pivot reduced into
    [0, pivot).
    """
    h = as_int_matrix(m)
    rows, cols = h.shape
    u = eye(rows)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        # kill everything below position (r, c) by gcd row operations
        while True:
            nz = [i for i in range(r, rows) if h[i, c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(h[i, c]), i))
            if piv != r:
                h[[r, piv]] = h[[piv, r]]
                u[[r, piv]] = u[[piv, r]]
            if all(h[i, c] == 0 for i in range(r + 1, rows)):
                break
            for i in range(r + 1, rows):
                if h[i, c] != 0:
                    q = h[i, c] // h[r, c]
                    h[i] = h[i] - q * h[r]
                    u[i] = u[i] - q * u[r]
        if h[r, c] == 0:
            continue
        if h[r, c] < 0:
            h[r] = -h[r]
            u[r] = -u[r]
        for i in range(r):
            q = h[i, c] // h[r, c]
            if q != 0:
                h[i] = h[i] - q * h[r]
                u[i] = u[i] - q * u[r]
        r += 1
    assert (u @ as_int_matrix(m) == h).all()
    return h, u


def smith_normal_form(m) -> Tuple[List[int], np.ndarray, np.ndarray]:
    """Smith normal form: u @ m @ v = diag(d) with d_i | d_{i+1}, d_i >= 0.

    Zero diagonal entries are sorted last.  u, v are unimodular.
    """
    d = as_int_matrix(m)
    rows, cols = d.shape
    u, v = eye(rows), eye(cols)
    n = min(rows, cols)

    def min_entry(s):
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if d[i, j] != 0 and (best is None
                                     or abs(d[i, j]) < abs(d[best[0], best[1]])):
                    best = (i, j)
        return best

    for s in range(n):
        while True:
            pos = min_entry(s)
            if pos is None:
                break
            i, j = pos
            if i != s:
                d[[s, i]] = d[[i, s]]
                u[[s, i]] = u[[i, s]]
            if j != s:
                d[:, [s, j]] = d[:, [j, s]]
                v[:, [s, j]] = v[:, [j, s]]
            p = d[s, s]
            dirty = False
            for i in range(s + 1, rows):
                if d[i, s] != 0:
                    q = d[i, s] // p
                    d[i] = d[i] - q * d[s]
                    u[i] = u[i] - q * u[s]
                    if d[i, s] != 0:
                        dirty = True
            for j in range(s + 1, cols):
                if d[s, j] != 0:
                    q = d[s, j] // p
                    d[:, j] = d[:, j] - q * d[:, s]
                    v[:, j] = v[:, j] - q * v[:, s]
                    if d[s, j] != 0:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block
            offender = None
            for i in range(s + 1, rows):
                for j in range(s + 1, cols):
                    if d[i, j] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            d[s] = d[s] + d[offender]
            u[s] = u[s] + u[offender]
        if d[s, s] < 0:
            d[:, s] = -d[:, s]
            v[:, s] = -v[:, s]
    diag = [int(d[k, k]) for k in range(n)]
    assert (u @ as_int_matrix(m) @ v == d).all()
    return diag, u, v


def symplectic_normal_form(e) -> SymplecticDecomposition:
    """Symplectic reduction of a nondegenerate integral alternating form.

    Returns B (unimodular) and the type delta with
    B @ e @ B.T == [[0, diag(delta)], [-diag(delta), 0]].
    """
    a = as_int_matrix(e)
    n = a.shape[0]
    if a.shape[1] != n or n % 2 != 0:
        raise NotSkew("form must be square of even size")
    if (a.T != -a).any() or any(a[i, i] != 0 for i in range(n)):
        raise NotSkew("form is not alternating")
    if frac_det(a) == 0:
        raise Degenerate("form is degenerate")
    g = n // 2

    m = a.copy()
    b = eye(n)  # invariant: m == b @ a @ b.T

    def congr_swap(i, j):
        m[[i, j]] = m[[j, i]]
        m[:, [i, j]] = m[:, [j, i]]
        b[[i, j]] = b[[j, i]]

    def congr_add(t, src, c):
        """row_t += c*row_src, plus the mirrored column operation."""
        m[t] = m[t] + c * m[src]
        m[:, t] = m[:, t] + c * m[:, src]
        b[t] = b[t] + c * b[src]

    def congr_neg(i):
        m[i] = -m[i]
        m[:, i] = -m[:, i]
        b[i] = -b[i]

    for s in range(0, n, 2):
        while True:
            # minimal nonzero entry in the remaining block, lowest index ties
            best = None
            for i in range(s, n):
                for j in range(i + 1, n):
                    if m[i, j] != 0 and (best is None
                                         or abs(m[i, j]) < abs(m[best[0], best[1]])):
                        best = (i, j)
            assert best is not None, "nondegenerate form ran out of entries"
            i, j = best
            if i != s:
                congr_swap(s, i)
                if j == s:
                    j = i
            if j != s + 1:
                congr_swap(s + 1, j)
            if m[s, s + 1] < 0:
                congr_neg(s + 1)
            p = m[s, s + 1]
            dirty = False
            for t in range(s + 2, n):
                if m[s, t] != 0:
                    q = m[s, t] // p
                    congr_add(t, s + 1, -q)  # changes m[s, t] by -q*p
                    if m[s, t] != 0:
                        dirty = True
                if m[s + 1, t] != 0:
                    q = m[s + 1, t] // p     # m[s+1, t] - q*p via row s
                    congr_add(t, s, q)       # adds q*m[s+1, s] = -q*p
                    if m[s + 1, t] != 0:
                        dirty = True
            if dirty:
                continue
            offender = None
            for i2 in range(s + 2, n):
                for j2 in range(i2 + 1, n):
                    if m[i2, j2] % p != 0:
                        offender = i2
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            congr_add(s, offender, 1)

    # permute basis (x1, y1, x2, y2, ...) -> (x1..xg, y1..yg)
    perm = [2 * k for k in range(g)] + [2 * k + 1 for k in range(g)]
    p = np.zeros((n, n), dtype=object)
    for new, old in enumerate(perm):
        p[new, old] = 1
    b = p @ b
    m = p @ m @ p.T

    diag = tuple(int(m[k, g + k]) for k in range(g))
    typ = PolarizationType(diag)
    std = standard_symplectic_form(typ)
    assert (b @ a @ b.T == std).all()
    assert abs(frac_det(b)) == 1
    return SymplecticDecomposition(type=typ, basis_change=b)


def standard_symplectic_form(delta: PolarizationType) -> np.ndarray:
    g = len(delta.diag)
    e = np.zeros((2 * g, 2 * g), dtype=object)
    for k, d in enumerate(delta.diag):
        e[k, g + k] = d
        e[g + k, k] = -d
    return e


def polarization_type(phi) -> PolarizationType:
    """Type of an injective lattice map: the SNF diagonal of its matrix."""
    a = as_int_matrix(phi)
    if a.shape[0] != a.shape[1] or frac_det(a) == 0:
        raise NotInjective("polarization matrix must be square and injective")
    diag, _, _ = smith_normal_form(a)
    return PolarizationType(tuple(diag))


def lattice_membership(basis, vec) -> bool:
    """Is vec in the lattice generated by the columns of basis?"""
    b = as_frac_matrix(basis)
    sol = frac_inv(b) @ as_frac_matrix(np.array(vec, dtype=object).reshape(-1, 1))
    return all(x.denominator == 1 for x in sol[:, 0])


def glxy_act(u, q, y_basis) -> np.ndarray:
    """Action Q -> (u^T)^{-1} Q u^{-1} of the stabilizer GL(X, Y).

    u must be unimodular and must map the sublattice spanned by the
    columns of y_basis into itself; otherwise NotInGLXY.
    """
    u = as_int_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise NotUnimodular("u must be square")
    if abs(frac_det(u)) != 1:
        raise NotUnimodular("u must have determinant +-1")
    yb = as_int_matrix(y_basis)
    for j in range(yb.shape[1]):
        if not lattice_membership(yb, u @ yb[:, j]):
            raise NotInGLXY("u does not preserve the sublattice Y")
    ui = frac_inv(u)
    return ui.T @ as_frac_matrix(q) @ ui
