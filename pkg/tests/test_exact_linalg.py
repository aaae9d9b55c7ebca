"""Integer/rational linear algebra: normal forms, symplectic reduction,
and the stabilizer action on quadratic forms."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropab.errors import (Degenerate, NotInGLXY, NotInjective, NotSkew,
                           NotUnimodular)
from tropab.exact_linalg import (PolarizationType, frac_det, frac_inv,
                                 glxy_act, hermite_normal_form,
                                 lattice_membership, polarization_type,
                                 smith_normal_form, standard_symplectic_form,
                                 symplectic_normal_form)

from oracles import snf_diag_via_minor_gcds


def _obj(m):
    return np.array(m, dtype=object)


small_int = st.integers(min_value=-9, max_value=9)


def int_matrix(n):
    return st.lists(st.lists(small_int, min_size=n, max_size=n),
                    min_size=n, max_size=n)


# -- Hermite ----------------------------------------------------------------

def test_hnf_frozen_example():
    h, u = hermite_normal_form(_obj([[2, 4], [6, 8]]))
    assert (u @ _obj([[2, 4], [6, 8]]) == h).all()
    assert h[1, 0] == 0
    assert h[0, 0] > 0 and h[1, 1] > 0


def test_hnf_identity_fixed():
    h, u = hermite_normal_form(np.eye(3, dtype=object))
    assert (h == np.eye(3, dtype=object)).all()
    assert (u == np.eye(3, dtype=object)).all()


@settings(max_examples=60, deadline=None)
@given(int_matrix(3))
def test_hnf_shape_properties(m):
    m = _obj(m)
    h, u = hermite_normal_form(m)
    # u is unimodular and h = u m
    assert abs(frac_det(u)) == 1
    assert (u @ m == h).all()
    # echelon: pivot columns increase strictly; pivots positive;
    # entries above each pivot reduced into [0, pivot)
    last = -1
    for i in range(3):
        nz = [j for j in range(3) if h[i, j] != 0]
        if not nz:
            continue
        p = nz[0]
        assert p > last
        last = p
        assert h[i, p] > 0
        for k in range(i):
            assert 0 <= h[k, p] < h[i, p]


# -- Smith ------------------------------------------------------------------

def test_snf_frozen_examples():
    assert smith_normal_form(_obj([[2, 4], [6, 8]]))[0] == [2, 4]
    assert smith_normal_form(_obj([[2, 1], [0, 2]]))[0] == [1, 4]
    assert smith_normal_form(_obj([[3, 0], [0, 3]]))[0] == [3, 3]


@settings(max_examples=60, deadline=None)
@given(int_matrix(3))
def test_snf_matches_minor_gcd_oracle(m):
    m = _obj(m)
    diag, u, v = smith_normal_form(m)
    assert diag == snf_diag_via_minor_gcds(m)
    d = u @ m @ v
    assert all(d[i, j] == (diag[i] if i == j else 0)
               for i in range(3) for j in range(3))
    assert abs(frac_det(u)) == 1 and abs(frac_det(v)) == 1
    # divisibility chain (zeros only at the end)
    for a, b in zip(diag, diag[1:]):
        if b != 0:
            assert a != 0 and b % a == 0


# -- symplectic reduction ---------------------------------------------------

def test_symplectic_standard_form_is_its_own_reduction():
    t = PolarizationType((1, 3))
    e = standard_symplectic_form(t)
    dec = symplectic_normal_form(e)
    assert dec.type == t
    assert (dec.basis_change @ e @ dec.basis_change.T == e).all()


def test_symplectic_rejects_non_alternating():
    with pytest.raises(NotSkew, match="not alternating"):
        symplectic_normal_form(_obj([[1, 2], [-2, 0]]))
    with pytest.raises(NotSkew):
        symplectic_normal_form(_obj([[0, 2, 0], [-2, 0, 0], [0, 0, 0]]))


def test_symplectic_rejects_degenerate():
    z = np.zeros((4, 4), dtype=object)
    z[0, 1], z[1, 0] = 1, -1
    with pytest.raises(Degenerate):
        symplectic_normal_form(z)


@settings(max_examples=40, deadline=None)
@given(st.lists(small_int, min_size=6, max_size=6))
def test_symplectic_random_4x4(entries):
    # build a generic alternating 4x4 from 6 free entries
    e = np.zeros((4, 4), dtype=object)
    k = 0
    for i in range(4):
        for j in range(i + 1, 4):
            e[i, j], e[j, i] = entries[k], -entries[k]
            k += 1
    if frac_det(e) == 0:
        return
    dec = symplectic_normal_form(e)
    b = dec.basis_change
    assert abs(frac_det(b)) == 1
    assert (b @ e @ b.T == standard_symplectic_form(dec.type)).all()
    # the type is also readable off the Smith diagonal: (d1, d1, d2, d2)
    snf = smith_normal_form(e)[0]
    assert snf == [dec.type.diag[0], dec.type.diag[0],
                   dec.type.diag[1], dec.type.diag[1]]


# -- polarization types -----------------------------------------------------

def test_polarization_type_examples():
    assert polarization_type(_obj([[1, 0], [0, 3]])).diag == (1, 3)
    assert polarization_type(_obj([[2, 0], [0, 2]])).diag == (2, 2)
    # off-diagonal maps reduce to their Smith type
    assert polarization_type(_obj([[2, 1], [0, 2]])).diag == (1, 4)


def test_polarization_type_degree_and_matrix():
    t = PolarizationType((2, 6))
    assert t.degree == 12
    assert (t.matrix() == _obj([[2, 0], [0, 6]])).all()


def test_polarization_type_divisibility_enforced():
    with pytest.raises(ValueError):
        PolarizationType((2, 3))
    with pytest.raises(ValueError):
        PolarizationType((0, 2))


def test_polarization_type_rejects_singular_map():
    with pytest.raises(NotInjective):
        polarization_type(_obj([[1, 2], [2, 4]]))


# -- lattice membership -----------------------------------------------------

def test_lattice_membership():
    basis = _obj([[2, 0], [0, 3]])
    assert lattice_membership(basis, (4, -3))
    assert not lattice_membership(basis, (1, 0))
    assert lattice_membership(basis, (0, 0))


# -- GL(X, Y) action --------------------------------------------------------

def test_glxy_preserves_values():
    u = _obj([[1, 1], [0, 1]])
    q = _obj([[2, 0], [0, 2]])
    y = np.eye(2, dtype=object)
    q2 = glxy_act(u, q, y)
    # (u^T)^{-1} q u^{-1} evaluated at u x equals q at x
    for x in [(1, 0), (0, 1), (2, -3)]:
        ux = tuple(int((u @ _obj([[c] for c in x]))[i, 0]) for i in range(2))
        val = sum(Fraction(q2[i, j]) * ux[i] * ux[j]
                  for i in range(2) for j in range(2))
        ref = sum(Fraction(q[i, j]) * x[i] * x[j]
                  for i in range(2) for j in range(2))
        assert val == ref


def test_glxy_rejects_non_unimodular():
    with pytest.raises(NotUnimodular):
        glxy_act(_obj([[2, 0], [0, 1]]), np.eye(2, dtype=object),
                 np.eye(2, dtype=object))


def test_glxy_rejects_sublattice_violation():
    # u swaps the axes but Y = 2Z x Z is only preserved up to index
    u = _obj([[0, 1], [1, 0]])
    y = _obj([[2, 0], [0, 1]])
    with pytest.raises(NotInGLXY):
        glxy_act(u, np.eye(2, dtype=object), y)


def test_frac_inv_roundtrip():
    m = _obj([[Fraction(1, 2), 1], [0, 3]])
    assert (frac_inv(frac_inv(m)) == np.array(
        [[Fraction(1, 2), Fraction(1)], [Fraction(0), Fraction(3)]],
        dtype=object)).all()
