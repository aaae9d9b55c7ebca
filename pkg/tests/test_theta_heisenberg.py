"""Cyclotomic integers, finite Heisenberg groups and their Schroedinger
representation, balanced theta sections, and the valuation/twist
exponents of degenerating families."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from tropab.errors import (BadLift, BadModulus, BadTwistPair,
                           EmptyComponent, InconsistentData, TooLarge)
from tropab.exact_linalg import PolarizationType
from tropab.pavings_pwl import sigma_section
from tropab.quadform_delaunay import QuadraticForm
from tropab.theta_heisenberg import (CyclotomicInteger, DegenerationData,
                                     HeisenbergElement, SchrodingerVector,
                                     balanced_sections,
                                     character_value_exp,
                                     cyclotomic_polynomial, degen_exponents,
                                     enumerate_balanced_set, heis_elements,
                                     heis_mul, kw_decompose, mult_operator,
                                     normalize_global_scalar,
                                     power_map_kernel_check,
                                     schrodinger_action,
                                     section_exponent_pattern,
                                     section_valuation_profile, twist_data,
                                     twist_bilinear_form)

from oracles import brute_force_balanced_patterns_rank1

F = Fraction


def _obj(m):
    return np.array(m, dtype=object)


D3 = PolarizationType((3,))
M6 = 6


# -- cyclotomic arithmetic --------------------------------------------------

def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_zeta_relations():
    z = CyclotomicInteger.zeta_power(6, 1)
    one = CyclotomicInteger.one(6)
    assert z * z * z == -one
    assert (z * z - z + one).is_zero()
    # full cycle and exponent reduction
    assert CyclotomicInteger.zeta_power(6, 7) == z
    acc = one
    for _ in range(6):
        acc = acc * z
    assert acc == one


def test_cyclotomic_ring_ops():
    a = CyclotomicInteger(5, (1, 2, 0, 0))
    b = CyclotomicInteger(5, (0, 1, 1, 0))
    assert a + b - b == a
    assert a * b == b * a
    assert 3 * a == a + a + a
    assert (a - a).is_zero()


# -- Heisenberg group -------------------------------------------------------

def test_group_order_and_identity():
    els = list(heis_elements(D3, M6))
    assert len(els) == M6 * 3 * 3
    ident = HeisenbergElement.identity(D3, M6)
    for g in els[:40]:
        assert heis_mul(g, ident, D3, M6) == g
        assert heis_mul(ident, g, D3, M6) == g
        assert heis_mul(g, g.inverse(), D3, M6) == ident
        assert heis_mul(g.inverse(), g, D3, M6) == ident


def test_commutator_is_the_pairing():
    x = HeisenbergElement(0, (1,), (0,), D3, M6)
    y = HeisenbergElement(0, (0,), (1,), D3, M6)
    xy = heis_mul(x, y, D3, M6)
    yx_inv = heis_mul(x.inverse(), y.inverse(), D3, M6)
    comm = heis_mul(xy, yx_inv, D3, M6)
    assert comm == HeisenbergElement(2, (0,), (0,), D3, M6)


def test_modulus_constraint():
    with pytest.raises(BadModulus):
        HeisenbergElement(0, (0,), (0,), D3, 3)
    with pytest.raises(BadModulus):
        heis_elements(PolarizationType((2, 2)), 6).__next__()


def test_power_map_kernel():
    assert power_map_kernel_check(D3, M6)
    assert power_map_kernel_check(PolarizationType((2,)), 4)


# -- Schroedinger representation --------------------------------------------

def test_representation_is_a_homomorphism():
    basis = [SchrodingerVector.delta_function(D3, M6, (k,))
             for k in range(3)]
    sample = [HeisenbergElement(t, (a,), (b,), D3, M6)
              for t in (0, 1, 5) for a in (0, 2) for b in (1, 2)]
    for x in sample:
        for y in sample:
            xy = heis_mul(x, y, D3, M6)
            for v in basis:
                assert schrodinger_action(xy, v) == \
                    schrodinger_action(x, schrodinger_action(y, v))


def test_center_acts_by_scalars():
    z = HeisenbergElement(1, (0,), (0,), D3, M6)
    v = SchrodingerVector(D3, M6, {(0,): CyclotomicInteger.one(6),
                                   (2,): CyclotomicInteger.zeta_power(6, 4)})
    assert schrodinger_action(z, v) == v.scaled(
        CyclotomicInteger.zeta_power(6, 1))


def test_heisenberg_relation_exhaustive_small():
    """T_b S_g = zeta^{<b, w(g)>} S_g T_b on every basis vector."""
    d2 = PolarizationType((2,))
    m = 4
    basis = [SchrodingerVector.delta_function(d2, m, (k,)) for k in range(2)]
    for g in heis_elements(d2, m):
        for bp in product(range(2), repeat=1):
            e = character_value_exp(g.w_image(), bp, d2, m)
            for v in basis:
                lhs = mult_operator(bp, schrodinger_action(g, v))
                rhs = schrodinger_action(g, mult_operator(bp, v)).scaled(
                    CyclotomicInteger.zeta_power(m, e))
                assert lhs == rhs


def test_kw_decomposition_lines():
    lines = kw_decompose(D3, M6)
    assert [idx for idx, _ in lines] == [(0,), (1,), (2,)]
    for idx, vecs in lines:
        assert len(vecs) == 1
        # joint eigenvector of every multiplication operator
        for bp in product(range(3), repeat=1):
            e = character_value_exp(idx, bp, D3, M6)
            assert mult_operator(bp, vecs[0]) == vecs[0].scaled(
                CyclotomicInteger.zeta_power(M6, e))
    with pytest.raises(ValueError):
        kw_decompose(D3, M6, k2_spec="exotic")


# -- balanced sections ------------------------------------------------------

def _standard_lifts(delta, m, t_exps=None):
    classes = sorted(product(*[range(d) for d in delta.diag]))
    out = {}
    for i, alpha in enumerate(classes):
        t = 0 if t_exps is None else t_exps[i]
        out[alpha] = HeisenbergElement(t, tuple(-x for x in alpha),
                                       (0,) * len(alpha), delta, m)
    return out


def test_balanced_section_from_standard_lifts():
    sec = balanced_sections(D3, M6, (0,), _standard_lifts(D3, M6))
    assert sorted(sec.coeffs) == [(0,), (1,), (2,)]
    assert section_exponent_pattern(sec) == {(0,): 0, (1,): 0, (2,): 0}


def test_balanced_section_rejects_bad_lift():
    lifts = _standard_lifts(D3, M6)
    lifts[(1,)] = HeisenbergElement(0, (0,), (0,), D3, M6)
    with pytest.raises(BadLift):
        balanced_sections(D3, M6, (0,), lifts)


def test_enumeration_matches_brute_force():
    for delta, m in [(D3, M6), (PolarizationType((2,)), 4)]:
        got = {tuple(section_exponent_pattern(
            normalize_global_scalar(v))[k]
            for k in sorted(v.coeffs)) for v in enumerate_balanced_set(
                delta, m)}
        want = brute_force_balanced_patterns_rank1(delta.diag, m)
        assert got == want
        assert len(got) == m ** (delta.degree - 1)


def test_enumeration_bound():
    with pytest.raises(TooLarge):
        enumerate_balanced_set(PolarizationType((3, 3)), 6, bound=8)


# -- degeneration exponents -------------------------------------------------

def test_degeneration_data_consistency():
    q = QuadraticForm(_obj([[1]]))
    good = DegenerationData(q, _obj([[2]]), PolarizationType((1,)),
                            _obj([[0]]))
    assert degen_exponents(good, (2,), (3,)) == (F(4), F(12))
    with pytest.raises(InconsistentData):
        DegenerationData(q, _obj([[3]]), PolarizationType((1,)),
                         _obj([[0]]))
    with pytest.raises(BadTwistPair):
        DegenerationData(q, _obj([[2]]), PolarizationType((1,)),
                         _obj([[1]]))


def test_quadratic_relation_of_exponents():
    """a(l + m) = b(l, phi m) + a(l) + a(m)."""
    d = PolarizationType((1, 2))
    q = QuadraticForm(_obj([[1, 1], [1, 4]]))
    data = DegenerationData(q, _obj([[2, 1], [2, 4]]), d,
                            _obj([[0, 1], [-1, 0]]))
    dm = _obj([[1, 0], [0, 2]])
    for lam in [(1, 0), (0, 1), (2, -1)]:
        for mu in [(1, 1), (-1, 2)]:
            s = tuple(a + b for a, b in zip(lam, mu))
            a_s = degen_exponents(data, s, (0, 0))[0]
            a_l = degen_exponents(data, lam, (0, 0))[0]
            a_m = degen_exponents(data, mu, (0, 0))[0]
            phi_mu = tuple(int((dm @ _obj([[x] for x in mu]))[i, 0])
                           for i in range(2))
            b_lm = degen_exponents(data, lam, phi_mu)[1]
            assert a_s == b_lm + a_l + a_m


def test_twist_default_lift_and_mod2_relation():
    d = PolarizationType((1, 2))
    q = QuadraticForm(_obj([[1, 1], [1, 4]]))
    data = DegenerationData(q, _obj([[2, 1], [2, 4]]), d,
                            _obj([[0, 3], [-3, 0]]))
    # default S' is the symmetric mod-2 lift with zero diagonal
    assert (data.s_prime == _obj([[0, 1], [1, 0]])).all()
    dm = _obj([[1, 0], [0, 2]])
    for lam in [(1, 0), (0, 1), (1, 1)]:
        for mu in [(1, 1), (2, -1)]:
            s = tuple(a + b for a, b in zip(lam, mu))
            a_s = twist_data(data, s, (0, 0))[0]
            a_l = twist_data(data, lam, (0, 0))[0]
            a_m = twist_data(data, mu, (0, 0))[0]
            assert (a_s - a_l - a_m) % 2 == twist_bilinear_form(
                data, lam, mu)
            # chi's bilinear form is the twist pairing taken mod 2
            phi_mu = tuple(int((dm @ _obj([[x] for x in mu]))[i, 0])
                           for i in range(2))
            b_twist = twist_data(data, lam, phi_mu)[1]
            assert b_twist % 2 == twist_bilinear_form(data, lam, mu)


def test_explicit_s_prime_validation():
    q = QuadraticForm(_obj([[1, 1], [1, 4]]))
    d = PolarizationType((1, 2))
    pc = _obj([[2, 1], [2, 4]])
    sx = _obj([[0, 1], [-1, 0]])
    ok = DegenerationData(q, pc, d, sx, s_prime=_obj([[2, 1], [1, -2]]))
    assert (ok.s_prime == _obj([[2, 1], [1, -2]])).all()
    with pytest.raises(BadTwistPair):
        DegenerationData(q, pc, d, sx, s_prime=_obj([[0, 2], [2, 0]]))
    with pytest.raises(BadTwistPair):
        DegenerationData(q, pc, d, sx, s_prime=_obj([[0, 1], [3, 0]]))


# -- valuation profiles -----------------------------------------------------

def test_valuation_profile_three_torsion():
    sec = balanced_sections(D3, M6, (0,), _standard_lifts(D3, M6))
    phi = sigma_section(QuadraticForm(_obj([[1]])), _obj([[1]]), 4)
    prof = section_valuation_profile(sec, phi, _obj([[3]]), 3)
    assert prof == {(0,): F(0), (1,): F(1, 2), (2,): F(1, 2)}


def test_valuation_profile_shift_invariance():
    # recentering theta_0 permutes the components but not the profile
    phi = sigma_section(QuadraticForm(_obj([[1]])), _obj([[1]]), 4)
    profs = []
    for j in range(3):
        sec = balanced_sections(D3, M6, (j,), _standard_lifts(D3, M6))
        profs.append(section_valuation_profile(sec, phi, _obj([[3]]), 3))
    assert profs[0] == profs[1] == profs[2]


def test_valuation_profile_requires_full_support():
    sec = SchrodingerVector(D3, M6, {(0,): CyclotomicInteger.one(6)})
    phi = sigma_section(QuadraticForm(_obj([[1]])), _obj([[1]]), 4)
    with pytest.raises(EmptyComponent):
        section_valuation_profile(sec, phi, _obj([[3]]), 3)
