"""Finite Heisenberg groups, the Schroedinger representation over exact
cyclotomic integers, balanced theta sections and their valuation
profiles, and the degeneration/twist exponent data."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import _geometry as geom
from .errors import (BadLift, BadModulus, BadTwistPair, EmptyComponent,
                     InconsistentData, TooLarge)
from .exact_linalg import PolarizationType, as_int_matrix, frac_inv
from .degeneration_monoids import fourier_indices, fourier_reduce
from .pavings_pwl import PwAffineFunction, _int_window
from .quadform_delaunay import QuadraticForm


# ---------------------------------------------------------------------------
# exact cyclotomic integers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int):
    """Coefficients (ascending) of the m-th cyclotomic polynomial,
    computed by dividing x^m - 1 by the proper-divisor factors."""
    num = [0] * m + [1]
    num[0] = -1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_div_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_div_exact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        assert c % den[-1] == 0
        q = c // den[-1]
        out[i] = q
        for j, dj in enumerate(den):
            num[i + j] -= q * dj
    assert all(x == 0 for x in num)
    return out


class CyclotomicInteger:
    """An element of Z[zeta_m], stored reduced modulo the m-th
    cyclotomic polynomial."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs):
        self.m = int(m)
        phi = cyclotomic_polynomial(self.m)
        deg = len(phi) - 1
        cs = list(int(x) for x in coeffs)
        for i in range(len(cs) - 1, deg - 1, -1):
            c = cs[i]
            if c:
                for j in range(len(phi)):
                    cs[i - deg + j] -= c * phi[j]
        cs = cs[:deg] + [0] * max(0, deg - len(cs))
        self.coeffs = tuple(cs[:deg])

    @staticmethod
    def zero(m):
        return CyclotomicInteger(m, [])

    @staticmethod
    def one(m):
        return CyclotomicInteger(m, [1])

    @staticmethod
    def zeta_power(m, k):
        k = int(k) % m
        return CyclotomicInteger(m, [0] * k + [1])

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other):
        assert self.m == other.m
        a, b = self.coeffs, other.coeffs
        return CyclotomicInteger(self.m,
                                 [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        assert self.m == other.m
        return CyclotomicInteger(self.m, [x - y for x, y in
                                          zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CyclotomicInteger(self.m, [-x for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.m,
                                     [other * x for x in self.coeffs])
        assert self.m == other.m
        out = [0] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CyclotomicInteger(self.m, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, CyclotomicInteger)
                and self.m == other.m and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def __repr__(self):
        return "CyclotomicInteger(%d, %r)" % (self.m, list(self.coeffs))


# ---------------------------------------------------------------------------
# the finite Heisenberg group
# ---------------------------------------------------------------------------

def _check_modulus(delta: PolarizationType, m: int):
    if m % (2 * delta.diag[-1]) != 0:
        raise BadModulus("modulus %d is not a multiple of 2*%d"
                         % (m, delta.diag[-1]))


def _reduce_tuple(vals, delta):
    return tuple(int(v) % d for v, d in zip(vals, delta.diag))


@dataclass(frozen=True)
class HeisenbergElement:
    """(zeta-exponent t mod M; a in H(delta); b in the dual, stored as
    an exponent tuple also reduced mod delta)."""

    scalar_exp: int
    a: tuple
    b: tuple
    delta: PolarizationType
    modulus: int

    def __post_init__(self):
        _check_modulus(self.delta, self.modulus)
        object.__setattr__(self, "scalar_exp",
                           int(self.scalar_exp) % self.modulus)
        object.__setattr__(self, "a", _reduce_tuple(self.a, self.delta))
        object.__setattr__(self, "b", _reduce_tuple(self.b, self.delta))

    @staticmethod
    def identity(delta, m):
        g = len(delta.diag)
        return HeisenbergElement(0, (0,) * g, (0,) * g, delta, m)

    def inverse(self):
        t = -self.scalar_exp + _pairing_exp(self.b, self.a, self.delta,
                                            self.modulus)
        return HeisenbergElement(t, tuple(-x for x in self.a),
                                 tuple(-x for x in self.b),
                                 self.delta, self.modulus)

    def w_image(self):
        """The K2-hat class translated by this element."""
        return _reduce_tuple(tuple(-x for x in self.a), self.delta)


def _pairing_exp(b, a, delta, m):
    """<b, a>_M = sum b_i a_i (M / delta_i), the commutator pairing
    exponent scaled into Z/M."""
    return sum(int(bi) * int(ai) * (m // di)
               for bi, ai, di in zip(b, a, delta.diag)) % m


def heis_mul(x: HeisenbergElement, y: HeisenbergElement,
             delta: PolarizationType, m: int) -> HeisenbergElement:
    """(t, a, b)(t', a', b') = (t + t' + <b', a>_M, a + a', b + b').

    This is the cocycle under which the Schroedinger formula
    (S_(t,a,b) f)(x) = zeta^t zeta^(<b,x>) f(x+a) is a homomorphism.
    """
    _check_modulus(delta, m)
    assert x.delta == delta and y.delta == delta
    assert x.modulus == m and y.modulus == m
    t = x.scalar_exp + y.scalar_exp + _pairing_exp(y.b, x.a, delta, m)
    return HeisenbergElement(t, geom.vadd(x.a, y.a), geom.vadd(x.b, y.b),
                             delta, m)


def heis_elements(delta: PolarizationType, m: int):
    _check_modulus(delta, m)
    ds = delta.diag
    for t in range(m):
        for a in product(*[range(d) for d in ds]):
            for b in product(*[range(d) for d in ds]):
                yield HeisenbergElement(t, a, b, delta, m)


def power_map_kernel_check(delta: PolarizationType, m: int) -> bool:
    """g^M = 1 for every element, and the M-th power map is a
    homomorphism on pairs (exhaustive when the group is small)."""
    els = list(heis_elements(delta, m))
    if len(els) > 10 ** 4:
        els = els[:: max(1, len(els) // 50)]
    ident = HeisenbergElement.identity(delta, m)

    def power(g, n):
        acc = ident
        for _ in range(n):
            acc = heis_mul(acc, g, delta, m)
        return acc

    for g in els:
        if power(g, m) != ident:
            return False
    for g in els:
        for h in els:
            lhs = power(heis_mul(g, h, delta, m), m)
            rhs = heis_mul(power(g, m), power(h, m), delta, m)
            if lhs != rhs:
                return False
    return True


# ---------------------------------------------------------------------------
# the Schroedinger representation
# ---------------------------------------------------------------------------

class SchrodingerVector:
    """A vector in the d-dimensional representation: finitely many
    cyclotomic coefficients indexed by H(delta)."""

    def __init__(self, delta: PolarizationType, m: int, coeffs=None):
        _check_modulus(delta, m)
        self.delta = delta
        self.modulus = m
        self.coeffs = {}
        for k, v in (coeffs or {}).items():
            if isinstance(v, int):
                v = CyclotomicInteger(m, [v])
            if not v.is_zero():
                self.coeffs[_reduce_tuple(k, delta)] = v

    @staticmethod
    def delta_function(delta, m, index):
        return SchrodingerVector(delta, m, {tuple(index): 1})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, CyclotomicInteger.zero(self.modulus)) + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return SchrodingerVector(self.delta, self.modulus, out)

    def scaled(self, c: CyclotomicInteger):
        return SchrodingerVector(self.delta, self.modulus,
                                 {k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, SchrodingerVector)
                and self.delta == other.delta
                and self.modulus == other.modulus
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return "SchrodingerVector(%r)" % (sorted(self.coeffs),)


def schrodinger_action(g: HeisenbergElement,
                       v: SchrodingerVector) -> SchrodingerVector:
    """(S_g v)(x) = zeta^t zeta^{<b, x>_M} v(x + a)."""
    assert g.delta == v.delta and g.modulus == v.modulus
    m = v.modulus
    out = {}
    for x, c in v.coeffs.items():
        # contribution lands at index x - a
        y = _reduce_tuple(geom.vsub(x, g.a), g.delta)
        e = (g.scalar_exp + _pairing_exp(g.b, y, g.delta, m)) % m
        z = CyclotomicInteger.zeta_power(m, e) * c
        acc = out.get(y)
        out[y] = z if acc is None else acc + z
    return SchrodingerVector(v.delta, m, out)


def mult_operator(bprime, v: SchrodingerVector) -> SchrodingerVector:
    """The K2-model operator: multiplication by the character
    x -> zeta^{<bprime, x>_M}."""
    m = v.modulus
    out = {x: CyclotomicInteger.zeta_power(
        m, _pairing_exp(bprime, x, v.delta, m)) * c
        for x, c in v.coeffs.items()}
    return SchrodingerVector(v.delta, m, out)


def character_value_exp(alpha, bprime, delta, m):
    """Exponent of chi_alpha(bprime) in the Heisenberg relation
    T_b S_g = chi_{w(g)}(b) S_g T_b."""
    return _pairing_exp(bprime, alpha, delta, m)


def kw_decompose(delta: PolarizationType, m: int,
                 k2_spec: str = "multiplicative"):
    """Joint eigenspaces of the multiplication operators: one line per
    H(delta) index (the maximal-degeneration K2 has d characters, each
    eigenspace spanned by a delta function)."""
    if k2_spec != "multiplicative":
        raise ValueError("only the multiplicative K2 model is supported")
    _check_modulus(delta, m)
    out = []
    for idx in sorted(product(*[range(d) for d in delta.diag])):
        out.append((idx, [SchrodingerVector.delta_function(delta, m, idx)]))
    return out


# ---------------------------------------------------------------------------
# balanced sections
# ---------------------------------------------------------------------------

def balanced_sections(delta: PolarizationType, m: int, theta0_index,
                      lifts) -> SchrodingerVector:
    """sum over alpha of S_{lifts[alpha]} applied to the delta function
    at theta0_index; lifts[alpha] must translate by alpha."""
    theta0 = _reduce_tuple(theta0_index, delta)
    classes = sorted(product(*[range(d) for d in delta.diag]))
    total = SchrodingerVector(delta, m, {})
    for alpha in classes:
        g = lifts[alpha]
        if g.w_image() != alpha:
            raise BadLift("lift for class %r has w-image %r"
                          % (alpha, g.w_image()))
        total = total + schrodinger_action(
            g, SchrodingerVector.delta_function(delta, m, theta0))
    return total


def enumerate_balanced_set(delta: PolarizationType, m: int,
                           bound: int = 8):
    """All balanced sections up to a global mu_M scalar.

    Each balanced section has exactly one zeta-power coefficient per
    H(delta) index, and every exponent pattern arises from some choice
    of theta_0 and lifts; so the set is the M^(d-1) normalized exponent
    patterns.  (The scalar exponents of the lifts are free, which makes
    each component's phase independently adjustable.)
    """
    _check_modulus(delta, m)
    d = delta.degree
    if d > bound:
        raise TooLarge("degree %d exceeds the enumeration bound %d"
                       % (d, bound))
    classes = sorted(product(*[range(x) for x in delta.diag]))
    out = []
    for rest in product(range(m), repeat=d - 1):
        exps = (0,) + rest
        out.append(SchrodingerVector(
            delta, m,
            {idx: CyclotomicInteger.zeta_power(m, e)
             for idx, e in zip(classes, exps)}))
    return out


def normalize_global_scalar(v: SchrodingerVector) -> SchrodingerVector:
    """Divide a single-zeta-power-per-component section by the phase of
    its first component (exponent patterns only)."""
    pattern = section_exponent_pattern(v)
    keys = sorted(v.coeffs)
    base = pattern[keys[0]]
    m = v.modulus
    return SchrodingerVector(
        v.delta, m, {k: CyclotomicInteger.zeta_power(m, pattern[k] - base)
                     for k in keys})


def section_exponent_pattern(v: SchrodingerVector):
    """index -> exponent for a section whose coefficients are single
    zeta powers; raises if a coefficient is not of that shape."""
    out = {}
    for k, c in v.coeffs.items():
        exp = None
        for e in range(v.modulus):
            if CyclotomicInteger.zeta_power(v.modulus, e) == c:
                exp = e
                break
        if exp is None:
            raise ValueError("coefficient at %r is not a root of unity"
                             % (k,))
        out[k] = exp
    return out


# ---------------------------------------------------------------------------
# degeneration and twist exponents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DegenerationData:
    q_form: QuadraticForm
    phi_check: np.ndarray
    d_type: PolarizationType
    s_xi: np.ndarray
    s_prime: np.ndarray = None

    def __post_init__(self):
        pc = as_int_matrix(self.phi_check)
        object.__setattr__(self, "phi_check", pc)
        g = self.q_form.rank
        dmat = np.diag(np.array([int(x) for x in self.d_type.diag],
                                dtype=object))
        expected = 2 * (self.q_form.matrix @ frac_inv(dmat))
        if pc.shape != (g, g) or any(
                Fraction(expected[i, j]) != pc[i, j]
                for i in range(g) for j in range(g)):
            raise InconsistentData(
                "phi_check must equal 2 Q d^{-1} and be integral")
        sx = as_int_matrix(self.s_xi)
        if (sx.T != -sx).any():
            raise BadTwistPair("S_xi must be skew-symmetric")
        object.__setattr__(self, "s_xi", sx)
        if self.s_prime is None:
            sp = np.array([[int(sx[i, j]) % 2 if i != j else 0
                            for j in range(g)] for i in range(g)],
                          dtype=object)
            sp = np.array([[sp[min(i, j), max(i, j)] for j in range(g)]
                           for i in range(g)], dtype=object)
        else:
            sp = as_int_matrix(self.s_prime)
            if (sp.T != sp).any():
                raise BadTwistPair("S' must be symmetric")
            if any((int(sp[i, j]) - int(sx[i, j])) % 2 != 0
                   for i in range(g) for j in range(g)):
                raise BadTwistPair("S' must be congruent to S_xi mod 2")
        object.__setattr__(self, "s_prime", sp)


def degen_exponents(data: DegenerationData, lam, alpha):
    """a-exponent Q(lambda) and b-exponent lambda^T (2 Q d^{-1}) alpha
    of the period action on the degenerating family."""
    lam = tuple(int(x) for x in lam)
    alpha = tuple(int(x) for x in alpha)
    a_exp = data.q_form.value(lam)
    pc_alpha = data.phi_check @ np.array([[x] for x in alpha], dtype=object)
    b_exp = sum(Fraction(l) * Fraction(pc_alpha[i, 0])
                for i, l in enumerate(lam))
    return a_exp, b_exp


def twist_data(data: DegenerationData, lam, alpha):
    """Exponents (mod 2) of the quadratic twist: a' = exp(pi i *
    (-1/2 lambda^T S' lambda)), b' = exp(pi i * (-lambda^T S_xi d^{-1}
    alpha))."""
    g = data.q_form.rank
    lam = np.array([[int(x)] for x in lam], dtype=object)
    alpha = np.array([[int(x)] for x in alpha], dtype=object)
    dmat = np.diag(np.array([int(x) for x in data.d_type.diag],
                            dtype=object))
    b_raw = -(lam.T @ data.s_xi @ frac_inv(dmat) @ alpha)[0, 0]
    a_raw = -Fraction((lam.T @ data.s_prime @ lam)[0, 0], 2)
    return Fraction(a_raw) % 2, Fraction(b_raw) % 2


def twist_bilinear_form(data: DegenerationData, lam, mu):
    """chi's associated bilinear form: a'(l+m) - a'(l) - a'(m) mod 2,
    which must match -lambda^T S' mu."""
    l = np.array([[int(x)] for x in lam], dtype=object)
    m = np.array([[int(x)] for x in mu], dtype=object)
    return Fraction(-(l.T @ data.s_prime @ m)[0, 0]) % 2


# ---------------------------------------------------------------------------
# valuation profiles
# ---------------------------------------------------------------------------

def section_valuation_profile(section: SchrodingerVector,
                              phi: PwAffineFunction, phi_map,
                              window: int):
    """Leading q-exponent of each Fourier class of the Y-symmetrized
    section: min over window periods of phi at the class
    representatives."""
    pm = as_int_matrix(phi_map)
    r = phi.rank
    reps, _ = fourier_indices(r, pm)
    out = {}
    for rep in reps:
        idx = _reduce_tuple(rep, section.delta)
        if idx not in section.coeffs:
            raise EmptyComponent("class %r has no section component"
                                 % (rep,))
        best = None
        for k in _int_window(r, window):
            shift = tuple(int((pm @ np.array([[x] for x in k],
                                             dtype=object))[i, 0])
                          for i in range(r))
            val = phi.evaluate(geom.vadd(rep, shift))
            if best is None or val < best:
                best = val
        out[rep] = best
    return out
