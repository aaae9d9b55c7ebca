"""Graded monoids twisted by the convexity cocycle of a piecewise
affine function, Fourier-index combinatorics of X/phi(Y), lattice-torus
actions on monomials, central-fiber dual complexes, and face-quotient
data."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import _geometry as geom
from .errors import (InconsistentData, NotAFace, NotInjective, NotInvariant,
                     OutsideSupport, Unbounded)
from .exact_linalg import (PolarizationType, as_int_matrix, frac_det,
                           frac_inv, hermite_normal_form, is_symmetric,
                           lattice_membership, polarization_type,
                           smith_normal_form)
from .pavings_pwl import PwAffineFunction, ToricMonoid, affine_region_paving
from .quadform_delaunay import LatticePolytope, PeriodicPaving, QuadraticForm


class HomogenizedFunction:
    """The degree-1-homogeneous extension of a piecewise affine function
    to the cone over its domain: (d, x) -> d * f(x / d), with the apex
    value (0, 0) -> 0."""

    def __init__(self, base: PwAffineFunction):
        self.base = base
        self.rank = base.rank
        self.payload_rank = base.payload_rank

    def _zero(self):
        z = tuple(Fraction(0) for _ in range(self.payload_rank))
        return z[0] if self.payload_rank == 1 else z

    def value(self, degree: int, point):
        d = int(degree)
        if d < 0:
            raise OutsideSupport("negative degree %d" % d)
        pt = tuple(Fraction(x) for x in point)
        if d == 0:
            if any(pt):
                raise OutsideSupport("degree 0 admits only the origin")
            return self._zero()
        v = self.base.evaluate(tuple(x / d for x in pt))
        if self.payload_rank == 1:
            return d * v
        return tuple(d * x for x in v)


@dataclass(frozen=True)
class TwistedMonoidElement:
    degree: int
    point: tuple
    payload: tuple

    def __post_init__(self):
        object.__setattr__(self, "point", tuple(int(x) for x in self.point))
        object.__setattr__(self, "payload",
                           tuple(Fraction(x) for x in self.payload))
        if self.degree < 0:
            raise OutsideSupport("negative degree")
        if self.degree == 0 and any(self.point):
            raise OutsideSupport("degree 0 admits only the origin")


def _payload_tuple(val, k):
    return (val,) if k == 1 else tuple(val)


def star_cocycle(a, b, phi: HomogenizedFunction):
    """phi~(a) + phi~(b) - phi~(a+b) for a, b = (degree, point); this is
    the curvature 2-cocycle of phi, valued in the payload space."""
    da, xa = int(a[0]), tuple(a[1])
    db, xb = int(b[0]), tuple(b[1])
    va = phi.value(da, xa)
    vb = phi.value(db, xb)
    vs = phi.value(da + db, geom.vadd(xa, xb))
    if phi.payload_rank == 1:
        return va + vb - vs
    return tuple(p + q - s for p, q, s in zip(va, vb, vs))


def twisted_add(x: TwistedMonoidElement, y: TwistedMonoidElement,
                phi: HomogenizedFunction) -> TwistedMonoidElement:
    """(d1, p1, a) + (d2, p2, b) = (d1+d2, p1+p2, a + b + p1*p2)."""
    if len(x.point) != phi.rank or len(y.point) != phi.rank:
        raise OutsideSupport("rank mismatch")
    coc = _payload_tuple(star_cocycle((x.degree, x.point),
                                      (y.degree, y.point), phi),
                         phi.payload_rank)
    return TwistedMonoidElement(
        x.degree + y.degree, geom.vadd(x.point, y.point),
        tuple(p + q + c for p, q, c in zip(x.payload, y.payload, coc)))


def minimal_lift(q, phi: HomogenizedFunction) -> TwistedMonoidElement:
    """The basis element over (degree, point): payload 0, sitting at
    height phi~(q) in the height presentation."""
    d, pt = int(q[0]), tuple(q[1])
    phi.value(d, pt)   # validates membership in the support cone
    return TwistedMonoidElement(d, pt,
                                (0,) * phi.payload_rank)


def lift_height(el: TwistedMonoidElement, phi: HomogenizedFunction):
    """Height of an element in the graded-height presentation:
    phi~(degree, point) + payload (scalar payloads only)."""
    base = phi.value(el.degree, el.point)
    if phi.payload_rank != 1:
        raise OutsideSupport("height defined for scalar payloads")
    return base + el.payload[0]


# ---------------------------------------------------------------------------
# Fourier indices: X / phi(Y)
# ---------------------------------------------------------------------------

def fourier_indices(x_rank: int, phi_map):
    """Coset representatives of Z^r / (column lattice of phi_map), in
    the half-open HNF fundamental parallelepiped, plus the quotient type.
    """
    m = as_int_matrix(phi_map)
    r = int(x_rank)
    if m.shape != (r, r) or frac_det(m) == 0:
        raise NotInjective("phi must be an injective map of rank %d" % r)
    ptype = polarization_type(m)
    h, _ = hermite_normal_form(m.T)   # rows of h generate the lattice
    reps = []

    def rec(i, partial):
        if i == r:
            reps.append(tuple(partial))
            return
        for v in range(int(h[i, i])):
            rec(i + 1, partial + [v])

    # vectors with 0 <= v_i < h[i][i] are exactly one per coset: reduce
    # ascending through the pivots of the upper-triangular HNF rows
    rec(0, [])
    return reps, ptype


def fourier_reduce(vec, phi_map):
    """Canonical coset representative of vec modulo the column lattice."""
    m = as_int_matrix(phi_map)
    h, _ = hermite_normal_form(m.T)
    r = m.shape[0]
    v = [int(x) for x in vec]
    for i in range(r):
        q = v[i] // int(h[i, i])
        for j in range(r):
            v[j] -= q * int(h[i, j])
    return tuple(v)


# ---------------------------------------------------------------------------
# lattice-torus action on monomials
# ---------------------------------------------------------------------------

def y_action_on_monomial(lam, mu, data):
    """Action of the period lambda on the monomial with character index
    mu: the index moves to mu + phi_check(lambda) and the monomial picks
    up q^{A(lambda)} X^{mu}(lambda).

    data = (a_form, phi_check) with A(lambda) = 1/2 a_form(lambda); the
    compatibility <phi(lambda), phi_check(mu)> = A(l+m) - A(l) - A(m)
    forces a_form's matrix to equal phi_check, which is checked.
    """
    a_form, phi_check = data
    if not isinstance(a_form, QuadraticForm):
        a_form = QuadraticForm(as_int_matrix(a_form))
    pc = as_int_matrix(phi_check)
    g = a_form.matrix
    r = g.shape[0]
    if pc.shape != (r, r) or any(g[i, j] != pc[i, j]
                                 for i in range(r) for j in range(r)):
        raise InconsistentData(
            "pairing matrix must equal the polarization of A")
    lam = tuple(int(x) for x in lam)
    mu = tuple(int(x) for x in mu)
    shift = tuple(int((pc @ np.array([[x] for x in lam],
                                     dtype=object))[i, 0]) for i in range(r))
    new_mu = geom.vadd(mu, shift)
    q_exponent = a_form.value(lam) / 2
    return new_mu, q_exponent, mu


# ---------------------------------------------------------------------------
# central fiber dual complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralFiberComplex:
    components: tuple            # LatticePolytope reps, one per orbit
    incidences: tuple            # sorted (i, j, wall_vertices) triples

    @property
    def component_count(self):
        return len(self.components)


def central_fiber_complex(paving: PeriodicPaving,
                          phi_image_basis) -> CentralFiberComplex:
    """Orbit combinatorics of the maximal cells under translation by the
    column lattice of phi_image_basis, with codimension-1 incidences
    (self-incidences allowed)."""
    phib = as_int_matrix(phi_image_basis)
    r = paving.rank
    for j in range(r):
        col = tuple(int(phib[i, j]) for i in range(r))
        if not lattice_membership(paving.period_basis, col):
            raise NotInvariant(
                "phi-image generator %r is not a paving period" % (col,))

    # cosets of phi(Y) inside the paving period lattice
    m = as_int_matrix(frac_inv(paving.period_basis) @ phib)
    coset_coords, _ = fourier_indices(r, m)
    cosets = [tuple(int((paving.period_basis
                         @ np.array([[c] for c in k], dtype=object))[i, 0])
                    for i in range(r)) for k in coset_coords]

    sub = PeriodicPaving(r, phib, [], max(paving.window, 2))
    comp_index = {}
    components = []
    for i, cell in enumerate(paving.cells):
        for t in cosets:
            rep = sub.canonical_cell(geom.vadd(v, t) for v in cell.vertices)
            if rep.vertices not in comp_index:
                comp_index[rep.vertices] = len(components)
                components.append(rep)

    def component_of(vertices):
        rep = sub.canonical_cell(vertices)
        return comp_index[rep.vertices]

    incidences = set()
    for key, ((i, si), (j, sj)) in paving.walls().items():
        for t in cosets:
            ci = component_of(geom.vadd(v, geom.vadd(si, t))
                              for v in paving.cells[i].vertices)
            cj = component_of(geom.vadd(v, geom.vadd(sj, t))
                              for v in paving.cells[j].vertices)
            wall = sub.canonical_cell(geom.vadd(v, t) for v in key)
            a, b = sorted((ci, cj))
            incidences.add((a, b, wall.vertices))
    return CentralFiberComplex(tuple(components), tuple(sorted(incidences)))


# ---------------------------------------------------------------------------
# face quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FaceQuotientData:
    quotient_monoid: ToricMonoid
    pushed_function: PwAffineFunction
    coarsened_paving: Optional[PeriodicPaving]
    admissible: bool


def face_quotient(p: ToricMonoid, face_functionals,
                  phi: PwAffineFunction, gen_bound: int = 6):
    """Data attached to the face F = {x in P : u(x) = 0 for the given
    functionals}: the quotient monoid P/F, the composed function, its
    affine-region paving, and the boundedness (admissibility) flag."""
    if phi.payload_rank != p.rank:
        raise NotAFace("payload rank does not match the monoid")
    gens = p.hilbert_basis(gen_bound)
    funcs = [tuple(int(x) for x in u) for u in face_functionals]
    for u in funcs:
        for g in gens:
            if geom.dot(u, g) < 0:
                raise NotAFace(
                    "functional %r is negative on the monoid" % (u,))
    face_gens = [g for g in gens
                 if all(geom.dot(u, g) == 0 for u in funcs)]

    k = p.rank
    if not face_gens:
        pi = np.array([[1 if i == j else 0 for j in range(k)]
                       for i in range(k)], dtype=object)
        quotient = ToricMonoid(k, p.functionals)
    else:
        span = np.array(face_gens, dtype=object).T      # columns span F
        diag, u, v = smith_normal_form(span)
        fdim = sum(1 for x in diag if x != 0)
        pi = u[fdim:, :]                                # quotient map
        uinv = frac_inv(u)
        sec = as_int_matrix(uinv[:, fdim:])             # a section of pi
        quotient = ToricMonoid(
            k - fdim, _project_inequalities(p.functionals, sec,
                                            as_int_matrix(uinv[:, :fdim])))

    kq = pi.shape[0]
    affs = []
    for lin, const in phi.cell_affines:
        lmat = np.array([list(row) for row in lin], dtype=object)
        new_lin = pi @ lmat
        new_const = tuple(sum(pi[i, j] * const[j] for j in range(k))
                          for i in range(kq))
        affs.append((tuple(tuple(new_lin[i, j] for j in range(phi.rank))
                           for i in range(kq)), new_const))
    bil = [sum((pi[i, j] * phi.quasi_bilinear[j] for j in range(k)),
               np.zeros((phi.rank, phi.rank), dtype=object))
           for i in range(kq)]
    lmat = np.array([list(row) for row in phi.quasi_linear], dtype=object)
    new_l = pi @ lmat
    lins = tuple(tuple(new_l[i, j] for j in range(phi.rank))
                 for i in range(kq))
    if kq == 0:
        # quotient by everything: the pushed function is identically 0
        affs = [((), ())] * len(phi.cell_affines)
        bil, lins = [], ()
        pushed = _ZeroFunction(phi.paving)
        return FaceQuotientData(quotient, pushed, None, False)
    pushed = PwAffineFunction(phi.paving, affs, bil, lins, payload_rank=kq)
    try:
        coarser = affine_region_paving(pushed)
        return FaceQuotientData(quotient, pushed, coarser, True)
    except Unbounded:
        return FaceQuotientData(quotient, pushed, None, False)


class _ZeroFunction:
    """Stand-in for a function with zero-dimensional payload (quotient
    by the whole monoid): identically zero, every wall unbent."""

    def __init__(self, paving):
        self.paving = paving
        self.rank = paving.rank
        self.payload_rank = 0

    def evaluate(self, point):
        return ()


def _project_inequalities(functionals, sec, face_basis):
    """Fourier-Motzkin image of {u_i >= 0} under quotient by the span of
    face_basis columns: substitute x = sec y + face_basis z, then
    eliminate the z variables."""
    nz = face_basis.shape[1]
    rows = []
    for u in functionals:
        urow = np.array([[int(x) for x in u]], dtype=object)
        ypart = [int(x) for x in (urow @ sec)[0]]
        zpart = [int(x) for x in (urow @ face_basis)[0]]
        rows.append((ypart, zpart))
    for zi in range(nz):
        pos = [rw for rw in rows if rw[1][zi] > 0]
        neg = [rw for rw in rows if rw[1][zi] < 0]
        zero = [rw for rw in rows if rw[1][zi] == 0]
        combined = []
        for yp, zp in pos:
            for yn, zn in neg:
                a, b = zp[zi], -zn[zi]
                yrow = [b * x + a * t for x, t in zip(yp, yn)]
                zrow = [b * x + a * t for x, t in zip(zp, zn)]
                combined.append((yrow, zrow))
        rows = zero + combined
    out = []
    for yp, _ in rows:
        if any(yp):
            out.append(_primitive_signed(yp))
    return sorted(set(out))


def _primitive_signed(vec):
    """Divide by the gcd, keeping the sign (these are one-sided
    inequalities, unlike hyperplane normals)."""
    from math import gcd
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    if g == 0:
        return tuple(int(x) for x in vec)
    return tuple(int(x) // g for x in vec)
