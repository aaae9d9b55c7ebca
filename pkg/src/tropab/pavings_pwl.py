"""Periodic piecewise-affine functions on lattices.

Bending parameters across walls, convexity against a toric monoid of
payloads, the quadratic + periodic splitting of quasiperiodic
functions, interpolation over periodic triangulations, the linear
section Q -> interpolation of 1/2 Q, and the discrete Legendre
transform.  Everything is exact rational arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import _geometry as geom
from .errors import (MissingVertexValue, NonMatchingFaces, NotConvex,
                     NotPositiveDefinite, NotQuasiperiodic, NotSimplicial,
                     RankMismatch, Unbounded, WindowTooSmall)
from .exact_linalg import (as_frac_matrix, as_int_matrix, frac_inv,
                           is_positive_definite)
from .quadform_delaunay import (LatticePolytope, PeriodicPaving,
                                QuadraticForm, delaunay_subdivision)


def _col(v):
    return np.array([[Fraction(x)] for x in v], dtype=object)


def _as_rows(lin, k, r):
    """Normalize a linear part to a k-tuple of length-r rows."""
    lin = list(lin)
    if lin and not isinstance(lin[0], (list, tuple, np.ndarray)):
        lin = [lin]
    out = tuple(tuple(Fraction(x) for x in row) for row in lin)
    assert len(out) == k and all(len(row) == r for row in out)
    return out


def _as_vec(const, k):
    if not isinstance(const, (list, tuple, np.ndarray)):
        const = [const]
    out = tuple(Fraction(x) for x in const)
    assert len(out) == k
    return out


class PwAffineFunction:
    """A piecewise affine function on R^r, periodic paving + one affine
    piece per representative cell, with quasiperiodicity data.

    Payload values live in Q^k; for k = 1 evaluation returns a plain
    Fraction.  Quasiperiodicity: for a period lattice vector m,

        f(x + m) - f(x) = sum_i e_i (m^T B_i x + 1/2 m^T B_i m + 1/2 L_i m)

    with B_i the symmetric quadratic matrices and L_i the linear rows.
    """

    def __init__(self, paving: PeriodicPaving, cell_affines,
                 quasi_bilinear, quasi_linear, payload_rank: int = 1):
        self.paving = paving
        self.rank = paving.rank
        self.payload_rank = int(payload_rank)
        k, r = self.payload_rank, self.rank
        if len(cell_affines) != len(paving.cells):
            raise ValueError("one affine piece per representative cell")
        self.cell_affines = [(_as_rows(lin, k, r), _as_vec(const, k))
                             for lin, const in cell_affines]
        self.quasi_bilinear = [as_frac_matrix(b) for b in quasi_bilinear]
        assert len(self.quasi_bilinear) == k
        self.quasi_linear = _as_rows(quasi_linear, k, r)

    # -- evaluation -----------------------------------------------------

    def affine_on_cell(self, idx: int, shift):
        """The affine piece valid on cells[idx] + shift."""
        lam = tuple(Fraction(x) for x in shift)
        lin, const = self.cell_affines[idx]
        new_lin, new_const = [], []
        for i in range(self.payload_rank):
            b = self.quasi_bilinear[i]
            blam = tuple((b @ _col(lam))[j, 0] for j in range(self.rank))
            new_lin.append(tuple(lin[i][j] + blam[j] for j in range(self.rank)))
            new_const.append(const[i]
                             - geom.dot(lin[i], lam)
                             - geom.dot(lam, blam) / 2
                             + geom.dot(self.quasi_linear[i], lam) / 2)
        return tuple(new_lin), tuple(new_const)

    def evaluate(self, point):
        pt = tuple(Fraction(x) for x in point)
        idx, shift = self.paving.find_containing_cell(pt)
        lin, const = self.affine_on_cell(idx, shift)
        vals = tuple(geom.dot(lin[i], pt) + const[i]
                     for i in range(self.payload_rank))
        return vals[0] if self.payload_rank == 1 else vals

    __call__ = evaluate

    # -- algebra --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PwAffineFunction):
            return NotImplemented
        return (self.paving == other.paving
                and self.payload_rank == other.payload_rank
                and self.cell_affines == other.cell_affines
                and all((a == b).all() for a, b in
                        zip(self.quasi_bilinear, other.quasi_bilinear))
                and self.quasi_linear == other.quasi_linear)

    def __add__(self, other):
        if self.paving != other.paving or \
                self.payload_rank != other.payload_rank:
            raise RankMismatch("can only add functions on the same paving")
        affs = [(tuple(tuple(a + b for a, b in zip(r1, r2))
                       for r1, r2 in zip(l1, l2)),
                 tuple(a + b for a, b in zip(c1, c2)))
                for (l1, c1), (l2, c2) in
                zip(self.cell_affines, other.cell_affines)]
        bil = [a + b for a, b in
               zip(self.quasi_bilinear, other.quasi_bilinear)]
        lin = tuple(tuple(a + b for a, b in zip(r1, r2))
                    for r1, r2 in zip(self.quasi_linear, other.quasi_linear))
        return PwAffineFunction(self.paving, affs, bil, lin,
                                self.payload_rank)

    def __rmul__(self, c):
        c = Fraction(c)
        affs = [(tuple(tuple(c * x for x in row) for row in lin),
                 tuple(c * x for x in const))
                for lin, const in self.cell_affines]
        bil = [c * b for b in self.quasi_bilinear]
        lin = tuple(tuple(c * x for x in row) for row in self.quasi_linear)
        return PwAffineFunction(self.paving, affs, bil, lin,
                                self.payload_rank)


@dataclass(frozen=True)
class QuasiperiodicDecomposition:
    """psi = A + periodic with A(x) = 1/2 x^T B x + 1/2 L x."""

    bilinear: np.ndarray          # symmetric rational matrix B
    quadratic_linear: tuple       # rational row L
    periodic: dict                # residue point -> value
    period_basis: np.ndarray

    def quadratic_part(self, x):
        v = _col(x)
        b = self.bilinear
        return (Fraction((v.T @ b @ v)[0, 0]) / 2
                + geom.dot(self.quadratic_linear,
                           tuple(Fraction(t) for t in x)) / 2)

    def reconstruct(self, x):
        res = _residue(x, self.period_basis)
        if res not in self.periodic:
            raise MissingVertexValue("no sampled value in the orbit of %r"
                                     % (x,))
        return self.quadratic_part(x) + self.periodic[res]


def _residue(x, period_basis):
    pbi = frac_inv(period_basis)
    coords = pbi @ _col(x)
    r = period_basis.shape[0]
    floors = [Fraction(coords[i, 0]).numerator
              // Fraction(coords[i, 0]).denominator for i in range(r)]
    t = period_basis @ np.array([[f] for f in floors], dtype=object)
    return tuple(Fraction(x[i]) - t[i, 0] for i in range(r))


class ToricMonoid:
    """The monoid of lattice points of a rational polyhedral cone, given
    by the integral linear functionals cutting the cone out."""

    def __init__(self, rank: int, functionals):
        self.rank = int(rank)
        self.functionals = tuple(tuple(int(x) for x in u)
                                 for u in functionals)
        assert all(len(u) == self.rank for u in self.functionals)

    @staticmethod
    def nonnegative_orthant(rank: int) -> "ToricMonoid":
        return ToricMonoid(rank, [tuple(1 if j == i else 0
                                        for j in range(rank))
                                  for i in range(rank)])

    def contains(self, v) -> bool:
        vv = [Fraction(x) for x in v]
        if any(x.denominator != 1 for x in vv):
            return False
        return all(geom.dot(u, vv) >= 0 for u in self.functionals)

    def is_unit(self, v) -> bool:
        return self.contains(v) and self.contains(tuple(-x for x in v))

    def is_sharp(self) -> bool:
        """No nonzero invertibles: the functionals span full rank."""
        return geom._rank([list(u) for u in self.functionals]) == self.rank

    def hilbert_basis(self, bound: int = 6):
        """Irreducible monoid elements within a coordinate box; naive
        pairwise-subtraction sieve, desk scale only."""
        pts = [p for p in _int_window(self.rank, bound)
               if any(p) and self.contains(p)]
        pts.sort(key=lambda p: (sum(abs(x) for x in p), p))
        basis = []
        for p in pts:
            # reducible iff p = a + d with both summands nonzero in the
            # monoid (a summand can be longer than p, so test them all)
            if any(any(d) and self.contains(d)
                   for d in (geom.vsub(p, a) for a in pts)):
                continue
            basis.append(p)
        return basis


def _int_window(r, w):
    if r == 0:
        yield ()
        return
    for rest in _int_window(r - 1, w):
        for x in range(-w, w + 1):
            yield rest + (x,)


# ---------------------------------------------------------------------------
# bending parameters and convexity
# ---------------------------------------------------------------------------

def bending_parameters(f: PwAffineFunction):
    """Payload vector across each wall orbit of f's paving.

    For a wall between sigma+ and sigma- (sides named so the primitive
    wall normal is positive on sigma+), the bending is the linear part
    of f|sigma+ - f|sigma- evaluated at an integral transversal omega
    with <normal, omega> = 1.
    """
    out = {}
    for key, incidences in f.paving.walls().items():
        (i, si), (j, sj) = incidences
        n, c = _wall_hyperplane(key, f.rank)
        aff_i = f.affine_on_cell(i, si)
        aff_j = f.affine_on_cell(j, sj)
        # the two pieces must agree on the wall itself
        for v in key:
            for p in range(f.payload_rank):
                vi = geom.dot(aff_i[0][p], v) + aff_i[1][p]
                vj = geom.dot(aff_j[0][p], v) + aff_j[1][p]
                if vi != vj:
                    raise NonMatchingFaces(
                        "pieces disagree at wall vertex %r" % (v,))
        bary = _barycenter_of(f.paving, i, si)
        if geom.dot(n, bary) - c > 0:
            plus, minus = aff_i, aff_j
        else:
            # n is negative on cell i's side, hence positive on cell j's
            plus, minus = aff_j, aff_i
        omega = geom.integer_transversal(n)
        out[key] = tuple(geom.dot(tuple(a - b for a, b in
                                        zip(plus[0][p], minus[0][p])), omega)
                         for p in range(f.payload_rank))
    return out


def _wall_hyperplane(wall_vertices, r):
    verts = [tuple(Fraction(x) for x in v) for v in wall_vertices]
    base = [verts[0]]
    for v in verts[1:]:
        if geom.affine_dim(base + [v]) > geom.affine_dim(base):
            base.append(v)
        if len(base) == r:
            break
    n = geom.normal_through(base)
    return n, geom.dot(n, verts[0])


def _barycenter_of(paving, idx, shift):
    vs = paving.cells[idx].vertices
    return tuple(sum(Fraction(v[i]) for v in vs) / len(vs) + shift[i]
                 for i in range(paving.rank))


def is_p_convex(f: PwAffineFunction, p: ToricMonoid,
                strict: bool = False) -> bool:
    """Every bending parameter lies in p (strict: and is not a unit)."""
    if f.payload_rank != p.rank:
        raise RankMismatch("payload rank %d vs monoid rank %d"
                           % (f.payload_rank, p.rank))
    for bend in bending_parameters(f).values():
        if not p.contains(bend):
            return False
        if strict and p.is_unit(bend):
            return False
    return True


# ---------------------------------------------------------------------------
# quasiperiodic decomposition (quadratic + periodic splitting)
# ---------------------------------------------------------------------------

def quasiperiodic_decompose(samples: Dict[tuple, Fraction],
                            period_basis) -> QuasiperiodicDecomposition:
    """Split lattice samples of a quasiperiodic function into a
    quadratic part 1/2 x^T B x + 1/2 L x and an exactly periodic rest.

    Second differences along every pair of period generators must be
    constant in the base point; any violation, or failure of the
    reconstruction, raises NotQuasiperiodic.
    """
    pb = as_int_matrix(period_basis)
    r = pb.shape[0]
    samples = {tuple(int(x) for x in k): Fraction(v)
               for k, v in samples.items()}
    gens = [tuple(int(pb[i, j]) for i in range(r)) for j in range(r)]

    gram = np.empty((r, r), dtype=object)
    for i in range(r):
        for j in range(i, r):
            vals = set()
            for x in samples:
                pts = (geom.vadd(geom.vadd(x, gens[i]), gens[j]),
                       geom.vadd(x, gens[i]), geom.vadd(x, gens[j]))
                if all(p in samples for p in pts):
                    vals.add(samples[pts[0]] - samples[pts[1]]
                             - samples[pts[2]] + samples[x])
            if len(vals) != 1:
                raise NotQuasiperiodic(
                    "second difference along generators (%d, %d) is not "
                    "constant" % (i, j))
            gram[i, j] = gram[j, i] = vals.pop()

    pbi = frac_inv(pb)
    bil = pbi.T @ gram @ pbi

    lvals = []
    for i in range(r):
        vals = set()
        for x in samples:
            y = geom.vadd(x, gens[i])
            if y in samples:
                bx = (np.array([[Fraction(t) for t in x]], dtype=object)
                      @ bil @ _col(gens[i]))[0, 0]
                vals.add(samples[y] - samples[x] - bx)
        if len(vals) != 1:
            raise NotQuasiperiodic(
                "increment along generator %d is not affine" % i)
        a_gen = vals.pop()                      # A(gen_i)
        lvals.append(2 * a_gen - Fraction(gram[i, i]))  # L . gen_i

    lrow = tuple(Fraction(x)
                 for x in (np.array([lvals], dtype=object) @ pbi)[0])

    dec = QuasiperiodicDecomposition(bil, lrow, {}, pb)
    periodic = {}
    for x, v in samples.items():
        res = _residue(x, pb)
        p = v - dec.quadratic_part(x)
        if periodic.setdefault(res, p) != p:
            raise NotQuasiperiodic("residue %r has inconsistent periodic "
                                   "part" % (res,))
    return QuasiperiodicDecomposition(bil, lrow, periodic, pb)


# ---------------------------------------------------------------------------
# interpolation over a periodic triangulation
# ---------------------------------------------------------------------------

def interpolate_on_triangulation(values: Dict[tuple, Fraction],
                                 t: PeriodicPaving) -> PwAffineFunction:
    """The function affine on each simplex of t matching the sampled
    vertex values (which must be quasiperiodic for the result to be
    well-defined off the sampled window)."""
    r = t.rank
    for c in t.cells:
        if len(c.vertices) != r + 1:
            raise NotSimplicial("cell %r is not a simplex" % (c.vertices,))
    dec = quasiperiodic_decompose(values, t.period_basis)

    affines = []
    for c in t.cells:
        rows, rhs = [], []
        for v in c.vertices:
            rows.append([Fraction(x) for x in v] + [Fraction(1)])
            rhs.append(dec.reconstruct(v))
        sol = frac_inv(np.array(rows, dtype=object)) @ \
            np.array([[x] for x in rhs], dtype=object)
        lin = tuple(sol[i, 0] for i in range(r))
        affines.append((lin, sol[r, 0]))

    return PwAffineFunction(t, affines, [dec.bilinear],
                            [dec.quadratic_linear], payload_rank=1)


def cone_cy_membership(psi: Dict[tuple, Fraction], t: PeriodicPaving,
                       period_basis) -> bool:
    """Is the interpolation of psi over t convex and below psi at every
    non-vertex lattice point of the window?"""
    pb = as_int_matrix(period_basis)
    dec = quasiperiodic_decompose(psi, pb)
    g = interpolate_on_triangulation(psi, t)
    if any(b[0] < 0 for b in bending_parameters(g).values()):
        return False
    vert_orbits = t.vertex_orbits()
    for alpha in _int_window(t.rank, t.window):
        res = geom.vsub(alpha, t._reduce_shift(alpha))
        if tuple(res) in vert_orbits:
            continue
        try:
            target = dec.reconstruct(alpha)
        except MissingVertexValue:
            continue
        if g.evaluate(alpha) > target:
            return False
    return True


# ---------------------------------------------------------------------------
# the linear section Q -> interpolation of 1/2 Q
# ---------------------------------------------------------------------------

def sigma_section(q: QuadraticForm, period_basis,
                  window: int) -> PwAffineFunction:
    """Interpolation of x -> 1/2 Q(x) over the Delaunay paving of Q.

    The result is quasiperiodic with quadratic matrix Q and no linear
    part; each Delaunay cell is cospherical, so the interpolation is a
    single affine piece per cell even on non-simplices.
    """
    pav = delaunay_subdivision(q, period_basis, window)
    r = q.rank
    affines = []
    for c in pav.cells:
        base = [c.vertices[0]]
        for v in c.vertices[1:]:
            if geom.affine_dim(base + [v]) > geom.affine_dim(base):
                base.append(v)
            if len(base) == r + 1:
                break
        rows = [[Fraction(x) for x in v] + [Fraction(1)] for v in base]
        rhs = [q.value(v) / 2 for v in base]
        sol = frac_inv(np.array(rows, dtype=object)) @ \
            np.array([[x] for x in rhs], dtype=object)
        lin = tuple(sol[i, 0] for i in range(r))
        const = sol[r, 0]
        for v in c.vertices:  # cosphericity: the rest lie on the same plane
            assert geom.dot(lin, v) + const == q.value(v) / 2
        affines.append((lin, const))
    zero = tuple(Fraction(0) for _ in range(r))
    return PwAffineFunction(pav, affines, [q.matrix], [zero], payload_rank=1)


# ---------------------------------------------------------------------------
# discrete Legendre transform
# ---------------------------------------------------------------------------

def legendre_transform(f: PwAffineFunction, window: int):
    """phi-check(mu) = -min over paving vertices y of (f(y) + <y, mu>),
    on dual lattice points with coordinates in [-window, window].

    The minimizing vertex must be strictly inside the vertex window
    searched, otherwise the truncation is not certified.
    """
    if f.payload_rank != 1:
        raise RankMismatch("Legendre transform needs scalar payload")
    bends = bending_parameters(f)
    if any(b[0] < 0 for b in bends.values()):
        raise NotConvex("negative bending parameter")
    if not is_positive_definite(f.quasi_bilinear[0]):
        raise Unbounded("associated quadratic form is not positive definite")

    pb = f.paving.period_basis
    r = f.rank
    vwindow = 2 * window + 2   # search strictly beyond the dual box
    verts = []
    for k in _int_window(r, vwindow):
        shift = tuple(int(x) for x in
                      (pb @ np.array([[c] for c in k], dtype=object))[:, 0])
        for v in f.paving.vertex_orbits():
            y = geom.vadd(v, shift)
            interior = all(abs(c) < vwindow for c in k)
            verts.append((y, interior))
    fvals = {y: f.evaluate(y) for y, _ in verts}

    out = {}
    for mu in _int_window(r, window):
        best, best_interior = None, False
        for y, interior in verts:
            val = fvals[y] + geom.dot(y, mu)
            if best is None or val < best:
                best, best_interior = val, interior
            elif val == best and interior:
                best_interior = True
        if not best_interior:
            raise WindowTooSmall(
                "minimum for mu=%r attained only at the window boundary"
                % (mu,))
        out[mu] = -best
    return out


# ---------------------------------------------------------------------------
# affine-region paving (merge walls with zero bending)
# ---------------------------------------------------------------------------

def affine_region_paving(f: PwAffineFunction) -> PeriodicPaving:
    """The coarsening of f's paving into maximal regions on which f is
    affine: walls with zero bending are erased.

    Raises Unbounded when a merged region is unbounded (detected as a
    zero-bending wall chain returning to the same cell orbit with a
    nonzero net translation).
    """
    bends = bending_parameters(f)
    n = len(f.paving.cells)
    r = f.rank
    parent = list(range(n))
    offset = [(0,) * r for _ in range(n)]   # position relative to root

    def find(i):
        if parent[i] == i:
            return i, (0,) * r
        root, off = find(parent[i])
        parent[i] = root
        offset[i] = geom.vadd(offset[i], off)
        return root, offset[i]

    for key, incidences in f.paving.walls().items():
        if any(x != 0 for x in bends[key]):
            continue
        (i, si), (j, sj) = incidences
        ri, oi = find(i)
        rj, oj = find(j)
        # cells i+si and j+sj are glued: pos(j) - pos(i) = sj - si
        rel = geom.vsub(sj, si)
        if ri == rj:
            if geom.vadd(oi, rel) != oj:
                raise Unbounded("zero-bending wall cycle with nonzero "
                                "translation")
            continue
        parent[rj] = ri
        offset[rj] = geom.vsub(geom.vadd(oi, rel), oj)

    groups = {}
    for i in range(n):
        root, off = find(i)
        groups.setdefault(root, []).append((i, off))

    merged = []
    for members in groups.values():
        pts = []
        for i, off in members:
            for v in f.paving.cells[i].vertices:
                pts.append(geom.vadd(v, off))
        merged.append(f.paving.canonical_cell(geom.extreme_points(pts)))
    return PeriodicPaving(f.rank, f.paving.period_basis, merged,
                          f.paving.window)
