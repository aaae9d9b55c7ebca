"""Delaunay decompositions of lattices under positive-definite rational
quadratic forms, and membership in the closed second-Voronoi cones.

The subdivision is computed as the regular subdivision of the lift
x -> 1/2 Q(x): exact gift-wrapping of the lower hull over a finite
window of lattice points, with cospherical cells kept whole.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import _geometry as geom
from .errors import (Degenerate, InvalidPaving, NotPositiveDefinite,
                     WindowTooSmall)
from .exact_linalg import (as_frac_matrix, as_int_matrix, frac_det, frac_inv,
                           hermite_normal_form, is_positive_definite,
                           is_positive_semidefinite, is_symmetric,
                           smith_normal_form)


@dataclass(frozen=True)
class QuadraticForm:
    """A symmetric rational matrix; Q(x) = x^T M x."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_frac_matrix(self.matrix)
        if not is_symmetric(m):
            raise ValueError("quadratic form matrix must be symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]

    def value(self, x) -> Fraction:
        v = [Fraction(t) for t in x]
        return sum(self.matrix[i, j] * v[i] * v[j]
                   for i in range(self.rank) for j in range(self.rank))

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.matrix)

    def __add__(self, other):
        return QuadraticForm(self.matrix + other.matrix)

    def scaled(self, c) -> "QuadraticForm":
        return QuadraticForm(Fraction(c) * self.matrix)


def _as_int_if_possible(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f


@dataclass(frozen=True)
class LatticePolytope:
    """Vertex set of a cell, stored sorted for canonical comparison."""

    vertices: Tuple[Tuple, ...]

    def __post_init__(self):
        vs = tuple(sorted(tuple(_as_int_if_possible(x) for x in v)
                          for v in self.vertices))
        assert len(set(vs)) == len(vs), "duplicate vertices"
        object.__setattr__(self, "vertices", vs)

    @property
    def dim(self) -> int:
        return geom.affine_dim(self.vertices)

    def translated(self, t) -> "LatticePolytope":
        return LatticePolytope(tuple(geom.vadd(v, t) for v in self.vertices))

    def facets(self):
        return geom.polytope_facets(self.vertices)

    def volume(self) -> Fraction:
        return geom.polytope_volume(self.vertices)


class PeriodicPaving:
    """A periodic polytopal subdivision, stored by cell-orbit reps.

    period_basis columns generate the translation lattice; ``cells``
    holds one canonical representative per orbit of maximal cells.
    """

    def __init__(self, rank, period_basis, cells, window):
        self.rank = int(rank)
        self.period_basis = as_int_matrix(period_basis)
        if self.period_basis.shape != (self.rank, self.rank):
            raise InvalidPaving("period basis must be square of the rank")
        if frac_det(self.period_basis) == 0:
            raise InvalidPaving("period basis must be nondegenerate")
        self.window = int(window)
        self.cells: List[LatticePolytope] = sorted(
            (c if isinstance(c, LatticePolytope) else LatticePolytope(tuple(c))
             for c in cells),
            key=lambda c: c.vertices)
        self._pb_inv = frac_inv(self.period_basis)
        self._facet_cache = {}
        self._wall_cache = None

    # -- canonical translates -------------------------------------------

    def _reduce_shift(self, point):
        """Lattice vector t with point - t in the fundamental half-open
        parallelepiped of the period basis."""
        coords = self._pb_inv @ np.array([[Fraction(x)] for x in point],
                                         dtype=object)
        floors = [c.numerator // c.denominator
                  for c in (Fraction(coords[i, 0]) for i in range(self.rank))]
        t = self.period_basis @ np.array([[f] for f in floors], dtype=object)
        return tuple(int(t[i, 0]) for i in range(self.rank))

    def canonical_cell(self, vertices):
        vs = sorted(tuple(v) for v in vertices)
        t = self._reduce_shift(vs[0])
        return LatticePolytope(tuple(geom.vsub(v, t) for v in vs))

    # -- structure ------------------------------------------------------

    def is_simplicial(self) -> bool:
        return all(len(c.vertices) == self.rank + 1 for c in self.cells)

    def cell_facets(self, idx):
        if idx not in self._facet_cache:
            self._facet_cache[idx] = self.cells[idx].facets()
        return self._facet_cache[idx]

    def vertex_orbits(self):
        out = set()
        for c in self.cells:
            for v in c.vertices:
                t = self._reduce_shift(v)
                out.add(geom.vsub(v, t))
        return out

    def walls(self):
        """Codimension-1 wall orbits.

        Returns dict: canonical facet vertex tuple -> list of
        (cell_index, shift) with cell[idx] + shift incident to the wall.
        """
        if self._wall_cache is not None:
            return self._wall_cache
        walls = {}
        for idx in range(len(self.cells)):
            for fverts, _n, _c in self.cell_facets(idx):
                t = self._reduce_shift(sorted(fverts)[0])
                key = tuple(sorted(geom.vsub(v, t) for v in fverts))
                shift = tuple(-x for x in t)
                walls.setdefault(key, []).append((idx, shift))
        for key, inc in walls.items():
            if len(inc) != 2:
                raise InvalidPaving(
                    "wall %r has %d incident cells" % (key, len(inc)))
        self._wall_cache = walls
        return walls

    def find_containing_cell(self, point):
        """Locate (cell_index, shift) with point in cells[idx] + shift."""
        pt = tuple(Fraction(x) for x in point)
        t0 = self._reduce_shift(pt)
        for idx in range(len(self.cells)):
            facets = self.cell_facets(idx)
            for k in _box_points(self.rank, 2):
                shift = self.period_basis @ np.array([[x] for x in k],
                                                     dtype=object)
                shift = tuple(int(shift[i, 0]) + t0[i] for i in range(self.rank))
                local = geom.vsub(pt, shift)
                if geom.point_in_polytope(local, facets):
                    return idx, shift
        raise InvalidPaving("point %r not covered by the paving" % (point,))

    def __eq__(self, other):
        if not isinstance(other, PeriodicPaving):
            return NotImplemented
        return (self.rank == other.rank
                and (self.period_basis == other.period_basis).all()
                and [c.vertices for c in self.cells]
                == [c.vertices for c in other.cells])

    def __repr__(self):
        return "PeriodicPaving(rank=%d, cells=%d, window=%d)" % (
            self.rank, len(self.cells), self.window)


def _box_points(r, w):
    if r == 0:
        yield ()
        return
    for rest in _box_points(r - 1, w):
        for x in range(-w, w + 1):
            yield rest + (x,)


# ---------------------------------------------------------------------------
# regular subdivision of the lift x -> 1/2 Q(x)
# ---------------------------------------------------------------------------

def delaunay_subdivision(q: QuadraticForm, period_basis, window: int,
                         shift=None) -> PeriodicPaving:
    """The Delaunay decomposition of Q, as a periodic paving.

    Runs the exact lower-hull computation on the lattice points whose
    period-basis coordinates lie in [-window, window]; cells touching
    the window boundary are discarded, and completeness of the surviving
    cell orbits is certified by exact volume accounting (WindowTooSmall
    otherwise).  An optional rational ``shift`` moves the site set (used
    for cusp models on shifted lattices).
    """
    if not q.is_positive_definite():
        raise NotPositiveDefinite("Delaunay needs a positive definite form")
    if window < 2:
        raise WindowTooSmall("window must be >= 2")
    r = q.rank
    pb = as_int_matrix(period_basis)
    pb_inv = frac_inv(pb)
    shift = tuple(Fraction(x) for x in (shift or (0,) * r))

    sites = _window_sites(pb, pb_inv, window, r, shift)
    heights = {s: q.value(s) / 2 for s in sites}

    boundary = set()
    for s in sites:
        coords = pb_inv @ np.array([[x] for x in geom.vsub(s, shift)],
                                   dtype=object)
        if any(abs(coords[i, 0]) == window for i in range(r)):
            boundary.add(s)

    paving = PeriodicPaving(r, pb, [], window)
    covol = abs(frac_det(pb))
    reps = {}
    total = Fraction(0)
    for eq in _lower_hull(sites, heights, r):
        if any(v in boundary for v in eq):
            continue
        cell = paving.canonical_cell(eq)
        if cell.vertices in reps:
            continue
        reps[cell.vertices] = cell
        total += cell.volume()
        if total == covol:  # one full fundamental domain is accounted for
            break
    if total != covol:
        raise WindowTooSmall(
            "cell orbits cover volume %s of %s; enlarge the window"
            % (total, covol))
    return PeriodicPaving(r, pb, list(reps.values()), window)


def _window_sites(pb, pb_inv, window, r, shift):
    # bounding box of the parallelepiped pb * [-w, w]^r, in std coords
    lo = [Fraction(0)] * r
    hi = [Fraction(0)] * r
    for i in range(r):
        span = sum(abs(pb[i, j]) * window for j in range(r))
        lo[i], hi[i] = -span, span
    sites = []
    for p in _int_box(lo, hi):
        coords = pb_inv @ np.array([[x] for x in p], dtype=object)
        if all(-window <= coords[i, 0] <= window for i in range(r)):
            sites.append(tuple(Fraction(x) + s for x, s in zip(p, shift)))
    return sites


def _int_box(lo, hi):
    rngs = [range(int(l), int(h) + 1) for l, h in zip(lo, hi)]

    def rec(i):
        if i == len(rngs):
            yield ()
            return
        for rest in rec(i + 1):
            for x in rngs[i]:
                yield (x,) + rest
    return rec(0)


def _lower_hull(sites, heights, r):
    """Lower-hull facets of the lifted sites, by exact gift-wrapping.

    Yields each facet as the frozenset of sites lying on its supporting
    affine functional (the equality set), breadth-first from an initial
    facet so that callers can stop once they have seen enough.
    """
    site_list = list(sites)

    def slack(ell, x):
        a, b = ell
        return heights[x] - (geom.dot(a, x) + b)

    # ---- initial facet: start from the global minimum and tilt up ----
    m = min(heights.values())
    ell = ((Fraction(0),) * r, m)
    tight = [x for x in site_list if slack(ell, x) == 0]
    while geom.affine_dim(tight) < r:
        u = _orthogonal_direction(tight, r)
        ell2, tight2 = _tilt(ell, u, tight[0], site_list, slack)
        if ell2 is None:  # no site on the positive side; tilt the other way
            u = tuple(-x for x in u)
            ell2, tight2 = _tilt(ell, u, tight[0], site_list, slack)
            assert ell2 is not None, "sites do not affinely span"
        ell, tight = ell2, tight2
    start = frozenset(tight)
    facet_fn = {start: ell}
    yield start

    # ---- breadth-first over ridges -----------------------------------
    queue = [start]
    done_ridges = set()
    while queue:
        eq = queue.pop()
        ell = facet_fn[eq]
        verts = sorted(eq)
        for ridge, n, c in geom.polytope_facets(verts):
            rkey = (frozenset(ridge), frozenset(eq))
            if rkey in done_ridges:
                continue
            done_ridges.add(rkey)
            # rotate away from the facet: need <n,.> - c negative on eq\ridge,
            # which the outward convention already gives us via n -> n.
            u = n  # outward: <n, x> <= c on the facet
            best_t, tight2 = None, []
            for x in site_list:
                d = geom.dot(u, x) - c
                if d <= 0:
                    continue
                s = slack(ell, x)
                t = Fraction(s, d)
                if best_t is None or t < best_t:
                    best_t, tight2 = t, [x]
                elif t == best_t:
                    tight2.append(x)
            if best_t is None:
                continue  # hull boundary within the window
            a, b = ell
            ell2 = (tuple(ai + best_t * ui for ai, ui in zip(a, u)),
                    b - best_t * c)
            new_eq = frozenset(x for x in site_list if slack(ell2, x) == 0)
            if new_eq not in facet_fn:
                facet_fn[new_eq] = ell2
                queue.append(new_eq)
                yield new_eq


def _orthogonal_direction(tight, r):
    """A nonzero rational direction orthogonal to the affine span."""
    p0 = tight[0]
    diffs = [geom.vsub(p, p0) for p in tight[1:]]
    # kernel of the difference matrix via row reduction with identity
    rows = [[Fraction(x) for x in d] for d in diffs]
    # find a vector u with <u, d> = 0 for all d: nullspace of the matrix
    aug = [list(row) for row in rows]
    # gaussian elimination to echelon; free columns give kernel vectors
    pivots = []
    lead = 0
    for col in range(r):
        piv = None
        for i in range(lead, len(aug)):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[lead], aug[piv] = aug[piv], aug[lead]
        pr = aug[lead]
        for i in range(len(aug)):
            if i != lead and aug[i][col] != 0:
                f = aug[i][col] / pr[col]
                aug[i] = [a - f * b for a, b in zip(aug[i], pr)]
        pivots.append(col)
        lead += 1
    free = [c for c in range(r) if c not in pivots]
    assert free, "already full dimensional"
    fc = free[0]
    u = [Fraction(0)] * r
    u[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        u[pc] = -aug[i][fc] / aug[i][pc]
    return tuple(u)


def _tilt(ell, u, x0, site_list, slack):
    a, b = ell
    c0 = geom.dot(u, x0)
    best_t, tight = None, []
    for x in site_list:
        d = geom.dot(u, x) - c0
        if d <= 0:
            continue
        t = Fraction(slack(ell, x), d)
        if best_t is None or t < best_t:
            best_t, tight = t, [x]
        elif t == best_t:
            tight.append(x)
    if best_t is None:
        return None, None
    ell2 = (tuple(ai + best_t * ui for ai, ui in zip(a, u)),
            b - best_t * c0)
    new_tight = [x for x in site_list if slack(ell2, x) == 0]
    return ell2, new_tight


# ---------------------------------------------------------------------------
# empty sphere predicate
# ---------------------------------------------------------------------------

def empty_sphere_check(cell, q: QuadraticForm, window: int) -> bool:
    """Does the cell satisfy the empty-sphere condition for Q?

    True iff some rational center is Q-equidistant from all cell
    vertices and strictly closer to them than to every other lattice
    point in the window.  For full-dimensional cells the center is
    unique; for lower-dimensional cells the minimal-radius center
    (constrained to the affine hull) is the candidate tested.
    """
    if not q.is_positive_definite():
        raise NotPositiveDefinite("empty-sphere check needs Q > 0")
    verts = cell.vertices if isinstance(cell, LatticePolytope) else \
        tuple(tuple(v) for v in cell)
    r = q.rank
    center = _equidistant_center(verts, q)
    if center is None:
        return False
    radius = _qdist(q, verts[0], center)
    vset = set(verts)
    for p in _box_points(r, window):
        if p in vset:
            continue
        if _qdist(q, p, center) <= radius:
            return False
    return True


def _qdist(q, x, c):
    d = [Fraction(a) - b for a, b in zip(x, c)]
    return sum(q.matrix[i, j] * d[i] * d[j]
               for i in range(q.rank) for j in range(q.rank))


def _equidistant_center(verts, q):
    """Solve for a Q-equidistant center; constrained to the affine hull
    when the cell is lower-dimensional (minimal radius)."""
    r = q.rank
    v0 = verts[0]
    d = geom.affine_dim(verts)
    if d == 0:
        return tuple(Fraction(x) for x in v0)
    basis = []
    for v in verts[1:]:
        trial = basis + [geom.vsub(v, v0)]
        if geom.affine_dim([(0,) * r] + [tuple(t) for t in trial]) == len(trial):
            basis.append(geom.vsub(v, v0))
        if len(basis) == d:
            break
    # center c = v0 + sum t_k basis_k ; equations Q(v - c) = Q(v0 - c)
    rows, rhs = [], []
    for v in verts[1:]:
        dv = geom.vsub(v, v0)
        row = [2 * sum(q.matrix[i, j] * Fraction(dv[i]) * Fraction(bk[j])
                       for i in range(r) for j in range(r))
               for bk in basis]
        rows.append(row)
        rhs.append(q.value(dv))
    # solve the (possibly overdetermined) system exactly
    sq, sr = [], []
    for row, t in zip(rows, rhs):
        if geom._rank(sq + [row]) > len(sq):
            sq.append(row)
            sr.append(t)
    if len(sq) < d:
        return None
    sol = frac_inv(np.array(sq, dtype=object)) @ \
        np.array([[x] for x in sr], dtype=object)
    ts = [sol[i, 0] for i in range(d)]
    for row, t in zip(rows, rhs):
        if sum(a * b for a, b in zip(row, ts)) != t:
            return None
    c = [Fraction(x) for x in v0]
    for t, bk in zip(ts, basis):
        for i in range(r):
            c[i] += t * bk[i]
    return tuple(c)


# ---------------------------------------------------------------------------
# second Voronoi cone membership
# ---------------------------------------------------------------------------

def voronoi_cone_contains(paving: PeriodicPaving, q: QuadraticForm) -> bool:
    """Is q in the closed cone C(paving) of the second Voronoi fan?

    True iff Delaunay(q) is equal to or coarser than the paving.
    Semidefinite forms are handled by passing to the quotient by the
    exact kernel lattice.
    """
    if not isinstance(paving, PeriodicPaving) or not paving.cells:
        raise InvalidPaving("need a nonempty periodic paving")
    if q.rank != paving.rank:
        raise InvalidPaving("rank mismatch between form and paving")
    if not is_positive_semidefinite(q.matrix):
        return False
    if q.is_positive_definite():
        dq = delaunay_subdivision(q, paving.period_basis,
                                  max(paving.window, 2))
        return _refines(paving, dq)
    if all(q.matrix[i, j] == 0 for i in range(q.rank) for j in range(q.rank)):
        return True  # single cell = everything; coarser than any paving
    pi, sec = _kernel_quotient(q)
    qprime = QuadraticForm(sec.T @ q.matrix @ sec)
    pb_quot = _projected_lattice_basis(pi @ paving.period_basis)
    dq = delaunay_subdivision(qprime, pb_quot, max(paving.window + 1, 3))
    for idx in range(len(paving.cells)):
        proj = [tuple(int(y) for y in (pi @ np.array([[x] for x in v],
                                                     dtype=object))[:, 0])
                for v in paving.cells[idx].vertices]
        if not _some_cell_contains(dq, proj):
            return False
    return True


def _refines(paving, dq):
    """Every cell of ``paving`` sits inside a single cell of ``dq``."""
    for idx in range(len(paving.cells)):
        if not _some_cell_contains(dq, paving.cells[idx].vertices):
            return False
    return True


def _some_cell_contains(dq, points):
    pts = [tuple(Fraction(x) for x in p) for p in points]
    bary = tuple(sum(p[i] for p in pts) / len(pts)
                 for i in range(len(pts[0])))
    try:
        idx, shift = dq.find_containing_cell(bary)
    except InvalidPaving:
        return False
    facets = [(f, n, c + geom.dot(n, shift))
              for f, n, c in dq.cell_facets(idx)]
    return all(geom.point_in_polytope(p, facets) for p in pts)


def _kernel_quotient(q):
    """Projection pi and section sec for Z^r -> Z^r / ker(q) (saturated)."""
    m = q.matrix
    r = q.rank
    # rational kernel basis, then saturate to an integral basis
    rows = [[m[i, j] for j in range(r)] for i in range(r)]
    kern = _rational_kernel(rows, r)
    ints = []
    for v in kern:
        den = 1
        for x in v:
            den = den * x.denominator // np.gcd(den, x.denominator)
        ints.append([int(x * den) for x in v])
    kb = np.array(ints, dtype=object).T  # columns = kernel basis
    diag, u, v = smith_normal_form(kb)
    k = kb.shape[1]
    # u maps the saturation of the kernel onto span(e_1..e_k)
    pi = u[k:, :]
    uinv = frac_inv(u)
    sec = as_int_matrix(uinv[:, k:])
    return pi, sec


def _rational_kernel(rows, n):
    aug = [[Fraction(x) for x in row] for row in rows]
    pivots, lead = [], 0
    for col in range(n):
        piv = None
        for i in range(lead, len(aug)):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[lead], aug[piv] = aug[piv], aug[lead]
        pr = aug[lead]
        for i in range(len(aug)):
            if i != lead and aug[i][col] != 0:
                f = aug[i][col] / pr[col]
                aug[i] = [a - f * b for a, b in zip(aug[i], pr)]
        pivots.append(col)
        lead += 1
    out = []
    for fc in [c for c in range(n) if c not in pivots]:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -aug[i][fc] / aug[i][pc]
        out.append(v)
    return out


def _projected_lattice_basis(cols):
    """A square basis for the lattice generated by the columns of cols."""
    h, _ = hermite_normal_form(as_int_matrix(cols).T)
    rows = [tuple(int(x) for x in h[i]) for i in range(h.shape[0])
            if any(h[i, j] != 0 for j in range(h.shape[1]))]
    return np.array(rows, dtype=object).T
