"""Exact polyhedral helpers shared by the Delaunay and paving machinery.

Everything works over the rationals with numpy object arrays or plain
tuples of Fraction/int.  Dimensions are desk scale (r <= 3), so the
facet enumeration is allowed to be quadratic/cubic in the number of
points.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np

from .exact_linalg import frac_det, frac_inv


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def scale(a, c):
    return tuple(c * x for x in a)


def affine_dim(points):
    """Dimension of the affine hull of a point collection."""
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    mat = [list(vsub(p, p0)) for p in pts[1:]]
    return _rank(mat)


def _rank(rows):
    rows = [[Fraction(x) for x in row] for row in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def primitive(vec):
    """Divide an integer vector by the gcd of its entries; canonical sign
    (first nonzero entry positive)."""
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    if g == 0:
        return tuple(int(x) for x in vec)
    v = tuple(int(x) // g for x in vec)
    for x in v:
        if x != 0:
            return v if x > 0 else tuple(-y for y in v)
    return v


def normal_through(points):
    """Integer normal of the hyperplane through r affinely independent
    points in Z^r (or Q^r), via Cramer minors.  Returns None if the
    points are affinely dependent."""
    pts = list(points)
    r = len(pts[0])
    diffs = [vsub(p, pts[0]) for p in pts[1:]]
    if len(diffs) != r - 1:
        return None
    n = []
    for i in range(r):
        cols = [j for j in range(r) if j != i]
        m = [[Fraction(d[j]) for j in cols] for d in diffs]
        det = frac_det(np.array(m, dtype=object)) if cols else Fraction(1)
        n.append((-1) ** i * det)
    if all(x == 0 for x in n):
        return None
    # clear denominators, make primitive
    den = 1
    for x in n:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive(tuple(x * den for x in n))


def polytope_facets(points):
    """Facets of the convex hull of a full-dimensional point set in Q^r.

    Returns a list of (facet_points, normal, offset) with the outward
    convention <normal, x> <= offset inside.  Enumeration over r-subsets;
    fine for the small cells this package produces.
    """
    pts = [tuple(p) for p in points]
    r = len(pts[0])
    if r == 1:
        lo = min(pts)
        hi = max(pts)
        return [((lo,), (-1,), -lo[0]), ((hi,), (1,), hi[0])]
    seen = {}
    for sub in combinations(pts, r):
        n = normal_through(sub)
        if n is None:
            continue
        c = dot(n, sub[0])
        sides = {(-1 if dot(n, p) < c else (1 if dot(n, p) > c else 0))
                 for p in pts}
        if 1 in sides and -1 in sides:
            continue
        if 1 in sides:
            n = tuple(-x for x in n)
            c = -c
        facet = tuple(sorted(p for p in pts if dot(n, p) == c))
        seen[(n, c)] = facet
    return [(f, n, c) for (n, c), f in sorted(seen.items())]


def extreme_points(points):
    """Vertices of the convex hull of a point set (any affine dimension
    up to 3).  A point is kept iff it lies on at least dim facets of the
    hull, computed within the affine hull."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 1:
        return pts
    d = affine_dim(pts)
    if d == 0:
        return pts[:1]
    coords, basis_pts = _hull_coordinates(pts, d)
    if d == 1:
        lo = min(range(len(pts)), key=lambda i: coords[i])
        hi = max(range(len(pts)), key=lambda i: coords[i])
        return sorted({pts[lo], pts[hi]})
    facets = polytope_facets([tuple(c) for c in coords])
    count = {}
    for f, _, _ in facets:
        for p in f:
            count[p] = count.get(p, 0) + 1
    out = []
    for p, c in zip(pts, coords):
        if count.get(tuple(c), 0) >= d:
            out.append(p)
    return sorted(out)


def _hull_coordinates(pts, d):
    """Exact coordinates of pts w.r.t. an affinely independent sub-basis
    of dimension d chosen from pts themselves."""
    p0 = pts[0]
    basis = []
    for p in pts[1:]:
        trial = basis + [vsub(p, p0)]
        if _rank([list(t) for t in trial]) == len(trial):
            basis.append(vsub(p, p0))
        if len(basis) == d:
            break
    bmat = np.array([[Fraction(x) for x in b] for b in basis], dtype=object)
    gram = bmat @ bmat.T
    ginv = frac_inv(gram)
    coords = []
    for p in pts:
        rhs = np.array([[dot(vsub(p, p0), b)] for b in basis], dtype=object)
        sol = ginv @ rhs
        coords.append(tuple(sol[i, 0] for i in range(d)))
    return coords, basis


def triangulate(points):
    """Triangulation of conv(points) into simplices (lists of points).

    Fan construction: recursively triangulate the facets not containing
    the first vertex and cone over it.  Points must be in convex
    position is NOT required; interior points are ignored.
    """
    pts = sorted(set(tuple(p) for p in points))
    d = affine_dim(pts)
    if d <= 0:
        return []
    coords, _ = _hull_coordinates(pts, d)
    back = {tuple(c): p for c, p in zip(coords, pts)}
    simps = _triangulate_fulldim([tuple(c) for c in coords])
    return [[back[v] for v in s] for s in simps]


def _triangulate_fulldim(pts):
    d = len(pts[0])
    verts = extreme_points(pts)
    if len(verts) == d + 1:
        return [list(verts)]
    apex = verts[0]
    out = []
    for facet, n, c in polytope_facets(verts):
        if dot(n, apex) == c:
            continue
        if len(facet) == d:      # simplex facet
            out.append([apex] + list(facet))
            continue
        fd = affine_dim(facet)
        coords, _ = _hull_coordinates(list(facet), fd)
        back = {tuple(cc): p for cc, p in zip(coords, facet)}
        for s in _triangulate_fulldim([tuple(cc) for cc in coords]):
            out.append([apex] + [back[v] for v in s])
    return out


def polytope_volume(points):
    """Exact volume of conv(points) (full-dimensional in its ambient
    space), as a Fraction."""
    pts = sorted(set(tuple(p) for p in points))
    r = len(pts[0])
    total = Fraction(0)
    fact = 1
    for k in range(1, r + 1):
        fact *= k
    for s in triangulate(pts):
        if len(s) != r + 1:
            continue
        m = np.array([[Fraction(x) for x in vsub(v, s[0])] for v in s[1:]],
                     dtype=object)
        total += abs(frac_det(m))
    return total / fact


def point_in_polytope(point, facets):
    """Membership test against a precomputed facet list, closed cells."""
    return all(dot(n, point) <= c for _, n, c in facets)


def integer_transversal(normal):
    """An integer vector w with <normal, w> = 1, for primitive normal."""
    n = [int(x) for x in normal]
    # iterative extended gcd across the coordinates
    r = len(n)
    g, coeffs = 0, [0] * r
    for i, x in enumerate(n):
        if x == 0:
            continue
        if g == 0:
            g = abs(x)
            coeffs = [0] * r
            coeffs[i] = 1 if x > 0 else -1
            continue
        gg, u, v = _exgcd(g, x)
        coeffs = [u * c for c in coeffs]
        coeffs[i] += v
        g = gg
    assert g == 1, "normal must be primitive"
    return tuple(coeffs)


def _exgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
