"""A tour of second-Voronoi reduction in rank 2, in exact arithmetic.

Every positive definite form Q induces a Delaunay paving of the plane;
forms sharing a paving form a cone, and the convex piecewise-affine
section sigma (the interpolation of Q/2 over that paving) is additive on
each cone.  This script shows both facts on concrete forms, plus the
discrete Legendre transform of sigma.

Run: python3 demos/voronoi_reduction_tour.py
"""

import numpy as np

from tropab import (QuadraticForm, affine_region_paving,
                    bending_parameters, delaunay_subdivision,
                    legendre_transform, sigma_section,
                    voronoi_cone_contains)

I2 = np.eye(2, dtype=object)


def form(a, b, c):
    return QuadraticForm(np.array([[a, c], [c, b]], dtype=object))


def main():
    hexagonal = form(2, 2, 1)
    square = form(1, 1, 0)

    for name, q in [("hexagonal", hexagonal), ("square", square),
                    ("skew", form(3, 5, 2))]:
        pav = delaunay_subdivision(q, I2, 8)
        s = sigma_section(q, I2, 8)
        print("%s form %s:" % (name, [list(r) for r in q.matrix]))
        print("  Delaunay cell orbits:", [c.vertices for c in pav.cells])
        print("  affine regions of sigma match Delaunay:",
              affine_region_paving(s) == pav)
        print("  wall bendings:", sorted(
            v[0] for v in bending_parameters(s).values()))

    # cone membership: the triangulated hexagonal paving refines the
    # square one, so the square form sits on its boundary
    tri = delaunay_subdivision(hexagonal, I2, 8)
    print("\nhexagonal cone contains the square form:",
          voronoi_cone_contains(tri, square))
    print("square cone contains the hexagonal form:",
          voronoi_cone_contains(delaunay_subdivision(square, I2, 8),
                                hexagonal))

    # the Legendre transform of sigma samples the dual support function
    lt = legendre_transform(sigma_section(square, I2, 6), 1)
    print("\nLegendre transform of sigma(square) on the unit box:")
    for mu, val in sorted(lt.items()):
        print("  mu=%s -> %s" % (list(mu), val))


if __name__ == "__main__":
    main()
