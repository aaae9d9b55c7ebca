"""The smallest fully worked degeneration: an elliptic curve with a
3-torsion polarization.

Take X = Z with the quadratic form Q(x) = x^2, and embed the period
lattice Y by phi(Y) = 3Z.  Everything about the central fiber of the
resulting family is decided by small exact computations:

* the Delaunay paving of R under Q is the unit intervals;
* the dual complex of the central fiber is a cycle of three lines (I3);
* theta functions of the family are indexed by Z/3, and every balanced
  choice of them degenerates with the same valuation profile.

Run: python3 demos/three_torsion_family.py
"""

from fractions import Fraction

import numpy as np

from tropab import (QuadraticForm, central_fiber_complex,
                    delaunay_subdivision, enumerate_balanced_set,
                    fourier_indices, section_valuation_profile,
                    sigma_section)
from tropab.exact_linalg import PolarizationType

I1 = np.array([[1]], dtype=object)
PHI = np.array([[3]], dtype=object)


def main():
    q = QuadraticForm(I1)
    pav = delaunay_subdivision(q, I1, 4)
    print("Delaunay cells of Q(x) = x^2 on Z:",
          [c.vertices for c in pav.cells])

    fiber = central_fiber_complex(pav, PHI)
    print("\ncentral fiber components (mod phi(Y) = 3Z):")
    for i, comp in enumerate(fiber.components):
        print("  component %d: segment %s" % (i, comp.vertices))
    print("incidences:", [(i, j) for i, j, _ in fiber.incidences])
    print("=> a cycle of three rational curves: Kodaira type I3")

    reps, ptype = fourier_indices(1, PHI)
    print("\nFourier indices X/phi(Y):", reps, "of type", ptype.diag)

    delta = PolarizationType((3,))
    sections = enumerate_balanced_set(delta, 6)
    print("\nbalanced theta sections (mod global scalar):", len(sections))

    phi_fn = sigma_section(q, I1, 4)
    profiles = {tuple(sorted(section_valuation_profile(
        s, phi_fn, PHI, 3).items())) for s in sections}
    assert len(profiles) == 1
    print("valuation profile, identical for every balanced section:")
    for rep, val in sorted(profiles.pop()):
        print("  theta_%d degenerates like q^(%s)" % (rep[0], Fraction(val)))


if __name__ == "__main__":
    main()
