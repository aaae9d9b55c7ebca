"""From a period matrix to a quadratic form on the cusp lattice.

A point tau of the Siegel space degenerates toward a rank-g' cusp; what
survives is the Schur complement of Im(tau), a positive definite form on
the quotient lattice.  This is the only floating-point corner of the
package: everything downstream of the tropicalization (which Delaunay
paving, which cone) is discrete and robust to 1e-10 noise.

Run: python3 demos/cusps_and_tropicalization.py
"""

import numpy as np

from tropab import (CuspSpec, QuadraticForm, SiegelPoint, cayley_transform,
                    delaunay_subdivision, gamma_action, tropicalize)
from tropab.exact_linalg import PolarizationType


def main():
    principal = PolarizationType((1, 1))
    tau = SiegelPoint(np.array([[0.3 + 2.0j, 0.1 + 1.0j],
                                [0.1 + 1.0j, -0.2 + 2.0j]]))
    print("tau =\n", tau.tau)

    z = cayley_transform(tau)
    print("\nCayley image (bounded realization), |eigs| < 1:")
    print(np.abs(np.linalg.eigvals(z)))

    # translating tau by an integral symmetric matrix fixes Im(tau)...
    r = np.block([[np.eye(2, dtype=int), np.array([[1, 2], [2, 0]])],
                  [np.zeros((2, 2), dtype=int), np.eye(2, dtype=int)]])
    moved = gamma_action(r, tau, principal)
    print("\nafter a translation in Sp(4, Z), Im tau is unchanged:",
          np.allclose(moved.tau.imag, tau.tau.imag))

    for gp in (0, 1):
        tr = tropicalize(tau, CuspSpec(gp, principal))
        print("\ntropicalization toward the rank-%d cusp:\n%s" % (gp, tr))

    # snap the rank-0 tropicalization to a nearby rational form and ask
    # for its Delaunay paving -- the discrete shadow of the degeneration
    tr0 = tropicalize(tau, CuspSpec(0, principal))
    snapped = np.vectorize(lambda x: round(4 * x))(tr0)
    q = QuadraticForm(np.array(snapped, dtype=object))
    pav = delaunay_subdivision(q, np.eye(2, dtype=object), 8)
    print("\nsnapped form %s has Delaunay orbits:" %
          [list(map(int, row)) for row in snapped])
    for c in pav.cells:
        print("  ", c.vertices)


if __name__ == "__main__":
    main()
