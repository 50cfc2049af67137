"""Disk geometry: chordal and hyperbolic distances, automorphisms.

The normality quotient compares image distances on the sphere (chordal)
against source distances in the Poincare metric (hyperbolic).
"""

import numpy as np

from normharm import (
    INF,
    DiskAutomorphism,
    chordal,
    geodesic_point,
    hyperbolic,
    image_circle,
    spherical_length,
)

# chordal distance lives on [0, 1] and reaches the point at infinity
print("chi(0, 1)      =", chordal(0, 1))
print("chi(0, inf)    =", chordal(0, INF))
print("chi(3, 4)      =", chordal(3, 4), "= 1/sqrt(170)")

# the spherical length of a path dominates the chordal gap of its endpoints
print("len [0,1]      =", spherical_length([0, 1]), "= pi/4")

# hyperbolic distance blows up toward the boundary
for r in (0.5, 0.9, 0.99):
    print(f"rho(0, {r:4}) =", hyperbolic(0, r))

# automorphisms are the isometries: distances are preserved exactly
sigma = DiskAutomorphism(0.4 + 0.3j, theta=1.0)
z, w = 0.2 + 0.1j, -0.5j
print("invariance gap =", abs(hyperbolic(sigma(z), sigma(w)) - hyperbolic(z, w)))

# Moebius maps send circles to circles; the closed form matches sample points
kb = DiskAutomorphism.koebe(0.5)
center, radius = image_circle(kb, 0.5)
pts = kb(0.5 * np.exp(2j * np.pi * np.arange(8) / 8))
print("image circle   = center", center, "radius", radius)
print("fit residual   =", np.max(np.abs(np.abs(pts - center) - radius)))

# points along a geodesic split the distance proportionally
mid = geodesic_point(0, 0.8, 0.5)
print("geodesic mid   =", mid, "(tanh of half atanh 0.8 = 0.5)")
