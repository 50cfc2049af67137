"""Harmonic maps f = h + conj(g): the catalog and the pointwise quantities.

The normality density (1-|z|^2)(|h'|+|g'|)/(1+|f|^2) is the object whose
supremum separates normal from non-normal maps.
"""

import numpy as np

from normharm import (
    AffineCoefficients,
    affine_transform,
    catalog,
    density,
    dilatation,
    eval_map,
    jacobian,
    koebe_transform,
)

# the half-plane-type example map: normal, with norm exactly 5 at z = 2/3
L = catalog("L")
print("L(0)        =", eval_map(L, 0j))
print("omega_L(z)  = -z:", dilatation(L, 0.3 + 0j))
print("J_L(0.3)    =", jacobian(L, 0.3 + 0j), "> 0: sense-preserving")
print("density max =", density(L, 2 / 3 + 0j))

# the log-tail example map: univalent but NOT normal; its density blows up
# along the positive real axis like (1+r)^2 / ((1-r)(1+log^2(1-r)))
E = catalog("E")
for r in (0.9, 0.99, 0.999):
    print(f"density_E({r}) = {density(E, r + 0j):9.3f}")
print("J_E(0)      =", jacobian(E, 0j), "< 0: sense-reversing at 0")

# the family interpolating toward E: each member is normal
for n in (2, 8):
    fn = catalog("E_n", n=n)
    print(f"E_{n}(0.5)   =", np.round(eval_map(fn, 0.5 + 0j), 6))

# affine changes of the target plane preserve normality
A = AffineCoefficients(1 + 0.5j, 0.25)
AL = affine_transform(L, A)
z = 0.4 + 0.1j
lhs = eval_map(AL, z)
rhs = A.a * eval_map(L, z) + A.b * np.conj(eval_map(L, z))
print("affine gap  =", abs(lhs - rhs))

# the Koebe transform recenters and renormalizes: K(0) = 0, H'(0) = 1
K = koebe_transform(L, 0.4)
print("K(0)        =", eval_map(K, 0j))
print("omega shift =", dilatation(K, 0j), "=", dilatation(L, 0.4))
