"""Riesz mass of |f|, the counting function, and the inequality fit.

For f nonvanishing on a circle, Green's theorem turns the Riesz mass of the
enclosed disk into a boundary flux of the radial derivative of |f|.
"""

import math

from normharm import (
    catalog,
    circle_max,
    counting_function,
    ks_inequality_fit,
    parse_expr,
    riesz_mass,
    subharmonic_profile,
)
from normharm.harmonic import HarmonicMap

ident = catalog("identity")
sq = HarmonicMap("square", parse_expr("z^2"), parse_expr("0"))

# closed forms: |z| has mass 2 pi t, |z^2| has mass 4 pi t^2
for t in (0.25, 0.5):
    print(f"mu(|z|,  {t}) = {riesz_mass(ident, t):.8f}   (2 pi t   = {2*math.pi*t:.8f})")
    print(f"mu(|z^2|,{t}) = {riesz_mass(sq, t):.8f}   (4 pi t^2 = {4*math.pi*t*t:.8f})")

# N(r) integrates mu(t)/t; closed forms 2 pi r and 2 pi r^2
for r in (0.25, 0.5):
    print(f"N(|z|,  {r}) = {counting_function(ident, r):.6f}   (2 pi r   = {2*math.pi*r:.6f})")
    print(f"N(|z^2|,{r}) = {counting_function(sq, r):.6f}   (2 pi r^2 = {2*math.pi*r*r:.6f})")

# circle maxima
print("M(|z|, 0.5)  =", circle_max(ident, 0.5))
print("M(|z^2|,0.5) =", circle_max(sq, 0.5))

# the smallest c with M(r) <= 2 u(0) + c N(delta r) on a radius sample;
# for |z| with delta = 1/2 the closed forms give exactly 1/pi
fit = ks_inequality_fit(ident, delta=0.5, radii=[0.2, 0.4, 0.6, 0.8])
print(f"fitted c (|z|, delta=0.5)  = {fit.fitted_c:.6f}   (1/pi = {1/math.pi:.6f})")
fit = ks_inequality_fit(sq, delta=0.5, radii=[0.2, 0.4, 0.6, 0.8])
print(f"fitted c (|z^2|, delta=.5) = {fit.fitted_c:.6f}   (2/pi = {2/math.pi:.6f})")

# everything at once, ready for the CSV emitter
prof = subharmonic_profile(ident, [0.2, 0.4, 0.6, 0.8], delta=0.5)
print("\n  r      M         mu        N")
for r, m, mu, n in zip(prof.radii, prof.M_values, prof.mu_values, prof.N_values):
    print(f"  {r:.1f}  {m:8.5f}  {mu:8.5f}  {n:8.5f}")
print("fitted c:", round(prof.fitted_c, 6))

# zeros of f inside the probe region are a hard error: the flux formula
# breaks where |f| is not differentiable
try:
    riesz_mass(HarmonicMap("shift", parse_expr("z-0.5"), parse_expr("0")), 0.5)
except Exception as exc:
    print("\nzero on circle ->", exc)
