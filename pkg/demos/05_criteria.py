"""Sufficient conditions for normality, checked numerically.

Boundedness (sharp 4k/pi), starlike analytic part with small dilatation,
the univalent + dilatation bound, and the boundary-circle integral test.
"""

from normharm import (
    GridConfig,
    bounded_bound_check,
    catalog,
    growth_ratio_check,
    integral_condition_check,
    omega_sup,
    sheil_small_lower,
    starlike_check,
    univalent_criterion_report,
)

cfg = GridConfig(levels=24, base_angles=32, max_angles=512, refine_iters=8)

# bounded maps are normal with norm at most 4k/pi, and the constant is sharp:
# the argument-type extremal map attains it
bb = bounded_bound_check(catalog("arg_extremal", k=1), k=1.0)
print(f"bounded: estimate={bb.estimate:.6f} bound={bb.bound:.6f} slack={bb.bound-bb.estimate:.2e}")

# shear of the Koebe function: starlike h, constant dilatation w0
f = catalog("shear_koebe", w0=0.5)
print("starlike h:", starlike_check(f.h, cfg).passed)
print("omega sup :", omega_sup(f, cfg).value)
gr = growth_ratio_check(f, cfg)
print("|g|/|h| max:", gr.max_ratio, "<= omega sup:", gr.passed)

# the coefficient-bound growth floor behind the univalent criterion
for t in (0.25, 0.5, 0.75):
    print(f"growth floor alpha=3, t={t}: {sheil_small_lower(3.0, t):.6f}")

# univalent + ||omega|| < 1 implies normal; alpha has no agreed numeric
# value, so it is an explicit parameter (3 is the conventional choice)
rep = univalent_criterion_report(f, alpha=3.0, cfg=cfg)
print("univalent criterion: applicable", rep.applicable, "worst margin",
      round(rep.worst_margin, 3))

# the log-tail map fails the hypothesis outright: its dilatation sup is >= 2
rep_e = univalent_criterion_report(catalog("E"), alpha=3.0, cfg=cfg)
print("E:", rep_e.note)

# integral condition: arc-length averages of |h'| + |g'| over boundary
# circles of sigma(D(0, r)) against r^(-alpha)
for c in (0.5, 2.0):
    rep = integral_condition_check(catalog("scaled", c=c), alpha=0.5)
    print(f"scaled({c}): no violation found = {rep.passed}, "
          f"worst margin {rep.worst_margin:.3f}")
rep = integral_condition_check(catalog("E"), 0.5, xi_samples=[0], r_samples=[0.99])
print(f"E at r=0.99: average {rep.samples[0].average:.1f} vs bound "
      f"{rep.samples[0].bound:.3f} -> violation")
