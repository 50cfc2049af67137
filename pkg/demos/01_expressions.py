"""Expressions: parse, evaluate, differentiate.

The expression language covers everything the map catalog needs: complex
constants, z, field operations, integer powers, log, exp.
"""

import numpy as np

from normharm import differentiate, evaluate, parse_expr, to_source

# parse a formula and evaluate it at a point
h = parse_expr("0.5*z*(2-z)/(1-z)^2")
print("h(z)      =", to_source(h))
print("h(0.3)    =", evaluate(h, 0.3 + 0j))

# evaluation is vectorized over numpy arrays
zs = 0.8 * np.exp(1j * np.linspace(0, np.pi, 5))
print("h(arc)    =", np.round(evaluate(h, zs), 4))

# exact symbolic differentiation; here h'(z) = 1/(1-z)^3
hp = differentiate(h)
print("h'(0.5)   =", evaluate(hp, 0.5 + 0j), "(closed form gives 8)")

# derivative trees are not simplified, but they evaluate exactly
print("h' tree   =", to_source(hp)[:70], "...")

# principal-branch log: the cut along the closed negative real axis is a
# hard error, not a silent value
g = parse_expr("log(1-z)")
print("g(0.9)    =", evaluate(g, 0.9 + 0j))
try:
    evaluate(g, 2.0 + 0j)
except Exception as exc:
    print("g(2)      -> error:", exc)

# printing round-trips through the parser
print("stable    =", to_source(parse_expr(to_source(h))) == to_source(h))
