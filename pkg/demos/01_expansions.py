"""Expanding Omega^m_{z-w} in the three regimes of two points on a raviolo.

Each regime trades the singular symbol for a series in the small variable;
the coefficients are signed binomials.  The last block checks the relation
between the three degree-2 products.
"""
from ravioli.ravring import REGIMES, KMonomial, expand, expand_omega_zw

for regime in REGIMES:
    e = expand_omega_zw(2, regime, order=5)
    print(f"Omega^2 in the {regime} regime, variables {e.variables}:")
    for key, c in sorted(e.coeffs.items(), key=lambda kv: kv[0][1:]):
        print(f"    {key}: {c}")

print()
for regime in REGIMES:
    total = None
    for t in ((("z-w", 0), ("z", 0)), (("w", 0), ("z-w", 0)), (("z", 0), ("w", 0))):
        x = expand(KMonomial(omegas=t), regime, 10)
        total = x if total is None else total + x
    print(f"degree-2 relation in the {regime} regime vanishes: {total.is_zero()}")
