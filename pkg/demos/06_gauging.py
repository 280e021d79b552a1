"""Gauging the gl(1) flavor symmetry of the free hypermultiplet.

W_tot couples the matter to a perturbative vector multiplet; D_tot = W_tot(0)
computes the reduced Higgs branch, compared with an independent Koszul model.
"""
from ravioli.algfile import format_state
from ravioli.scstruct import fh_sc
from ravioli.superpot import build_w_tot, koszul_oracle, reduced_cohomology

sc = fh_sc()
A = sc.alg
Z1, Z2, p1, p2 = (A.gen(n) for n in ("Z1", "Z2", "psi1", "psi2"))
gs = build_w_tot(sc, {}, [A.mul(p2, Z2) - A.mul(Z1, p1)], [A.mul(Z1, Z2)])
print("W_tot =", format_state(gs.sp.W))
print("checks:", ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in gs.checks.items()))
print("D lambda =", format_state(gs.sp.D(gs.lam[0])))

red = reduced_cohomology(gs, 3)
orc = koszul_oracle(3)
print()
print(f"{'(R_B, q)':>10s} {'D_tot':>6s} {'Koszul':>7s}")
for r, q in sorted(set(red.dims) | set(orc)):
    print(f"{f'({r}, {q})':>10s} {red.dims.get((r, q), 0):6d} {orc.get((r, q), 0):7d}")
