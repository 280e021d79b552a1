"""Free hypermultiplet: OPEs from Wick contractions and the N=2 structure."""
from ravioli.algfile import format_state
from ravioli.scstruct import fh_sc, quotient_relations, verify_sc

sc = fh_sc()
A = sc.alg
for lab, st in sc.fields().items():
    print(f"{lab:6s} = {format_state(st)}")

print()
for m, coeff in A.ope(sc.Qp, sc.Qm).singular:
    print(f"Q+(z) Q-(w) has Omega^{m} term {format_state(coeff)}")

print()
print(verify_sc(sc).line())
for k, v in quotient_relations(sc).items():
    print(f":{k[:2]} {k[2:]}: = {format_state(v)}")
