"""Higgs and Coulomb chiral rings with their Poisson brackets."""
from ravioli.algfile import format_state
from ravioli.branches import chiral_ring
from ravioli.scstruct import fh_sc, fvpert_sc, sfc_sc

for sc in (fh_sc(), fvpert_sc(), sfc_sc()):
    for branch in ("higgs", "coulomb"):
        ring = chiral_ring(sc, branch, 2)
        dims = {str(k): v for k, v in ring.dims().items()}
        print(f"{sc.name} {branch}: dims by R-charge {dims}")
        names = [format_state(r.state) for r in ring.basis]
        low = [i for i in range(len(ring.basis)) if ring.r_charge(i) <= 1]
        for i in low:
            for j in low:
                row = ring.bracket.get((i, j))
                if row and i <= j:
                    val = " + ".join(format_state(ring.basis[k].state.scale(c))
                                     for k, c in row.items())
                    print(f"    {{{names[i]}, {names[j]}}} = {val}")
