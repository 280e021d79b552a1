"""A and B twists: cohomology, the comparison with branch primaries, and the
Leibniz rule up to homotopy on random triples."""
from ravioli.branches import make_twist, sample_triples, twist_cohomology, verify_leibniz_homotopy
from ravioli.scstruct import fh_sc, fvpert_sc, sfc_sc

for sc in (fh_sc(), fvpert_sc(), sfc_sc()):
    for flag in ("A", "B"):
        tw = make_twist(sc, flag)
        coh = twist_cohomology(tw, 3)
        dims = {str(k): v for k, v in coh.dims_by_r().items()}
        hom = all(verify_leibniz_homotopy(tw, *t).ok for t in sample_triples(tw, 10))
        print(f"{sc.name:7s} {flag}: H = {dims}, iso = {coh.isomorphism}, homotopy = {hom}")
        if coh.witness:
            print(f"          {coh.witness}")
