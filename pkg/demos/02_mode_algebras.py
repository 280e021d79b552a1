"""Jacobi checks for the shipped superconformal mode algebras.

The N=3 algebra is shipped as written and fails; the witness names the
offending triple of modes.
"""
import time

from ravioli import algebras
from ravioli.modealg import check_intertwining, check_jacobi, n1_to_n2_morphism

for name in ("svir-n1", "svir-n2", "svir-n3", "svir-n4", "evir"):
    t = time.perf_counter()
    r = check_jacobi(algebras.build(name), 3)
    print(f"{name:8s} {r.line()}  [{time.perf_counter() - t:.2f}s]")

ok, _ = check_intertwining(algebras.svir_n1(), algebras.svir_n2(), n1_to_n2_morphism, 4)
print("N=1 -> N=2 respects brackets up to index 4:", ok)
