"""Exact linear algebra on FockStates via sympy's DomainMatrix over QQ."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

__all__ = ["coords", "matrix_of", "nullspace", "rank", "solve", "combine"]


def _qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def coords(states, index: Optional[Dict] = None):
    """Monomial index shared by ``states`` and the coordinate rows.

    Returns ``(index, columns)`` where ``columns[i]`` maps rows to entries.
    """
    index = dict(index or {})
    terms = [s.terms if hasattr(s, "terms") else s for s in states]
    for t in terms:
        for m in t:
            if m not in index:
                index[m] = len(index)
    return index, [{index[m]: c for m, c in t.items()} for t in terms]


def matrix_of(columns: Sequence[Dict[int, Fraction]], nrows: int) -> DomainMatrix:
    rows = [[QQ(0)] * len(columns) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, c in col.items():
            rows[i][j] = _qq(c)
    return DomainMatrix(rows, (nrows, len(columns)), QQ)


def _images_matrix(images):
    index, cols = coords(images)
    return matrix_of(cols, len(index))


def nullspace(images) -> List[List[Fraction]]:
    """Basis of ``{x : sum_j x_j images[j] = 0}`` in reduced echelon form."""
    n = len(images)
    if n == 0:
        return []
    if all(not s for s in images):
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    M = _images_matrix(images)
    ns = M.nullspace()
    out = []
    for row in ns.to_Matrix().tolist() if ns.shape[0] else []:
        out.append([_frac(QQ.convert(x)) for x in row])
    return out


def rank(images) -> int:
    if not images or all(not s for s in images):
        return 0
    return _images_matrix(images).rank()


def solve(images, target) -> Optional[List[Fraction]]:
    """Some ``x`` with ``sum_j x_j images[j] = target``, or None."""
    if not target:
        return [Fraction(0)] * len(images)
    if not images:
        return None
    index, cols = coords(list(images) + [target])
    A = matrix_of(cols[:-1], len(index))
    b = matrix_of(cols[-1:], len(index))
    aug = A.hstack(b)
    R, pivots = aug.rref()
    n = len(images)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    Rl = R.to_Matrix().tolist()
    for r, p in enumerate(pivots):
        x[p] = _frac(QQ.convert(Rl[r][n]))
    return x


def combine(coeffs, states):
    out = None
    for c, s in zip(coeffs, states):
        if c:
            t = s.scale(c)
            out = t if out is None else out + t
    if out is None:
        return states[0].alg.zero() if states else None
    return out
