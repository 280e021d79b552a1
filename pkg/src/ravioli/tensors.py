"""Exact index gymnastics for the label spaces of the larger superconformal algebras.

Vectors ``lam`` in C^2 (x) C^2 are 2x2 arrays ``lam[alpha, alphadot]``.  The
two-index epsilon is fixed by ``eps[0, 1] = +1`` with the same values for
upper and lower indices.  The four-index epsilon has ``eps[0,1,2,3] = +1``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

__all__ = [
    "EPS2",
    "eps4",
    "as_matrix",
    "pairing",
    "bracket_plus",
    "bracket_minus",
    "star",
    "traceless",
    "act_plus",
    "act_minus",
]

EPS2 = np.array([[0, 1], [-1, 0]], dtype=object)


def _perm_sign(p):
    p = list(p)
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _build_eps4():
    e = np.zeros((4, 4, 4, 4), dtype=object)
    for p in itertools.permutations(range(4)):
        e[p] = _perm_sign(p)
    return e


_EPS4 = _build_eps4()


def eps4(i, j, k, l) -> int:
    return _EPS4[i, j, k, l]


def as_matrix(a, shape) -> np.ndarray:
    """Object array of Fractions with the given shape, or ``ValueError``."""
    arr = np.array(a, dtype=object)
    if arr.shape != tuple(shape):
        raise ValueError(f"expected shape {tuple(shape)}, got {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = Fraction(arr[idx])
    return out


def pairing(l1, l2) -> Fraction:
    """``eps_{a1 a2} eps_{d1 d2} l1^{a1 d1} l2^{a2 d2}``."""
    l1, l2 = as_matrix(l1, (2, 2)), as_matrix(l2, (2, 2))
    s = Fraction(0)
    for a1, a2, d1, d2 in itertools.product(range(2), repeat=4):
        s += EPS2[a1, a2] * EPS2[d1, d2] * l1[a1, d1] * l2[a2, d2]
    return s


def bracket_plus(l1, l2) -> np.ndarray:
    """Traceless 2x2 matrix ``M[alpha, beta]`` acting on the undotted index."""
    l1, l2 = as_matrix(l1, (2, 2)), as_matrix(l2, (2, 2))
    m = np.zeros((2, 2), dtype=object)
    for al, be in itertools.product(range(2), repeat=2):
        s = Fraction(0)
        for a1, a2, d1, d2 in itertools.product(range(2), repeat=4):
            k = (al == a1) * EPS2[a2, be] + (al == a2) * EPS2[a1, be]
            if k:
                s += EPS2[d1, d2] * k * l1[a1, d1] * l2[a2, d2]
        m[al, be] = s
    return m


def bracket_minus(l1, l2) -> np.ndarray:
    """Traceless 2x2 matrix acting on the dotted index."""
    l1, l2 = as_matrix(l1, (2, 2)), as_matrix(l2, (2, 2))
    m = np.zeros((2, 2), dtype=object)
    for al, be in itertools.product(range(2), repeat=2):
        s = Fraction(0)
        for a1, a2, d1, d2 in itertools.product(range(2), repeat=4):
            k = (al == d1) * EPS2[d2, be] + (al == d2) * EPS2[d1, be]
            if k:
                s += EPS2[a1, a2] * k * l1[a1, d1] * l2[a2, d2]
        m[al, be] = s
    return m


def act_plus(a, lam) -> np.ndarray:
    """``A (x) id`` on ``lam``."""
    return as_matrix(a, (2, 2)).dot(as_matrix(lam, (2, 2)))


def act_minus(a, lam) -> np.ndarray:
    """``id (x) A`` on ``lam``."""
    return as_matrix(lam, (2, 2)).dot(as_matrix(a, (2, 2)).T)


def star(a) -> np.ndarray:
    """Hodge dual of a 4x4 matrix, ``(*A)_{IJ} = 1/2 eps_{IJKL} A^{KL}``."""
    a = as_matrix(a, (4, 4))
    out = np.zeros((4, 4), dtype=object)
    for i, j in itertools.product(range(4), repeat=2):
        s = Fraction(0)
        for k, l in itertools.product(range(4), repeat=2):
            e = _EPS4[i, j, k, l]
            if e:
                s += e * a[k, l]
        out[i, j] = s / 2
    return out


def traceless(m) -> np.ndarray:
    m = np.array(m, dtype=object)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("traceless part needs a square matrix")
    n = m.shape[0]
    tr = sum((Fraction(m[i, i]) for i in range(n)), Fraction(0))
    out = as_matrix(m, m.shape)
    for i in range(n):
        out[i, i] -= tr / n
    return out
