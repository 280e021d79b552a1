"""Lie superalgebras of modes with index-dependent structure constants.

Two presentations share one interface:

* :class:`PiecewiseSpec` holds a hand-written bracket table.  Each ordered
  family pair carries a list of pieces, a guard (a condition on the mode
  indices ``m, n``) plus output terms whose coefficients and indices are
  formulas in ``m, n``.  The first piece whose guard holds is used.
* :class:`OpeSpec` holds singular OPEs of generating fields and compiles
  them into mode brackets by residue extraction: for ``m >= 0``

      [A_(m), B_(n)] = (-1)^{(|A|+1)[n>=0]} sum_{k=0}^{m} C(m,k) (A_(k) B)_(m+n-k),

  where for ``n < 0`` only terms of negative output index survive, the
  remaining case ``m < 0 <= n`` follows from graded skew-symmetry and two
  negative modes commute.

Families may carry a label space (``sigma_A`` with ``A`` in sl(2), ...);
brackets are then evaluated blockwise as tensors over labels.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import _expr
from .ravring import Scalar, as_scalar

__all__ = [
    "Mode",
    "ModeGenerator",
    "ModeCombo",
    "Piece",
    "Term",
    "PiecewiseSpec",
    "OpeTerm",
    "OpeSpec",
    "SpecError",
    "bracket",
    "check_jacobi",
    "JacobiReport",
    "induce_vacuum_module",
    "VacuumModule",
    "n1_to_n2_morphism",
    "check_intertwining",
]

Q = Fraction


class SpecError(ValueError):
    """An algebra presentation is incomplete or inconsistent."""


class Mode(NamedTuple):
    family: str
    index: int
    label: int = 0

    def __str__(self):
        return f"{self.family}[{self.label}]_{self.index}" if self.label else f"{self.family}_{self.index}"


@dataclass(frozen=True)
class ModeGenerator:
    """A family of modes.

    ``kind="modes"``: a family ``X_n`` with ``n >= 0``, statistics ``parity``
    and gradings ``R``, ``spin + spin_slope * n``, ``S``; ``creation`` marks
    families outside the positive subalgebra.

    ``kind="field"``: the modes ``X_(m)``, ``m`` any integer, of a generating
    field of statistics ``parity`` and gradings ``R, spin, S``.  Mode parity
    is ``parity + [m >= 0]`` and spin is ``spin - m - 1``.
    """

    name: str
    parity: int
    R: Fraction = Fraction(0)
    spin: Fraction = Fraction(0)
    S: Fraction = Fraction(0)
    kind: str = "modes"
    spin_slope: Fraction = Fraction(0)
    creation: bool = False
    labels: Tuple[str, ...] = ("",)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def in_domain(self, index: int) -> bool:
        return self.kind == "field" or index >= 0

    def mode_parity(self, index: int) -> int:
        if self.kind == "field":
            return (self.parity + (1 if index >= 0 else 0)) % 2
        return self.parity % 2

    def is_creation(self, index: int) -> bool:
        if self.kind == "field":
            return index < 0
        return self.creation

    def grading(self, index: int) -> Tuple[Fraction, Fraction, Fraction]:
        if self.kind == "field":
            return (self.R - (1 if index >= 0 else 0), self.spin - index - 1, self.S)
        return (Fraction(self.R), self.spin + self.spin_slope * index, Fraction(self.S))

    def index_range(self, cutoff: int) -> List[int]:
        """Indices with subscript at most ``cutoff``; fields use both towers."""
        if self.kind == "field":
            return list(range(-cutoff - 1, cutoff + 1))
        return list(range(0, cutoff + 1))


class ModeCombo:
    """Finite combination of modes plus a central Scalar (a multiple of 1)."""

    __slots__ = ("modes", "central")

    def __init__(self, modes: Optional[Mapping[Mode, Fraction]] = None, central=0):
        self.modes = {Mode(*k): Q(v) for k, v in (modes or {}).items() if v}
        self.central = as_scalar(central)

    def __add__(self, o: "ModeCombo") -> "ModeCombo":
        d = dict(self.modes)
        for k, v in o.modes.items():
            d[k] = d.get(k, 0) + v
        return ModeCombo(d, self.central + o.central)

    def scale(self, c) -> "ModeCombo":
        c = Q(c)
        return ModeCombo({k: c * v for k, v in self.modes.items()}, self.central * c)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, o):
        return self + (-o)

    def __eq__(self, o):
        if not isinstance(o, ModeCombo):
            return NotImplemented
        return self.modes == o.modes and self.central == o.central

    def __bool__(self):
        return bool(self.modes) or bool(self.central)

    def __repr__(self):
        parts = [f"{v}*{k}" for k, v in sorted(self.modes.items())]
        if self.central:
            parts.append(f"({self.central})")
        return " + ".join(parts) or "0"


# a bracket block: {(family, index): array[da, db, dout]} and central array[da, db]
Block = Tuple[Dict[Tuple[str, int], np.ndarray], np.ndarray]


def _zero_central(da, db):
    z = np.empty((da, db), dtype=object)
    z.fill(Scalar())
    return z


def _obj_zeros(shape):
    z = np.empty(shape, dtype=object)
    z.fill(Q(0))
    return z


class ModeAlgebraSpec:
    """Common interface; subclasses implement :meth:`_block`."""

    name: str = "algebra"
    parameters: Mapping[str, Fraction] = {}

    def __init__(self, generators: Sequence[ModeGenerator], name: str = "algebra"):
        self.generators = list(generators)
        self.gen = {g.name: g for g in self.generators}
        if len(self.gen) != len(self.generators):
            raise SpecError("duplicate family names")
        self.name = name
        self._cache: Dict[Tuple[str, int, str, int], Block] = {}

    # -- interface
    def block(self, fa: str, m: int, fb: str, n: int) -> Block:
        key = (fa, m, fb, n)
        hit = self._cache.get(key)
        if hit is None:
            ga, gb = self._g(fa), self._g(fb)
            if not ga.in_domain(m) or not gb.in_domain(n):
                raise SpecError(f"mode index out of domain: {fa}_{m}, {fb}_{n}")
            hit = self._block(fa, m, fb, n)
            for (fo, p), arr in hit[0].items():
                if not self._g(fo).in_domain(p) and any(v for v in arr.flat):
                    raise SpecError(f"[{fa}_{m}, {fb}_{n}] leaves the index domain at {fo}_{p}")
            self._cache[key] = hit
        return hit

    def _g(self, f):
        try:
            return self.gen[f]
        except KeyError:
            raise SpecError(f"unknown family {f!r}") from None

    def _block(self, fa, m, fb, n) -> Block:  # pragma: no cover - abstract
        raise NotImplementedError

    def parity(self, mode: Mode) -> int:
        return self._g(mode.family).mode_parity(mode.index)

    def bracket(self, a: Mode, b: Mode) -> ModeCombo:
        a, b = Mode(*a), Mode(*b)
        outs, cen = self.block(a.family, a.index, b.family, b.index)
        modes = {}
        for (fo, p), arr in outs.items():
            row = arr[a.label, b.label]
            for l, v in enumerate(row):
                if v:
                    modes[Mode(fo, p, l)] = v
        return ModeCombo(modes, cen[a.label, b.label])

    def bracket_combo(self, x: ModeCombo, y: ModeCombo) -> ModeCombo:
        out = ModeCombo()
        for a, u in x.modes.items():
            for b, v in y.modes.items():
                out = out + self.bracket(a, b).scale(u * v)
        return out

    def modes_upto(self, cutoff: int) -> List[Tuple[str, int]]:
        return [(g.name, i) for g in self.generators for i in g.index_range(cutoff)]

    def clear_cache(self):
        self._cache.clear()


def bracket(spec: ModeAlgebraSpec, a: Mode, b: Mode) -> ModeCombo:
    """Graded bracket of two modes."""
    return spec.bracket(a, b)


# ---------------------------------------------------------------------------
# hand-written tables


@dataclass(frozen=True)
class Term:
    coeff: str
    family: str  # a family name, or "xi" / "1" for central terms
    index: str = "0"


@dataclass(frozen=True)
class Piece:
    guard: str  # "" means always
    terms: Tuple[Term, ...] = ()


class PiecewiseSpec(ModeAlgebraSpec):
    """Bracket table stored as guarded formulas; see module docstring."""

    def __init__(self, generators, rules: Mapping[Tuple[str, str], Sequence[Piece]],
                 name="algebra", parameters: Optional[Mapping[str, Fraction]] = None):
        super().__init__(generators, name)
        for g in self.generators:
            if g.kind != "modes" or g.dim != 1:
                raise SpecError("piecewise tables hold single-label mode families")
        self.rules = {tuple(k): tuple(v) for k, v in rules.items()}
        self.parameters = dict(parameters or {})
        names = ("m", "n") + tuple(self.parameters)
        for (a, b), pieces in self.rules.items():
            self._g(a), self._g(b)
            for pc in pieces:
                if pc.guard:
                    _expr.check(pc.guard, names)
                for t in pc.terms:
                    _expr.check(t.coeff, names)
                    _expr.check(t.index, names)
                    if t.family not in ("xi", "1"):
                        self._g(t.family)

    def _eval_rule(self, pieces, m, n) -> Block:
        env = {"m": m, "n": n, **self.parameters}
        outs: Dict[Tuple[str, int], np.ndarray] = {}
        cen = Scalar()
        for pc in pieces:
            if pc.guard and not _expr.holds(pc.guard, env):
                continue
            for t in pc.terms:
                c = _expr.evaluate(t.coeff, env)
                if not c:
                    continue
                if t.family == "xi":
                    cen = cen + Scalar(0, c)
                elif t.family == "1":
                    cen = cen + Scalar(c, 0)
                else:
                    idx = _expr.evaluate(t.index, env)
                    if idx.denominator != 1:
                        raise SpecError(f"non-integral output index {idx}")
                    key = (t.family, int(idx))
                    arr = outs.setdefault(key, _obj_zeros((1, 1, 1)))
                    arr[0, 0, 0] += c
            break
        c = _zero_central(1, 1)
        c[0, 0] = cen
        return outs, c

    def _block(self, fa, m, fb, n):
        if (fa, fb) in self.rules:
            return self._eval_rule(self.rules[(fa, fb)], m, n)
        if (fb, fa) in self.rules:
            outs, cen = self._eval_rule(self.rules[(fb, fa)], n, m)
            s = -((-1) ** (self._g(fa).mode_parity(m) * self._g(fb).mode_parity(n)))
            return ({k: v * s for k, v in outs.items()}, cen * s)
        raise SpecError(f"incomplete spec: no bracket rule for ({fa}, {fb})")


# ---------------------------------------------------------------------------
# OPE presentations


@dataclass(frozen=True)
class OpeTerm:
    """``Omega^pole (c . d^deriv out)``; ``out = None`` is the central term.

    ``coeff`` maps label tuples ``(i, j, l)`` (or ``(i, j)`` for central
    terms) to rationals (resp. Scalars).
    """

    pole: int
    out: Optional[str]
    deriv: int
    coeff: Mapping[Tuple[int, ...], object]


def _ff(p: int, d: int) -> int:
    r = 1
    for i in range(d):
        r *= p - i
    return r


class OpeSpec(ModeAlgebraSpec):
    """Mode algebra compiled from singular OPEs of generating fields."""

    def __init__(self, generators, opes: Mapping[Tuple[str, str], Sequence[OpeTerm]],
                 name="algebra", parameters: Optional[Mapping[str, Fraction]] = None,
                 central_symbol: str = "xi"):
        super().__init__(generators, name)
        for g in self.generators:
            if g.kind != "field":
                raise SpecError("OPE presentations hold field generators")
        self.parameters = dict(parameters or {})
        self.central_symbol = central_symbol
        self.declared = {tuple(k): tuple(v) for k, v in opes.items()}
        for (a, b), terms in self.declared.items():
            ga, gb = self._g(a), self._g(b)
            for t in terms:
                if t.out is not None:
                    go = self._g(t.out)
                    for key in t.coeff:
                        i, j, l = key
                        if not (0 <= i < ga.dim and 0 <= j < gb.dim and 0 <= l < go.dim):
                            raise SpecError(f"label out of range in OPE ({a},{b})")
        self.opes: Dict[Tuple[str, str], Tuple[OpeTerm, ...]] = dict(self.declared)
        for (a, b), terms in self.declared.items():
            if (b, a) not in self.opes:
                self.opes[(b, a)] = tuple(self.skew_terms(a, b, terms))
        self._arrays: Dict[Tuple[str, str], list] = {}

    def skew_terms(self, a: str, b: str, terms: Sequence[OpeTerm]) -> List[OpeTerm]:
        """OPE of ``b(z) a(w)`` from that of ``a(z) b(w)`` by skew-symmetry."""
        sab = (-1) ** (self._g(a).parity * self._g(b).parity)
        out: Dict[Tuple[int, Optional[str], int], Dict] = {}
        for t in terms:
            ls = range(t.pole + 1) if t.out is not None else (0,)
            for l in ls:
                m = t.pole - l
                fac = Q(sab * (-1) ** t.pole, _fact(l))
                key = (m, t.out, t.deriv + l)
                acc = out.setdefault(key, {})
                for lab, c in t.coeff.items():
                    tl = (lab[1], lab[0]) + tuple(lab[2:])
                    acc[tl] = acc.get(tl, 0) + c * fac
        res = []
        for (m, o, d), cf in sorted(out.items(), key=lambda kv: (kv[0][0], str(kv[0][1]), kv[0][2])):
            cf = {k: v for k, v in cf.items() if v}
            if cf:
                res.append(OpeTerm(m, o, d, cf))
        return res

    def _ope_arrays(self, a, b):
        hit = self._arrays.get((a, b))
        if hit is not None:
            return hit
        if (a, b) not in self.opes:
            raise SpecError(f"incomplete spec: no OPE for ({a}, {b})")
        ga, gb = self._g(a), self._g(b)
        lst = []
        for t in self.opes[(a, b)]:
            if t.out is None:
                arr = _zero_central(ga.dim, gb.dim)
                for (i, j), c in t.coeff.items():
                    arr[i, j] = arr[i, j] + as_scalar(c)
            else:
                arr = _obj_zeros((ga.dim, gb.dim, self._g(t.out).dim))
                for (i, j, l), c in t.coeff.items():
                    arr[i, j, l] += Q(c)
            lst.append((t.pole, t.out, t.deriv, arr))
        self._arrays[(a, b)] = lst
        return lst

    def _block(self, fa, m, fb, n):
        ga, gb = self._g(fa), self._g(fb)
        if m < 0 and n < 0:
            return {}, _zero_central(ga.dim, gb.dim)
        if m < 0:
            outs, cen = self.block(fb, n, fa, m)
            s = -((-1) ** (ga.mode_parity(m) * gb.mode_parity(n)))
            return ({k: np.transpose(v, (1, 0, 2)) * s for k, v in outs.items()},
                    np.transpose(cen) * s)
        outs: Dict[Tuple[str, int], np.ndarray] = {}
        cen = _zero_central(ga.dim, gb.dim)
        # for n >= 0 the mode B_(n) sits on Omega^n_w, which must move past A_(m)
        koszul = -((-1) ** ga.parity) if n >= 0 else 1
        for pole, o, d, arr in self._ope_arrays(fa, fb):
            if pole > m:
                continue
            p = m + n - pole
            if n < 0 and p >= 0:
                continue
            w = koszul * comb(m, pole)
            if o is None:
                if p == -1:
                    cen = cen + arr * w
                continue
            c = w * (-1) ** d * _ff(p, d)
            if not c:
                continue
            key = (o, p - d)
            if key in outs:
                outs[key] = outs[key] + arr * c
            else:
                outs[key] = arr * c
        return outs, cen


def _fact(n):
    r = 1
    for i in range(2, n + 1):
        r *= i
    return r


# ---------------------------------------------------------------------------
# Jacobi identity


@dataclass
class JacobiReport:
    ok: bool
    algebra: str
    cutoff: int
    pairs_checked: int = 0
    triples_checked: int = 0
    failure: Optional[str] = None
    witness: Optional[Tuple] = None

    def line(self) -> str:
        if self.ok:
            return (f"jacobi {self.algebra} cutoff={self.cutoff}: pass "
                    f"({self.pairs_checked} pairs, {self.triples_checked} triples)")
        return f"jacobi {self.algebra} cutoff={self.cutoff}: FAIL {self.failure}"


class _Rescale(Exception):
    def __init__(self, d):
        self.d = d


class _IntBlocks:
    """Blocks as integer arrays scaled by a common denominator ``D``."""

    def __init__(self, spec: ModeAlgebraSpec, D: int):
        self.spec, self.D = spec, D
        self.cache = {}

    def _conv(self, arr, attr=None):
        flat = []
        for v in arr.flat:
            x = v if attr is None else getattr(v, attr)
            x = Q(x) * self.D
            if x.denominator != 1:
                raise _Rescale(lcm(self.D, Q(x).denominator * self.D))
            flat.append(int(x))
        return np.array(flat, dtype=np.int64).reshape(arr.shape) if flat else np.zeros(arr.shape, np.int64)

    def get(self, fa, m, fb, n):
        key = (fa, m, fb, n)
        hit = self.cache.get(key)
        if hit is None:
            outs, cen = self.spec.block(fa, m, fb, n)
            io = {k: self._conv(v) for k, v in outs.items()}
            io = {k: v for k, v in io.items() if v.any()}
            hit = (io, self._conv(cen, "rat"), self._conv(cen, "xi"))
            self.cache[key] = hit
        return hit


def _combo_str(spec, fam_idx_arrays, labels, D2):
    i, j, k = labels
    parts = []
    for (fo, p), arr in sorted(fam_idx_arrays.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        if fo is None:
            v = int(arr[i, j, k])
            if v:
                parts.append(f"({Q(v, D2)}){p}")
            continue
        for l, v in enumerate(arr[i, j, k]):
            if v:
                parts.append(f"{Q(int(v), D2)}*{Mode(fo, p, l)}")
    return " + ".join(parts) or "0"


def check_jacobi(spec: ModeAlgebraSpec, cutoff: int, prune: bool = True) -> JacobiReport:
    """Exhaustive graded Jacobi identity on modes with subscripts ``<= cutoff``.

    Pairs are first checked for graded skew-symmetry and for the closure
    properties ``[creation, creation] = 0`` and ``[positive, creation]`` in
    creation + central; when these hold, triples with two creation modes
    cannot contribute and are skipped.  Triples are unordered (the
    Jacobiator is graded symmetric once skew-symmetry holds).
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    D = 1
    while True:
        try:
            return _check_jacobi(spec, cutoff, prune, D)
        except _Rescale as r:
            D = r.d


def _check_jacobi(spec, cutoff, prune, D):
    ib = _IntBlocks(spec, D)
    modes = spec.modes_upto(cutoff)
    par = {x: spec._g(x[0]).mode_parity(x[1]) for x in modes}
    cre = {x: spec._g(x[0]).is_creation(x[1]) for x in modes}
    rep = JacobiReport(True, spec.name, cutoff)

    def parity(f, i):
        return spec._g(f).mode_parity(i)

    closure = True
    for a, b in itertools.product(modes, repeat=2):
        oa, ra, xa = ib.get(a[0], a[1], b[0], b[1])
        ob, rb, xb = ib.get(b[0], b[1], a[0], a[1])
        rep.pairs_checked += 1
        s = -((-1) ** (par[a] * par[b]))
        keys = set(oa) | set(ob)
        for k in keys:
            u = oa.get(k)
            v = ob.get(k)
            u = np.zeros_like(np.transpose(v, (1, 0, 2))) if u is None else u
            v = np.zeros_like(np.transpose(u, (1, 0, 2))) if v is None else v
            if not np.array_equal(u, s * np.transpose(v, (1, 0, 2))):
                rep.ok = False
                rep.failure = f"skew-symmetry fails for [{a[0]}_{a[1]}, {b[0]}_{b[1]}] at {k[0]}_{k[1]}"
                rep.witness = (a, b, k)
                return rep
        if not (np.array_equal(ra, s * rb.T) and np.array_equal(xa, s * xb.T)):
            rep.ok = False
            rep.failure = f"skew-symmetry fails for [{a[0]}_{a[1]}, {b[0]}_{b[1]}] in the central term"
            rep.witness = (a, b, None)
            return rep
        for (fo, p) in oa:
            go = spec._g(fo)
            if cre[a] and cre[b]:
                closure = False
            elif (cre[a] or cre[b]) and not go.is_creation(p):
                closure = False
            if parity(fo, p) != (par[a] + par[b]) % 2:
                rep.ok = False
                rep.failure = f"parity of [{a[0]}_{a[1]}, {b[0]}_{b[1]}] output {fo}_{p} is wrong"
                return rep
            ga, gb = spec._g(a[0]), spec._g(b[0])
            if go.grading(p)[1] != ga.grading(a[1])[1] + gb.grading(b[1])[1]:
                rep.ok = False
                rep.failure = f"spin of [{a[0]}_{a[1]}, {b[0]}_{b[1]}] output {fo}_{p} is wrong"
                return rep
    use_prune = prune and closure
    D2 = D * D
    for a, b, c in itertools.combinations_with_replacement(modes, 3):
        if use_prune and (cre[a] + cre[b] + cre[c]) >= 2:
            continue
        rep.triples_checked += 1
        J = _jacobiator(spec, ib, a, b, c, par)
        for key, arr in J.items():
            if arr.any():
                idx = tuple(int(t) for t in np.argwhere(arr)[0][:3])
                ga, gb, gc = (spec._g(x[0]) for x in (a, b, c))
                ma, mb, mc = Mode(a[0], a[1], idx[0]), Mode(b[0], b[1], idx[1]), Mode(c[0], c[1], idx[2])
                rep.ok = False
                rep.witness = (ma, mb, mc)
                rep.failure = (f"Jacobi fails at ({ma}, {mb}, {mc}): residual "
                               f"{_combo_str(spec, J, idx, D2)}")
                return rep
    return rep


def _acc(J, key, arr):
    if key in J:
        J[key] = J[key] + arr
    else:
        J[key] = arr


def _jacobiator(spec, ib, a, b, c, par):
    """[a,[b,c]] - [[a,b],c] - (-1)^{|a||b|} [b,[a,c]] as label tensors."""
    J: Dict = {}
    # [a,[b,c]]
    outs, _, _ = ib.get(b[0], b[1], c[0], c[1])
    for (fz, p), t in outs.items():
        o2, r2, x2 = ib.get(a[0], a[1], fz, p)
        for k2, s in o2.items():
            _acc(J, k2, np.einsum("jkl,ilo->ijko", t, s))
        if r2.any():
            _acc(J, (None, "rat"), np.einsum("jkl,il->ijk", t, r2))
        if x2.any():
            _acc(J, (None, "xi"), np.einsum("jkl,il->ijk", t, x2))
    # -[[a,b],c]
    outs, _, _ = ib.get(a[0], a[1], b[0], b[1])
    for (fz, p), t in outs.items():
        o2, r2, x2 = ib.get(fz, p, c[0], c[1])
        for k2, s in o2.items():
            _acc(J, k2, -np.einsum("ijl,lko->ijko", t, s))
        if r2.any():
            _acc(J, (None, "rat"), -np.einsum("ijl,lk->ijk", t, r2))
        if x2.any():
            _acc(J, (None, "xi"), -np.einsum("ijl,lk->ijk", t, x2))
    # -(-1)^{|a||b|}[b,[a,c]]
    sg = -((-1) ** (par[a] * par[b]))
    outs, _, _ = ib.get(a[0], a[1], c[0], c[1])
    for (fz, p), t in outs.items():
        o2, r2, x2 = ib.get(b[0], b[1], fz, p)
        for k2, s in o2.items():
            _acc(J, k2, sg * np.einsum("ikl,jlo->ijko", t, s))
        if r2.any():
            _acc(J, (None, "rat"), sg * np.einsum("ikl,jl->ijk", t, r2))
        if x2.any():
            _acc(J, (None, "xi"), sg * np.einsum("ikl,jl->ijk", t, x2))
    return J


# ---------------------------------------------------------------------------
# induced vacuum modules


class VacuumModule:
    """Module induced from the trivial module of the positive subalgebra.

    States are dicts ``{monomial: Fraction}`` with monomials sorted tuples of
    creation modes; ``xi`` acts as zero.
    """

    def __init__(self, spec: ModeAlgebraSpec, positive: Iterable[str], spin_cutoff):
        self.spec = spec
        self.positive = set(positive)
        self.spin_cutoff = Q(spin_cutoff)
        fams = [g.name for g in spec.generators]
        self._rank = {f: i for i, f in enumerate(fams)}
        self.creation_families = [f for f in fams if f not in self.positive]
        self._memo = {}

    def is_positive(self, mode: Mode) -> bool:
        return mode.family in self.positive

    def key(self, mode: Mode):
        return (self._rank[mode.family], mode.index, mode.label)

    def spin(self, mode: Mode):
        return self.spec._g(mode.family).grading(mode.index)[1]

    def basis(self) -> List[Tuple[Mode, ...]]:
        """PBW monomials of total spin ``<= spin_cutoff`` in deterministic order."""
        cands = []
        for f in self.creation_families:
            g = self.spec._g(f)
            i = 0
            while True:
                s = g.grading(i)[1]
                if s > self.spin_cutoff:
                    break
                if s <= 0:
                    raise SpecError("creation modes must have positive spin for a finite basis")
                for l in range(g.dim):
                    cands.append(Mode(f, i, l))
                i += 1
        cands.sort(key=self.key)
        out = []

        def rec(start, cur, spin):
            out.append(tuple(cur))
            for t in range(start, len(cands)):
                x = cands[t]
                s = spin + self.spin(x)
                if s > self.spin_cutoff:
                    continue
                fermi = self.spec.parity(x) == 1
                if fermi and cur and cur[-1] == x:
                    continue
                rec(t + 1 if fermi else t, cur + [x], s)

        rec(0, [], Q(0))
        out.sort(key=lambda mono: (sum((self.spin(x) for x in mono), Q(0)), len(mono),
                                   [self.key(x) for x in mono]))
        return out

    def act(self, mode: Mode, state: Mapping[Tuple[Mode, ...], Fraction]) -> Dict:
        out: Dict = {}
        for mono, c in state.items():
            for k, v in self._act_mono(Mode(*mode), tuple(mono)).items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def _act_combo(self, combo: ModeCombo, mono) -> Dict:
        out: Dict = {}
        for m, c in combo.modes.items():
            for k, v in self._act_mono(m, mono).items():
                out[k] = out.get(k, 0) + c * v
        # central terms: xi acts as 0 here, and rational multiples of 1 act by scaling
        if combo.central.rat:
            out[mono] = out.get(mono, 0) + combo.central.rat
        return out

    def _act_mono(self, x: Mode, mono) -> Dict:
        key = (x, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        res: Dict = {}
        px = self.spec.parity(x)
        if self.is_positive(x):
            if mono:
                y, rest = mono[0], mono[1:]
                br = self.spec.bracket(x, y)
                for k, v in self._act_combo(br, rest).items():
                    res[k] = res.get(k, 0) + v
                sub = self._act_mono(x, rest)
                if sub:
                    sg = (-1) ** (px * self.spec.parity(y))
                    for k, v in self.act(y, sub).items():
                        res[k] = res.get(k, 0) + sg * v
        else:
            if not mono or self.key(x) < self.key(mono[0]):
                res[(x,) + mono] = Q(1)
            elif x == mono[0]:
                if px == 1:
                    # x x = [x,x]/2 for an odd creation mode
                    br = self.spec.bracket(x, x)
                    for k, v in self._act_combo(br, mono[1:]).items():
                        res[k] = res.get(k, 0) + v / 2
                else:
                    res[(x,) + mono] = Q(1)
            else:
                y, rest = mono[0], mono[1:]
                sg = (-1) ** (px * self.spec.parity(y))
                for k, v in self.act(y, self._act_mono(x, rest)).items():
                    res[k] = res.get(k, 0) + sg * v
                br = self.spec.bracket(x, y)
                for k, v in self._act_combo(br, rest).items():
                    res[k] = res.get(k, 0) + v
        res = {k: v for k, v in res.items() if v}
        self._memo[key] = res
        return res


def induce_vacuum_module(spec: ModeAlgebraSpec, positive: Iterable[str], spin_cutoff,
                         check_cutoff: int = 3) -> VacuumModule:
    """Induced module with the positive families acting trivially on ``1``.

    Raises :class:`SpecError` if the positive span is not closed under
    brackets on modes with subscripts up to ``check_cutoff``.
    """
    positive = set(positive)
    for f in positive:
        spec._g(f)
    pos_modes = [m for m in spec.modes_upto(check_cutoff) if m[0] in positive]
    for a, b in itertools.product(pos_modes, repeat=2):
        outs, _ = spec.block(a[0], a[1], b[0], b[1])
        for (fo, p), arr in outs.items():
            if fo not in positive and any(v for v in arr.flat):
                raise SpecError(f"positive subalgebra not closed: [{a[0]}_{a[1]}, {b[0]}_{b[1]}] "
                                f"contains {fo}_{p}")
    return VacuumModule(spec, positive, spin_cutoff)


# ---------------------------------------------------------------------------
# N=1 -> N=2


def n1_to_n2_morphism(mode: Mode) -> ModeCombo:
    """Identity on G, Gamma; theta -> theta+ + theta-, Q -> Q+ + Q-."""
    mode = Mode(*mode)
    if mode.family in ("G", "Gamma"):
        return ModeCombo({mode: 1})
    if mode.family in ("theta", "Q"):
        return ModeCombo({Mode(mode.family + "+", mode.index): 1,
                          Mode(mode.family + "-", mode.index): 1})
    raise SpecError(f"no image for family {mode.family!r}")


def check_intertwining(src: ModeAlgebraSpec, dst: ModeAlgebraSpec, phi, cutoff: int):
    """Return ``(ok, witness)`` for ``phi([a,b]) == [phi a, phi b]``."""
    modes = [Mode(f, i) for f, i in src.modes_upto(cutoff)]
    for a, b in itertools.product(modes, repeat=2):
        lhs = ModeCombo({}, 0)
        br = src.bracket(a, b)
        for m, c in br.modes.items():
            lhs = lhs + phi(m).scale(c)
        lhs = lhs + ModeCombo({}, br.central)
        rhs = dst.bracket_combo(phi(a), phi(b))
        if lhs != rhs:
            return False, (a, b, lhs, rhs)
    return True, None
