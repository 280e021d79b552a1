"""Builders for the shipped mode algebras."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from . import tensors as T
from .modealg import ModeGenerator, OpeSpec, OpeTerm, Piece, PiecewiseSpec, SpecError, Term
from .ravring import Scalar

__all__ = [
    "virasoro",
    "abelian_current",
    "svir_n1",
    "svir_n2",
    "svir_n2_fields",
    "svir_n1_fields",
    "sl2_current",
    "svir_n3",
    "svir_n4",
    "evir",
    "LabelBasis",
    "SL2",
    "C2C2",
    "SL4",
    "SKEW4",
    "SYM4",
    "SHIPPED",
    "build",
]

Q = Fraction
H = Q(1, 2)

# ---------------------------------------------------------------------------
# hand tables


def _fam(name, parity, R, spin, slope, S=0, creation=False):
    return ModeGenerator(name, parity, Q(R), Q(spin), Q(S), "modes", Q(slope), creation)


def _p(guard, *terms):
    return Piece(guard, tuple(Term(*t) for t in terms))


VIR_FAMILIES = [_fam("G", 0, 0, 1, -1), _fam("Gamma", 1, 1, 2, 1, creation=True)]
VIR_RULES = {
    ("G", "G"): [_p("", ("m-n", "G", "m+n-1"))],
    ("Gamma", "Gamma"): [],
    ("G", "Gamma"): [
        _p("n+3 < m"),
        _p("n+3 == m", ("m*(m-1)*(m-2)/12", "xi")),
        _p("n+2 == m"),
        _p("n+1 >= m", ("m+n+1", "Gamma", "n-m+1")),
    ],
}
CUR_FAMILIES = [_fam("S", 0, 0, 0, -1), _fam("sigma", 1, 1, 1, 1, creation=True)]
CUR_RULES = {
    ("S", "S"): [],
    ("sigma", "sigma"): [],
    ("S", "sigma"): [_p("n+1 == m", ("m/3", "xi"))],
}
VIR_CUR_RULES = {
    ("G", "S"): [_p("", ("-n", "S", "m+n-1"))],
    ("G", "sigma"): [_p("n+1 < m"), _p("n+1 >= m", ("n+1", "sigma", "n-m+1"))],
    ("Gamma", "S"): [_p("n > m+1"), _p("n <= m+1", ("-n", "sigma", "m-n+1"))],
    ("Gamma", "sigma"): [],
}


def _super_rules(th: str, q: str) -> Dict:
    """Virasoro action on a pair ``theta, Q`` (shared by N=1 and N=2)."""
    return {
        ("G", th): [_p("", ("m/2-n", th, "m+n-1"))],
        ("G", q): [_p("n+1 < m"), _p("n+1 >= m", ("m/2+n+1", q, "n-m+1"))],
        ("Gamma", th): [_p("n > m+1"), _p("n <= m+1", ("-((m+1)/2+n)", q, "m-n+1"))],
        ("Gamma", q): [],
    }


def virasoro() -> PiecewiseSpec:
    return PiecewiseSpec(VIR_FAMILIES, VIR_RULES, name="Vir")


def abelian_current() -> PiecewiseSpec:
    return PiecewiseSpec(CUR_FAMILIES, CUR_RULES, name="gl1-current")


def svir_n1() -> PiecewiseSpec:
    fams = VIR_FAMILIES + [_fam("theta", 1, 0, H, -1), _fam("Q", 0, 1, Q(3, 2), 1, creation=True)]
    rules = dict(VIR_RULES)
    rules.update(_super_rules("theta", "Q"))
    rules.update({
        ("theta", "theta"): [_p("", ("2", "G", "m+n"))],
        ("Q", "Q"): [],
        ("theta", "Q"): [
            _p("n+2 < m"),
            _p("n+2 == m", ("-m*(m-1)/3", "xi")),
            _p("n >= m", ("-2", "Gamma", "n-m")),
        ],
    })
    return PiecewiseSpec(fams, rules, name="SVir-N1")


def svir_n2() -> PiecewiseSpec:
    fams = VIR_FAMILIES + CUR_FAMILIES + [
        _fam("theta+", 1, 0, H, -1, S=1),
        _fam("theta-", 1, 0, H, -1, S=-1),
        _fam("Q+", 0, 1, Q(3, 2), 1, S=1, creation=True),
        _fam("Q-", 0, 1, Q(3, 2), 1, S=-1, creation=True),
    ]
    rules = dict(VIR_RULES)
    rules.update(CUR_RULES)
    rules.update(VIR_CUR_RULES)
    for s, o in (("+", "-"), ("-", "+")):
        th, q, tho, qo = "theta" + s, "Q" + s, "theta" + o, "Q" + o
        pm = "" if s == "+" else "-"
        mp = "-" if s == "+" else ""
        rules.update(_super_rules(th, q))
        rules.update({
            ("S", th): [_p("", (f"{pm}1", th, "m+n"))],
            ("S", q): [_p("n < m"), _p("n >= m", (f"{pm}1", q, "n-m"))],
            ("sigma", th): [_p("n > m"), _p("n <= m", (f"{pm}1", q, "m-n"))],
            ("sigma", q): [],
            (th, th): [],
            (th, q): [],
            (q, q): [],
            (q, qo): [],
            (th, tho): [_p("", ("1", "G", "m+n"), (f"{pm}(m-n)/2", "S", "m+n-1"))],
            (th, qo): [
                _p("n+2 < m"),
                _p("n+2 == m", ("-m*(m-1)/6", "xi")),
                _p("n+1 == m", (f"{mp}m", "sigma", "0")),
                _p("n >= m", ("-1", "Gamma", "n-m"), (f"{mp}(m+n+1)/2", "sigma", "n-m+1")),
            ],
        })
    return PiecewiseSpec(fams, rules, name="SVir-N2")


# ---------------------------------------------------------------------------
# label spaces


class LabelBasis:
    """A basis of matrices together with exact coordinates of a matrix in it."""

    def __init__(self, name, names, mats, coords: Callable):
        self.name = name
        self.names = tuple(names)
        self.mats = [T.as_matrix(m, np.array(m).shape) for m in mats]
        self._coords = coords

    @property
    def dim(self):
        return len(self.names)

    def coords(self, m) -> List[Fraction]:
        c = [Q(x) for x in self._coords(np.array(m, dtype=object))]
        back = sum((x * b for x, b in zip(c, self.mats)), np.zeros_like(self.mats[0]))
        if not np.array_equal(np.array(back, dtype=object), np.array(m, dtype=object)):
            raise SpecError(f"matrix is not in the span of the {self.name} basis")
        return c


def _e(n, i, j):
    m = np.zeros((n, n), dtype=object)
    m[i, j] = 1
    return m


SL2 = LabelBasis("sl2", ("E", "H", "F"),
                 [_e(2, 0, 1), _e(2, 0, 0) - _e(2, 1, 1), _e(2, 1, 0)],
                 lambda m: [m[0, 1], m[0, 0], m[1, 0]])
C2C2 = LabelBasis("C2xC2", ("11", "12", "21", "22"),
                  [_e(2, a, b) for a in range(2) for b in range(2)],
                  lambda m: [m[a, b] for a in range(2) for b in range(2)])

_OFF4 = [(i, j) for i in range(4) for j in range(4) if i != j]
SL4 = LabelBasis(
    "sl4",
    [f"E{i+1}{j+1}" for i, j in _OFF4] + [f"H{k+1}" for k in range(3)],
    [_e(4, i, j) for i, j in _OFF4] + [_e(4, k, k) - _e(4, k + 1, k + 1) for k in range(3)],
    lambda m: [m[i, j] for i, j in _OFF4] + [sum(m[t, t] for t in range(k + 1)) for k in range(3)],
)
_LT4 = [(i, j) for i in range(4) for j in range(i + 1, 4)]
SKEW4 = LabelBasis("skew4", [f"A{i+1}{j+1}" for i, j in _LT4],
                   [_e(4, i, j) - _e(4, j, i) for i, j in _LT4],
                   lambda m: [m[i, j] for i, j in _LT4])
_LE4 = [(i, j) for i in range(4) for j in range(i, 4)]
SYM4 = LabelBasis("sym4", [f"S{i+1}{j+1}" for i, j in _LE4],
                  [_e(4, i, j) + (_e(4, j, i) if i != j else 0) for i, j in _LE4],
                  lambda m: [m[i, j] for i, j in _LE4])


def _tr(m):
    return sum((Q(m[i, i]) for i in range(m.shape[0])), Q(0))


# ---------------------------------------------------------------------------
# OPE presentations


def _field(name, parity, spin, basis: LabelBasis = None, S=0, R=1):
    labels = basis.names if basis is not None else ("",)
    return ModeGenerator(name, parity, Q(R), Q(spin), Q(S), "field", labels=labels)


def _lin(ba: LabelBasis, bb: LabelBasis, bo: LabelBasis, fn, scale=1) -> Dict:
    """Coefficients of ``(A_i, B_j) -> fn(A_i, B_j)`` expanded in ``bo``."""
    ba = ba or _ONE
    bb = bb or _ONE
    out = {}
    for (i, a), (j, b) in itertools.product(enumerate(ba.mats), enumerate(bb.mats)):
        r = fn(a, b)
        cs = [Q(r)] if bo is None else bo.coords(r)
        for l, c in enumerate(cs):
            if c:
                out[(i, j, l)] = c * scale
    return out


def _cen(ba, bb, fn, xi=True) -> Dict:
    ba = ba or _ONE
    bb = bb or _ONE
    out = {}
    for (i, a), (j, b) in itertools.product(enumerate(ba.mats), enumerate(bb.mats)):
        c = Q(fn(a, b))
        if c:
            out[(i, j)] = Scalar(0, c) if xi else Scalar(c, 0)
    return out


_ONE = LabelBasis("one", ("",), [np.array([[1]], dtype=object)], lambda m: [m[0, 0]])


def _scalar_c(c):
    return {(0, 0, 0): Q(c)}


def _primary(field, spin, basis=None) -> List[OpeTerm]:
    """``Gamma(z) X(w) ~ spin Omega^1 X + Omega^0 dX``."""
    diag = {(0, i, i): Q(1) for i in range((basis or _ONE).dim)}
    return [OpeTerm(1, field, 0, {k: v * Q(spin) for k, v in diag.items()}),
            OpeTerm(0, field, 1, diag)]


def _virasoro_ope(xi_coeff=H):
    terms = [OpeTerm(1, "Gamma", 0, _scalar_c(2)), OpeTerm(0, "Gamma", 1, _scalar_c(1))]
    if xi_coeff:
        terms.insert(0, OpeTerm(3, None, 0, {(0, 0): Scalar(0, xi_coeff)}))
    return terms


def svir_n2_fields() -> OpeSpec:
    gens = [_field("Gamma", 1, 2), _field("sigma", 1, 1), _field("Q+", 0, Q(3, 2), S=1),
            _field("Q-", 0, Q(3, 2), S=-1)]
    xi3 = {(0, 0): Scalar(0, Q(-1, 3))}
    opes = {
        ("Gamma", "Gamma"): _virasoro_ope(),
        ("sigma", "sigma"): [OpeTerm(1, None, 0, {(0, 0): Scalar(0, Q(1, 3))})],
        ("Gamma", "sigma"): _primary("sigma", 1),
        ("Gamma", "Q+"): _primary("Q+", Q(3, 2)),
        ("Gamma", "Q-"): _primary("Q-", Q(3, 2)),
        ("sigma", "Q+"): [OpeTerm(0, "Q+", 0, _scalar_c(1))],
        ("sigma", "Q-"): [OpeTerm(0, "Q-", 0, _scalar_c(-1))],
        ("Q+", "Q+"): [],
        ("Q-", "Q-"): [],
        ("Q+", "Q-"): [OpeTerm(2, None, 0, xi3), OpeTerm(1, "sigma", 0, _scalar_c(-1)),
                       OpeTerm(0, "Gamma", 0, _scalar_c(-1)), OpeTerm(0, "sigma", 1, _scalar_c(-H))],
        ("Q-", "Q+"): [OpeTerm(2, None, 0, xi3), OpeTerm(1, "sigma", 0, _scalar_c(1)),
                       OpeTerm(0, "Gamma", 0, _scalar_c(-1)), OpeTerm(0, "sigma", 1, _scalar_c(H))],
    }
    return OpeSpec(gens, opes, name="SVir-N2-fields")


def svir_n1_fields() -> OpeSpec:
    gens = [_field("Gamma", 1, 2), _field("Q", 0, Q(3, 2))]
    opes = {
        ("Gamma", "Gamma"): _virasoro_ope(),
        ("Gamma", "Q"): _primary("Q", Q(3, 2)),
        ("Q", "Q"): [OpeTerm(2, None, 0, {(0, 0): Scalar(0, Q(-2, 3))}),
                     OpeTerm(0, "Gamma", 0, _scalar_c(-2))],
    }
    return OpeSpec(gens, opes, name="SVir-N1-fields")


def _comm(a, b):
    return a.dot(b) - b.dot(a)


def sl2_current() -> OpeSpec:
    gens = [_field("sigma", 1, 1, SL2)]
    opes = {("sigma", "sigma"): [
        OpeTerm(1, None, 0, _cen(SL2, SL2, lambda a, b: _tr(a.dot(b)) / 3)),
        OpeTerm(0, "sigma", 0, _lin(SL2, SL2, SL2, _comm)),
    ]}
    return OpeSpec(gens, opes, name="sl2-current")


def svir_n3() -> OpeSpec:
    gens = [_field("Gamma", 1, 2), _field("sigma", 1, 1, SL2), _field("Q", 0, Q(3, 2), SL2)]
    trg = _lin(SL2, SL2, None, lambda a, b: _tr(a.dot(b)))
    opes = {
        ("Gamma", "Gamma"): _virasoro_ope(),
        ("Gamma", "sigma"): _primary("sigma", 1, SL2),
        ("Gamma", "Q"): _primary("Q", Q(3, 2), SL2),
        ("sigma", "sigma"): [
            OpeTerm(1, None, 0, _cen(SL2, SL2, lambda a, b: _tr(a.dot(b)) / 3)),
            OpeTerm(0, "sigma", 0, _lin(SL2, SL2, SL2, _comm)),
        ],
        ("sigma", "Q"): [OpeTerm(0, "Q", 0, _lin(SL2, SL2, SL2, _comm))],
        ("Q", "Q"): [
            OpeTerm(2, None, 0, _cen(SL2, SL2, lambda a, b: -_tr(a.dot(b)) / 3)),
            OpeTerm(1, "sigma", 0, _lin(SL2, SL2, SL2, _comm, -1)),
            OpeTerm(0, "Gamma", 0, {k: -v for k, v in trg.items()}),
            OpeTerm(0, "sigma", 1, _lin(SL2, SL2, SL2, _comm, -H)),
        ],
    }
    return OpeSpec(gens, opes, name="SVir-N3")


def svir_n4(p=0, displayed: bool = False) -> OpeSpec:
    """Big N=4 at parameter ``p``; the central Scalar slot holds ``kappa``.

    The default data closes under the Jacobi identity.  It differs from the
    literal transcription (``displayed=True``, which does not close) in three
    places: the brackets ``[l1, l2]_+-`` enter with the opposite overall sign
    (so the P term of ``sigma+- Q`` becomes ``+-(1+-p)/4``), the
    ``sigma+-`` levels are ``kappa+-/3`` and the ``upsilon`` level is
    ``-16 kappa/3``.
    """
    p = Q(p)
    kp, km, xi = 1 + p, 1 - p, 1 - p * p
    if displayed:
        eb, lev, lu = 1, 1, Q(1)
    else:
        eb, lev, lu = -1, Q(1, 3), Q(-16, 3)
    gens = [_field("Gamma", 1, 2), _field("sigma+", 1, 1, SL2), _field("sigma-", 1, 1, SL2),
            _field("upsilon", 1, 1), _field("Q", 0, Q(3, 2), C2C2), _field("P", 0, H, C2C2)]
    pair = T.pairing
    brp, brm = T.bracket_plus, T.bracket_minus
    opes = {
        ("Gamma", "Gamma"): _virasoro_ope(xi / 2),
        ("Gamma", "sigma+"): _primary("sigma+", 1, SL2),
        ("Gamma", "sigma-"): _primary("sigma-", 1, SL2),
        ("Gamma", "upsilon"): _primary("upsilon", 1),
        ("Gamma", "Q"): _primary("Q", Q(3, 2), C2C2),
        ("Gamma", "P"): _primary("P", H, C2C2),
        ("sigma+", "sigma+"): [
            OpeTerm(1, None, 0, _cen(SL2, SL2, lambda a, b: lev * kp * _tr(a.dot(b)))),
            OpeTerm(0, "sigma+", 0, _lin(SL2, SL2, SL2, _comm))],
        ("sigma-", "sigma-"): [
            OpeTerm(1, None, 0, _cen(SL2, SL2, lambda a, b: lev * km * _tr(a.dot(b)))),
            OpeTerm(0, "sigma-", 0, _lin(SL2, SL2, SL2, _comm))],
        ("sigma+", "sigma-"): [],
        ("upsilon", "upsilon"): [OpeTerm(1, None, 0, {(0, 0): Scalar(0, lu)})],
        ("sigma+", "upsilon"): [],
        ("sigma-", "upsilon"): [],
        ("sigma+", "P"): [OpeTerm(0, "P", 0, _lin(SL2, C2C2, C2C2, T.act_plus))],
        ("sigma-", "P"): [OpeTerm(0, "P", 0, _lin(SL2, C2C2, C2C2, T.act_minus))],
        ("upsilon", "P"): [],
        ("sigma+", "Q"): [
            OpeTerm(1, "P", 0, _lin(SL2, C2C2, C2C2, T.act_plus, -eb * kp / 4)),
            OpeTerm(0, "Q", 0, _lin(SL2, C2C2, C2C2, T.act_plus))],
        ("sigma-", "Q"): [
            OpeTerm(1, "P", 0, _lin(SL2, C2C2, C2C2, T.act_minus, eb * km / 4)),
            OpeTerm(0, "Q", 0, _lin(SL2, C2C2, C2C2, T.act_minus))],
        ("upsilon", "Q"): [OpeTerm(1, "P", 0, {(0, i, i): Q(1) for i in range(4)})],
        ("P", "P"): [OpeTerm(0, None, 0, _cen(C2C2, C2C2, lambda a, b: Q(8, 3) * pair(a, b)))],
        ("P", "Q"): [
            OpeTerm(0, "sigma+", 0, _lin(C2C2, C2C2, SL2, brp, -eb)),
            OpeTerm(0, "sigma-", 0, _lin(C2C2, C2C2, SL2, brm, eb)),
            OpeTerm(0, "upsilon", 0, _lin(C2C2, C2C2, None, pair, -H))],
        ("Q", "Q"): [
            OpeTerm(2, None, 0, _cen(C2C2, C2C2, lambda a, b: -xi * pair(a, b) / 3)),
            OpeTerm(1, "sigma+", 0, _lin(C2C2, C2C2, SL2, brp, -eb * km / 2)),
            OpeTerm(1, "sigma-", 0, _lin(C2C2, C2C2, SL2, brm, -eb * kp / 2)),
            OpeTerm(0, "Gamma", 0, _lin(C2C2, C2C2, None, pair, -1)),
            OpeTerm(0, "sigma+", 1, _lin(C2C2, C2C2, SL2, brp, -eb * km / 4)),
            OpeTerm(0, "sigma-", 1, _lin(C2C2, C2C2, SL2, brm, -eb * kp / 4))],
    }
    tag = ",displayed" if displayed else ""
    return OpeSpec(gens, opes, name=f"SVir-N4(p={p}{tag})", parameters={"p": p},
                   central_symbol="kappa")


def evir() -> OpeSpec:
    gens = [_field("Gamma", 1, 2), _field("sigma", 1, 1, SL4), _field("Q", 0, Q(3, 2), SKEW4),
            _field("P", 0, H, SYM4)]

    def astar(a, b):
        return a.dot(T.star(b))

    opes = {
        ("Gamma", "Gamma"): _virasoro_ope(0),
        ("Gamma", "sigma"): _primary("sigma", 1, SL4),
        ("Gamma", "Q"): _primary("Q", Q(3, 2), SKEW4),
        ("Gamma", "P"): _primary("P", H, SYM4),
        ("sigma", "sigma"): [OpeTerm(0, "sigma", 0, _lin(SL4, SL4, SL4, _comm))],
        ("Q", "Q"): [
            OpeTerm(1, "sigma", 0, _lin(SKEW4, SKEW4, SL4, lambda a, b: T.traceless(astar(a, b)), -1)),
            OpeTerm(0, "Gamma", 0, _lin(SKEW4, SKEW4, None, lambda a, b: _tr(astar(a, b)), -H)),
            OpeTerm(0, "sigma", 1, _lin(SKEW4, SKEW4, SL4, lambda a, b: T.traceless(astar(a, b)), -H)),
        ],
        ("P", "P"): [],
        ("Q", "P"): [OpeTerm(0, "sigma", 0, _lin(SKEW4, SYM4, SL4, lambda a, b: astar(b, a), -H))],
        ("sigma", "P"): [OpeTerm(0, "P", 0, _lin(SL4, SYM4, SYM4, lambda a, b: a.dot(b) + b.dot(a.T)))],
        ("sigma", "Q"): [
            OpeTerm(1, "P", 0, _lin(SL4, SKEW4, SYM4, lambda a, b: a.dot(b) - b.dot(a.T))),
            OpeTerm(0, "Q", 0, _lin(SL4, SKEW4, SKEW4, lambda a, b: a.dot(b) + b.dot(a.T))),
        ],
    }
    return OpeSpec(gens, opes, name="EVir")


SHIPPED = {
    "vir": virasoro,
    "gl1-current": abelian_current,
    "svir-n1": svir_n1,
    "svir-n2": svir_n2,
    "svir-n2-fields": svir_n2_fields,
    "svir-n1-fields": svir_n1_fields,
    "sl2-current": sl2_current,
    "svir-n3": svir_n3,
    "svir-n4": svir_n4,
    "evir": evir,
}


def build(name: str, **kw):
    try:
        return SHIPPED[name](**kw)
    except KeyError:
        raise SpecError(f"unknown algebra {name!r}") from None
