"""N=2 superconformal structures on free algebras.

A structure is a choice of states ``Gamma``, ``sigma``, ``Q+``, ``Q-`` in a
:class:`~ravioli.freefield.FreeFieldAlgebra`.  Gradings are exact rationals
``(R, j, q)``: R-charge and spin come from the generator declarations, the
S-charge ``q`` is the declared value times ``s_sign`` (the mirror flips it).
All such claims are checked against the actual zero modes where it matters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import _linalg as la
from .freefield import FockState, FreeFieldAlgebra, embed, enumerate_basis, fh, fvpert, sfc, tensor

__all__ = [
    "SCGradingError",
    "SCStructure",
    "SCReport",
    "BPSReport",
    "PrimaryRecord",
    "FlavorReport",
    "verify_sc",
    "quotient_relations",
    "bps_scan",
    "classify_primaries",
    "check_primary",
    "detect_flavor_symmetry",
    "mirror",
    "osp22_closure",
    "fh_sc",
    "fvpert_sc",
    "sfc_sc",
    "tensor_sc",
    "HIGGS",
    "COULOMB",
]

HIGGS, COULOMB = "higgs", "coulomb"
Q = Fraction
Grading = Tuple[Fraction, Fraction, Fraction]


class SCGradingError(ValueError):
    pass


_EXPECTED_GRADING = {
    "Gamma": (1, 2, 0, 1),
    "sigma": (1, 1, 0, 1),
    "Q+": (1, Q(3, 2), 1, 0),
    "Q-": (1, Q(3, 2), -1, 0),
}


@dataclass
class SCStructure:
    alg: FreeFieldAlgebra
    Gamma: FockState
    sigma: FockState
    Qp: FockState
    Qm: FockState
    xi: Fraction = Q(0)
    name: str = ""
    s_sign: int = 1

    def __post_init__(self):
        self.xi = Q(self.xi)
        if self.s_sign not in (1, -1):
            raise ValueError("s_sign must be +1 or -1")
        for label, st in self.fields().items():
            if not isinstance(st, FockState) or st.alg is not self.alg:
                raise SCGradingError(f"{label} is not a state of {self.alg.name}")
            want = _EXPECTED_GRADING[label]
            if not st:
                raise SCGradingError(f"{label} is zero")
            try:
                got = self.grading(st)
                par = st.parity
            except ValueError as exc:
                raise SCGradingError(f"{label}: {exc}") from None
            if got != tuple(Q(x) for x in want[:3]) or par != want[3]:
                raise SCGradingError(
                    f"{label} has (R, spin, S, parity) = ({got[0]}, {got[1]}, {got[2]}, {par}), "
                    f"expected ({want[0]}, {want[1]}, {want[2]}, {want[3]})")

    def fields(self) -> Dict[str, FockState]:
        return {"Gamma": self.Gamma, "sigma": self.sigma, "Q+": self.Qp, "Q-": self.Qm}

    def grading(self, st: FockState) -> Grading:
        R, j, S = st.grading()
        return R, j, self.s_sign * S

    def mono_grading(self, mono) -> Grading:
        R, j, S = self.alg.mono_grading(mono)
        return R, j, self.s_sign * S

    def mode(self, label: str, m: int, v: FockState) -> FockState:
        return self.alg.mode(self.fields()[label], m, v)

    def S0(self, v: FockState) -> FockState:
        return self.alg.mode(self.sigma, 0, v)


# ---------------------------------------------------------------------------
# the seven OPEs

@dataclass
class SCReport:
    ok: bool
    checks: Dict[str, bool]
    witness: Optional[str] = None
    counts: Dict[str, int] = field(default_factory=dict)

    def line(self) -> str:
        if self.ok:
            return "PASS " + ", ".join(self.checks)
        return f"FAIL {self.witness}"


def _expected_opes(sc: SCStructure):
    A, d = sc.alg, sc.alg.d
    G, s, Qp, Qm, xi = sc.Gamma, sc.sigma, sc.Qp, sc.Qm, sc.xi
    vac = A.vacuum()
    half = Q(1, 2)
    return [
        ("Gamma Gamma", G, G, {3: vac.scale(xi / 2), 1: G.scale(2), 0: d(G)}),
        ("sigma sigma", s, s, {1: vac.scale(xi / 3)}),
        ("Gamma sigma", G, s, {1: s, 0: d(s)}),
        ("Gamma Q+", G, Qp, {1: Qp.scale(Q(3, 2)), 0: d(Qp)}),
        ("Gamma Q-", G, Qm, {1: Qm.scale(Q(3, 2)), 0: d(Qm)}),
        ("sigma Q+", s, Qp, {0: Qp}),
        ("sigma Q-", s, Qm, {0: -Qm}),
        ("Q+ Q+", Qp, Qp, {}),
        ("Q- Q-", Qm, Qm, {}),
        ("Q+ Q-", Qp, Qm, {2: vac.scale(-xi / 3), 1: -s, 0: -G - d(s).scale(half)}),
        ("Q- Q+", Qm, Qp, {2: vac.scale(-xi / 3), 1: s, 0: -G + d(s).scale(half)}),
    ]


def compare_ope(alg: FreeFieldAlgebra, label: str, a: FockState, b: FockState,
                expected: Dict[int, FockState]) -> Optional[str]:
    """Witness string for the first mismatching pole, or None."""
    got = alg.ope(a, b).singular_dict()
    for m in sorted(set(got) | set(k for k, v in expected.items() if v), reverse=True):
        g = got.get(m, alg.zero())
        w = expected.get(m, alg.zero())
        if g != w:
            return f"{label}: Omega^{m} coefficient is {g}, expected {w}"
    return None


def verify_sc(sc: SCStructure, truncation=3) -> SCReport:
    """The seven N=2 OPEs, plus ``Gamma_(0) = d``, ``Gamma_(1) = spin`` and
    ``sigma_(0) = S-charge`` on every basis state of spin <= ``truncation``."""
    checks: Dict[str, bool] = {}
    counts: Dict[str, int] = {}
    witness = None
    for label, a, b, exp in _expected_opes(sc):
        w = compare_ope(sc.alg, label, a, b, exp)
        checks[label] = w is None
        if w and witness is None:
            witness = w
    ok_modes = True
    n = 0
    if truncation is not None:
        for v in _window(sc, truncation):
            n += 1
            R, j, q = sc.grading(v)
            tests = (("Gamma_(0) = d", sc.mode("Gamma", 0, v), sc.alg.d(v)),
                     ("Gamma_(1) = spin", sc.mode("Gamma", 1, v), v.scale(j)),
                     ("sigma_(0) = S", sc.S0(v), v.scale(q)))
            for lab, lhs, rhs in tests:
                if lhs != rhs:
                    ok_modes = False
                    if witness is None:
                        witness = f"{lab} fails on {v}: {lhs} vs {rhs}"
                    break
            if not ok_modes:
                break
    checks["zero modes"] = ok_modes
    counts["zero modes"] = n
    return SCReport(all(checks.values()), checks, witness, counts)


def quotient_relations(sc: SCStructure) -> Dict[str, FockState]:
    """The normal products ``:Q+Q+:`` and ``:Q-Q-:`` (zero in the shipped examples)."""
    A = sc.alg
    return {"Q+Q+": A.mode(sc.Qp, -1, sc.Qp), "Q-Q-": A.mode(sc.Qm, -1, sc.Qm)}


def _window(sc: SCStructure, spin_max, R_max=None, spin_min=None) -> List[FockState]:
    try:
        return enumerate_basis(sc.alg, spin_max=spin_max, R_max=R_max, spin_min=spin_min)
    except ValueError:
        if R_max is not None:
            raise
        Rb = 2 * Q(spin_max) + 2
        return enumerate_basis(sc.alg, spin_max=spin_max, R_max=Rb, spin_min=spin_min)


# ---------------------------------------------------------------------------
# BPS bound

@dataclass
class BPSReport:
    ok: bool
    checked: int
    saturating: List[FockState]
    violations: List[Tuple[FockState, Grading]]
    witness: Optional[str] = None

    def line(self) -> str:
        if self.ok:
            return f"PASS {self.checked} states, {len(self.saturating)} saturating"
        return f"FAIL {self.witness}"


def bps_scan(sc: SCStructure, spin_max, R_max=None, basis: Optional[Sequence[FockState]] = None,
             check_primary_modes: bool = True) -> BPSReport:
    """Check ``j >= |q|/2`` on a window and that saturating states are primaries.

    The saturating states must be killed by ``sigma_(n)`` and ``Gamma_(n+1)``
    for ``n > 0``, and their S-charge is confirmed with ``sigma_(0)``.
    """
    states = list(basis) if basis is not None else (
        [] if Q(spin_max) < 0 else _window(sc, spin_max, R_max))
    sat, bad = [], []
    witness = None
    for v in states:
        R, j, q = sc.grading(v)
        if j < abs(q) / 2:
            bad.append((v, (R, j, q)))
            if witness is None:
                witness = f"{v} has (R, j, q) = ({R}, {j}, {q}) below the bound"
            continue
        if j != abs(q) / 2:
            continue
        sat.append(v)
        if not check_primary_modes:
            continue
        if sc.S0(v) != v.scale(q):
            bad.append((v, (R, j, q)))
            witness = witness or f"sigma_(0) {v} = {sc.S0(v)}, not {q} times it"
            continue
        top = sc.alg.max_pole(sc.Gamma, v) + 1
        for n in range(1, top + 1):
            a = sc.mode("sigma", n, v)
            b = sc.mode("Gamma", n + 1, v)
            if a or b:
                bad.append((v, (R, j, q)))
                if witness is None:
                    which = f"sigma_({n})" if a else f"Gamma_({n + 1})"
                    witness = f"saturating {v} is not primary: {which} gives {a or b}"
                break
    return BPSReport(not bad, len(states), sat, bad, witness)


# ---------------------------------------------------------------------------
# primaries

@dataclass
class PrimaryRecord:
    state: FockState
    branch: str
    superpartner: FockState
    gradings: Grading

    @property
    def parity(self) -> int:
        return self.state.parity

    def __repr__(self):
        R, j, q = self.gradings
        return (f"PrimaryRecord({self.branch}, {self.state}, partner {self.superpartner}, "
                f"R={R}, j={j}, q={q})")


def mirror(sc: SCStructure) -> SCStructure:
    """Exchange ``Q+ <-> Q-`` and negate ``sigma`` (and the S-grading)."""
    return SCStructure(sc.alg, sc.Gamma, -sc.sigma, sc.Qm, sc.Qp, sc.xi,
                       name=sc.name, s_sign=-sc.s_sign)


def _higgs_slices(sc: SCStructure, states: Sequence[FockState]):
    slices: Dict[Tuple, List[FockState]] = {}
    for v in states:
        R, j, q = sc.grading(v)
        if q >= 0 and j == q / 2:
            slices.setdefault((R, j, q, v.parity), []).append(v)
    return slices


def _joint_kernel(ops, basis: Sequence[FockState]) -> List[FockState]:
    images = []
    for v in basis:
        t = {}
        for k, op in enumerate(ops):
            for m, c in op(v).terms.items():
                t[(k, m)] = c
        images.append(t)
    return [la.combine(vec, basis) for vec in la.nullspace(images)]


def _higgs_primaries(sc: SCStructure, spin_max, R_max=None, basis=None) -> List[PrimaryRecord]:
    states = list(basis) if basis is not None else _window(sc, spin_max, R_max)
    A = sc.alg
    out = []
    slices = _higgs_slices(sc, states)
    for key in sorted(slices):
        ops = (lambda v: A.mode(sc.Qp, 0, v), lambda v: A.mode(sc.Qm, 1, v))
        for o in _joint_kernel(ops, slices[key]):
            out.append(PrimaryRecord(o, HIGGS, A.mode(sc.Qm, 0, o), key[:3]))
    return out


def classify_primaries(sc: SCStructure, branch: str, spin_max, R_max=None,
                       basis: Optional[Sequence[FockState]] = None) -> List[PrimaryRecord]:
    """Basis of branch primaries per saturating slice, with superpartners.

    Coulomb primaries are the Higgs primaries of the mirror structure; their
    gradings are reported in the conventions of ``sc``.
    """
    if sc.xi != 0:
        raise ValueError("branch operations need vanishing central charge")
    branch = branch.lower()
    if branch not in (HIGGS, COULOMB):
        raise ValueError(f"unknown branch {branch!r}")
    target = sc if branch == HIGGS else mirror(sc)
    rep = bps_scan(target, spin_max, R_max, basis=basis, check_primary_modes=False)
    if not rep.ok:
        raise ValueError(f"BPS bound fails on the window: {rep.witness}")
    recs = _higgs_primaries(target, spin_max, R_max, basis=basis)
    if branch == COULOMB:
        recs = [PrimaryRecord(r.state, COULOMB, r.superpartner,
                              (r.gradings[0], r.gradings[1], -r.gradings[2])) for r in recs]
    return recs


def check_primary(sc: SCStructure, rec: PrimaryRecord) -> List[str]:
    """Failures of the superpartner OPEs and the grading claims for one record."""
    target = sc if rec.branch == HIGGS else mirror(sc)
    A = sc.alg
    O, P = rec.state, rec.superpartner
    R, j, q = target.grading(O)
    errs = []
    if j != q / 2:
        errs.append(f"{O}: j = {j} but q/2 = {q / 2}")
    if P:
        if P.parity == O.parity:
            errs.append(f"partner {P} has the parity of {O}")
        if target.grading(P) != (R, j + Q(1, 2), q - 1):
            errs.append(f"partner {P} has gradings {target.grading(P)}")
    w = compare_ope(A, "Q O", target.Qp, O, {})
    if w:
        errs.append(w)
    w = compare_ope(A, "Q~ O", target.Qm, O, {0: P})
    if w:
        errs.append(w)
    w = compare_ope(A, "Q Psi", target.Qp, P, {1: O.scale(q), 0: A.d(O)})
    if w:
        errs.append(w)
    w = compare_ope(A, "Q~ Psi", target.Qm, P, {})
    if w:
        errs.append(w)
    return errs


# ---------------------------------------------------------------------------
# flavor symmetries

@dataclass
class FlavorReport:
    ok: bool
    M: List[FockState]
    f: Dict[Tuple[int, int], Dict[int, Fraction]]
    level: Dict[Tuple[int, int], Fraction]
    witness: Optional[str] = None

    def line(self) -> str:
        return "PASS flavor symmetry" if self.ok else f"FAIL {self.witness}"


def detect_flavor_symmetry(sc: SCStructure, currents: Sequence[FockState],
                           structure_constants: Optional[Mapping] = None) -> FlavorReport:
    """Is ``currents`` a Higgs branch flavor symmetry of ``sc``?

    ``structure_constants[(a, b)] = {c: f_ab^c}`` with
    ``mu_a(z) mu_b(w) ~ Omega^1 k_ab + Omega^0 f_ab^c mu_c``; when omitted the
    constants are solved for.  The level ``k`` must vanish.
    """
    A = sc.alg
    mus = list(currents)
    f: Dict = {}
    level: Dict = {}
    Ms: List[FockState] = []

    def bad(msg):
        return FlavorReport(False, Ms, f, level, msg)

    live = [i for i, m in enumerate(mus) if m]
    for i in live:
        try:
            g, par = sc.grading(mus[i]), mus[i].parity
        except ValueError as exc:
            return bad(f"current {i}: {exc}")
        if g != (1, 1, 0) or par != 1:
            return bad(f"current {i} has (R, spin, S) = {g}, expected (1, 1, 0)")
    for a in range(len(mus)):
        for b in range(len(mus)):
            sing = A.ope(mus[a], mus[b]).singular_dict()
            for m in sing:
                if m > 1:
                    return bad(f"mu_{a} mu_{b} has an Omega^{m} pole")
            c1 = sing.get(1, A.zero())
            if c1:
                if set(c1.terms) != {()}:
                    return bad(f"mu_{a} mu_{b}: Omega^1 coefficient {c1} is not central")
                level[(a, b)] = c1.terms[()]
            c0 = sing.get(0, A.zero())
            if structure_constants is not None:
                want = A.zero()
                for c, val in dict(structure_constants.get((a, b), {})).items():
                    want = want + mus[c].scale(val)
                if c0 != want:
                    return bad(f"mu_{a} mu_{b}: Omega^0 coefficient {c0}, structure constants give {want}")
                f[(a, b)] = {c: Q(v) for c, v in dict(structure_constants.get((a, b), {})).items() if v}
            else:
                x = la.solve(mus, c0) if mus else (None if c0 else [])
                if x is None:
                    return bad(f"mu_{a} mu_{b}: Omega^0 coefficient {c0} is outside the span of the currents")
                f[(a, b)] = {c: v for c, v in enumerate(x) if v}
    if level:
        (a, b), k = next(iter(sorted(level.items())))
        return bad(f"level must vanish: mu_{a} mu_{b} ~ Omega^1 ({k})")
    # moment maps: Higgs primaries of R 1, spin 1/2, S 1 with partner mu_a
    for a, mu in enumerate(mus):
        if not mu:
            Ms.append(A.zero())
            continue
        par = 1 - mu.parity
        cand = [v for v in _window(sc, Q(1, 2), spin_min=Q(1, 2))
                if sc.grading(v) == (1, Q(1, 2), 1) and v.parity == par]
        prims = _higgs_primaries(sc, Q(1, 2), basis=cand)
        x = la.solve([p.superpartner for p in prims], mu)
        if x is None:
            return bad(f"mu_{a} = {mu} is not the superpartner of a Higgs branch primary")
        M = la.combine(x, [p.state for p in prims])
        Ms.append(M)
        for lab, u, v, exp in (("Q+ M", sc.Qp, M, {}), ("Q- M", sc.Qm, M, {0: mu}),
                               ("Q+ mu", sc.Qp, mu, {1: M, 0: A.d(M)}), ("Q- mu", sc.Qm, mu, {})):
            w = compare_ope(A, f"{lab}_{a}", u, v, exp)
            if w:
                return bad(w)
    return FlavorReport(True, Ms, f, level, None)


# ---------------------------------------------------------------------------
# osp(2|2)

def osp22_closure(sc: SCStructure, spin_max=1) -> Optional[str]:
    """Check the modes sigma_(0), Gamma_(0,1,2), Q+-_(0,1) close under bracket.

    Each graded commutator is matched, on every basis state of spin <=
    ``spin_max``, against a single linear combination of the eight modes.
    Returns None or a witness.
    """
    ops = [("sigma", 0), ("Gamma", 0), ("Gamma", 1), ("Gamma", 2),
           ("Q+", 0), ("Q+", 1), ("Q-", 0), ("Q-", 1)]
    par = {"sigma": 0, "Gamma": 0, "Q+": 1, "Q-": 1}
    basis = _window(sc, spin_max)

    def act(op, v):
        return sc.mode(op[0], op[1], v)

    def images(fn):
        t = {}
        for i, v in enumerate(basis):
            for m, c in fn(v).terms.items():
                t[(i, m)] = c
        return t

    gen_imgs = [images(lambda v, o=o: act(o, v)) for o in ops]
    for x in range(len(ops)):
        for y in range(x, len(ops)):
            ox, oy = ops[x], ops[y]
            sgn = (-1) ** (par[ox[0]] * par[oy[0]])
            comm = images(lambda v: act(ox, act(oy, v)) - act(oy, act(ox, v)).scale(sgn))
            if la.solve(gen_imgs, comm) is None:
                return f"[{ox[0]}_({ox[1]}), {oy[0]}_({oy[1]})] leaves the span of the modes"
    return None


# ---------------------------------------------------------------------------
# shipped structures

def fh_sc() -> SCStructure:
    A = fh()
    Z1, Z2, p1, p2 = (A.gen(n) for n in ("Z1", "Z2", "psi1", "psi2"))
    d = A.d
    G = (p1 * d(Z1) + p2 * d(Z2)).scale(Q(3, 4)) - (Z1 * d(p1) + Z2 * d(p2)).scale(Q(1, 4))
    s = (p1 * Z1 + p2 * Z2).scale(Q(1, 2))
    Qp = (Z2 * d(Z1) - Z1 * d(Z2)).scale(Q(1, 2))
    Qm = (p2 * p1 - p1 * p2).scale(Q(-1, 2))
    return SCStructure(A, G, s, Qp, Qm, name="FH")


def fvpert_sc(suffix: str = "") -> SCStructure:
    A = fvpert(suffix)
    b, c, ph, lam = (A.gen(n + suffix) for n in ("b", "c", "phi", "lambda"))
    d = A.d
    G = -(b * d(c)) + (lam * d(ph)).scale(Q(1, 2)) - (ph * d(lam)).scale(Q(1, 2))
    return SCStructure(A, G, -(lam * ph), lam * d(c), b * ph, name="FVpert" + suffix)


def sfc_sc() -> SCStructure:
    A = sfc()
    X, eta = A.gen("X"), A.gen("eta")
    d = A.d
    G = (eta * d(X)).scale(Q(1, 4)) - (X * d(eta)).scale(Q(3, 4))
    return SCStructure(A, G, (eta * X).scale(Q(-1, 2)), (eta * d(eta)).scale(Q(1, 2)),
                       (X * X).scale(Q(1, 2)), name="SFC")


def tensor_sc(*scs: SCStructure, name: Optional[str] = None) -> Tuple[SCStructure, List]:
    """Tensor product structure (fields add) and the factor embeddings."""
    if not scs:
        raise ValueError("need at least one factor")
    if any(s.s_sign != scs[0].s_sign for s in scs):
        raise ValueError("factors use different S-charge signs")
    A = tensor(*(s.alg for s in scs), name=name)
    offsets, k = [], 0
    for s in scs:
        offsets.append(k)
        k += len(s.alg.gens)
    emb = [lambda v, o=o: embed(v, A, o) for o in offsets]
    tot = {lab: sum((e(s.fields()[lab]) for e, s in zip(emb, scs)), A.zero())
           for lab in ("Gamma", "sigma", "Q+", "Q-")}
    sc = SCStructure(A, tot["Gamma"], tot["sigma"], tot["Q+"], tot["Q-"],
                     sum((s.xi for s in scs), Q(0)), name=A.name, s_sign=scs[0].s_sign)
    return sc, emb
