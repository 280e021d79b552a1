"""Branch chiral rings, twists, descendants and twist cohomology.

Everything Coulomb-side is computed as the Higgs side of the mirror
structure.  For a twist we keep the "target" structure ``T`` (``sc`` for B,
``mirror(sc)`` for A); then in both cases

    Gamma_tw = Gamma + d(sigma_T)/2,  sigma_tw = sigma_T,  Q = Q+_T,  Q~ = Q-_T,
    R_tw = R + q_T,  J_tw = j - q_T/2.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import _linalg as la
from .freefield import FockState, enumerate_basis
from .scstruct import (COULOMB, HIGGS, PrimaryRecord, SCStructure, _higgs_primaries, _window,
                       bps_scan, compare_ope, mirror)

__all__ = [
    "ChiralRing",
    "TwistData",
    "CohomologyReport",
    "HomotopyReport",
    "poisson_bracket",
    "chiral_ring",
    "moment_map_check",
    "make_twist",
    "descendant",
    "secondary_bracket",
    "twist_cohomology",
    "check_btwistspin",
    "homotopy_n",
    "verify_leibniz_homotopy",
    "sample_triples",
]

Q = Fraction


def _target(sc: SCStructure, branch: str) -> SCStructure:
    branch = branch.lower()
    if branch not in (HIGGS, COULOMB):
        raise ValueError(f"unknown branch {branch!r}")
    return sc if branch == HIGGS else mirror(sc)


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


def _bracket_states(O1, P1, O2, P2) -> FockState:
    A = O1.alg
    s = _sign(O1.parity * O2.parity)
    return (A.mode(P1, 0, O2) - A.mode(P2, 0, O1).scale(s)).scale(Q(1, 2))


def poisson_bracket(sc: SCStructure, r1: PrimaryRecord, r2: PrimaryRecord) -> FockState:
    """``{O1, O2} = 1/2 (Psi1_(0) O2 - (-1)^{|O1||O2|} Psi2_(0) O1)``."""
    if r1.branch != r2.branch:
        raise ValueError(f"bracket of a {r1.branch} and a {r2.branch} primary")
    return _bracket_states(r1.state, r1.superpartner, r2.state, r2.superpartner)


# ---------------------------------------------------------------------------
# chiral rings

@dataclass
class ChiralRing:
    branch: str
    cutoff: Fraction
    basis: List[PrimaryRecord]
    slices: Dict[Tuple[Fraction, Fraction], List[int]]
    product: Dict[Tuple[int, int], Dict[int, Fraction]]
    bracket: Dict[Tuple[int, int], Dict[int, Fraction]]
    checks: Dict[str, bool] = field(default_factory=dict)
    witness: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def r_charge(self, i: int) -> Fraction:
        R, j, q = self.basis[i].gradings
        return R + (q if self.branch == HIGGS else -q)

    def dims(self) -> Dict[Fraction, int]:
        out: Dict[Fraction, int] = {}
        for (r, _q), idx in self.slices.items():
            out[r] = out.get(r, 0) + len(idx)
        return dict(sorted(out.items()))

    def element(self, coeffs: Dict[int, Fraction]) -> FockState:
        A = self.basis[0].state.alg
        out = A.zero()
        for i, c in coeffs.items():
            out = out + self.basis[i].state.scale(c)
        return out


def _expand(states: Sequence[FockState], target: FockState) -> Optional[Dict[int, Fraction]]:
    x = la.solve(list(states), target)
    if x is None:
        return None
    return {i: c for i, c in enumerate(x) if c}


def chiral_ring(sc: SCStructure, branch: str, cutoff, spin_max=None) -> ChiralRing:
    """Primaries of R-charge ``R + q`` (Higgs) or ``R - q`` (Coulomb) up to ``cutoff``.

    The window is every state of spin <= ``spin_max`` (default ``cutoff/2``,
    which contains all branch primaries when every R-charge is
    non-negative) and R <= ``cutoff``.  Products and brackets are expanded in
    the primary basis; regularity, commutativity, associativity, Leibniz and
    Jacobi are checked on every basis pair and triple inside the cutoff.
    """
    if sc.xi != 0:
        raise ValueError("branch operations need vanishing central charge")
    T = _target(sc, branch)
    A = sc.alg
    cutoff = Q(cutoff)
    if any(g.R < 0 for g in A.gens):
        raise ValueError("chiral ring windows need non-negative R-charges")
    spin_max = cutoff / 2 if spin_max is None else Q(spin_max)
    states = [v for v in enumerate_basis(A, spin_max=spin_max, R_max=cutoff)
              if sum(T.grading(v)[::2]) <= cutoff]
    rep = bps_scan(T, spin_max, basis=states, check_primary_modes=False)
    if not rep.ok:
        raise ValueError(f"BPS bound fails on the window: {rep.witness}")
    recs = _higgs_primaries(T, spin_max, basis=states)
    if branch.lower() == COULOMB:
        recs = [PrimaryRecord(r.state, COULOMB, r.superpartner,
                              (r.gradings[0], r.gradings[1], -r.gradings[2])) for r in recs]
    ring = ChiralRing(branch.lower(), cutoff, recs, {}, {}, {})
    for i, r in enumerate(recs):
        ring.slices.setdefault((ring.r_charge(i), r.gradings[2]), []).append(i)
    ring.slices = dict(sorted(ring.slices.items()))
    checks = {k: True for k in ("regular", "product", "bracket", "commutative", "associative",
                                "leibniz", "jacobi")}
    witness = None

    def fail(kind, msg):
        nonlocal witness
        checks[kind] = False
        if witness is None:
            witness = f"{kind}: {msg}"

    n = len(recs)
    states_all = [r.state for r in recs]
    par = [r.state.parity for r in recs]
    for i in range(n):
        for j in range(n):
            ri, rj = recs[i], recs[j]
            if ring.r_charge(i) + ring.r_charge(j) <= cutoff:
                if A.ope(ri.state, rj.state).singular:
                    fail("regular", f"{ri.state} x {rj.state} has a singular OPE")
                p = A.mode(ri.state, -1, rj.state)
                c = _expand(states_all, p)
                if c is None:
                    fail("product", f":{ri.state} {rj.state}: is not a combination of primaries")
                else:
                    ring.product[(i, j)] = c
            if ring.r_charge(i) + ring.r_charge(j) - 2 > cutoff:
                continue
            b = poisson_bracket(sc, ri, rj)
            c = _expand(states_all, b)
            if c is None:
                fail("bracket", f"{{{ri.state}, {rj.state}}} = {b} is not a combination of primaries")
            else:
                ring.bracket[(i, j)] = c

    def prod(x: Dict[int, Fraction], y: Dict[int, Fraction]):
        if x is None or y is None:
            return None
        out: Dict[int, Fraction] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                t = ring.product.get((a, b))
                if t is None:
                    return None
                for k, v in t.items():
                    out[k] = out.get(k, Q(0)) + ca * cb * v
        return {k: v for k, v in out.items() if v}

    def br(x, y):
        if x is None or y is None:
            return None
        out: Dict[int, Fraction] = {}
        for a, ca in x.items():
            for b, cb in y.items():
                t = ring.bracket.get((a, b))
                if t is None:
                    return None
                for k, v in t.items():
                    out[k] = out.get(k, Q(0)) + ca * cb * v
        return {k: v for k, v in out.items() if v}

    def add(*terms):
        out: Dict[int, Fraction] = {}
        for s, t in terms:
            if t is None:
                return None
            for k, v in t.items():
                out[k] = out.get(k, Q(0)) + s * v
        return {k: v for k, v in out.items() if v}

    e = lambda i: {i: Q(1)}  # noqa: E731
    for i in range(n):
        for j in range(n):
            if (i, j) in ring.product:
                other = ring.product.get((j, i))
                s = _sign(par[i] * par[j])
                if other is not None and add((1, ring.product[(i, j)]), (-s, other)):
                    fail("commutative", f"{recs[i].state} and {recs[j].state} do not commute")
            for k in range(n):
                if ring.r_charge(i) + ring.r_charge(j) + ring.r_charge(k) > cutoff:
                    continue
                lhs = prod(prod(e(i), e(j)), e(k))
                rhs = prod(e(i), prod(e(j), e(k)))
                if lhs is not None and rhs is not None and add((1, lhs), (-1, rhs)):
                    fail("associative", f"on {recs[i].state}, {recs[j].state}, {recs[k].state}")
                # {Oi, :Oj Ok:} = :{Oi,Oj} Ok: + (-1)^{|Oi||Oj|} :Oj {Oi,Ok}:
                lhs = br(e(i), prod(e(j), e(k)))
                rhs = add((1, prod(br(e(i), e(j)), e(k))),
                          (_sign(par[i] * par[j]), prod(e(j), br(e(i), e(k)))))
                if lhs is not None and rhs is not None and add((1, lhs), (-1, rhs)):
                    fail("leibniz", f"on {recs[i].state}, {recs[j].state}, {recs[k].state}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = br(e(i), br(e(j), e(k)))
                rhs = add((1, br(br(e(i), e(j)), e(k))),
                          (_sign(par[i] * par[j]), br(e(j), br(e(i), e(k)))))
                if lhs is not None and rhs is not None and add((1, lhs), (-1, rhs)):
                    fail("jacobi", f"on {recs[i].state}, {recs[j].state}, {recs[k].state}")
    ring.checks, ring.witness = checks, witness
    return ring


def moment_map_check(sc: SCStructure, M: Sequence[FockState], multiplet: Sequence[PrimaryRecord],
                     rho: Sequence) -> Optional[str]:
    """Check ``{M_a, O_i} = rho_a[i][j] O_j`` and ``M_a Psi_i ~ Omega^0 (-O_j rho_a[j][i])``.

    ``rho[a]`` is a square matrix over the multiplet.  Returns a witness or None.
    """
    A = sc.alg
    # superpartners from the Higgs side
    recs_M = []
    for m in M:
        recs_M.append(PrimaryRecord(m, HIGGS, A.mode(sc.Qm, 0, m) if m else A.zero(),
                                    sc.grading(m) if m else (0, 0, 0)))
    for a, rm in enumerate(recs_M):
        for i, ri in enumerate(multiplet):
            got = poisson_bracket(sc, rm, ri)
            want = A.zero()
            for j, rj in enumerate(multiplet):
                want = want + rj.state.scale(Q(rho[a][i][j]))
            if got != want:
                return f"{{M_{a}, O_{i}}} = {got}, representation gives {want}"
            want_ope = A.zero()
            for j, rj in enumerate(multiplet):
                want_ope = want_ope - rj.state.scale(Q(rho[a][j][i]))
            w = compare_ope(A, f"M_{a} Psi_{i}", rm.state, ri.superpartner, {0: want_ope})
            if w:
                return w
    return None


# ---------------------------------------------------------------------------
# twists

@dataclass
class TwistData:
    flag: str
    sc: SCStructure
    target: SCStructure
    Gamma: FockState
    sigma: FockState
    Q: FockState
    Qt: FockState
    checks: Dict[str, bool] = field(default_factory=dict)
    witness: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def alg(self):
        return self.sc.alg

    def grading(self, v: FockState) -> Tuple[Fraction, Fraction]:
        R, j, q = self.target.grading(v)
        return R + q, j - q / 2

    def D(self, v: FockState) -> FockState:
        return self.alg.mode(self.Q, 0, v)

    def descendant(self, v: FockState) -> FockState:
        return self.alg.mode(self.Qt, 0, v)


def make_twist(sc: SCStructure, flag: str) -> TwistData:
    """B twist (``D = Q+_(0)``) or A twist (``D = Q-_(0)``) with the twisted OPEs checked."""
    flag = flag.upper()
    if flag not in ("A", "B"):
        raise ValueError("twist flag must be A or B")
    if sc.xi != 0:
        raise ValueError("twists need vanishing central charge")
    T = sc if flag == "B" else mirror(sc)
    A = sc.alg
    d = A.d
    G = T.Gamma + d(T.sigma).scale(Q(1, 2))
    s, Qd, Qt = T.sigma, T.Qp, T.Qm
    tw = TwistData(flag, sc, T, G, s, Qd, Qt)
    table = [
        ("Gamma Gamma", G, G, {1: G.scale(2), 0: d(G)}),
        ("sigma sigma", s, s, {}),
        ("Gamma sigma", G, s, {1: s, 0: d(s)}),
        ("Gamma Q", G, Qd, {1: Qd, 0: d(Qd)}),
        ("sigma Q", s, Qd, {0: Qd}),
        ("Gamma Q~", G, Qt, {1: Qt.scale(2), 0: d(Qt)}),
        ("sigma Q~", s, Qt, {0: -Qt}),
        ("Q Q~", Qd, Qt, {1: -s, 0: -G}),
        ("Q Q", Qd, Qd, {}),
        ("Q~ Q~", Qt, Qt, {}),
    ]
    for label, a, b, exp in table:
        w = compare_ope(A, label, a, b, exp)
        tw.checks[label] = w is None
        if w and tw.witness is None:
            tw.witness = w
    grad_ok = tw.grading(Qd) == (2, 1) and tw.grading(Qt) == (0, 2)
    tw.checks["gradings"] = grad_ok
    if not grad_ok and tw.witness is None:
        tw.witness = f"Q has (R, J) = {tw.grading(Qd)}, Q~ has {tw.grading(Qt)}"
    # the Omega^0 term of Q Q~ is -Gamma_tw, so Gamma_tw = D(-Q~) is exact
    dq = tw.D(Qt)
    tw.checks["D Q~ = -Gamma"] = dq == -G
    if dq != -G and tw.witness is None:
        tw.witness = f"D Q~ = {dq}, not -Gamma_tw = {-G}"
    return tw


def descendant(tw: TwistData, O: FockState) -> FockState:
    """``O^[1] = Q~_(0) O``."""
    return tw.descendant(O)


def secondary_bracket(tw: TwistData, O1: FockState, O2: FockState) -> FockState:
    """``{{O1, O2}} = 1/2 (O1^[1]_(0) O2 - (-1)^{|O1||O2|} O2^[1]_(0) O1)``, bilinear."""
    A = tw.alg
    out = A.zero()
    for p1 in _parity_parts(O1):
        for p2 in _parity_parts(O2):
            out = out + _bracket_states(p1, tw.descendant(p1), p2, tw.descendant(p2))
    return out


def _parity_parts(v: FockState) -> List[FockState]:
    parts: Dict[int, Dict] = {}
    for m, c in v.terms.items():
        parts.setdefault(v.alg.mono_parity(m), {})[m] = c
    return [FockState(v.alg, t) for _, t in sorted(parts.items())]


# ---------------------------------------------------------------------------
# cohomology

@dataclass
class CohomologyReport:
    flag: str
    cutoff: Fraction
    J_max: Fraction
    dims: Dict[Tuple[Fraction, Fraction], int]
    reps: Dict[Tuple[Fraction, Fraction], List[FockState]]
    chain_dims: Dict[Tuple[Fraction, Fraction], int]
    primary_dims: Dict[Fraction, int]
    precheck: bool
    isomorphism: bool
    witness: Optional[str] = None
    product: Dict = field(default_factory=dict)
    bracket: Dict = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.dims.values())

    def dims_by_r(self) -> Dict[Fraction, int]:
        out: Dict[Fraction, int] = {}
        for (r, _j), n in self.dims.items():
            out[r] = out.get(r, 0) + n
        return dict(sorted(out.items()))


def _twist_window(tw: TwistData, r_max, J_max) -> List[FockState]:
    A = tw.alg
    if any(g.R < 0 for g in A.gens):
        raise ValueError("twist windows need non-negative R-charges")
    spin = Q(J_max) + Q(r_max) / 2
    Rmax = None
    if any(g.spin == 0 and g.parity == 0 for g in A.gens):
        Rmax = Q(r_max) + 2 * spin
    out = []
    for v in enumerate_basis(A, spin_max=spin, R_max=Rmax):
        r, J = tw.grading(v)
        if r <= r_max and J <= J_max:
            out.append(v)
    return out


def _class_basis(closed: List[FockState], exact: List[FockState]) -> List[FockState]:
    """Members of ``closed`` completing a basis of ``exact`` to one of span(closed + exact)."""
    reps: List[FockState] = []
    base = la.rank(exact)
    for v in closed:
        if la.rank(exact + reps + [v]) > base + len(reps):
            reps.append(v)
    return reps


def twist_cohomology(tw: TwistData, cutoff, J_max=0, basis: Optional[Sequence[FockState]] = None
                     ) -> CohomologyReport:
    """``ker D / im D`` on each ``(R_tw, J_tw)`` slice with ``R_tw <= cutoff``.

    The chain window reaches one step above the cutoff so every requested
    slice sees its full ``D`` neighbourhood.  An explicit ``basis`` must be
    ``D``-stable or ``ValueError`` is raised.  The comparison map sends each
    branch primary to its class; ``isomorphism`` is decided by explicit rank
    computations, ``precheck`` records the sufficient condition that every
    ``J_tw = 0`` state is a primary.
    """
    cutoff, J_max = Q(cutoff), Q(J_max)
    if basis is None:
        states = _twist_window(tw, cutoff + 1, J_max)
    else:
        states = list(basis)
        span = set(m for v in states for m in v.terms)
        for v in states:
            dv = tw.D(v)
            if any(m not in span for m in dv.terms):
                raise ValueError(f"window is not D-stable: D {v} = {dv} leaves it")
    slices: Dict[Tuple[Fraction, Fraction], List[FockState]] = {}
    for v in states:
        slices.setdefault(tw.grading(v), []).append(v)
    dims, reps, chain = {}, {}, {}
    for key in sorted(slices):
        r, J = key
        if r > cutoff:
            continue
        C = slices[key]
        chain[key] = len(C)
        ker = [la.combine(x, C) for x in la.nullspace([tw.D(v) for v in C])]
        prev = slices.get((r - 1, J), [])
        im = [w for w in (tw.D(v) for v in prev) if w]
        reps[key] = _class_basis(ker, im)
        dims[key] = len(reps[key])
    # comparison map
    T = tw.target
    prim_states = [v for v in states if tw.grading(v)[0] <= cutoff]
    prims = _higgs_primaries(T, None, basis=prim_states)
    pdims: Dict[Fraction, int] = {}
    by_slice: Dict = {}
    for p in prims:
        key = tw.grading(p.state)
        by_slice.setdefault(key, []).append(p.state)
        pdims[key[0]] = pdims.get(key[0], 0) + 1
    pdims = dict(sorted(pdims.items()))
    iso = True
    witness = None
    for key in sorted(set(dims) | set(by_slice)):
        r, J = key
        ps = by_slice.get(key, [])
        prev = slices.get((r - 1, J), [])
        im = [w for w in (tw.D(v) for v in prev) if w]
        for p in ps:
            if tw.D(p):
                iso = False
                witness = witness or f"primary {p} is not D-closed"
        independent = la.rank(im + ps) - la.rank(im) == len(ps)
        if not independent:
            iso = False
            witness = witness or f"primaries at (R, J) = ({r}, {J}) map to dependent classes"
        if len(ps) != dims.get(key, 0):
            iso = False
            witness = witness or (f"slice (R, J) = ({r}, {J}): {len(ps)} primaries, "
                                  f"cohomology of dimension {dims.get(key, 0)}")
        if iso and ps:
            reps[key] = list(ps)
    zero = [v for v in prim_states if tw.grading(v)[1] == 0]
    zero_by_r: Dict[Fraction, int] = {}
    for v in zero:
        zero_by_r[tw.grading(v)[0]] = zero_by_r.get(tw.grading(v)[0], 0) + 1
    precheck = all(zero_by_r.get(r, 0) == pdims.get(r, 0) for r in set(zero_by_r) | set(pdims))
    rep = CohomologyReport(tw.flag, cutoff, J_max, dims, reps, chain, pdims, precheck, iso, witness)
    _induced_structure(tw, rep, slices)
    return rep


def _induced_structure(tw: TwistData, rep: CohomologyReport, slices) -> None:
    """Product and ``{{ , }}`` of class representatives, in class coordinates."""
    A = tw.alg
    flat = [(key, i, v) for key in sorted(rep.reps) for i, v in enumerate(rep.reps[key])]

    def coords(v: FockState):
        if not v:
            return {}
        v_parts = {}
        for m in v.terms:
            v_parts.setdefault(tw.grading(FockState(A, {m: Q(1)})), {})[m] = v.terms[m]
        out = {}
        for key, t in v_parts.items():
            r, J = key
            if key not in rep.reps:
                return None
            prev = slices.get((r - 1, J), [])
            im = [w for w in (tw.D(u) for u in prev) if w]
            x = la.solve(rep.reps[key] + im, FockState(A, t))
            if x is None:
                return None
            for i, c in enumerate(x[:len(rep.reps[key])]):
                if c:
                    out[(key, i)] = c
        return out

    for k1, i1, v1 in flat:
        for k2, i2, v2 in flat:
            if k1[0] + k2[0] <= rep.cutoff:
                c = coords(A.mode(v1, -1, v2))
                if c is not None:
                    rep.product[((k1, i1), (k2, i2))] = c
            c = coords(secondary_bracket(tw, v1, v2))
            if c is not None:
                rep.bracket[((k1, i1), (k2, i2))] = c


def check_btwistspin(tw: TwistData, cutoff, J_max=1) -> Optional[str]:
    """Every closed state with ``J_tw != 0`` equals ``D((1/J) Q~_(1) O)``."""
    states = _twist_window(tw, Q(cutoff), Q(J_max))
    slices: Dict = {}
    for v in states:
        slices.setdefault(tw.grading(v), []).append(v)
    for (r, J), C in sorted(slices.items()):
        if J == 0:
            continue
        for x in la.nullspace([tw.D(v) for v in C]):
            O = la.combine(x, C)
            pre = tw.alg.mode(tw.Qt, 1, O).scale(1 / J)
            if tw.D(pre) != O:
                return f"closed {O} at J = {J} is not D of (1/J) Q~_(1) O"
    return None


# ---------------------------------------------------------------------------
# Leibniz up to homotopy

@dataclass
class HomotopyReport:
    ok: bool
    lhs: FockState
    rhs: FockState

    @property
    def residual(self) -> FockState:
        return self.lhs - self.rhs


def homotopy_n(tw: TwistData, O1: FockState, O2: FockState, O: FockState,
               displayed: bool = False) -> FockState:
    """The finite double-residue sum ``n(O1, O2, O)``.

    ``n = 1/2 sum_l 1/(l+1) (e O1^[1]_(-l-1) O2^[1]_(l+1) O
    + (-1)^{|O1||O2|} O2^[1]_(-l-1) O1^[1]_(l+1) O)`` with ``e = 1``; the
    ``displayed`` variant uses ``e = (-1)^{|O1|}``.
    """
    A = tw.alg
    out = A.zero()
    for a in _parity_parts(O1):
        for b in _parity_parts(O2):
            out = out + _homotopy_homog(tw, a, b, O, displayed)
    return out


def _homotopy_homog(tw, O1, O2, O, displayed):
    A = tw.alg
    d1, d2 = tw.descendant(O1), tw.descendant(O2)
    p1, p2 = O1.parity, O2.parity
    e = _sign(p1) if displayed else 1
    out = A.zero()
    top = max(A.max_pole(d1, O), A.max_pole(d2, O), 0)
    for l in range(top + 1):
        t1 = A.mode(d1, -l - 1, A.mode(d2, l + 1, O)).scale(e)
        t2 = A.mode(d2, -l - 1, A.mode(d1, l + 1, O)).scale(_sign(p1 * p2))
        out = out + (t1 + t2).scale(Q(1, 2 * (l + 1)))
    return out


def verify_leibniz_homotopy(tw: TwistData, O1: FockState, O2: FockState, O: FockState,
                            displayed: bool = False) -> HomotopyReport:
    """Leibniz rule for ``{{ , }}`` up to the homotopy ``n``.

    Checks ``D n + n D = {{:O1 O2:, O}} - :O1 {{O2, O}}: - (-1)^{|O||O2|} :{{O1, O}} O2:``
    where ``(n D)(O1, O2, O) = n(D O1, O2, O) + (-1)^{|O1|} n(O1, D O2, O)
    + (-1)^{|O1|+|O2|} n(O1, O2, D O)``.  ``displayed=True`` uses the other
    sign pattern (``+, +, -`` on the three ``n D`` terms and the extra sign
    inside ``n``), which fails in these conventions.  Arguments must be
    parity-homogeneous.
    """
    A = tw.alg
    p1, p2, p = O1.parity, O2.parity, O.parity

    def n(a, b, c):
        return homotopy_n(tw, a, b, c, displayed)

    def bb(a, b):
        return secondary_bracket(tw, a, b)

    D = tw.D
    lhs = D(n(O1, O2, O))
    defect = (bb(A.mode(O1, -1, O2), O)
              - A.mode(O1, -1, bb(O2, O))
              - A.mode(bb(O1, O), -1, O2).scale(_sign(p * p2)))
    s = 1 if displayed else -1
    rhs = (defect
           + n(D(O1), O2, O).scale(s)
           + n(O1, D(O2), O).scale(s * _sign(p1))
           - n(O1, O2, D(O)).scale(_sign(p1 + p2)))
    return HomotopyReport(lhs == rhs, lhs, rhs)


def sample_triples(tw: TwistData, count: int, spin_max=1, seed: int = 0, R_max=None):
    """Deterministic random triples of basis monomials."""
    pool = [v for v in _window(tw.sc, spin_max, R_max) if v.terms != {(): 1}]
    rng = random.Random(seed)
    return [tuple(rng.choice(pool) for _ in range(3)) for _ in range(count)]
