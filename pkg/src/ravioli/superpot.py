"""Superpotentials, the gauging superpotential and the reduced chiral ring.

``koszul_oracle`` is deliberately separate from the OPE machinery: it builds
the Chevalley-Eilenberg/Koszul complex of a moment map directly on a
supercommutative polynomial model.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import _linalg as la
from .freefield import FockState, enumerate_basis
from .scstruct import (HIGGS, PrimaryRecord, SCStructure, _higgs_primaries, _window,
                       compare_ope, fvpert_sc, tensor_sc)

__all__ = [
    "UnverifiedSuperpotential",
    "Superpotential",
    "SuperpotentialReport",
    "GaugeSystem",
    "ReducedReport",
    "d_w",
    "build_w_tot",
    "structure_constants",
    "pure_gauge",
    "reduced_cohomology",
    "TotalTwistReport",
    "b_twist_total",
    "KoszulModel",
    "koszul_oracle",
    "moment_map_koszul",
]

Q = Fraction


class UnverifiedSuperpotential(ValueError):
    pass


@dataclass
class SuperpotentialReport:
    ok: bool
    checks: Dict[str, bool]
    witness: Optional[str] = None

    def line(self) -> str:
        return ("PASS " + ", ".join(self.checks)) if self.ok else f"FAIL {self.witness}"


class Superpotential:
    """A candidate ``W`` for an SC structure; call :meth:`verify` before use."""

    def __init__(self, sc: SCStructure, W: FockState, name: str = "W"):
        if W.alg is not sc.alg:
            raise ValueError("W must live in the structure's algebra")
        self.sc, self.W, self.name = sc, W, name
        self.report: Optional[SuperpotentialReport] = None

    @property
    def alg(self):
        return self.sc.alg

    def verify(self) -> SuperpotentialReport:
        sc, W, A = self.sc, self.W, self.alg
        checks: Dict[str, bool] = {}
        witness = None

        def record(kind, ok, msg=""):
            nonlocal witness
            checks[kind] = bool(ok)
            if not ok and witness is None:
                witness = f"{kind}: {msg}"

        if not W:
            for k in ("gradings", "spin 1 primary", "q_W = 0", "W_(0)W in im d",
                      "W(0)+- = 0", "W(1)+- saturate"):
                checks[k] = True
            self.report = SuperpotentialReport(True, checks)
            return self.report
        try:
            R, j, q = sc.grading(W)
            par = W.parity
            record("gradings", (R, j, q, par) == (2, 1, 0, 0),
                   f"W has (R, spin, S, parity) = ({R}, {j}, {q}, {par})")
        except ValueError as exc:
            record("gradings", False, str(exc))
        w = compare_ope(A, "Gamma W", sc.Gamma, W, {1: W, 0: A.d(W)})
        record("spin 1 primary", w is None, w)
        w = compare_ope(A, "sigma W", sc.sigma, W, {})
        record("q_W = 0", w is None, w)
        ww = A.mode(W, 0, W)
        record("W_(0)W in im d", _in_image_of_d(A, ww), f"W_(0)W = {ww} is not a derivative")
        bad = []
        for lab, Qx in (("+", sc.Qp), ("-", sc.Qm)):
            sing = A.ope(W, Qx).singular_dict()
            if sing.get(0):
                bad.append(f"W(0){lab} = {sing[0]}")
            if any(m > 1 for m in sing):
                bad.append(f"W Q{lab} has a pole of order {max(sing)}")
        record("W(0)+- = 0", not bad, "; ".join(bad))
        sat = []
        for lab, Qx, sgn in (("+", sc.Qp, 1), ("-", sc.Qm, -1)):
            w1 = A.mode(W, 1, Qx)
            if w1:
                try:
                    g = sc.grading(w1)
                except ValueError as exc:
                    sat.append(str(exc))
                    continue
                if g != (2, Q(1, 2), sgn):
                    sat.append(f"W(1){lab} has gradings {g}")
        record("W(1)+- saturate", not sat, "; ".join(sat))
        self.report = SuperpotentialReport(all(checks.values()), checks, witness)
        return self.report

    def D(self, O: FockState) -> FockState:
        return d_w(self, O)


def _in_image_of_d(A, v: FockState) -> bool:
    if not v:
        return True
    for part in _grading_parts(v):
        R, j, S = part.grading()
        if j < 1:
            return False
        pre = [s for s in enumerate_basis(A, spin_max=j - 1, spin_min=j - 1,
                                          R_max=R if _needs_R(A) else None)
               if s.grading() == (R, j - 1, S)]
        if la.solve([A.d(s) for s in pre], part) is None:
            return False
    return True


def _needs_R(A) -> bool:
    return any(g.spin == 0 and g.parity == 0 for g in A.gens)


def _grading_parts(v: FockState) -> List[FockState]:
    parts: Dict = {}
    for m, c in v.terms.items():
        parts.setdefault(v.alg.mono_grading(m), {})[m] = c
    return [FockState(v.alg, t) for _, t in sorted(parts.items())]


def d_w(W: Superpotential, O: FockState) -> FockState:
    """``D_W O = W_(0) O``; ``W`` must have passed :meth:`Superpotential.verify`."""
    if W.report is None or not W.report.ok:
        raise UnverifiedSuperpotential(f"superpotential {W.name} is not verified")
    return W.alg.mode(W.W, 0, O)


# ---------------------------------------------------------------------------
# gauging

@dataclass
class GaugeSystem:
    sp: Superpotential
    dim: int
    f: Dict[Tuple[int, int], Dict[int, Fraction]]
    b: List[FockState]
    c: List[FockState]
    phi: List[FockState]
    lam: List[FockState]
    mu: List[FockState]
    M: List[FockState]
    checks: Dict[str, bool] = field(default_factory=dict)
    witness: Optional[str] = None

    @property
    def sc(self) -> SCStructure:
        return self.sp.sc

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def hamiltonian(self) -> FockState:
        """``:c^a M_a: + 1/2 f^a_bc :lambda_a c^b c^c:``."""
        A = self.sc.alg
        out = A.zero()
        for a in range(self.dim):
            out = out + self.c[a] * self.M[a]
        for (b, c), row in self.f.items():
            for a, v in row.items():
                out = out + (self.lam[a] * (self.c[b] * self.c[c])).scale(Q(v) / 2)
        return out


def _check_f(f, dim) -> Optional[str]:
    def get(b, c, a):
        return Q(f.get((b, c), {}).get(a, 0))
    for b, c, a in itertools.product(range(dim), repeat=3):
        if get(b, c, a) != -get(c, b, a):
            return f"f^{a}_{b}{c} is not antisymmetric"
    for x, y, z, a in itertools.product(range(dim), repeat=4):
        s = sum(get(x, y, e) * get(e, z, a) + get(y, z, e) * get(e, x, a)
                + get(z, x, e) * get(e, y, a) for e in range(dim))
        if s:
            return f"f fails Jacobi on ({x}, {y}, {z})"
    return None


def structure_constants(sc: SCStructure, mu: Sequence[FockState]) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
    """``f^a_bc`` read off ``mu_b mu_c ~ -Omega^0 f^a_bc mu_a``."""
    A = sc.alg
    out: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for b, c in itertools.product(range(len(mu)), repeat=2):
        x = la.solve(mu, A.mode(mu[b], 0, mu[c]))
        if x is None:
            raise ValueError(f"mu_{b} mu_{c} does not close on the currents")
        row = {a: -v for a, v in enumerate(x) if v}
        if row:
            out[(b, c)] = row
    return out


def _check_currents(sc, mu, f, dim) -> Optional[str]:
    A = sc.alg
    for b, c in itertools.product(range(dim), repeat=2):
        want = A.zero()
        for a, v in f.get((b, c), {}).items():
            want = want - mu[a].scale(v)
        got = A.mode(mu[b], 0, mu[c])
        if got != want:
            return f"currents: mu_{b} mu_{c} has Omega^0 coefficient {got}, f predicts {want}"
    return None


def build_w_tot(sc: Optional[SCStructure], f: Mapping, mu: Sequence[FockState],
                M: Sequence[FockState], dim: Optional[int] = None) -> GaugeSystem:
    """``W_tot`` on ``V (x) FVpert^dim`` with ``f[(b, c)] = {a: f^a_bc}``.

    The currents must satisfy ``mu_b mu_c ~ -Omega^0 f^a_bc mu_a``; see
    :func:`structure_constants`.

    ``sc=None`` means no matter.  Raises ``ValueError`` on inconsistent
    flavor data; the two ``W_tot Q+-`` OPEs are recorded in ``checks``.
    """
    dim = len(mu) if dim is None else dim
    if len(mu) != len(M) or (sc is not None and len(mu) != dim):
        raise ValueError("need one moment map per current")
    f = {tuple(k): {int(a): Q(v) for a, v in dict(row).items() if Q(v)} for k, row in dict(f).items()}
    w = _check_f(f, dim)
    if w:
        raise ValueError(w)
    if sc is not None:
        for a in range(dim):
            if sc.alg.mode(sc.Qm, 0, M[a]) != mu[a] or sc.alg.mode(sc.Qp, 0, M[a]):
                raise ValueError(f"M_{a} is not a Higgs branch primary with partner mu_{a}")
    factors = ([sc] if sc is not None else []) + [fvpert_sc(str(a)) for a in range(dim)]
    if not factors:
        raise ValueError("nothing to gauge: no matter and dim = 0")
    tot, emb = tensor_sc(*factors)
    A = tot.alg
    gens = {nm: [A.gen(f"{nm}{a}") for a in range(dim)] for nm in ("b", "c", "phi", "lambda")}
    b, c, ph, lam = gens["b"], gens["c"], gens["phi"], gens["lambda"]
    mu_t = [emb[0](m) for m in mu] if sc is not None else []
    M_t = [emb[0](m) for m in M] if sc is not None else []
    W = A.zero()
    for (x, y), row in f.items():
        for a, v in row.items():
            W = W + (b[a] * (c[x] * c[y])).scale(v / 2) + (lam[a] * (c[x] * ph[y])).scale(v)
    for a in range(len(mu_t)):
        W = W - c[a] * mu_t[a] + ph[a] * M_t[a]
    sp = Superpotential(tot, W, "W_tot")
    gs = GaugeSystem(sp, dim, f, b, c, ph, lam, mu_t, M_t or [A.zero()] * dim)
    sp.verify()
    gs.checks["superpotential"] = sp.report.ok
    if not sp.report.ok:
        gs.witness = sp.report.witness
    w = compare_ope(A, "W_tot Q+", W, tot.Qp, {1: -gs.hamiltonian()})
    gs.checks["W_tot Q+"] = w is None
    gs.witness = gs.witness or w
    if sc is not None:
        w = _check_currents(sc, mu, f, dim)
        gs.checks["currents"] = w is None
        gs.witness = gs.witness or w
    w = compare_ope(A, "W_tot Q-", W, tot.Qm, {})
    gs.checks["W_tot Q-"] = w is None
    gs.witness = gs.witness or w
    return gs


def pure_gauge(dim: int, f: Optional[Mapping] = None) -> GaugeSystem:
    return build_w_tot(None, f or {}, [], [], dim=dim)


# ---------------------------------------------------------------------------
# reduced chiral ring

@dataclass
class ReducedReport:
    dims: Dict[Tuple[Fraction, Fraction], int]
    chain_dims: Dict[Tuple[Fraction, Fraction], int]
    checks: Dict[str, bool]
    witness: Optional[str] = None
    primaries: List[PrimaryRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def dims_by_r(self) -> Dict[Fraction, int]:
        out: Dict[Fraction, int] = {}
        for (r, _q), n in self.dims.items():
            out[r] = out.get(r, 0) + n
        return dict(sorted(out.items()))


def reduced_cohomology(gs: GaugeSystem, cutoff) -> ReducedReport:
    """``H(A_H, D_tot)`` per ``(R_B, q)`` slice for ``R_B <= cutoff``.

    Primaries are collected one step past the cutoff so that every requested
    slice sees its incoming and outgoing differentials.
    """
    sc, sp = gs.sc, gs.sp
    A = sc.alg
    cutoff = Q(cutoff)
    top = cutoff + 1
    states = [v for v in enumerate_basis(A, spin_max=top / 2, R_max=top,
                                         )
              if sum(sc.grading(v)[::2]) <= top]
    recs = _higgs_primaries(sc, None, basis=states)
    checks = {k: True for k in ("primaries", "D^2 = 0", "bracket with H", "derivation",
                                "partner")}
    witness = None

    def fail(kind, msg):
        nonlocal witness
        checks[kind] = False
        witness = witness or f"{kind}: {msg}"

    def rb(r: PrimaryRecord):
        return r.gradings[0] + r.gradings[2]

    slices: Dict[Tuple[Fraction, Fraction], List[PrimaryRecord]] = {}
    for r in recs:
        slices.setdefault((rb(r), r.gradings[2]), []).append(r)
    H = gs.hamiltonian()
    Hrec = PrimaryRecord(H, HIGGS, A.mode(sc.Qm, 0, H), (0, 0, 0))
    from .branches import poisson_bracket
    D = sp.D
    for r in recs:
        dO = D(r.state)
        key = (rb(r) + 1, r.gradings[2])
        if key[0] <= top and la.solve([x.state for x in slices.get(key, [])], dO) is None:
            fail("primaries", f"D_tot {r.state} = {dO} is not a combination of primaries")
        if D(dO):
            fail("D^2 = 0", f"D_tot^2 {r.state} = {D(dO)}")
        br = poisson_bracket(sc, Hrec, r)
        if br != dO:
            fail("bracket with H", f"D_tot {r.state} = {dO} but {{H, O}} = {br}")
        if A.mode(sc.Qm, 0, dO) != -D(r.superpartner):
            fail("partner", f"partner of D_tot {r.state} is not -D_tot of its partner")
    low = [r for r in recs if rb(r) <= cutoff]
    for r1 in low:
        for r2 in low:
            if rb(r1) + rb(r2) - 1 > top:
                continue
            lhs = D(poisson_bracket(sc, r1, r2))
            d1 = PrimaryRecord(D(r1.state), HIGGS, -D(r1.superpartner), r1.gradings)
            d2 = PrimaryRecord(D(r2.state), HIGGS, -D(r2.superpartner), r2.gradings)
            rhs = poisson_bracket(sc, d1, r2)
            t = poisson_bracket(sc, r1, d2)
            rhs = rhs + (t.scale(-1) if r1.parity else t)
            if lhs != rhs:
                fail("derivation", f"on {r1.state}, {r2.state}: {lhs} vs {rhs}")
    dims, chain = {}, {}
    for key in sorted(slices):
        r, q = key
        if r > cutoff:
            continue
        C = [x.state for x in slices[key]]
        chain[key] = len(C)
        ker = la.nullspace([D(v) for v in C])
        prev = [D(x.state) for x in slices.get((r - 1, q), [])]
        dims[key] = len(ker) - la.rank(prev)
    return ReducedReport(dims, chain, checks, witness, recs)


@dataclass
class TotalTwistReport:
    ok: bool
    checked: int
    checks: Dict[str, bool]
    witness: Optional[str] = None

    def line(self) -> str:
        return f"PASS {self.checked} states" if self.ok else f"FAIL {self.witness}"


def b_twist_total(sp: Superpotential, spin_max=1, basis: Optional[Sequence[FockState]] = None
                  ) -> TotalTwistReport:
    """``D_B,tot = Q+_(0) + W_(0)`` squares to zero and obeys the descent equation.

    Descent: ``D O^[1] = d O - (D O)^[1]`` with ``O^[1] = Q-_(0) O``.
    """
    sc, A = sp.sc, sp.alg
    if sp.report is None:
        sp.verify()
    states = list(basis) if basis is not None else _window(sc, spin_max)
    checks = {"D^2 = 0": True, "descent": True}
    witness = None

    def D(v):
        return A.mode(sc.Qp, 0, v) + d_w(sp, v)

    for v in states:
        if D(D(v)):
            checks["D^2 = 0"] = False
            witness = witness or f"D_B,tot^2 {v} = {D(D(v))}"
        lhs = D(A.mode(sc.Qm, 0, v))
        rhs = A.d(v) - A.mode(sc.Qm, 0, D(v))
        if lhs != rhs:
            checks["descent"] = False
            witness = witness or f"descent fails on {v}: {lhs} vs {rhs}"
    return TotalTwistReport(all(checks.values()), len(states), checks, witness)


# ---------------------------------------------------------------------------
# independent Koszul oracle

class KoszulModel:
    """Supercommutative polynomial dg algebra on named generators.

    ``gens`` is a list of ``(name, parity, degree, weight)`` and ``d`` maps a
    generator name to a polynomial ``{monomial: coeff}``, a monomial being a
    sorted tuple of ``(generator index, exponent)``.
    """

    def __init__(self, gens: Sequence[Tuple[str, int, object, object]], d: Mapping[str, Mapping]):
        self.gens = [(n, int(p), Q(deg), Q(w)) for n, p, deg, w in gens]
        self.index = {g[0]: i for i, g in enumerate(self.gens)}
        self.dgen = {self.index[k]: {tuple(m): Q(c) for m, c in dict(v).items()}
                     for k, v in d.items()}

    def var(self, name: str):
        return {((self.index[name], 1),): Q(1)}

    def mono_parity(self, m) -> int:
        return sum(self.gens[i][1] * e for i, e in m) % 2

    def degree(self, m):
        return (sum(self.gens[i][2] * e for i, e in m), sum(self.gens[i][3] * e for i, e in m))

    def _mono_mul(self, m1, m2):
        exps: Dict[int, int] = dict(m1)
        sign = 1
        for i, e in m2:
            if self.gens[i][1] and e:
                # move the odd variable x_i left past odd variables of m1 with index > i
                crossing = sum(ee for j, ee in m1 if j > i and self.gens[j][1])
                if crossing % 2:
                    sign = -sign
            exps[i] = exps.get(i, 0) + e
            if self.gens[i][1] and exps[i] > 1:
                return None
        return sign, tuple(sorted(exps.items()))

    def mul(self, p1, p2):
        out: Dict = {}
        for m1, c1 in p1.items():
            for m2, c2 in p2.items():
                r = self._mono_mul(m1, m2)
                if r is None:
                    continue
                s, m = r
                out[m] = out.get(m, Q(0)) + s * c1 * c2
        return {m: c for m, c in out.items() if c}

    def d_mono(self, m):
        """Leibniz rule, left to right: ``d(x y) = dx y + (-1)^{|x|} x dy``."""
        out: Dict = {}
        seen_parity = 0
        for k, (i, e) in enumerate(m):
            left = tuple(m[:k])
            right = tuple(m[k + 1:])
            for t in range(e):
                # x_i^e = x_i^t x_i x_i^{e-t-1}
                pre = left + (((i, t),) if t else ())
                post = ((((i, e - t - 1),) if e - t - 1 else ())) + right
                sgn = -1 if (seen_parity + self.gens[i][1] * t) % 2 else 1
                term = self.mul(self.mul({tuple(pre): Q(sgn)}, self.dgen.get(i, {})), {post: Q(1)})
                for mm, c in term.items():
                    out[mm] = out.get(mm, Q(0)) + c
            seen_parity += self.gens[i][1] * e
        return {mm: c for mm, c in out.items() if c}

    def d(self, p):
        out: Dict = {}
        for m, c in p.items():
            for mm, cc in self.d_mono(m).items():
                out[mm] = out.get(mm, Q(0)) + c * cc
        return {m: c for m, c in out.items() if c}

    def monomials(self, max_degree):
        """All monomials of degree <= max_degree (generators need positive degree)."""
        if any(g[2] <= 0 for g in self.gens):
            raise ValueError("Koszul model generators need positive degree")
        out = []

        def rec(i, mono, deg):
            if i == len(self.gens):
                out.append(tuple(mono))
                return
            name, par, dg, _w = self.gens[i]
            e = 0
            while deg + e * dg <= max_degree and (e == 0 or not par or e <= 1):
                rec(i + 1, mono + ([(i, e)] if e else []), deg + e * dg)
                e += 1
        rec(0, [], Q(0))
        return sorted(out)

    def cohomology(self, max_degree) -> Dict[Tuple[Fraction, Fraction], int]:
        top = Q(max_degree) + 1
        monos = self.monomials(top)
        slices: Dict = {}
        for m in monos:
            slices.setdefault(self.degree(m), []).append(m)
        dims = {}
        for key in sorted(slices):
            deg, w = key
            if deg > max_degree:
                continue
            ker = la.nullspace([self.d({m: Q(1)}) for m in slices[key]])
            prev = [self.d({m: Q(1)}) for m in slices.get((deg - 1, w), [])]
            dims[key] = len(ker) - la.rank(prev)
        return dims

    def check_d_squared(self, max_degree) -> Optional[str]:
        for m in self.monomials(max_degree):
            if self.d(self.d({m: Q(1)})):
                return f"d^2 != 0 on {m}"
        return None


def moment_map_koszul(n_z: int, charges: Sequence[Fraction], z_weight=Q(1, 2)) -> KoszulModel:
    """Abelian reduction of ``C^n[-1]`` by ``gl(1)``: ``d lambda = M``, ``d Z_i = q_i c Z_i``.

    ``M`` is the quadratic invariant built by pairing ``Z_i`` with ``Z_j``
    of opposite charge (``n_z = 2`` gives ``M = Z1 Z2``).
    """
    if n_z != 2:
        raise ValueError("only the two-variable model is built in")
    gens = [("Z1", 0, 1, z_weight), ("Z2", 0, 1, z_weight), ("c", 1, 1, 0), ("lambda", 1, 1, 1)]
    d = {"lambda": {((0, 1), (1, 1)): 1},
         "Z1": {((0, 1), (2, 1)): Q(charges[0])},
         "Z2": {((1, 1), (2, 1)): Q(charges[1])}}
    return KoszulModel(gens, d)


def koszul_oracle(cutoff, charges=(1, -1)) -> Dict[Tuple[Fraction, Fraction], int]:
    return moment_map_koszul(2, charges).cohomology(cutoff)
