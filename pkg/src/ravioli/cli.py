"""``ravioli`` command line: batch verification and branch extraction from ``.alg`` files.

Exit status is 0 when every check passes, 1 when a check fails and 2 on
input errors (unreadable or malformed files, inconsistent gradings).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from . import algfile as af
from .algfile import AlgFileError, format_state

__all__ = ["main", "run"]

Q = Fraction


class InputError(Exception):
    pass


def _fr(x) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _check(report: Dict, name: str, ok: bool, witness: Optional[str] = None, detail=None):
    item: Dict[str, Any] = {"name": name, "status": "pass" if ok else "fail"}
    if not ok and witness:
        item["witness"] = witness
    if detail is not None:
        item["detail"] = detail
    report["checks"].append(item)
    return ok


def _new(command: str, d: af.AlgebraDefinition) -> Dict:
    return {"command": command, "algebra": d.name, "checks": [], "tables": {}}


def _load(path: str) -> af.AlgebraDefinition:
    return af.load(path)


def _sc(d: af.AlgebraDefinition):
    from .scstruct import SCGradingError
    if d.sc is None:
        raise InputError(f"{d.name}: file has no sc-structure")
    try:
        return af.build_sc(d)
    except SCGradingError as exc:
        raise InputError(f"{d.name}: grading inconsistency: {exc}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_verify(d: af.AlgebraDefinition, truncation: int, cutoff: int) -> Dict:
    from .freefield import verify_axioms
    from .scstruct import bps_scan, osp22_closure, quotient_relations, verify_sc
    rep = _new("verify", d)
    if d.generators:
        alg = af.build_algebra(d)
        ax = verify_axioms(alg, truncation=truncation)
        _check(rep, "free-field axioms", ax.ok, ax.witness,
               {k: ax.counts.get(k, 0) for k in ax.checks})
    if d.sc is not None:
        sc = _sc(d)
        r = verify_sc(sc, truncation=truncation)
        _check(rep, "N=2 OPEs and zero modes", r.ok, r.witness)
        rel = quotient_relations(sc)
        rep["tables"]["quotient relations"] = {k: format_state(v) for k, v in rel.items()}
        if sc.xi == 0:
            b = bps_scan(sc, min(truncation, 2))
            _check(rep, "BPS bound", b.ok, b.witness,
                   {"states": b.checked, "saturating": len(b.saturating)})
        w = osp22_closure(sc, spin_max=1)
        _check(rep, "osp(2|2) closure", w is None, w)
        if d.superpotential is not None:
            from .superpot import Superpotential
            sp = Superpotential(sc, af.parse_expr(d.superpotential, sc.alg))
            s = sp.verify()
            _check(rep, "superpotential", s.ok, s.witness)
    for entry in d.mode_algebras:
        _jacobi_one(rep, entry, cutoff)
    if not rep["checks"]:
        raise InputError(f"{d.name}: nothing to verify")
    return rep


def _jacobi_one(rep: Dict, entry: Dict, cutoff: int):
    from .modealg import check_jacobi
    spec = af.build_mode_algebra(entry)
    j = check_jacobi(spec, cutoff)
    _check(rep, f"Jacobi {spec.name} cutoff {cutoff}", j.ok, j.failure,
           {"pairs": j.pairs_checked, "triples": j.triples_checked})


def cmd_jacobi(d: af.AlgebraDefinition, cutoff: int) -> Dict:
    rep = _new("jacobi", d)
    if not d.mode_algebras:
        raise InputError(f"{d.name}: file has no mode-algebras section")
    for entry in d.mode_algebras:
        _jacobi_one(rep, entry, cutoff)
    return rep


def _ring_tables(ring) -> Dict:
    names = [f"O{i}" for i in range(len(ring.basis))]

    def combo(c):
        if not c:
            return "0"
        return " + ".join(f"{_fr(v)}*{names[k]}" for k, v in sorted(c.items()))

    basis = []
    for (r, q), idx in ring.slices.items():
        for i in idx:
            rec = ring.basis[i]
            basis.append({"name": names[i], "R_B": _fr(r), "q": _fr(q),
                          "state": format_state(rec.state),
                          "superpartner": format_state(rec.superpartner)})
    prod = {f"{names[i]}*{names[j]}": combo(c) for (i, j), c in sorted(ring.product.items()) if c}
    br = {f"{{{names[i]},{names[j]}}}": combo(c) for (i, j), c in sorted(ring.bracket.items()) if c}
    return {"primaries": basis, "dims": {_fr(k): v for k, v in ring.dims().items()},
            "products": prod, "brackets": br}


def cmd_branches(d: af.AlgebraDefinition, branch: str, cutoff, truncation=None) -> Dict:
    from .branches import chiral_ring
    sc = _sc(d)
    rep = _new("branches", d)
    rep["branch"] = branch
    rep["cutoff"] = _fr(cutoff)
    try:
        ring = chiral_ring(sc, branch, cutoff, spin_max=truncation)
    except ValueError as exc:
        _check(rep, "branch window", False, str(exc))
        return rep
    for k, ok in ring.checks.items():
        _check(rep, f"chiral ring: {k}", ok, ring.witness if not ok else None)
    rep["tables"] = _ring_tables(ring)
    return rep


def _trivial_twist(d, flag, cutoff) -> Dict:
    rep = _new("twist", d)
    rep["flag"] = flag
    _check(rep, "trivial algebra", True, detail="V = C|0>")
    rep["tables"] = {"cohomology": {"0": 1}, "primaries": {"0": 1}, "isomorphism": True,
                     "precheck": True}
    return rep


def cmd_twist(d: af.AlgebraDefinition, flag: str, cutoff, samples: int = 10, seed: int = 0) -> Dict:
    from .branches import (_twist_window, check_btwistspin, make_twist, sample_triples,
                           twist_cohomology, verify_leibniz_homotopy)
    if not d.generators and d.sc is None:
        return _trivial_twist(d, flag, cutoff)
    sc = _sc(d)
    rep = _new("twist", d)
    rep["flag"] = flag
    rep["cutoff"] = _fr(cutoff)
    tw = make_twist(sc, flag)
    for k, ok in tw.checks.items():
        _check(rep, f"twisted algebra: {k}", ok, tw.witness if not ok else None)
    bad = None
    window = _twist_window(tw, Q(cutoff), 1)
    for v in window:
        if tw.D(tw.D(v)):
            bad = f"D^2 {format_state(v)} = {format_state(tw.D(tw.D(v)))}"
            break
    _check(rep, "D^2 = 0", bad is None, bad, {"states": len(window)})
    w = check_btwistspin(tw, cutoff, J_max=1)
    _check(rep, "exact away from J = 0", w is None, w)
    coh = twist_cohomology(tw, cutoff)
    rep["tables"]["cohomology"] = {_fr(k): v for k, v in coh.dims_by_r().items()}
    rep["tables"]["primaries"] = {_fr(k): v for k, v in coh.primary_dims.items()}
    rep["tables"]["precheck"] = coh.precheck
    rep["tables"]["isomorphism"] = coh.isomorphism
    _check(rep, "comparison map is an isomorphism", coh.isomorphism, coh.witness)
    fails = []
    for O1, O2, O in sample_triples(tw, samples, seed=seed):
        h = verify_leibniz_homotopy(tw, O1, O2, O)
        if not h.ok:
            fails.append(f"({format_state(O1)}, {format_state(O2)}, {format_state(O)}): "
                         f"residual {format_state(h.residual)}")
    _check(rep, "Leibniz homotopy", not fails, fails[0] if fails else None,
           {"triples": samples, "failures": len(fails)})
    return rep


def cmd_gauge(d: af.AlgebraDefinition, cutoff) -> Dict:
    from .scstruct import detect_flavor_symmetry
    from .superpot import (build_w_tot, koszul_oracle, pure_gauge, reduced_cohomology,
                           structure_constants)
    if d.flavor is None and d.gauge is None:
        raise InputError(f"{d.name}: file has no flavor section")
    rep = _new("gauge", d)
    rep["cutoff"] = _fr(cutoff)
    dim, gf, _ = af.gauge_data(d)
    if d.flavor is None:
        gs = pure_gauge(dim, gf or {})
        charges = None
    else:
        sc = _sc(d)
        mu, M, ff, charges = af.flavor_data(d, sc.alg)
        fl = detect_flavor_symmetry(sc, mu, ff)
        if not _check(rep, "flavor symmetry", fl.ok, fl.witness):
            return rep
        if M is None:
            M = fl.M
        f = gf if gf is not None else structure_constants(sc, mu)
        try:
            gs = build_w_tot(sc, f, mu, M)
        except ValueError as exc:
            _check(rep, "gauge data", False, str(exc))
            return rep
    for k, ok in gs.checks.items():
        _check(rep, k, ok, gs.witness if not ok else None)
    rep["tables"]["W_tot"] = format_state(gs.sp.W)
    if not gs.sp.report.ok:
        return rep
    red = reduced_cohomology(gs, cutoff)
    for k, ok in red.checks.items():
        _check(rep, f"D_tot: {k}", ok, red.witness if not ok else None)
    dims = {f"{_fr(r)},{_fr(q)}": n for (r, q), n in sorted(red.dims.items())}
    rep["tables"]["cohomology"] = dims
    rep["tables"]["cohomology by R_B"] = {_fr(k): v for k, v in red.dims_by_r().items()}
    if charges is not None:
        if len(charges) != 2 or len(gs.mu) != 1:
            raise InputError("the Koszul oracle covers one current acting on two bosons")
        orc = koszul_oracle(cutoff, charges)
        odims = {f"{_fr(r)},{_fr(q)}": n for (r, q), n in sorted(orc.items())}
        rep["tables"]["oracle"] = odims
        diff = [k for k in sorted(set(dims) | set(odims)) if dims.get(k, 0) != odims.get(k, 0)]
        _check(rep, "matches Koszul oracle", not diff,
               f"slice (R_B, q) = ({diff[0]}): {dims.get(diff[0], 0)} vs oracle "
               f"{odims.get(diff[0], 0)}" if diff else None)
    return rep


# ---------------------------------------------------------------------------
# output

def render(rep: Dict, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    lines = [f"{rep['command']} {rep['algebra']}"]
    for k in ("branch", "flag", "cutoff"):
        if k in rep:
            lines[0] += f" {k}={rep[k]}"
    for c in rep["checks"]:
        s = f"  [{c['status'].upper()}] {c['name']}"
        if "detail" in c:
            s += " " + json.dumps(c["detail"], sort_keys=True, ensure_ascii=False)
        lines.append(s)
        if "witness" in c:
            lines.append(f"         witness: {c['witness']}")
    for name, table in rep.get("tables", {}).items():
        lines.append(f"  {name}:")
        if isinstance(table, dict):
            for k, v in table.items():
                lines.append(f"    {k}: {v}")
        elif isinstance(table, list):
            for row in table:
                lines.append("    " + ", ".join(f"{k}={v}" for k, v in row.items()))
        else:
            lines.append(f"    {table}")
    ok = all(c["status"] == "pass" for c in rep["checks"])
    lines.append("PASS" if ok else "FAIL")
    return "\n".join(lines) + "\n"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ravioli", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--truncation", type=int, default=None,
                        help="maximal spin of state windows")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run every applicable verification suite")
    v.add_argument("path")
    v.add_argument("--cutoff", type=int, default=4, help="Jacobi mode-index cutoff")
    b = sub.add_parser("branches", parents=[common], help="branch primaries and chiral ring")
    b.add_argument("path")
    b.add_argument("branch", nargs="?", choices=("higgs", "coulomb"), default="higgs")
    b.add_argument("--cutoff", type=Fraction, default=Q(2), help="largest R_B")
    t = sub.add_parser("twist", parents=[common], help="A or B twist cohomology")
    t.add_argument("path")
    t.add_argument("flag", choices=("A", "B", "a", "b"))
    t.add_argument("--cutoff", type=Fraction, default=Q(3), help="largest twisted R-charge")
    t.add_argument("--samples", type=int, default=10)
    t.add_argument("--seed", type=int, default=0)
    g = sub.add_parser("gauge", parents=[common], help="perturbative gauging of a flavor symmetry")
    g.add_argument("path")
    g.add_argument("--cutoff", type=Fraction, default=None, help="largest R_B")
    j = sub.add_parser("jacobi", parents=[common], help="Jacobi identity of mode algebras")
    j.add_argument("path")
    j.add_argument("--cutoff", type=int, default=4)
    return p


def run(argv: Optional[List[str]] = None) -> Tuple[int, str]:
    """Return ``(exit code, output)`` without touching the process streams."""
    p = _parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code else 0), ""
    try:
        d = _load(args.path)
        if args.command == "verify":
            rep = cmd_verify(d, args.truncation if args.truncation is not None else 3, args.cutoff)
        elif args.command == "jacobi":
            rep = cmd_jacobi(d, args.cutoff)
        elif args.command == "branches":
            rep = cmd_branches(d, args.branch, args.cutoff, args.truncation)
        elif args.command == "twist":
            rep = cmd_twist(d, args.flag.upper(), args.cutoff, args.samples, args.seed)
        else:
            cut = args.cutoff
            if cut is None:
                cut = Q(af.gauge_data(d)[2] or 2)
            rep = cmd_gauge(d, cut)
    except (AlgFileError, InputError) as exc:
        return 2, f"error: {exc}\n"
    ok = all(c["status"] == "pass" for c in rep["checks"])
    return (0 if ok else 1), render(rep, args.format)


def main(argv: Optional[List[str]] = None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code != 2 else sys.stderr
    stream.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
