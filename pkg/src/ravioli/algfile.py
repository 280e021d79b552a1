"""Algebra definition files (``.alg``): YAML documents plus a tiny expression grammar.

Expressions denote states of a free-field algebra::

    expr    := term (('+' | '-') term)*
    term    := ['-'] [rational ['*']] atom | ['-'] rational
    atom    := NAME | 'd' ['^' INT] '(' expr ')' | ':' atom atom* ':' | '(' expr ')'
    rational:= INT ['/' INT]

``:A B C:`` is the right-associated normal product ``:A :B C::`` and ``d``
binds tighter than ``:...:``.  A bare rational is a multiple of the vacuum.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from .freefield import FockState, FreeFieldAlgebra, GeneratorDecl
from .modealg import ModeGenerator, OpeSpec, OpeTerm, Piece, PiecewiseSpec, SpecError, Term
from .ravring import Scalar

__all__ = [
    "AlgFileError",
    "AlgebraDefinition",
    "parse_text",
    "load",
    "dump",
    "parse_expr",
    "format_state",
    "build_algebra",
    "build_sc",
    "build_mode_algebra",
    "mode_algebra_entry",
    "data_path",
    "SHIPPED_FILES",
]

Q = Fraction
SECTIONS = ("name", "generators", "contractions", "sc-structure", "flavor", "superpotential",
            "gauge", "mode-algebras")
SHIPPED_FILES = ("fh", "fvpert", "sfc", "fh_gauged_u1", "svir_n1", "svir_n2", "svir_n3",
                 "svir_n4_p0", "evir")


class AlgFileError(ValueError):
    """Input error, with a 1-based line and column when known."""

    def __init__(self, msg: str, line: Optional[int] = None, column: Optional[int] = None):
        self.msg, self.line, self.column = msg, line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + msg)


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / f"{name}.alg"


# ---------------------------------------------------------------------------
# YAML with positions

class _Str(str):
    """A string remembering where its scalar started."""
    line: Optional[int] = None
    column: Optional[int] = None
    plain: bool = True


def _construct(node) -> Any:
    if isinstance(node, yaml.ScalarNode):
        if node.tag == "tag:yaml.org,2002:str":
            s = _Str(node.value)
            s.line, s.column = node.start_mark.line + 1, node.start_mark.column + 1
            s.plain = node.style is None
            return s
        loader = yaml.SafeLoader("")
        try:
            v = loader.construct_object(node)
        finally:
            loader.dispose()
        return v
    if isinstance(node, yaml.SequenceNode):
        return [_construct(n) for n in node.value]
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            key = _construct(k)
            if key in out:
                raise AlgFileError(f"duplicate key {key!r}", k.start_mark.line + 1,
                                   k.start_mark.column + 1)
            out[key] = _construct(v)
        return out
    raise AlgFileError("unsupported YAML node")


def _load_yaml(text: str) -> Dict:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.MarkedYAMLError as exc:
        m = exc.problem_mark
        raise AlgFileError(f"YAML: {exc.problem}", m.line + 1 if m else None,
                           m.column + 1 if m else None) from None
    if node is None:
        raise AlgFileError("empty definition file", 1, 1)
    data = _construct(node)
    if not isinstance(data, dict):
        raise AlgFileError("top level must be a mapping", 1, 1)
    return data


def _pos(x) -> Tuple[Optional[int], Optional[int]]:
    return getattr(x, "line", None), getattr(x, "column", None)


def _err(msg, where=None):
    return AlgFileError(msg, *_pos(where))


# ---------------------------------------------------------------------------
# rationals

_RAT = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def _rat(x, where=None) -> Fraction:
    if isinstance(x, bool):
        raise _err(f"expected a rational, got {x!r}", where)
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        m = _RAT.match(x)
        if m:
            den = int(m.group(2) or 1)
            if den == 0:
                raise _err(f"zero denominator in {x!r}", x)
            return Q(int(m.group(1)), den)
    raise _err(f"expected an exact rational 'p/q', got {x!r}", where if where is not None else x)


def _fmt_rat(q: Fraction):
    q = Q(q)
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# expressions

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^():]))")


class _Parser:
    def __init__(self, src: str, alg: FreeFieldAlgebra, where=None):
        self.src, self.alg = str(src), alg
        self.line, self.col0 = _pos(where)
        self.plain = getattr(where, "plain", True)
        self.toks: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(self.src):
            if self.src[pos:].strip() == "":
                break
            m = _TOKEN.match(self.src, pos)
            if not m or m.end() == pos:
                self.fail("unexpected character", pos + len(self.src[pos:]) - len(self.src[pos:].lstrip()))
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def fail(self, msg, offset=None):
        if offset is None:
            offset = self.toks[self.i][2] if self.i < len(self.toks) else len(self.src)
        col = None
        if self.line is not None:
            col = self.col0 + offset + (0 if self.plain else 1)
        raise AlgFileError(f"{msg} in expression {self.src!r}", self.line, col)

    def peek(self, value=None):
        if self.i >= len(self.toks):
            return None
        t = self.toks[self.i]
        if value is not None and t[1] != value:
            return None
        return t

    def take(self, value=None):
        t = self.peek(value)
        if t is None:
            self.fail(f"expected {value!r}" if value else "unexpected end")
        self.i += 1
        return t

    def parse(self) -> FockState:
        if not self.toks:
            self.fail("empty expression", 0)
        v = self.expr()
        if self.i != len(self.toks):
            self.fail(f"unexpected {self.toks[self.i][1]!r}")
        return v

    def expr(self) -> FockState:
        sign = 1
        if self.peek("-"):
            self.take()
            sign = -1
        elif self.peek("+"):
            self.take()
        out = self.term().scale(sign)
        while self.peek("+") or self.peek("-"):
            s = 1 if self.take()[1] == "+" else -1
            out = out + self.term().scale(s)
        return out

    def rational(self) -> Fraction:
        num = int(self.take()[1])
        if self.peek("/"):
            self.take()
            t = self.peek()
            if t is None or t[0] != "num":
                self.fail("expected a denominator")
            den = int(self.take()[1])
            if den == 0:
                self.fail("zero denominator")
            return Q(num, den)
        return Q(num)

    def term(self) -> FockState:
        t = self.peek()
        if t is None:
            self.fail("expected a term")
        if t[0] == "num":
            c = self.rational()
            if self.peek("*"):
                self.take()
                return self.atom().scale(c)
            nxt = self.peek()
            if nxt is None or nxt[1] in ("+", "-", ")"):
                return self.alg.vacuum().scale(c)
            return self.atom().scale(c)
        return self.atom()

    def atom(self) -> FockState:
        t = self.peek()
        if t is None:
            self.fail("expected a generator, d(...), :...: or (...)")
        if t[1] == "(":
            self.take()
            v = self.expr()
            self.take(")")
            return v
        if t[1] == ":":
            self.take()
            factors = [self.atom()]
            while not self.peek(":"):
                if self.peek() is None:
                    self.fail("unterminated normal product")
                factors.append(self.atom())
            self.take(":")
            out = factors[-1]
            for f in reversed(factors[:-1]):
                out = f * out
            return out
        if t[0] == "name":
            if t[1] == "d":
                self.take()
                k = 1
                if self.peek("^"):
                    self.take()
                    n = self.peek()
                    if n is None or n[0] != "num":
                        self.fail("expected a derivative order")
                    k = int(self.take()[1])
                self.take("(")
                v = self.expr()
                self.take(")")
                return self.alg.d(v, k)
            if t[1] not in self.alg.index:
                self.fail(f"unknown generator {t[1]!r}")
            self.take()
            return self.alg.gen(t[1])
        self.fail(f"unexpected {t[1]!r}")


def parse_expr(src: str, alg: FreeFieldAlgebra, where=None) -> FockState:
    return _Parser(src, alg, where if where is not None else src).parse()


def _var_str(alg: FreeFieldAlgebra, g: int, n: int) -> str:
    name = alg.gens[g].name
    if n == 0:
        return name
    return f"d({name})" if n == 1 else f"d^{n}({name})"


def format_state(s: FockState) -> str:
    """Expression string that :func:`parse_expr` maps back to ``s``."""
    alg = s.alg
    if not s:
        return "0"
    parts = []
    for mono in sorted(s.terms):
        c = s.terms[mono]
        for _g, n in mono:
            c /= factorial(n)
        body = [_var_str(alg, g, n) for g, n in mono]
        if not body:
            txt = None
        elif len(body) == 1:
            txt = body[0]
        else:
            txt = ":" + " ".join(body) + ":"
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if txt is None:
            item = str(mag) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        elif mag == 1:
            item = txt
        else:
            item = f"{mag.numerator}/{mag.denominator} {txt}" if mag.denominator != 1 else f"{mag} {txt}"
        parts.append((sign, item))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, item in parts[1:]:
        out += f" {sign} {item}"
    return out


# ---------------------------------------------------------------------------
# the definition object

@dataclass
class AlgebraDefinition:
    """Validated, plain-data content of a definition file."""

    name: str = "algebra"
    generators: List[Dict] = field(default_factory=list)
    contractions: List[Dict] = field(default_factory=list)
    sc: Optional[Dict] = None
    flavor: Optional[Dict] = None
    superpotential: Optional[str] = None
    gauge: Optional[Dict] = None
    mode_algebras: List[Dict] = field(default_factory=list)

    def to_data(self) -> Dict:
        out: Dict[str, Any] = {"name": self.name}
        if self.generators:
            out["generators"] = [dict(g) for g in self.generators]
        if self.contractions:
            out["contractions"] = [dict(c) for c in self.contractions]
        if self.sc is not None:
            out["sc-structure"] = dict(self.sc)
        if self.flavor is not None:
            out["flavor"] = dict(self.flavor)
        if self.superpotential is not None:
            out["superpotential"] = self.superpotential
        if self.gauge is not None:
            out["gauge"] = dict(self.gauge)
        if self.mode_algebras:
            out["mode-algebras"] = list(self.mode_algebras)
        return out

    @property
    def has_free_fields(self) -> bool:
        return bool(self.generators) or self.sc is not None


def _plain(x):
    """Strip position info and normalise rationals to ints or 'p/q' strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return _fmt_rat(x)
    if isinstance(x, str):
        return str(x)
    return x


def _need(d: Dict, key: str, where, kind=None):
    if key not in d:
        raise _err(f"missing key {key!r}", where)
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise _err(f"{key!r} must be a {kind.__name__}", v if hasattr(v, "line") else where)
    return v


def parse_text(text: str) -> AlgebraDefinition:
    """Parse and validate; expressions are type-checked against the generators."""
    data = _load_yaml(text)
    for k in data:
        if k not in SECTIONS:
            raise AlgFileError(f"unknown section {k!r}", *_pos(k))
    d = AlgebraDefinition(name=str(data.get("name", "algebra")))
    gens = data.get("generators") or []
    if not isinstance(gens, list):
        raise AlgFileError("'generators' must be a list")
    seen = set()
    for g in gens:
        if not isinstance(g, dict):
            raise AlgFileError("each generator is a mapping")
        name = str(_need(g, "name", None))
        if name in seen or name == "d" or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
            raise _err(f"bad or duplicate generator name {name!r}", g["name"])
        seen.add(name)
        stat = str(_need(g, "statistics", g["name"]))
        if stat not in ("boson", "fermion"):
            raise _err(f"statistics must be boson or fermion, got {stat!r}", g["statistics"])
        entry = {"name": name, "statistics": stat}
        for k in ("R", "spin", "S"):
            entry[k] = _fmt_rat(_rat(g.get(k, 0), g.get(k, g["name"])))
        d.generators.append(entry)
    for c in data.get("contractions") or []:
        if not isinstance(c, dict):
            raise AlgFileError("each contraction is a mapping")
        pair = _need(c, "pair", None, list)
        if len(pair) != 2 or any(str(p) not in seen for p in pair):
            raise _err(f"contraction pair {list(map(str, pair))} must name two generators",
                       pair[0] if pair else None)
        poles = []
        for item in _need(c, "poles", pair[0], list):
            if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], int) or item[0] < 0:
                raise _err("each pole is [m, coefficient] with m >= 0", pair[0])
            poles.append([item[0], _fmt_rat(_rat(item[1], pair[0]))])
        d.contractions.append({"pair": [str(p) for p in pair], "poles": poles})
    alg = build_algebra(d) if d.generators else None
    sc = data.get("sc-structure")
    if sc is not None:
        if alg is None:
            raise AlgFileError("sc-structure needs generators")
        if not isinstance(sc, dict):
            raise AlgFileError("'sc-structure' must be a mapping")
        entry = {}
        for k in ("Gamma", "sigma", "Q+", "Q-"):
            v = _need(sc, k, None)
            parse_expr(str(v), alg, v)
            entry[k] = str(v)
        entry["xi"] = _fmt_rat(_rat(sc.get("xi", 0)))
        s_sign = sc.get("s_sign", 1)
        if s_sign not in (1, -1):
            raise AlgFileError("s_sign must be 1 or -1")
        entry["s_sign"] = s_sign
        for k in sc:
            if k not in ("Gamma", "sigma", "Q+", "Q-", "xi", "s_sign"):
                raise AlgFileError(f"unknown sc-structure key {k!r}", *_pos(k))
        d.sc = entry
    fl = data.get("flavor")
    if fl is not None:
        if d.sc is None:
            raise AlgFileError("flavor needs sc-structure")
        entry = {}
        cur = _need(fl, "currents", None, list)
        for v in cur:
            parse_expr(str(v), alg, v)
        entry["currents"] = [str(v) for v in cur]
        if "moment-maps" in fl:
            mm = fl["moment-maps"]
            if not isinstance(mm, list) or len(mm) != len(cur):
                raise AlgFileError("one moment map per current")
            for v in mm:
                parse_expr(str(v), alg, v)
            entry["moment-maps"] = [str(v) for v in mm]
        if "structure-constants" in fl:
            rows = []
            for r in fl["structure-constants"] or []:
                b, c = _need(r, "pair", None, list)
                out = {int(a): _fmt_rat(_rat(v)) for a, v in dict(_need(r, "out", None, dict)).items()}
                for idx in (b, c, *out):
                    if not isinstance(idx, int) or not 0 <= idx < len(cur):
                        raise AlgFileError(f"structure constant index {idx!r} out of range")
                rows.append({"pair": [b, c], "out": out})
            entry["structure-constants"] = rows
        if "charges" in fl:
            entry["charges"] = [_fmt_rat(_rat(x)) for x in fl["charges"]]
        for k in fl:
            if k not in ("currents", "moment-maps", "structure-constants", "charges"):
                raise AlgFileError(f"unknown flavor key {k!r}", *_pos(k))
        d.flavor = entry
    w = data.get("superpotential")
    if w is not None:
        if alg is None:
            raise AlgFileError("superpotential needs generators")
        parse_expr(str(w), alg, w)
        d.superpotential = str(w)
    ga = data.get("gauge")
    if ga is not None:
        if not isinstance(ga, dict):
            raise AlgFileError("'gauge' must be a mapping")
        entry = {}
        if "dim" in ga:
            if not isinstance(ga["dim"], int) or ga["dim"] < 0:
                raise AlgFileError("gauge dim must be a non-negative integer")
            entry["dim"] = ga["dim"]
        if "structure-constants" in ga:
            rows = []
            for r in ga["structure-constants"] or []:
                b, c = _need(r, "pair", None, list)
                rows.append({"pair": [int(b), int(c)],
                             "out": {int(a): _fmt_rat(_rat(v)) for a, v in dict(r["out"]).items()}})
            entry["structure-constants"] = rows
        if "cutoff" in ga:
            entry["cutoff"] = int(ga["cutoff"])
        for k in ga:
            if k not in ("dim", "structure-constants", "cutoff"):
                raise AlgFileError(f"unknown gauge key {k!r}", *_pos(k))
        if d.flavor is None and "dim" not in entry:
            raise AlgFileError("gauge without flavor data needs 'dim'")
        d.gauge = entry
    mas = data.get("mode-algebras") or []
    if not isinstance(mas, list):
        raise AlgFileError("'mode-algebras' must be a list")
    for m in mas:
        entry = _plain(m)
        build_mode_algebra(entry, where=m)
        d.mode_algebras.append(entry)
    return d


def load(path) -> AlgebraDefinition:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise AlgFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text)


def dump(d: AlgebraDefinition) -> str:
    return yaml.safe_dump(d.to_data(), sort_keys=False, default_flow_style=False, width=100,
                          allow_unicode=True)


# ---------------------------------------------------------------------------
# builders

def build_algebra(d: AlgebraDefinition) -> FreeFieldAlgebra:
    gens = [GeneratorDecl(g["name"], g["statistics"], _rat(g["R"]), _rat(g["spin"]), _rat(g["S"]))
            for g in d.generators]
    cons = {tuple(c["pair"]): {m: _rat(v) for m, v in c["poles"]} for c in d.contractions}
    return FreeFieldAlgebra(gens, cons, d.name)


def build_sc(d: AlgebraDefinition, alg: Optional[FreeFieldAlgebra] = None):
    from .scstruct import SCStructure
    if d.sc is None:
        raise AlgFileError("file has no sc-structure")
    alg = alg or build_algebra(d)
    f = {k: parse_expr(d.sc[k], alg) for k in ("Gamma", "sigma", "Q+", "Q-")}
    return SCStructure(alg, f["Gamma"], f["sigma"], f["Q+"], f["Q-"], _rat(d.sc.get("xi", 0)),
                       name=d.name, s_sign=d.sc.get("s_sign", 1))


def _constants(rows) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
    return {tuple(r["pair"]): {int(a): _rat(v) for a, v in r["out"].items()} for r in rows}


def flavor_data(d: AlgebraDefinition, alg: FreeFieldAlgebra):
    """``(currents, moment maps or None, flavor constants or None, charges or None)``."""
    fl = d.flavor or {}
    mu = [parse_expr(x, alg) for x in fl.get("currents", [])]
    M = [parse_expr(x, alg) for x in fl["moment-maps"]] if "moment-maps" in fl else None
    f = _constants(fl["structure-constants"]) if "structure-constants" in fl else None
    ch = [_rat(x) for x in fl["charges"]] if "charges" in fl else None
    return mu, M, f, ch


def gauge_data(d: AlgebraDefinition):
    ga = d.gauge or {}
    f = _constants(ga["structure-constants"]) if "structure-constants" in ga else None
    return ga.get("dim"), f, ga.get("cutoff")


# mode algebras ----------------------------------------------------------

def _scalar_from(x, where=None) -> Scalar:
    if isinstance(x, list) and len(x) == 2:
        return Scalar(_rat(x[0], where), _rat(x[1], where))
    return Scalar(_rat(x, where), 0)


def build_mode_algebra(entry: Dict, where=None):
    """A :class:`PiecewiseSpec` or :class:`OpeSpec` from a ``mode-algebras`` entry."""
    try:
        kind = entry.get("kind")
        name = entry.get("name", "algebra")
        params = {k: _rat(v) for k, v in (entry.get("parameters") or {}).items()}
        if kind == "piecewise":
            fams = [ModeGenerator(f["name"], int(f["parity"]), _rat(f.get("R", 0)),
                                  _rat(f.get("spin", 0)), _rat(f.get("S", 0)), "modes",
                                  _rat(f.get("slope", 0)), bool(f.get("creation", False)))
                    for f in entry["families"]]
            rules = {}
            for r in entry["rules"]:
                pieces = []
                for p in r.get("pieces", []):
                    terms = tuple(Term(str(t[0]), str(t[1]), str(t[2])) for t in p.get("terms", []))
                    pieces.append(Piece(str(p.get("guard", "")), terms))
                rules[tuple(r["pair"])] = pieces
            return PiecewiseSpec(fams, rules, name=name, parameters=params)
        if kind == "ope":
            gens = [ModeGenerator(f["name"], int(f["parity"]), _rat(f.get("R", 1)),
                                  _rat(f.get("spin", 0)), _rat(f.get("S", 0)), "field",
                                  labels=tuple(str(x) for x in f.get("labels", [""])))
                    for f in entry["fields"]]
            opes = {}
            for o in entry["opes"]:
                terms = []
                for t in o.get("terms", []):
                    out = t.get("out")
                    coeff = {}
                    for c in t["coeff"]:
                        if out is None:
                            coeff[(int(c[0]), int(c[1]))] = _scalar_from(c[2])
                        else:
                            coeff[(int(c[0]), int(c[1]), int(c[2]))] = _rat(c[3])
                    terms.append(OpeTerm(int(t["pole"]), out, int(t.get("deriv", 0)), coeff))
                opes[tuple(o["pair"])] = terms
            return OpeSpec(gens, opes, name=name, parameters=params,
                           central_symbol=entry.get("central-symbol", "xi"))
        raise SpecError(f"mode algebra kind must be 'piecewise' or 'ope', got {kind!r}")
    except AlgFileError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        msg = f"bad mode algebra entry: {exc}"
        if isinstance(exc, KeyError):
            msg = f"bad mode algebra entry: missing {exc.args[0]!r}"
        raise _err(msg, _first_pos(where)) from None


def _first_pos(x):
    if hasattr(x, "line"):
        return x
    if isinstance(x, dict):
        for k in x:
            if hasattr(k, "line"):
                return k
    return None


def mode_algebra_entry(spec) -> Dict:
    """Serialise a shipped mode algebra into a ``mode-algebras`` entry."""
    params = {k: _fmt_rat(v) for k, v in getattr(spec, "parameters", {}).items()}
    if isinstance(spec, PiecewiseSpec):
        fams = []
        for g in spec.generators:
            f = {"name": g.name, "parity": g.parity, "R": _fmt_rat(g.R), "spin": _fmt_rat(g.spin),
                 "S": _fmt_rat(g.S), "slope": _fmt_rat(g.spin_slope)}
            if g.creation:
                f["creation"] = True
            fams.append(f)
        rules = [{"pair": list(k), "pieces": [{"guard": p.guard,
                                               "terms": [[t.coeff, t.family, t.index] for t in p.terms]}
                                              for p in v]}
                 for k, v in spec.rules.items()]
        out = {"name": spec.name, "kind": "piecewise", "families": fams, "rules": rules}
    elif isinstance(spec, OpeSpec):
        fields = []
        for g in spec.generators:
            f = {"name": g.name, "parity": g.parity, "R": _fmt_rat(g.R), "spin": _fmt_rat(g.spin),
                 "S": _fmt_rat(g.S)}
            if g.labels != ("",):
                f["labels"] = list(g.labels)
            fields.append(f)
        opes = []
        for (a, b), terms in spec.declared.items():
            ts = []
            for t in terms:
                if t.out is None:
                    co = [[i, j, [_fmt_rat(v.rat), _fmt_rat(v.xi)] if Scalar.of(v).xi else
                           _fmt_rat(Scalar.of(v).rat)] for (i, j), v in sorted(t.coeff.items())]
                else:
                    co = [[i, j, l, _fmt_rat(v)] for (i, j, l), v in sorted(t.coeff.items())]
                item = {"pole": t.pole, "out": t.out}
                if t.deriv:
                    item["deriv"] = t.deriv
                item["coeff"] = co
                ts.append(item)
            opes.append({"pair": [a, b], "terms": ts})
        out = {"name": spec.name, "kind": "ope", "fields": fields, "opes": opes}
        if spec.central_symbol != "xi":
            out["central-symbol"] = spec.central_symbol
    else:
        raise TypeError(f"cannot serialise {type(spec).__name__}")
    if params:
        out["parameters"] = params
    return _plain(out)
