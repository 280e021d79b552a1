"""Raviolo functions and distributions in one and two variables.

The degree-0 part of the one-variable ring is spanned by powers ``z**n``
and the degree-1 part by the symbols ``Omega^m`` (``m >= 0``), which behave
like ``z**(-m-1)``: ``z**n * Omega^m = Omega^(m-n)`` for ``n <= m`` and
vanishes otherwise, while two degree-1 elements multiply to zero.

Scalars are rationals extended by a single odd central parameter ``xi``
with ``xi**2 = 0``.  Everything here is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Mapping, Optional, Tuple

__all__ = [
    "Scalar",
    "as_scalar",
    "TruncationError",
    "RavSeries",
    "BiRavExpansion",
    "mul",
    "d_z",
    "residue",
    "expand_omega_zw",
    "expand_omega_z_small_zw",
    "KMonomial",
    "expand",
    "REGIMES",
]

Rat = Fraction


class TruncationError(ValueError):
    """A coefficient at or beyond the trusted truncation boundary was requested."""


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, Scalar):
        if v.xi:
            raise TypeError("expected a rational, got a value with a xi part")
        return v.rat
    return Fraction(v)


@dataclass(frozen=True)
class Scalar:
    """``rat + xi_coeff * xi`` with ``xi`` odd and central, so ``xi*xi = 0``."""

    rat: Fraction = Fraction(0)
    xi: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rat", Fraction(self.rat))
        object.__setattr__(self, "xi", Fraction(self.xi))

    @staticmethod
    def of(v) -> "Scalar":
        return as_scalar(v)

    def __bool__(self):
        return bool(self.rat) or bool(self.xi)

    def __add__(self, o):
        o = as_scalar(o)
        return Scalar(self.rat + o.rat, self.xi + o.xi)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.rat, -self.xi)

    def __sub__(self, o):
        return self + (-as_scalar(o))

    def __rsub__(self, o):
        return as_scalar(o) - self

    def __mul__(self, o):
        o = as_scalar(o)
        return Scalar(self.rat * o.rat, self.rat * o.xi + self.xi * o.rat)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _q(o)
        return Scalar(self.rat / o, self.xi / o)

    def __eq__(self, o):
        try:
            o = as_scalar(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.rat == o.rat and self.xi == o.xi

    def __hash__(self):
        return hash((self.rat, self.xi))

    def is_rational(self) -> bool:
        return self.xi == 0

    def __str__(self):
        if not self.xi:
            return str(self.rat)
        x = "xi" if self.xi == 1 else ("-xi" if self.xi == -1 else f"{self.xi}*xi")
        if not self.rat:
            return x
        return f"{self.rat}+{x}" if not x.startswith("-") else f"{self.rat}{x}"

    __repr__ = __str__


XI = Scalar(0, 1)


def as_scalar(v) -> Scalar:
    if isinstance(v, Scalar):
        return v
    return Scalar(Fraction(v), 0)


def _clean(d: Mapping) -> Dict:
    return {k: v for k, v in d.items() if v}


# ---------------------------------------------------------------------------
# one variable


@dataclass(frozen=True)
class RavSeries:
    """Element of the one-variable raviolo distribution space.

    Parameters
    ----------
    taylor : dict
        ``n -> Scalar`` coefficients of ``z**n``.
    omega : dict
        ``m -> Scalar`` coefficients of ``Omega^m``; always finitely supported.
    order : int or None
        Taylor coefficients are trusted for ``n < order``; ``None`` means the
        Taylor part is exact (finitely supported).
    omega_floor : int
        Omega coefficients are trusted for ``m >= omega_floor``.  Products of a
        truncated Taylor part with high Omega modes lose the lowest modes.
    """

    taylor: Mapping[int, Scalar] = field(default_factory=dict)
    omega: Mapping[int, Scalar] = field(default_factory=dict)
    order: Optional[int] = None
    omega_floor: int = 0

    def __post_init__(self):
        tay = {int(k): as_scalar(v) for k, v in self.taylor.items()}
        if self.order is not None:
            tay = {k: v for k, v in tay.items() if k < self.order}
        if any(k < 0 for k in tay):
            raise ValueError("negative Taylor power")
        om = {int(k): as_scalar(v) for k, v in self.omega.items()}
        if any(k < 0 for k in om):
            raise ValueError("negative Omega index")
        object.__setattr__(self, "taylor", _clean(tay))
        object.__setattr__(self, "omega", _clean(om))

    # constructors
    @staticmethod
    def z(n: int = 1, c=1) -> "RavSeries":
        return RavSeries({n: c})

    @staticmethod
    def Omega(m: int = 0, c=1) -> "RavSeries":
        return RavSeries({}, {m: c})

    @staticmethod
    def one() -> "RavSeries":
        return RavSeries({0: 1})

    def coeff_z(self, n: int) -> Scalar:
        if self.order is not None and n >= self.order:
            raise TruncationError(f"z^{n} lies beyond truncation order {self.order}")
        return self.taylor.get(n, Scalar())

    def coeff_omega(self, m: int) -> Scalar:
        if m < self.omega_floor:
            raise TruncationError(f"Omega^{m} is below the trusted floor {self.omega_floor}")
        return self.omega.get(m, Scalar())

    def degree_parts(self):
        return self.taylor, self.omega

    def __add__(self, o: "RavSeries") -> "RavSeries":
        tay = dict(self.taylor)
        for k, v in o.taylor.items():
            tay[k] = tay.get(k, Scalar()) + v
        om = dict(self.omega)
        for k, v in o.omega.items():
            om[k] = om.get(k, Scalar()) + v
        return RavSeries(tay, om, _min_order(self.order, o.order),
                         max(self.omega_floor, o.omega_floor))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "RavSeries":
        c = as_scalar(c)
        return RavSeries({k: c * v for k, v in self.taylor.items()},
                         {k: c * v for k, v in self.omega.items()},
                         self.order, self.omega_floor)

    def __mul__(self, o):
        if isinstance(o, RavSeries):
            return mul(self, o)
        return self.scale(o)

    __rmul__ = __mul__

    def __eq__(self, o):
        if not isinstance(o, RavSeries):
            return NotImplemented
        return (self.taylor == o.taylor and self.omega == o.omega
                and self.order == o.order and self.omega_floor == o.omega_floor)

    def agrees_with(self, o: "RavSeries") -> bool:
        """Equality on the jointly trusted coefficients."""
        top = _min_order(self.order, o.order)
        floor = max(self.omega_floor, o.omega_floor)
        keys = set(self.taylor) | set(o.taylor)
        for k in keys:
            if top is not None and k >= top:
                continue
            if self.taylor.get(k, Scalar()) != o.taylor.get(k, Scalar()):
                return False
        for k in set(self.omega) | set(o.omega):
            if k >= floor and self.omega.get(k, Scalar()) != o.omega.get(k, Scalar()):
                return False
        return True

    def __hash__(self):
        return hash((tuple(sorted(self.taylor.items())), tuple(sorted(self.omega.items())),
                     self.order, self.omega_floor))

    def __repr__(self):
        parts = [f"{v}*z^{k}" for k, v in sorted(self.taylor.items())]
        parts += [f"{v}*Omega^{k}" for k, v in sorted(self.omega.items())]
        s = " + ".join(parts) or "0"
        if self.order is not None:
            s += f" + O(z^{self.order})"
        return s


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def mul(a: RavSeries, b: RavSeries) -> RavSeries:
    """Product in the raviolo ring; truncation is the minimum of the inputs."""
    tay: Dict[int, Scalar] = {}
    om: Dict[int, Scalar] = {}
    top = _min_order(a.order, b.order)
    for i, u in a.taylor.items():
        for j, v in b.taylor.items():
            if top is None or i + j < top:
                tay[i + j] = tay.get(i + j, Scalar()) + u * v
    # degree 0 times degree 1; the ring is commutative
    for x, y in ((a, b), (b, a)):
        for i, u in x.taylor.items():
            for m, v in y.omega.items():
                if i <= m:
                    om[m - i] = om.get(m - i, Scalar()) + u * v
    floor = max(a.omega_floor, b.omega_floor)
    for x, y in ((a, b), (b, a)):
        if x.order is not None and y.omega:
            floor = max(floor, max(y.omega) - x.order + 1)
    return RavSeries(tay, om, top, max(floor, 0))


def d_z(a: RavSeries) -> RavSeries:
    """``d/dz``: ``z^n -> n z^(n-1)`` and ``Omega^m -> -(m+1) Omega^(m+1)``."""
    tay = {n - 1: v * n for n, v in a.taylor.items() if n > 0}
    om = {m + 1: v * (-(m + 1)) for m, v in a.omega.items()}
    order = None if a.order is None else max(a.order - 1, 0)
    return RavSeries(tay, om, order, a.omega_floor + 1 if a.omega_floor else 0)


def residue(a: RavSeries) -> Scalar:
    """Raviolo residue: the ``Omega^0`` coefficient."""
    return a.coeff_omega(0)


# ---------------------------------------------------------------------------
# two variables
#
# Monomial keys, for variables (x, y):
#   ("PP", a, b)  x^a y^b
#   ("PO", a, m)  x^a Omega^m_y
#   ("OP", m, b)  Omega^m_x y^b
#   ("OO", n, m)  Omega^n_x Omega^m_y   (canonical orientation, x-tower first)

_Key = Tuple[str, int, int]


def _mono_mul(k1: _Key, k2: _Key):
    """Product of two basis monomials -> (sign, key) or None."""
    t1, a1, b1 = k1
    t2, a2, b2 = k2
    # split each key into (x-part, y-part) with kinds 'P' or 'O'
    xk1, yk1 = t1[0], t1[1]
    xk2, yk2 = t2[0], t2[1]
    if xk1 == "O" and xk2 == "O":
        return None
    if yk1 == "O" and yk2 == "O":
        return None
    sign = 1
    # reorder x1 y1 x2 y2 -> x1 x2 y1 y2: sign from moving x2 past y1
    if xk2 == "O" and yk1 == "O":
        sign = -sign

    def comb1(k_a, e_a, k_b, e_b):
        if k_a == "P" and k_b == "P":
            return "P", e_a + e_b
        if k_a == "P":
            return ("O", e_b - e_a) if e_a <= e_b else None
        if k_b == "P":
            return ("O", e_a - e_b) if e_b <= e_a else None
        return None

    xr = comb1(xk1, a1, xk2, a2)
    yr = comb1(yk1, b1, yk2, b2)
    if xr is None or yr is None:
        return None
    return sign, (xr[0] + yr[0], xr[1], yr[1])


@dataclass(frozen=True)
class BiRavExpansion:
    """Element of a bivariate raviolo distribution space.

    ``coeffs`` maps basis keys (see module source) to Scalars.  ``order`` holds
    the Taylor truncation in each variable (``None`` = exact) and ``floor``
    the lowest trusted Omega index in each variable's tower.
    """

    coeffs: Mapping[_Key, Scalar] = field(default_factory=dict)
    variables: Tuple[str, str] = ("z", "w")
    order: Tuple[Optional[int], Optional[int]] = (None, None)
    floor: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        out = {}
        ox, oy = self.order
        for k, v in self.coeffs.items():
            t, a, b = k
            if t not in ("PP", "PO", "OP", "OO") or a < 0 or b < 0:
                raise ValueError(f"bad bivariate key {k!r}")
            if t[0] == "P" and ox is not None and a >= ox:
                continue
            if t[1] == "P" and oy is not None and b >= oy:
                continue
            v = as_scalar(v)
            if v:
                out[(t, int(a), int(b))] = out.get((t, int(a), int(b)), Scalar()) + v
        object.__setattr__(self, "coeffs", _clean(out))

    @staticmethod
    def monomial(key: _Key, c=1, variables=("z", "w"), order=(None, None)):
        return BiRavExpansion({key: c}, variables, order)

    def degree(self, key: _Key) -> int:
        return key[0].count("O")

    def trusted(self, key: _Key) -> bool:
        t, a, b = key
        ox, oy = self.order
        fx, fy = self.floor
        if t[0] == "P" and ox is not None and a >= ox:
            return False
        if t[1] == "P" and oy is not None and b >= oy:
            return False
        if t[0] == "O" and a < fx:
            return False
        if t[1] == "O" and b < fy:
            return False
        return True

    def coeff(self, key: _Key) -> Scalar:
        if not self.trusted(key):
            raise TruncationError(f"coefficient {key} lies beyond the truncation boundary")
        return self.coeffs.get(key, Scalar())

    def _binop_meta(self, o):
        if self.variables != o.variables:
            raise ValueError("expansions live in different variable pairs")
        order = (_min_order(self.order[0], o.order[0]), _min_order(self.order[1], o.order[1]))
        floor = (max(self.floor[0], o.floor[0]), max(self.floor[1], o.floor[1]))
        return order, floor

    def __add__(self, o: "BiRavExpansion"):
        order, floor = self._binop_meta(o)
        c = dict(self.coeffs)
        for k, v in o.coeffs.items():
            c[k] = c.get(k, Scalar()) + v
        return BiRavExpansion(c, self.variables, order, floor)

    def scale(self, s):
        s = as_scalar(s)
        return BiRavExpansion({k: s * v for k, v in self.coeffs.items()},
                              self.variables, self.order, self.floor)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, BiRavExpansion):
            return self.scale(o)
        order, floor = self._binop_meta(o)
        fl = list(floor)
        # truncated Taylor parts lower the trusted Omega floor of the product
        for axis in (0, 1):
            for x, y in ((self, o), (o, self)):
                if x.order[axis] is None:
                    continue
                idx = [k[1 + axis] for k in y.coeffs if k[0][axis] == "O"]
                if idx:
                    fl[axis] = max(fl[axis], max(idx) - x.order[axis] + 1)
        c: Dict[_Key, Scalar] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in o.coeffs.items():
                r = _mono_mul(k1, k2)
                if r is None:
                    continue
                s, k = r
                c[k] = c.get(k, Scalar()) + v1 * v2 * s
        return BiRavExpansion(c, self.variables, order, (max(fl[0], 0), max(fl[1], 0)))

    __rmul__ = scale

    def is_zero(self) -> bool:
        return all(not self.trusted(k) for k in self.coeffs)

    def agrees_with(self, o: "BiRavExpansion") -> bool:
        order, floor = self._binop_meta(o)
        probe = BiRavExpansion({}, self.variables, order, floor)
        for k in set(self.coeffs) | set(o.coeffs):
            if probe.trusted(k) and self.coeffs.get(k, Scalar()) != o.coeffs.get(k, Scalar()):
                return False
        return True

    def d(self, axis: int) -> "BiRavExpansion":
        """Partial derivative in variable ``axis`` (0 = first, 1 = second)."""
        c: Dict[_Key, Scalar] = {}
        for (t, a, b), v in self.coeffs.items():
            e = (a, b)[axis]
            kind = t[axis]
            if kind == "P":
                if e == 0:
                    continue
                ne, f = e - 1, e
            else:
                ne, f = e + 1, -(e + 1)
            key = (t, ne, b) if axis == 0 else (t, a, ne)
            c[key] = c.get(key, Scalar()) + v * f
        order = tuple(None if o is None else max(o - 1, 0) if i == axis else o
                      for i, o in enumerate(self.order))
        floor = tuple(f + 1 if (i == axis and f) else f for i, f in enumerate(self.floor))
        return BiRavExpansion(c, self.variables, order, floor)

    def support(self):
        return sorted(self.coeffs)

    def __repr__(self):
        x, y = self.variables
        names = []
        for (t, a, b), v in sorted(self.coeffs.items()):
            px = f"{x}^{a}" if t[0] == "P" else f"Omega^{a}_{x}"
            py = f"{y}^{b}" if t[1] == "P" else f"Omega^{b}_{y}"
            names.append(f"{v}*{px}*{py}")
        return " + ".join(names) or "0"


# ---------------------------------------------------------------------------
# expansion morphisms

REGIMES = ("small-w", "small-z", "small-(z-w)")


def _geometric(regime: str, order: int) -> BiRavExpansion:
    """Image of the basic class: Omega^0_{z-w} (first two regimes) or Omega^0_z.

    It is the unique series killed by multiplication with the corresponding
    linear form and with unit residue.
    """
    if regime == "small-w":
        # Omega^0_{z-w} = sum_n w^n Omega^n_z
        return BiRavExpansion({("OP", n, n): 1 for n in range(order)}, ("z", "w"), (None, order))
    if regime == "small-z":
        # Omega^0_{z-w} = sum_n z^n Omega^n_w
        return BiRavExpansion({("PO", n, n): 1 for n in range(order)}, ("z", "w"), (order, None))
    if regime == "small-(z-w)":
        # Omega^0_z with z = (z-w) + w: sum_n (-(z-w))^n Omega^n_w
        return BiRavExpansion({("PO", n, n): (-1) ** n for n in range(order)},
                              ("z-w", "w"), (order, None))
    raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")


def _raise_index(e: BiRavExpansion, m: int, axis: int) -> BiRavExpansion:
    # Omega^{m+1} = -1/(m+1) d Omega^m, applied in the Taylor-side variable
    return e.d(axis).scale(Fraction(-1, m + 1))


def expand_omega_zw(m: int, regime: str, order: int = 10) -> BiRavExpansion:
    """Expand ``Omega^m_{z-w}`` (or ``Omega^m_z`` in the small-(z-w) regime).

    The basic ``m = 0`` image is raised with the derivative, which commutes
    with each expansion map; the result is truncated at ``order`` in the small
    variable.  The coefficients are the binomials ``C(m+n, n)`` with the
    regime-dependent signs.
    """
    if m < 0:
        raise ValueError("pole index must be >= 0")
    # derive with a padded order, then cut: each derivative eats one power
    base = _geometric(regime, order + m + 1)
    e = base
    for k in range(m):
        if regime == "small-w":
            e = _raise_index(e, k, 0)  # d/dz acts on Omega_z
        else:
            e = _raise_index(e, k, 0)  # d/dz (or d/d(z-w)) acts on the Taylor side
    return BiRavExpansion(e.coeffs, e.variables,
                          tuple(None if o is None else order for o in e.order))


def expand_omega_z_small_zw(m: int, order: int = 10) -> BiRavExpansion:
    return expand_omega_zw(m, "small-(z-w)", order)


@dataclass(frozen=True)
class KMonomial:
    """A product in the ring of functions on two points.

    ``c * z^a w^b (z-w)^e * Omega-factors``; ``omegas`` is an ordered tuple of
    ``(tower, index)`` with tower in ``{"z", "w", "z-w"}`` (at most two).
    """

    c: Fraction = Fraction(1)
    a: int = 0
    b: int = 0
    e: int = 0
    omegas: Tuple[Tuple[str, int], ...] = ()

    def __mul__(self, o: "KMonomial") -> "KMonomial":
        return KMonomial(self.c * o.c, self.a + o.a, self.b + o.b, self.e + o.e,
                         self.omegas + o.omegas)

    def reduce(self) -> Optional["KMonomial"]:
        """Apply ``x^n Omega^m_x = Omega^{m-n}_x`` and ``Omega_x Omega_x = 0``."""
        c, a, b, e = self.c, self.a, self.b, self.e
        oms = []
        towers = [t for t, _ in self.omegas]
        if len(towers) != len(set(towers)) or len(towers) > 2:
            return None
        for t, m in self.omegas:
            if t == "z":
                k = min(a, m + 1)
                a, m = a - k, m - k
            elif t == "w":
                k = min(b, m + 1)
                b, m = b - k, m - k
            else:
                k = min(e, m + 1)
                e, m = e - k, m - k
            if m < 0:
                return None
            oms.append((t, m))
        return KMonomial(c, a, b, e, tuple(oms))


def _poly(regime, a, b, e, order):
    """Expansion of the degree-0 polynomial ``z^a w^b (z-w)^e`` in a regime."""
    if regime in ("small-w", "small-z"):
        c = {}
        for i in range(e + 1):
            # (z-w)^e = sum_i C(e,i) z^i (-w)^(e-i)
            c[("PP", a + i, b + e - i)] = Fraction(comb(e, i) * (-1) ** (e - i))
        var = ("z", "w")
        order_t = (None, order) if regime == "small-w" else (order, None)
        return BiRavExpansion(c, var, order_t)
    # variables (u, w), u = z - w: z^a = sum_i C(a,i) u^i w^(a-i)
    c = {}
    for i in range(a + 1):
        c[("PP", i + e, a - i + b)] = Fraction(comb(a, i))
    return BiRavExpansion(c, ("z-w", "w"), (order, None))


def expand(mono: KMonomial, regime: str, order: int = 10) -> BiRavExpansion:
    """Image of a product of generators under one of the three expansion maps."""
    res = _poly(regime, mono.a, mono.b, mono.e, order).scale(mono.c)
    for tower, m in mono.omegas:
        if regime == "small-(z-w)":
            if tower == "z":
                f = expand_omega_zw(m, regime, order)
            elif tower == "w":
                f = BiRavExpansion({("PO", 0, m): 1}, ("z-w", "w"), (order, None))
            else:
                f = BiRavExpansion({("OP", m, 0): 1}, ("z-w", "w"), (order, None))
        else:
            if tower == "z-w":
                f = expand_omega_zw(m, regime, order)
            elif tower == "z":
                f = BiRavExpansion({("OP", m, 0): 1}, ("z", "w"), res.order)
            else:
                f = BiRavExpansion({("PO", 0, m): 1}, ("z", "w"), res.order)
        res = res * f
    return res
