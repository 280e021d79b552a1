"""Tiny exact evaluator for index formulas such as ``m*(m-1)/6`` or ``n+3 == m``."""
from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

_BIN = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: Fraction(a) / Fraction(b),
}
_CMP = {
    ast.Eq: lambda a, b: a == b,
    ast.NotEq: lambda a, b: a != b,
    ast.Lt: lambda a, b: a < b,
    ast.LtE: lambda a, b: a <= b,
    ast.Gt: lambda a, b: a > b,
    ast.GtE: lambda a, b: a >= b,
}


class FormulaError(ValueError):
    pass


@lru_cache(maxsize=None)
def _parse(src: str) -> ast.AST:
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        raise FormulaError(f"cannot parse formula {src!r}: {exc.msg}") from None
    for node in ast.walk(tree):
        ok = isinstance(node, (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Compare, ast.BoolOp,
                               ast.Name, ast.Constant, ast.Load, ast.USub, ast.UAdd, ast.And,
                               ast.Pow)) or type(node) in _BIN or type(node) in _CMP
        if not ok:
            raise FormulaError(f"unsupported syntax {type(node).__name__} in {src!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, int):
            raise FormulaError(f"only integer literals are allowed in {src!r}")
    return tree.body


def _ev(node, env):
    if isinstance(node, ast.Constant):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        try:
            return Fraction(env[node.id])
        except KeyError:
            raise FormulaError(f"unknown symbol {node.id!r}") from None
    if isinstance(node, ast.UnaryOp):
        v = _ev(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            e = _ev(node.right, env)
            if e.denominator != 1 or e < 0:
                raise FormulaError("exponent must be a non-negative integer")
            return _ev(node.left, env) ** int(e)
        return _BIN[type(node.op)](_ev(node.left, env), _ev(node.right, env))
    if isinstance(node, ast.Compare):
        left = _ev(node.left, env)
        for op, rnode in zip(node.ops, node.comparators):
            right = _ev(rnode, env)
            if not _CMP[type(op)](left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.BoolOp):
        return all(_ev(v, env) for v in node.values)
    raise FormulaError(f"unsupported node {type(node).__name__}")


def evaluate(src: str, env: Mapping[str, object]) -> Fraction:
    v = _ev(_parse(src), env)
    if isinstance(v, bool):
        raise FormulaError(f"{src!r} is a condition, not a value")
    return v


def holds(src: str, env: Mapping[str, object]) -> bool:
    v = _ev(_parse(src), env)
    if not isinstance(v, bool):
        raise FormulaError(f"{src!r} is not a condition")
    return v


def check(src: str, names=("m", "n")) -> None:
    """Parse-only validation used by the file loader."""
    tree = _parse(src)
    for node in ast.walk(tree):
        if isinstance(node, ast.Name) and node.id not in names:
            raise FormulaError(f"unknown symbol {node.id!r} in {src!r}")
