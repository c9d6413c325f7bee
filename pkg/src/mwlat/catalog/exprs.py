"""Tiny arithmetic-expression evaluator for catalog data files.

Grammar: +, -, *, /, ** with integer exponents, integer literals, and
names resolved through an environment dict.  Values are FieldElements
(or anything with compatible arithmetic).  Parsed with the ast module;
anything outside the grammar raises ExprError.
"""

from __future__ import annotations

import ast

from .._rat import Q


class ExprError(ValueError):
    pass


def parse_expr(text: str, env: dict):
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as e:
        raise ExprError(f"bad expression {text!r}: {e}") from None
    return _eval(tree.body, env, text)


def _eval(node, env, src):
    if isinstance(node, ast.BinOp):
        op = node.op
        if isinstance(op, ast.Pow):
            base = _eval(node.left, env, src)
            exp = _eval_int(node.right, src)
            return base ** exp
        a = _eval(node.left, env, src)
        b = _eval(node.right, env, src)
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            return a / b
        raise ExprError(f"operator not allowed in {src!r}")
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env, src)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ExprError(f"operator not allowed in {src!r}")
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return Q(node.value)
        raise ExprError(f"only integer literals allowed in {src!r}")
    if isinstance(node, ast.Name):
        try:
            return env[node.id]
        except KeyError:
            raise ExprError(f"unknown name {node.id!r} in {src!r}") from None
    raise ExprError(f"construct not allowed in {src!r}")


def _eval_int(node, src) -> int:
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval_int(node.operand, src)
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    raise ExprError(f"exponent must be an integer literal in {src!r}")
