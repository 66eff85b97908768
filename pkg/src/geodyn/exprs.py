"""Tiny arithmetic expression language for configuration files.

Grammar (infix, standard precedence):

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := ("+" | "-") factor | power
    power   := atom ("^" exponent)?
    atom    := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

Names are either chart coordinates or one of the function names below; "pi" is
the only constant.  Functions: sin cos tan exp log sqrt sinh cosh tanh
arctan.  "^" is exponentiation ("**" also works).  Compiled expressions
evaluate on plain numbers and on jet values alike, so configured fields get
exact derivatives for free.

Parsing reuses the Python grammar through ast with a strict whitelist; any
node outside the grammar above is rejected with a position.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

from . import jets as _jets

__all__ = ["ExpressionError", "CompiledExpression", "compile_expression",
           "FUNCTION_NAMES", "default_coordinate_names"]


class ExpressionError(ValueError):
    """Malformed or out-of-grammar expression, with offset info when known."""


FUNCTIONS = {
    "sin": _jets.sin,
    "cos": _jets.cos,
    "tan": _jets.tan,
    "exp": _jets.exp,
    "log": _jets.log,
    "sqrt": _jets.sqrt,
    "sinh": _jets.sinh,
    "cosh": _jets.cosh,
    "tanh": _jets.tanh,
    "arctan": _jets.arctan,
}
FUNCTION_NAMES = tuple(sorted(FUNCTIONS))

CONSTANTS = {"pi": _jets.PI}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}

_UNARYOPS = {ast.USub: lambda a: -a, ast.UAdd: lambda a: a}


def default_coordinate_names(dim: int) -> tuple:
    return tuple(f"x{i}" for i in range(dim))


@dataclass(frozen=True)
class CompiledExpression:
    """A validated expression bound to an ordered coordinate name tuple."""

    source: str
    coordinates: tuple
    _tree: ast.expression

    def __call__(self, coords):
        if len(coords) != len(self.coordinates):
            raise ExpressionError(
                f"expression over {self.coordinates} called with "
                f"{len(coords)} coordinates")
        env = dict(zip(self.coordinates, coords))
        return _eval(self._tree.body, env, self.source)

    def free_names(self) -> tuple:
        used = set()
        for node in ast.walk(self._tree):
            if isinstance(node, ast.Name):
                used.add(node.id)
        return tuple(sorted(used & set(self.coordinates)))


def compile_expression(source: str, coordinates) -> CompiledExpression:
    """Parse and validate; raises ExpressionError with a character offset."""
    if not isinstance(source, str):
        raise ExpressionError(f"expression must be a string, got {type(source).__name__}")
    coords = tuple(coordinates)
    clash = set(coords) & (set(FUNCTIONS) | set(CONSTANTS))
    if clash:
        raise ExpressionError(f"coordinate names {sorted(clash)} shadow builtins")
    # "^" means power; rewriting the token keeps power precedence above "*",
    # which the host grammar would not give the xor operator
    rewritten = source.replace("^", "**")
    try:
        tree = ast.parse(rewritten, mode="eval")
    except SyntaxError as e:
        raise ExpressionError(f"syntax error at offset {e.offset}: {source!r}") from None
    _validate(tree.body, coords, source)
    return CompiledExpression(source=source, coordinates=coords, _tree=tree)


def _where(node: ast.AST, source: str) -> str:
    col = getattr(node, "col_offset", None)
    return f" at offset {col} in {source!r}" if col is not None else f" in {source!r}"


def _validate(node: ast.AST, coords: tuple, source: str):
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExpressionError(f"non-numeric literal{_where(node, source)}")
        return
    if isinstance(node, ast.Name):
        if node.id in coords or node.id in CONSTANTS:
            return
        if node.id in FUNCTIONS:
            raise ExpressionError(
                f"function '{node.id}' used without arguments{_where(node, source)}")
        raise ExpressionError(f"unknown name '{node.id}'{_where(node, source)}")
    if isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise ExpressionError(
                f"operator {type(node.op).__name__} not allowed{_where(node, source)}")
        _validate(node.left, coords, source)
        _validate(node.right, coords, source)
        return
    if isinstance(node, ast.UnaryOp):
        if type(node.op) not in _UNARYOPS:
            raise ExpressionError(
                f"operator {type(node.op).__name__} not allowed{_where(node, source)}")
        _validate(node.operand, coords, source)
        return
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise ExpressionError(f"unknown function{_where(node, source)}")
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError(
                f"'{node.func.id}' takes exactly one argument{_where(node, source)}")
        _validate(node.args[0], coords, source)
        return
    raise ExpressionError(
        f"{type(node).__name__} not part of the expression grammar{_where(node, source)}")


def _eval(node: ast.AST, env: dict, source: str):
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        return CONSTANTS[node.id]
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env, source),
                                      _eval(node.right, env, source))
    if isinstance(node, ast.UnaryOp):
        return _UNARYOPS[type(node.op)](_eval(node.operand, env, source))
    if isinstance(node, ast.Call):
        return FUNCTIONS[node.func.id](_eval(node.args[0], env, source))
    raise ExpressionError(f"unexpected node {type(node).__name__} in {source!r}")
