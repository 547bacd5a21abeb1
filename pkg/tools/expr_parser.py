"""
Exact scalar expressions for projector files.

Grammar (EBNF):

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" unary)?
    atom    := INTEGER | "i" | "pi" | "sqrt(" expr ")" | "exp(" expr ")" | "(" expr ")"

Rationals are written p/q. The only names are the literals i and pi. "^" binds tighter than
a leading minus and groups to the right, so -2^2 is -4 and 2^3^2 is 2^9.
"""

import ast
import cmath
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from interfaces.scalar_expr import ScalarExpr
from utils.errors import DimensionMismatch, DivisionByZero, ExprSyntaxError

MAX_SOURCE_LENGTH = 4096
MAX_EXPONENT = 1024

_FUNCTIONS = {"sqrt": cmath.sqrt, "exp": cmath.exp}
_NAMES = {"i": 1j, "pi": math.pi}

Value = Tuple[complex, Optional[Fraction]]


def _translate(text: str, lead: int) -> Tuple[str, List[int]]:
    """Spell ^ as ** for the tokenizer; origin[k] is the position in the raw input of translated offset k."""
    out, origin = [], []
    for k, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            origin.extend((lead + k, lead + k))
        else:
            out.append(ch)
            origin.append(lead + k)
    origin.append(lead + len(text))
    return "".join(out), origin


def _fail(message: str, source: str, origin: List[int], node: Optional[ast.AST] = None) -> ExprSyntaxError:
    offset = getattr(node, "col_offset", 0) if node is not None else 0
    return ExprSyntaxError(message, source, origin[min(offset, len(origin) - 1)])


def _power(base: Value, exponent: Value, source: str, origin: List[int], node: ast.AST) -> Value:
    value, exact = base
    power, power_exact = exponent
    if power_exact is not None and power_exact.denominator == 1:
        if abs(power_exact) > MAX_EXPONENT:
            raise _fail(f"exponent larger than {MAX_EXPONENT}", source, origin, node)
        k = int(power_exact)
        if k < 0 and (exact == 0 if exact is not None else value == 0):
            raise DivisionByZero(f"zero raised to a negative power in {source!r}")
        if exact is not None:
            result = exact**k
            return complex(result), result
        return value**k, None
    if value == 0:
        return 0j, None
    return cmath.exp(power * cmath.log(value)), None


def _evaluate(node: ast.AST, source: str, origin: List[int]) -> Value:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise _fail("only integer literals are allowed", source, origin, node)
        return complex(node.value), Fraction(node.value)

    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise _fail(f"unknown name {node.id!r}", source, origin, node)
        return _NAMES[node.id], None

    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value, exact = _evaluate(node.operand, source, origin)
        if isinstance(node.op, ast.USub):
            return -value, None if exact is None else -exact
        return value, exact

    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
        return _power(_evaluate(node.left, source, origin), _evaluate(node.right, source, origin), source, origin, node)

    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        left, left_exact = _evaluate(node.left, source, origin)
        right, right_exact = _evaluate(node.right, source, origin)
        both = left_exact is not None and right_exact is not None
        if isinstance(node.op, ast.Add):
            return left + right, left_exact + right_exact if both else None
        if isinstance(node.op, ast.Sub):
            return left - right, left_exact - right_exact if both else None
        if isinstance(node.op, ast.Mult):
            return left * right, left_exact * right_exact if both else None
        if (right_exact == 0) if right_exact is not None else right == 0:
            raise DivisionByZero(f"division by zero in {source!r}")
        return left / right, left_exact / right_exact if both else None

    if isinstance(node, ast.Call):
        func = node.func
        if not isinstance(func, ast.Name) or func.id not in _FUNCTIONS:
            raise _fail("only sqrt(...) and exp(...) may be called", source, origin, node)
        if len(node.args) != 1 or node.keywords:
            raise _fail(f"{func.id} takes exactly one argument", source, origin, node)
        value, _ = _evaluate(node.args[0], source, origin)
        return _FUNCTIONS[func.id](value), None

    raise _fail(f"unsupported syntax {type(node).__name__}", source, origin, node)


def parse_scalar(expr: Union[str, bytes]) -> ScalarExpr:
    if isinstance(expr, (bytes, bytearray)):
        try:
            expr = bytes(expr).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ExprSyntaxError("input is not valid UTF-8", repr(bytes(expr)), e.start) from None
    if not isinstance(expr, str):
        raise ExprSyntaxError("expression must be a string", repr(expr), 0)
    if len(expr) > MAX_SOURCE_LENGTH:
        raise ExprSyntaxError("expression too long", expr[:32] + "...", MAX_SOURCE_LENGTH)

    stripped = expr.strip()
    if not stripped:
        raise ExprSyntaxError("empty expression", expr, 0)
    lead = len(expr) - len(expr.lstrip())
    if "**" in stripped:
        raise ExprSyntaxError("powers are written with ^", expr, lead + stripped.index("**"))
    text, origin = _translate(stripped, lead)
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as e:
        offset = max((e.offset or 1) - 1, 0)
        raise ExprSyntaxError(e.msg or "invalid syntax", expr, origin[min(offset, len(origin) - 1)]) from None
    except (ValueError, RecursionError, MemoryError) as e:
        raise ExprSyntaxError(f"unparseable input ({type(e).__name__})", expr[:64], 0) from None

    try:
        value, exact = _evaluate(tree.body, expr, origin)
    except (RecursionError, MemoryError):
        raise ExprSyntaxError("expression nested too deeply", expr[:64], 0) from None
    except (OverflowError, ValueError) as e:
        if isinstance(e, ExprSyntaxError):
            raise
        raise ExprSyntaxError(f"value out of range ({e})", expr, 0) from None

    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ExprSyntaxError("expression does not evaluate to a finite number", expr, 0)

    return ScalarExpr(
        source=ast.unparse(tree.body).replace(" ** ", "^"),
        real=value.real,
        imag=value.imag,
        exactness="exact-rational-form" if exact is not None else "evaluated",
        exact=exact,
    )


def parse_vector(entries: Sequence[str], d: int) -> List[complex]:
    if len(entries) != d:
        raise DimensionMismatch(f"vector has {len(entries)} entries, expected {d}")
    return [parse_scalar(entry).value for entry in entries]


def render_scalar(z: complex) -> str:
    """Exact expression for a double: each part is written as its dyadic rational."""
    def part(x: float) -> str:
        q = Fraction(x)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

    re, im = float(z.real), float(z.imag)
    if im == 0.0:
        return part(re)
    imag = f"{part(abs(im))}*i" if abs(im) != 1.0 else "i"
    if re == 0.0:
        return imag if im > 0 else f"-{imag}"
    return f"{part(re)} {'+' if im > 0 else '-'} {imag}"
