"""Single-variable expression DSL: parsing, printing, 2-jet evaluation.

Grammar (whitespace between tokens is insignificant):

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := base ('^' exponent)?
    base     := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')' | '-' factor
    exponent := '-'? NUMBER
    FUNC     := 'exp' | 'log' | 'sin' | 'cos'
    NUMBER   := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]

'+', '-', '*', '/' are left-associative.  Power binds tighter than unary
minus, which binds tighter than '*' and '/', which bind tighter than '+'
and '-'; so "-x^2" is -(x^2) and "2*x^3 - x" is (2*(x^3)) - x.  Exponents
are numeric literals only, so every power node carries a constant real
exponent.  A '-' applied directly to a number literal folds into the
constant.

`to_source` renders an AST back to text such that parsing the result yields
an equal AST, and `parse_function` pairs an AST with an open evaluation
domain.  Evaluation propagates `Jet2` values, so first and second
derivatives are exact up to rounding.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, NonFiniteError, ParseError
from .jets import Jet2, Number


@dataclass(frozen=True, slots=True)
class Const:
    value: float


@dataclass(frozen=True, slots=True)
class Var:
    pass


@dataclass(frozen=True, slots=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True, slots=True)
class Pow:
    base: "Node"
    exponent: float


@dataclass(frozen=True, slots=True)
class Call:
    func: str  # one of exp log sin cos
    arg: "Node"


Node = Const | Var | Neg | BinOp | Pow | Call

FUNCTION_NAMES = ("exp", "log", "sin", "cos")

_TOKEN_RE = re.compile(
    r"(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
)


def _byte_offset(src: str, char_pos: int) -> int:
    return len(src[:char_pos].encode("utf-8"))


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {src[pos]!r}", _byte_offset(src, pos)
            )
        kind = m.lastgroup or "op"
        tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    """Recursive descent over the token list, one method per production."""

    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, char_pos: int) -> ParseError:
        return ParseError(message, _byte_offset(self.src, char_pos))

    def parse(self) -> Node:
        kind, _, cp = self.peek()
        if kind == "end":
            raise self.fail("empty input", cp)
        node = self.expr()
        kind, text, cp = self.peek()
        if kind != "end":
            raise self.fail(f"unexpected trailing input {text!r}", cp)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return Pow(node, self.exponent())
        return node

    def exponent(self) -> float:
        sign = 1.0
        kind, text, cp = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            sign = -1.0
            kind, text, cp = self.peek()
        if kind != "num":
            raise self.fail("exponent must be a numeric literal", cp)
        self.advance()
        return sign * float(text)

    def base(self) -> Node:
        kind, text, cp = self.advance()
        if kind == "num":
            return Const(float(text))
        if kind == "ident":
            if text == "x":
                return Var()
            if text in FUNCTION_NAMES:
                k2, t2, cp2 = self.advance()
                if not (k2 == "op" and t2 == "("):
                    raise self.fail(f"expected '(' after {text!r}", cp2)
                arg = self.expr()
                k3, t3, cp3 = self.advance()
                if not (k3 == "op" and t3 == ")"):
                    raise self.fail("expected ')'", cp3)
                return Call(text, arg)
            raise self.fail(f"unknown identifier {text!r}", cp)
        if kind == "op" and text == "(":
            node = self.expr()
            k2, t2, cp2 = self.advance()
            if not (k2 == "op" and t2 == ")"):
                raise self.fail("expected ')'", cp2)
            return node
        if kind == "op" and text == "-":
            operand = self.factor()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Neg(operand)
        if kind == "end":
            raise self.fail("unexpected end of input", cp)
        raise self.fail(
            f"expected a number, 'x', a function call, '(' or '-', got {text!r}", cp
        )


def parse(src: str) -> Node:
    """Parse expression source text into an AST."""
    return _Parser(src).parse()


# precedence levels used by the printer; higher binds tighter
_P_ADD, _P_MUL, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


def _prec(node: Node) -> int:
    if isinstance(node, Const):
        # a negative literal prints with a leading '-', so it parenthesizes
        # like a unary minus
        if node.value < 0.0 or (node.value == 0.0 and math.copysign(1.0, node.value) < 0.0):
            return _P_NEG
        return _P_ATOM
    if isinstance(node, (Var, Call)):
        return _P_ATOM
    if isinstance(node, Pow):
        return _P_POW
    if isinstance(node, Neg):
        return _P_NEG
    return _P_ADD if node.op in "+-" else _P_MUL


def _render(node: Node, min_prec: int) -> str:
    if isinstance(node, Const):
        s = repr(node.value)
    elif isinstance(node, Var):
        s = "x"
    elif isinstance(node, Neg):
        s = "-" + _render(node.operand, _P_NEG)
    elif isinstance(node, Pow):
        s = _render(node.base, _P_ATOM) + "^" + repr(node.exponent)
    elif isinstance(node, Call):
        s = f"{node.func}({_render(node.arg, _P_ADD)})"
    else:
        if node.op in "+-":
            s = f"{_render(node.left, _P_ADD)} {node.op} {_render(node.right, _P_MUL)}"
        else:
            s = f"{_render(node.left, _P_MUL)}{node.op}{_render(node.right, _P_NEG)}"
    if _prec(node) < min_prec:
        return "(" + s + ")"
    return s


def to_source(node: Node) -> str:
    """Render an AST to source text; parsing the result gives an equal AST."""
    return _render(node, _P_ADD)


@dataclass(frozen=True)
class Function1D:
    """A parsed single-variable function with an open evaluation domain.

    Immutable after construction; the domain is the open interval (lo, hi)
    with infinite ends allowed, and evaluation outside it raises.
    """

    ast: Node
    domain: tuple[float, float] = (-math.inf, math.inf)

    def __post_init__(self):
        lo, hi = float(self.domain[0]), float(self.domain[1])
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValueError(f"domain ends must satisfy lo < hi, got ({lo!r}, {hi!r})")
        object.__setattr__(self, "domain", (lo, hi))

    def source(self) -> str:
        return to_source(self.ast)

    def contains(self, x: float) -> bool:
        lo, hi = self.domain
        return lo < x < hi

    def jet(self, x: Number) -> Jet2:
        return eval_jet2(self, x)


def parse_function(src: str, domain: tuple[float, float] = (-math.inf, math.inf)) -> Function1D:
    """Parse source text into a `Function1D` on the given open domain."""
    return Function1D(parse(src), domain)


def _eval(node: Node, seed: Jet2) -> Jet2:
    if isinstance(node, Const):
        if not math.isfinite(node.value):
            raise NonFiniteError(f"non-finite constant {node.value!r}")
        return Jet2.constant(node.value)
    if isinstance(node, Var):
        return seed
    if isinstance(node, Neg):
        return -_eval(node.operand, seed)
    if isinstance(node, Pow):
        out = _eval(node.base, seed).power(node.exponent)
    elif isinstance(node, Call):
        arg = _eval(node.arg, seed)
        out = getattr(arg, node.func)()
    else:
        a = _eval(node.left, seed)
        b = _eval(node.right, seed)
        if node.op == "+":
            out = a + b
        elif node.op == "-":
            out = a - b
        elif node.op == "*":
            out = a * b
        else:
            out = a / b
    if not out.is_finite():
        raise NonFiniteError(f"non-finite value in {to_source(node)!r}")
    return out


def eval_jet2(f: Function1D, x: Number) -> Jet2:
    """Evaluate f's 2-jet at x.

    Raises `DomainError` if x is outside the declared open domain and
    `NonFiniteError` if any intermediate value fails to be finite (log of a
    non-positive value, division by zero, overflow, zero base with negative
    exponent).
    """
    x = float(x)
    lo, hi = f.domain
    if not lo < x < hi:
        raise DomainError(f"x = {x!r} outside open domain ({lo!r}, {hi!r})")
    try:
        return _eval(f.ast, Jet2.variable(x))
    except NonFiniteError:
        raise
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise NonFiniteError(f"evaluating {f.source()!r} at x = {x!r}: {exc}") from exc
