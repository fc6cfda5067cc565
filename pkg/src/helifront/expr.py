"""Symbolic expressions in one variable ``t``.

Profile curves, frame angles and every derived closed-form quantity in this
package are built from a small expression language:

    variable ``t``, numeric literals, constants ``pi`` and ``e``,
    binary ``+ - * / ^`` (``^`` right-associative, binds tighter than unary
    minus), unary minus, and the functions
    ``sin cos tan atan atan2 sqrt exp log abs sign``.

Expressions are immutable trees; :func:`diff` returns exact symbolic
derivatives and is closed over the grammar.  Construction through the
overloaded Python operators applies constant folding only (no further
simplification), so shapes stay predictable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Union

import numpy as np

from .errors import EvalDomainError, NonSmoothError, ParseError, UnknownIdentifierError

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Const",
    "Neg",
    "Bin",
    "Call",
    "parse",
    "evaluate",
    "diff",
    "to_source",
    "compile_scalar",
    "compile_vectorized",
    "TT",
]

_FUNCTIONS = {
    "sin": 1,
    "cos": 1,
    "tan": 1,
    "atan": 1,
    "atan2": 2,
    "sqrt": 1,
    "exp": 1,
    "log": 1,
    "abs": 1,
    "sign": 1,
    # internal: derivatives of abs/sign; evaluate like sign/zero but raise
    # NonSmoothError when the argument is exactly 0
    "_dabs": 1,
    "_dsign": 1,
}

_CONSTANTS = {"pi": math.pi, "e": math.e}

ExprLike = Union["Expr", int, float]


class Expr:
    """Base class for expression nodes.  Instances are immutable."""

    __slots__ = ()

    def __add__(self, other: ExprLike) -> "Expr":
        return _add(self, _coerce(other))

    def __radd__(self, other: ExprLike) -> "Expr":
        return _add(_coerce(other), self)

    def __sub__(self, other: ExprLike) -> "Expr":
        return _sub(self, _coerce(other))

    def __rsub__(self, other: ExprLike) -> "Expr":
        return _sub(_coerce(other), self)

    def __mul__(self, other: ExprLike) -> "Expr":
        return _mul(self, _coerce(other))

    def __rmul__(self, other: ExprLike) -> "Expr":
        return _mul(_coerce(other), self)

    def __truediv__(self, other: ExprLike) -> "Expr":
        return _div(self, _coerce(other))

    def __rtruediv__(self, other: ExprLike) -> "Expr":
        return _div(_coerce(other), self)

    def __pow__(self, other: ExprLike) -> "Expr":
        return _pow(self, _coerce(other))

    def __neg__(self) -> "Expr":
        return _neg(self)

    def __call__(self, t: float) -> float:
        return evaluate(self, t)

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True, slots=True)
class Num(Expr):
    value: float

    def __repr__(self) -> str:
        return f"Num({self.value!r})"


@dataclass(frozen=True, slots=True)
class Var(Expr):
    """The free variable ``t``."""

    def __repr__(self) -> str:
        return "Var(t)"


@dataclass(frozen=True, slots=True)
class Const(Expr):
    name: str  # "pi" or "e"

    def __repr__(self) -> str:
        return f"Const({self.name})"


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Bin(Expr):
    op: str  # one of + - * / ^
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True, slots=True)
class Call(Expr):
    fn: str
    args: tuple


TT = Var()  # the canonical variable node, handy for composing expressions


def _coerce(v: ExprLike) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float)):
        return Num(float(v))
    raise TypeError(f"cannot use {type(v).__name__} in an expression")


def _is_num(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Num) and (value is None or e.value == value)


# -- smart constructors with constant folding ------------------------------

def _add(a: Expr, b: Expr) -> Expr:
    if _is_num(a) and _is_num(b):
        return Num(a.value + b.value)
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    return Bin("+", a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_num(a) and _is_num(b):
        return Num(a.value - b.value)
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return _neg(b)
    return Bin("-", a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_num(a) and _is_num(b):
        return Num(a.value * b.value)
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if _is_num(a, -1.0):
        return _neg(b)
    if _is_num(b, -1.0):
        return _neg(a)
    return Bin("*", a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_num(a) and _is_num(b) and b.value != 0.0:
        return Num(a.value / b.value)
    if _is_num(b, 1.0):
        return a
    return Bin("/", a, b)


def _pow(a: Expr, b: Expr) -> Expr:
    if _is_num(b, 1.0):
        return a
    if _is_num(b, 0.0):
        return Num(1.0)
    if _is_num(a) and _is_num(b):
        try:
            v = float(a.value ** b.value)
        except (ValueError, OverflowError, ZeroDivisionError):
            return Bin("^", a, b)
        if isinstance(v, complex):  # negative base, fractional exponent
            return Bin("^", a, b)
        return Num(v)
    return Bin("^", a, b)


def _neg(a: Expr) -> Expr:
    if _is_num(a):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def sin(e: ExprLike) -> Expr:
    return Call("sin", (_coerce(e),))


def cos(e: ExprLike) -> Expr:
    return Call("cos", (_coerce(e),))


def tan(e: ExprLike) -> Expr:
    return Call("tan", (_coerce(e),))


def atan(e: ExprLike) -> Expr:
    return Call("atan", (_coerce(e),))


def atan2(y: ExprLike, x: ExprLike) -> Expr:
    return Call("atan2", (_coerce(y), _coerce(x)))


def sqrt(e: ExprLike) -> Expr:
    return Call("sqrt", (_coerce(e),))


def exp(e: ExprLike) -> Expr:
    return Call("exp", (_coerce(e),))


def log(e: ExprLike) -> Expr:
    return Call("log", (_coerce(e),))


def absval(e: ExprLike) -> Expr:
    return Call("abs", (_coerce(e),))


def sign(e: ExprLike) -> Expr:
    return Call("sign", (_coerce(e),))


# -- tokenizer / parser -----------------------------------------------------

_Token = tuple  # (kind, text, offset)


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            tokens.append(("num", source[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(("ident", source[i:j], i))
            i = j
            continue
        if ch in "+-*/^(),":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", offset=i, expected=("expression",))
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(
                f"expected {kind!r}, found {tok[1] or 'end of input'!r}",
                offset=tok[2],
                expected=(kind,),
            )
        return self.advance()

    def parse(self) -> Expr:
        e = self.additive()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(
                f"unexpected trailing input {tok[1]!r}",
                offset=tok[2],
                expected=("end of input",),
            )
        return e

    def additive(self) -> Expr:
        e = self.multiplicative()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            e = Bin(op, e, self.multiplicative())
        return e

    def multiplicative(self) -> Expr:
        e = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            e = Bin(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.unary())
        if self.peek()[0] == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            # right-associative; exponent may carry a unary minus (t^-2)
            return Bin("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        kind, text, offset = tok
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "ident":
            self.advance()
            if text == "t":
                return Var()
            if text in _CONSTANTS:
                return Const(text)
            if text in _FUNCTIONS and not text.startswith("_"):
                self.expect("(")
                args = [self.additive()]
                while self.peek()[0] == ",":
                    self.advance()
                    args.append(self.additive())
                closing = self.peek()
                if closing[0] != ")":
                    raise ParseError(
                        "expected ')'", offset=closing[2], expected=(")", ",")
                    )
                self.advance()
                arity = _FUNCTIONS[text]
                if len(args) != arity:
                    raise ParseError(
                        f"{text} takes {arity} argument(s), got {len(args)}",
                        offset=offset,
                        expected=(f"{arity} argument(s)",),
                    )
                return Call(text, tuple(args))
            raise UnknownIdentifierError(text, offset=offset)
        if kind == "(":
            self.advance()
            e = self.additive()
            closing = self.peek()
            if closing[0] != ")":
                raise ParseError("expected ')'", offset=closing[2], expected=(")",))
            self.advance()
            return e
        raise ParseError(
            f"expected expression, found {text or 'end of input'!r}",
            offset=offset,
            expected=("number", "identifier", "("),
        )


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises :class:`~helifront.errors.ParseError` (with byte offset and the
    expected-token set) or :class:`~helifront.errors.UnknownIdentifierError`.
    """
    return _Parser(source).parse()


# -- printing ---------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _src(e: Expr) -> tuple[str, int]:
    if isinstance(e, Num):
        v = e.value
        if v < 0:
            return f"-{_fmt_num(-v)}", _PREC["neg"]
        return _fmt_num(v), _PREC["atom"]
    if isinstance(e, Var):
        return "t", _PREC["atom"]
    if isinstance(e, Const):
        return e.name, _PREC["atom"]
    if isinstance(e, Neg):
        s, p = _src(e.arg)
        if p < _PREC["neg"] or p == _PREC["neg"]:
            s = f"({s})"
        return f"-{s}", _PREC["neg"]
    if isinstance(e, Bin):
        lp = _PREC[e.op]
        ls, lq = _src(e.lhs)
        rs, rq = _src(e.rhs)
        if e.op == "^":
            # right-associative: parenthesize a left operand of equal precedence
            if lq <= lp:
                ls = f"({ls})"
            if rq < lp:
                rs = f"({rs})"
        else:
            if lq < lp:
                ls = f"({ls})"
            # - and / are left-associative: the right operand needs parens at
            # equal precedence
            if rq < lp or (rq == lp and e.op in ("-", "/", "+", "*")):
                rs = f"({rs})"
        return f"{ls} {e.op} {rs}" if e.op in "+-" else f"{ls}{e.op}{rs}", lp
    if isinstance(e, Call):
        name = {"_dabs": "sign", "_dsign": "sign"}.get(e.fn, e.fn)
        inner = ", ".join(_src(a)[0] for a in e.args)
        body = f"{name}({inner})"
        if e.fn == "_dsign":
            return f"0 * {body}", _PREC["*"]
        return body, _PREC["atom"]
    raise TypeError(f"not an Expr: {e!r}")


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_source(e: Expr) -> str:
    """Pretty-print ``e``; the output re-parses to an equivalent expression."""
    return _src(e)[0]


# -- evaluation -------------------------------------------------------------

def evaluate(e: Expr, t: float) -> float:
    """Evaluate ``e`` at ``t`` in IEEE double precision.

    Division by zero, ``log`` of a non-positive value, ``sqrt`` of a negative
    value and fractional powers of non-positive bases raise
    :class:`~helifront.errors.EvalDomainError` naming the offending
    subexpression instead of silently producing NaN/inf.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return float(t)
    if isinstance(e, Const):
        return _CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -evaluate(e.arg, t)
    if isinstance(e, Bin):
        a = evaluate(e.lhs, t)
        b = evaluate(e.rhs, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0.0:
                raise EvalDomainError("division by zero", subexpr=to_source(e))
            return a / b
        if e.op == "^":
            if float(b).is_integer():
                if a == 0.0 and b < 0:
                    raise EvalDomainError(
                        "zero base with negative exponent", subexpr=to_source(e)
                    )
                return a ** int(b)
            if a <= 0.0:
                raise EvalDomainError(
                    "fractional power of non-positive base", subexpr=to_source(e)
                )
            return a ** b
        raise TypeError(f"unknown operator {e.op!r}")
    if isinstance(e, Call):
        args = [evaluate(a, t) for a in e.args]
        return _apply(e, args)
    raise TypeError(f"not an Expr: {e!r}")


def _apply(e: Call, args: list[float]) -> float:
    fn = e.fn
    x = args[0]
    if fn == "sin":
        return math.sin(x)
    if fn == "cos":
        return math.cos(x)
    if fn == "tan":
        return math.tan(x)
    if fn == "atan":
        return math.atan(x)
    if fn == "atan2":
        return math.atan2(x, args[1])
    if fn == "sqrt":
        if x < 0.0:
            raise EvalDomainError("sqrt of negative value", subexpr=to_source(e))
        return math.sqrt(x)
    if fn == "exp":
        return math.exp(x)
    if fn == "log":
        if x <= 0.0:
            raise EvalDomainError("log of non-positive value", subexpr=to_source(e))
        return math.log(x)
    if fn == "abs":
        return abs(x)
    if fn == "sign":
        return _sign(x)
    if fn == "_dabs":
        if x == 0.0:
            raise NonSmoothError("derivative of abs at a zero of its argument")
        return _sign(x)
    if fn == "_dsign":
        if x == 0.0:
            raise NonSmoothError("derivative of sign at a zero of its argument")
        return 0.0
    raise TypeError(f"unknown function {fn!r}")


def _sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


# -- differentiation --------------------------------------------------------

_diff_cache: dict[int, Expr] = {}
_diff_keepalive: dict[int, Expr] = {}


def diff(e: Expr) -> Expr:
    """Exact symbolic derivative of ``e`` with respect to ``t``.

    Repeated application yields higher derivatives.  The derivative of
    ``abs``/``sign`` is flagged non-smooth at zeros of the argument: the
    returned tree raises :class:`~helifront.errors.NonSmoothError` when
    evaluated exactly there.
    """
    key = id(e)
    hit = _diff_cache.get(key)
    if hit is not None and _diff_keepalive.get(key) is e:
        return hit
    d = _diff(e)
    _diff_cache[key] = d
    _diff_keepalive[key] = e
    return d


def _diff(e: Expr) -> Expr:
    if isinstance(e, (Num, Const)):
        return Num(0.0)
    if isinstance(e, Var):
        return Num(1.0)
    if isinstance(e, Neg):
        return _neg(diff(e.arg))
    if isinstance(e, Bin):
        u, v = e.lhs, e.rhs
        du, dv = diff(u), diff(v)
        if e.op == "+":
            return _add(du, dv)
        if e.op == "-":
            return _sub(du, dv)
        if e.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if e.op == "/":
            return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, Num(2.0)))
        if e.op == "^":
            if _is_num(v) and float(v.value).is_integer():
                # power rule with integer exponent; avoids log-based forms
                n = v.value
                return _mul(_mul(Num(n), _pow(u, Num(n - 1.0))), du)
            # general case u^v = exp(v log u); evaluation requires u > 0
            return _mul(
                _pow(u, v),
                _add(_mul(dv, log(u)), _div(_mul(v, du), u)),
            )
        raise TypeError(f"unknown operator {e.op!r}")
    if isinstance(e, Call):
        u = e.args[0]
        du = diff(u)
        fn = e.fn
        if fn == "sin":
            return _mul(cos(u), du)
        if fn == "cos":
            return _neg(_mul(sin(u), du))
        if fn == "tan":
            return _mul(_add(Num(1.0), _pow(tan(u), Num(2.0))), du)
        if fn == "atan":
            return _div(du, _add(Num(1.0), _pow(u, Num(2.0))))
        if fn == "atan2":
            y, x = e.args
            dy, dx = diff(y), diff(x)
            num = _sub(_mul(dy, x), _mul(dx, y))
            den = _add(_pow(x, Num(2.0)), _pow(y, Num(2.0)))
            return _div(num, den)
        if fn == "sqrt":
            return _div(du, _mul(Num(2.0), sqrt(u)))
        if fn == "exp":
            return _mul(exp(u), du)
        if fn == "log":
            return _div(du, u)
        if fn == "abs":
            return _mul(Call("_dabs", (u,)), du)
        if fn == "sign":
            return _mul(Call("_dsign", (u,)), du)
        if fn in ("_dabs", "_dsign"):
            return _mul(Call("_dsign", (u,)), du)
        raise TypeError(f"unknown function {fn!r}")
    raise TypeError(f"not an Expr: {e!r}")


# -- compilation ------------------------------------------------------------

def _postorder(e: Expr) -> Iterator[Expr]:
    stack: list[tuple[Expr, bool]] = [(e, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        if isinstance(node, Neg):
            stack.append((node.arg, False))
        elif isinstance(node, Bin):
            stack.append((node.rhs, False))
            stack.append((node.lhs, False))
        elif isinstance(node, Call):
            for a in reversed(node.args):
                stack.append((a, False))


def _codegen(e: Expr) -> str:
    """Emit SSA-style source with structural common-subexpression sharing."""
    names: dict[int, str] = {}
    interned: dict[tuple, str] = {}
    lines: list[str] = []
    counter = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        return f"v{counter}"

    for node in _postorder(e):
        if id(node) in names:
            continue
        if isinstance(node, Num):
            key = ("num", node.value)
            rhs = repr(node.value)
        elif isinstance(node, Var):
            key = ("var",)
            rhs = "t"
        elif isinstance(node, Const):
            key = ("const", node.name)
            rhs = f"_c_{node.name}"
        elif isinstance(node, Neg):
            key = ("neg", names[id(node.arg)])
            rhs = f"-{names[id(node.arg)]}"
        elif isinstance(node, Bin):
            a, b = names[id(node.lhs)], names[id(node.rhs)]
            key = (node.op, a, b)
            if node.op == "^":
                if isinstance(node.rhs, Num) and float(node.rhs.value).is_integer():
                    rhs = f"{a} ** {int(node.rhs.value)}"
                else:
                    rhs = f"_exp({b} * _log({a}))"
            else:
                rhs = f"{a} {node.op} {b}"
        else:  # Call
            args = ", ".join(names[id(a)] for a in node.args)
            key = (node.fn, args)
            rhs = f"_{node.fn.lstrip('_')}({args})"
        if key in interned:
            names[id(node)] = interned[key]
            continue
        name = fresh()
        interned[key] = name
        names[id(node)] = name
        lines.append(f"    {name} = {rhs}")

    body = "\n".join(lines) if lines else "    v1 = 0.0"
    return f"def _f(t):\n{body}\n    return {names[id(e)]}\n"


_SCALAR_NS = {
    "_sin": math.sin,
    "_cos": math.cos,
    "_tan": math.tan,
    "_atan": math.atan,
    "_atan2": math.atan2,
    "_sqrt": math.sqrt,
    "_exp": math.exp,
    "_log": math.log,
    "_abs": abs,
    "_sign": _sign,
    "_dabs": _sign,
    "_dsign": lambda x: 0.0,
    "_c_pi": math.pi,
    "_c_e": math.e,
}

_VECTOR_NS = {
    "_sin": np.sin,
    "_cos": np.cos,
    "_tan": np.tan,
    "_atan": np.arctan,
    "_atan2": np.arctan2,
    "_sqrt": np.sqrt,
    "_exp": np.exp,
    "_log": np.log,
    "_abs": np.abs,
    "_sign": np.sign,
    "_dabs": np.sign,
    "_dsign": lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    "_c_pi": math.pi,
    "_c_e": math.e,
}


def _compile(e: Expr, namespace: dict) -> Callable:
    src = _codegen(e)
    glb = dict(namespace)
    exec(compile(src, "<helifront.expr>", "exec"), glb)
    return glb["_f"]


_compiled_scalar: dict[int, tuple[Expr, Callable[[float], float]]] = {}
_compiled_vector: dict[int, tuple[Expr, Callable]] = {}


def compile_scalar(e: Expr) -> Callable[[float], float]:
    """Compile ``e`` to a fast scalar function of ``t``.

    The compiled form skips per-node domain diagnostics (math errors surface
    as ordinary ``ValueError``/``ZeroDivisionError``); use :func:`evaluate`
    when attribution matters.
    """
    hit = _compiled_scalar.get(id(e))
    if hit is not None and hit[0] is e:
        return hit[1]
    fn = _compile(e, _SCALAR_NS)
    _compiled_scalar[id(e)] = (e, fn)
    return fn


def compile_vectorized(e: Expr) -> Callable:
    """Compile ``e`` to a numpy-vectorized function of a ``t`` array."""
    hit = _compiled_vector.get(id(e))
    if hit is not None and hit[0] is e:
        return hit[1]
    fn = _compile(e, _VECTOR_NS)
    _compiled_vector[id(e)] = (e, fn)
    return fn
