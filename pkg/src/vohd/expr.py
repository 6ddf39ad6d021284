"""Formula input: parsing, evaluation and Taylor-jet differentiation.

Grammar (standard precedence, ``^`` right-associative)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("-" | "+") unary | power
    power   := atom ("^" unary)?
    atom    := NUMBER | "t" | CONST | FUNC "(" expr ")" | "(" expr ")"

with ``FUNC`` one of ``ln``, ``log``, ``exp``, ``sin``, ``cos``, ``sqrt`` and
``CONST`` one of ``pi``, ``e``. ``**`` is accepted as a synonym of ``^``.

Derivatives come from truncated Taylor arithmetic on :class:`Jet` objects,
whose coefficients may be numpy arrays so that a whole grid is processed at
once.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from vohd.errors import DepthError, DomainError, ExprSyntaxError, OrderRangeError
from vohd.errors import UnknownIdentifierError

__all__ = [
    "BinOp",
    "Call",
    "Const",
    "Expression",
    "FunctionModel",
    "Jet",
    "Neg",
    "OrderFunction",
    "Var",
    "catalog",
    "evaluate",
    "jet",
    "log_jet",
    "parse",
    "resolve",
    "stirling2_table",
    "substitute",
    "to_source",
    "x_sequence",
]

FUNCTIONS = ("ln", "log", "exp", "sin", "cos", "sqrt")
CONSTANTS = {"pi": math.pi, "e": math.e}

# {{{ syntax tree


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Neg:
    arg: Expression


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Call:
    fn: str
    arg: Expression


Expression = Union[Var, Const, Neg, BinOp, Call]

# }}}

# {{{ parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))"
)


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    end = len(source)
    while pos < end:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        assert kind is not None
        start = m.start(kind)
        tokens.append(_Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str) -> None:
        self.tokens = _tokenize(source)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind == "end":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", self.tok.offset)
        self.advance()

    def parse(self) -> Expression:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Expression:
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text in ("^", "**"):
            self.advance()
            # the exponent may carry its own sign: t^-1
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expression:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text == "t":
                return Var()
            if tok.text in CONSTANTS:
                return Const(CONSTANTS[tok.text])
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call("ln" if tok.text == "log" else tok.text, arg)
            raise UnknownIdentifierError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "end":
            raise ExprSyntaxError("unexpected end of input", tok.offset)
        raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.offset)


def parse(source: str) -> Expression:
    """Parse a formula in the variable ``t`` into a syntax tree."""
    return _Parser(source).parse()


def to_source(node: Expression) -> str:
    """Print a tree back to fully parenthesized source.

    Re-parsing the output gives a tree that evaluates identically (negative
    literals come back as negations of positive ones)."""
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Const):
        text = repr(float(node.value))
        return f"({text})" if node.value < 0 else text
    if isinstance(node, Neg):
        return f"(-({to_source(node.arg)}))"
    if isinstance(node, Call):
        return f"{node.fn}({to_source(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    raise TypeError(f"not an expression: {node!r}")


def substitute(node: Expression, replacement: Expression) -> Expression:
    """Replace every occurrence of ``t`` by ``replacement``."""
    if isinstance(node, Var):
        return replacement
    if isinstance(node, Const):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.arg, replacement))
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, replacement))
    return BinOp(node.op, substitute(node.left, replacement),
                 substitute(node.right, replacement))


def _constant_value(node: Expression) -> float | None:
    """Value of a subtree free of ``t``, else None."""
    if _depends_on_t(node):
        return None
    return float(evaluate(node, 1.0))


def _depends_on_t(node: Expression) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, (Neg, Call)):
        return _depends_on_t(node.arg)
    return _depends_on_t(node.left) or _depends_on_t(node.right)

# }}}

# {{{ evaluation


def _check(cond, message: str) -> None:
    if not np.all(cond):
        raise DomainError(message)


def _is_integer(r: float) -> bool:
    return float(r).is_integer() and abs(r) < 2**31


def evaluate(node: Expression, t):
    """Evaluate ``node`` at ``t`` (a float or an array of floats)."""
    if isinstance(node, Var):
        return t
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        return -evaluate(node.arg, t)
    if isinstance(node, Call):
        u = evaluate(node.arg, t)
        if node.fn == "ln":
            _check(np.asarray(u) > 0, "ln of a non-positive number")
            return np.log(u)
        if node.fn == "sqrt":
            _check(np.asarray(u) >= 0, "sqrt of a negative number")
            return np.sqrt(u)
        return getattr(np, node.fn)(u)

    u = evaluate(node.left, t)
    if node.op == "^" and not _depends_on_t(node.right):
        r = float(evaluate(node.right, t))
        if _is_integer(r):
            if r < 0:
                _check(np.asarray(u) != 0, "division by zero")
            return np.power(np.asarray(u, dtype=float), r)
        _check(np.asarray(u) >= 0, "non-integer power of a negative number")
        if r < 0:
            _check(np.asarray(u) != 0, "division by zero")
        return np.power(np.asarray(u, dtype=float), r)

    v = evaluate(node.right, t)
    if node.op == "+":
        return u + v
    if node.op == "-":
        return u - v
    if node.op == "*":
        return u * v
    if node.op == "/":
        _check(np.asarray(v) != 0, "division by zero")
        return u / v
    # u^v with t-dependent exponent
    _check(np.asarray(u) > 0, "variable power of a non-positive base")
    return np.exp(v * np.log(u))

# }}}

# {{{ jets


@dataclass(frozen=True)
class Jet:
    """Truncated Taylor series ``sum_j c[j] (t - t0)^j``.

    ``c[j]`` is the j-th derivative divided by ``j!``. The coefficient
    array has shape ``(K + 1,) + shape(t0)``.
    """

    t0: np.ndarray
    c: np.ndarray

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    def derivative(self, j: int) -> np.ndarray:
        """The j-th derivative at ``t0``."""
        return self.c[j] * math.factorial(j)


def _variable(t0, K: int) -> np.ndarray:
    t0 = np.asarray(t0, dtype=float)
    c = np.zeros((K + 1,) + t0.shape)
    c[0] = t0
    if K >= 1:
        c[1] = 1.0
    return c


def _constant(value: float, like: np.ndarray) -> np.ndarray:
    c = np.zeros_like(like)
    c[0] = value
    return c


def _mul(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    K = u.shape[0] - 1
    w = np.zeros(np.broadcast_shapes(u.shape, v.shape))
    for k in range(K + 1):
        acc = w[k]
        for j in range(k + 1):
            acc = acc + u[j] * v[k - j]
        w[k] = acc
    return w


def _div(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    _check(v[0] != 0, "division by zero")
    K = u.shape[0] - 1
    w = np.zeros(np.broadcast_shapes(u.shape, v.shape))
    for k in range(K + 1):
        acc = u[k]
        for j in range(1, k + 1):
            acc = acc - v[j] * w[k - j]
        w[k] = acc / v[0]
    return w


def _exp(u: np.ndarray) -> np.ndarray:
    K = u.shape[0] - 1
    w = np.zeros_like(u)
    w[0] = np.exp(u[0])
    for k in range(1, K + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + j * u[j] * w[k - j]
        w[k] = acc / k
    return w


def _ln(u: np.ndarray) -> np.ndarray:
    _check(u[0] > 0, "ln of a non-positive number")
    K = u.shape[0] - 1
    w = np.zeros_like(u)
    w[0] = np.log(u[0])
    for k in range(1, K + 1):
        acc = 0.0
        for j in range(1, k):
            acc = acc + j * w[j] * u[k - j]
        w[k] = (u[k] - acc / k) / u[0]
    return w


def _sincos(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    K = u.shape[0] - 1
    s = np.zeros_like(u)
    c = np.zeros_like(u)
    s[0] = np.sin(u[0])
    c[0] = np.cos(u[0])
    for k in range(1, K + 1):
        acc_s = 0.0
        acc_c = 0.0
        for j in range(1, k + 1):
            acc_s = acc_s + j * u[j] * c[k - j]
            acc_c = acc_c + j * u[j] * s[k - j]
        s[k] = acc_s / k
        c[k] = -acc_c / k
    return s, c


def _int_power(u: np.ndarray, r: int) -> np.ndarray:
    if r < 0:
        return _div(_constant(1.0, u), _int_power(u, -r))
    result = _constant(1.0, u)
    base = u
    while r:
        if r & 1:
            result = _mul(result, base)
        r >>= 1
        if r:
            base = _mul(base, base)
    return result


def _real_power(u: np.ndarray, r: float) -> np.ndarray:
    K = u.shape[0] - 1
    if K == 0:
        _check(u[0] >= 0, "non-integer power of a negative number")
        if r < 0:
            _check(u[0] != 0, "division by zero")
        return np.power(u, r)
    _check(u[0] > 0, "non-integer power needs a positive base")
    # w = u^r  =>  u w' = r u' w
    w = np.zeros_like(u)
    w[0] = np.power(u[0], r)
    for k in range(1, K + 1):
        acc = 0.0
        for j in range(1, k + 1):
            acc = acc + (r * j - (k - j)) * u[j] * w[k - j]
        w[k] = acc / (k * u[0])
    return w


def _jet(node: Expression, tc: np.ndarray) -> np.ndarray:
    if isinstance(node, Var):
        return tc
    if isinstance(node, Const):
        return _constant(node.value, tc)
    if isinstance(node, Neg):
        return -_jet(node.arg, tc)
    if isinstance(node, Call):
        u = _jet(node.arg, tc)
        if node.fn == "ln":
            return _ln(u)
        if node.fn == "exp":
            return _exp(u)
        if node.fn == "sin":
            return _sincos(u)[0]
        if node.fn == "cos":
            return _sincos(u)[1]
        if node.fn == "sqrt":
            return _real_power(u, 0.5)
        raise DomainError(f"unknown function {node.fn!r}")
    u = _jet(node.left, tc)
    if node.op == "^":
        r = _constant_value(node.right)
        if r is not None:
            return _int_power(u, int(r)) if _is_integer(r) else _real_power(u, r)
        v = _jet(node.right, tc)
        return _exp(_mul(v, _ln(u)))
    v = _jet(node.right, tc)
    if node.op == "+":
        return u + v
    if node.op == "-":
        return u - v
    if node.op == "*":
        return _mul(u, v)
    return _div(u, v)


def jet(node: Expression, t0, K: int) -> Jet:
    """Taylor coefficients of ``node`` at ``t0`` up to order ``K``."""
    if K < 0:
        raise ValueError("jet order must be non-negative")
    t0 = np.asarray(t0, dtype=float)
    return Jet(t0, _jet(node, _variable(t0, K)))


def log_jet(node: Expression, t0, K: int) -> Jet:
    """Taylor coefficients of ``s -> x(exp(s))`` at ``s = ln t0``.

    The j-th derivative of this composition is the Hadamard-type sequence
    ``x_j(t0)`` with ``x_1 = t x'`` and ``x_{j+1} = t x_j'``.
    """
    t0 = np.asarray(t0, dtype=float)
    _check(t0 > 0, "log-variable jets need t > 0")
    tc = np.zeros((K + 1,) + t0.shape)
    term = t0.copy()
    for j in range(K + 1):
        tc[j] = term
        term = term / (j + 1)
    return Jet(t0, _jet(node, tc))


def stirling2_table(K: int) -> list[list[int]]:
    """Stirling numbers of the second kind S(k, j) for 0 <= j <= k <= K.

    (t d/dt)^k = sum_j S(k, j) t^j (d/dt)^j.
    """
    table = [[1]]
    for k in range(1, K + 1):
        prev = table[-1]
        row = [0] * (k + 1)
        for j in range(1, k + 1):
            row[j] = j * (prev[j] if j < len(prev) else 0) + prev[j - 1]
        table.append(row)
    return table

# }}}

# {{{ models


def _sample_points(a: float, b: float, count: int) -> np.ndarray:
    return np.linspace(a, b, count)


@dataclass(frozen=True)
class FunctionModel:
    """A function ``x`` on ``[a, b]`` together with its derivative sequence.

    Construction checks that jets of order ``k_max + 1`` evaluate without
    domain errors at interior sample points, and that ``x`` itself is finite
    at both endpoints.
    """

    expr: Expression
    a: float
    b: float
    k_max: int = 2
    source: str = ""
    validate: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if not 0 < self.a < self.b:
            raise DomainError("interval requires 0 < a < b")
        if not self.validate:
            return
        inner = _sample_points(self.a, self.b, 66)[1:-1]
        c = log_jet(self.expr, inner, self.k_max + 1).c
        if not np.all(np.isfinite(c)):
            raise DomainError(f"{self.label} is not smooth enough on [{self.a}, {self.b}]")
        ends = np.asarray(evaluate(self.expr, np.array([self.a, self.b])), dtype=float)
        if not np.all(np.isfinite(ends)):
            raise DomainError(f"{self.label} is not finite at the interval ends")

    @property
    def label(self) -> str:
        return self.source or to_source(self.expr)

    def value(self, t):
        return np.asarray(evaluate(self.expr, np.asarray(t, dtype=float)), dtype=float) \
            + np.zeros(np.shape(t))

    def derivative(self, t):
        return jet(self.expr, t, 1).c[1]

    def x1(self, t):
        """``t x'(t)``."""
        return log_jet(self.expr, t, 1).c[1]


def x_sequence(model: FunctionModel, t, K: int) -> np.ndarray:
    """``[x_1(t), ..., x_K(t)]`` stacked along the first axis."""
    if K < 1:
        raise DepthError("x_sequence needs K >= 1")
    if K > model.k_max:
        raise DepthError(f"requested x_{K} but the model is limited to depth {model.k_max}")
    j = log_jet(model.expr, t, K)
    fact = np.array([math.factorial(k) for k in range(1, K + 1)], dtype=float)
    return j.c[1:] * fact.reshape((-1,) + (1,) * (j.c.ndim - 1))


@dataclass(frozen=True)
class OrderFunction:
    """A variable order ``alpha: [a, b] -> (0, 1)``."""

    expr: Expression
    a: float
    b: float
    source: str = ""
    samples: int = 1000

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise DomainError("interval requires a < b")
        t = _sample_points(self.a, self.b, self.samples)
        try:
            values = self.value(t)
        except DomainError as exc:
            raise OrderRangeError(f"order {self.label} cannot be evaluated: {exc}") from exc
        if not np.all((values > 0) & (values < 1)):
            bad = t[~((values > 0) & (values < 1))][0]
            raise OrderRangeError(
                f"order {self.label} leaves (0, 1) at t = {bad:.17g}")

    @property
    def label(self) -> str:
        return self.source or to_source(self.expr)

    @property
    def is_constant(self) -> bool:
        return not _depends_on_t(self.expr)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return np.asarray(evaluate(self.expr, t), dtype=float) + np.zeros(t.shape)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return jet(self.expr, t, 1).c[1] + np.zeros(t.shape)

    def check(self, t) -> np.ndarray:
        """alpha(t), raising :class:`OrderRangeError` outside (0, 1)."""
        values = self.value(t)
        if not np.all((values > 0) & (values < 1)):
            raise OrderRangeError(f"order {self.label} leaves (0, 1)")
        return values

# }}}

# {{{ catalog

_CATALOG_CALL = re.compile(r"^\s*(lnt|logpow|rlogpow)\s*(?:\(\s*([^()]*?)\s*\))?\s*$")


@dataclass(frozen=True)
class CatalogEntry:
    """A catalog function and, when it is a log-power, its closed-form data."""

    expr: Expression
    side: str | None = None
    gamma: float | None = None


def catalog(name: str, a: float, b: float) -> CatalogEntry | None:
    """Built-in functions: ``lnt``, ``logpow(g)`` = (ln(t/a))^g, ``rlogpow(g)`` = (ln(b/t))^g."""
    m = _CATALOG_CALL.match(name)
    if m is None:
        return None
    kind, arg = m.group(1), m.group(2)
    if kind == "lnt":
        if arg is not None:
            return None
        expr = Call("ln", Var())
        # ln t is the left log-power of degree 1 only when a = 1
        return CatalogEntry(expr, "left", 1.0) if a == 1.0 else CatalogEntry(expr)
    if arg is None:
        raise ExprSyntaxError(f"{kind} needs an exponent, e.g. {kind}(2)", len(name))
    try:
        g = float(arg)
    except ValueError:
        raise ExprSyntaxError(f"bad exponent {arg!r}", name.index(arg)) from None
    if not g > 0:
        raise DomainError("log-power exponent must be positive")
    if kind == "logpow":
        return CatalogEntry(BinOp("^", Call("ln", BinOp("/", Var(), Const(a))), Const(g)),
                            "left", g)
    return CatalogEntry(BinOp("^", Call("ln", BinOp("/", Const(b), Var())), Const(g)),
                        "right", g)


def resolve(source: str, a: float, b: float) -> CatalogEntry:
    """Catalog lookup, falling back to :func:`parse`."""
    entry = catalog(source, a, b)
    if entry is not None:
        return entry
    return CatalogEntry(parse(source))

# }}}

# vim: fdm=marker
