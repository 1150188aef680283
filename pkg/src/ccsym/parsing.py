"""Input grammar: series literals, factored rational functions, paths.

One tokenizer and one Pratt-style expression parser feed three
evaluators: Laurent series (for the symbol pipeline), factored rational
functions (for the sphere harness), and exact scalars (for points,
radii and path parameters).  Precedence is ^ above unary minus above
* and / above + and -; exponents are integer literals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import AlgebraElement, AlgebraSignature
from .errors import InputError
from .laurent import INF, LaurentSeries
from .paths import Path, circle, commutator, concat, segment
from .ratfunc import RationalFunctionA, poly_mul, poly_reduction, poly_trim
from .scalars import GR_I, GaussianRational, gaussian


@dataclass(frozen=True)
class Token:
    kind: str  # NUM NAME OP END
    text: str
    pos: int


def tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("NUM", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("NAME", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^(),":
            tokens.append(Token("OP", ch, i))
            i += 1
            continue
        raise InputError(f"unexpected character {ch!r} at position {i}")
    tokens.append(Token("END", "", n))
    return tokens


# AST: ("num", int) ("name", str) ("neg", a) ("add"/"sub"/"mul"/"div", a, b)
#      ("pow", a, int)


class ExpressionParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.idx = 0

    def peek(self) -> Token:
        return self.tokens[self.idx]

    def advance(self) -> Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.advance()
        if tok.text != text:
            raise InputError(
                f"expected {text!r} at position {tok.pos} in {self.text!r}, got {tok.text!r}"
            )
        return tok

    def fail(self, message: str):
        tok = self.peek()
        raise InputError(f"{message} at position {tok.pos} in {self.text!r}")

    def parse_expression(self):
        node = self.parse_term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            rhs = self.parse_term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().text in ("*", "/"):
            op = self.advance().text
            rhs = self.parse_unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def parse_unary(self):
        if self.peek().text == "-":
            self.advance()
            return ("neg", self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek().text == "^":
            self.advance()
            return ("pow", base, self.parse_exponent())
        return base

    def parse_exponent(self) -> int:
        sign = 1
        if self.peek().text == "-":
            self.advance()
            sign = -1
        tok = self.advance()
        if tok.kind != "NUM":
            raise InputError(
                f"exponent must be an integer literal at position {tok.pos} in {self.text!r}"
            )
        return sign * int(tok.text)

    def parse_atom(self):
        tok = self.advance()
        if tok.kind == "NUM":
            return ("num", int(tok.text))
        if tok.kind == "NAME":
            return ("name", tok.text)
        if tok.text == "(":
            node = self.parse_expression()
            self.expect(")")
            return node
        raise InputError(
            f"unexpected token {tok.text!r} at position {tok.pos} in {self.text!r}"
        )

    def parse_full(self):
        node = self.parse_expression()
        tok = self.peek()
        if tok.kind != "END":
            raise InputError(
                f"trailing input {tok.text!r} at position {tok.pos} in {self.text!r}"
            )
        return node


def parse_expression(text: str):
    return ExpressionParser(text).parse_full()


# -- scalar evaluation ---------------------------------------------------------


def eval_scalar(node, text: str = "") -> GaussianRational:
    kind = node[0]
    if kind == "num":
        return gaussian(node[1])
    if kind == "name":
        if node[1] == "i":
            return GR_I
        raise InputError(f"cannot use {node[1]!r} in a scalar context")
    if kind == "neg":
        return -eval_scalar(node[1], text)
    if kind in ("add", "sub", "mul", "div"):
        a = eval_scalar(node[1], text)
        b = eval_scalar(node[2], text)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if not b:
            raise InputError(f"division by zero in {text!r}")
        return a / b
    if kind == "pow":
        return eval_scalar(node[1], text) ** node[2]
    raise InputError(f"bad scalar expression in {text!r}")


def parse_scalar(text: str) -> GaussianRational:
    return eval_scalar(parse_expression(text), text)


# -- algebra-element evaluation (no x) -----------------------------------------


def eval_element(node, sig: AlgebraSignature, text: str = "") -> AlgebraElement:
    kind = node[0]
    if kind == "num":
        return sig.scalar(node[1])
    if kind == "name":
        if node[1] in sig.generators:
            return sig.gen(node[1])
        if node[1] == "i":
            return sig.scalar(GR_I if sig.backend.value == "exact" else 1j)
        raise InputError(f"unknown name {node[1]!r} in {text!r}")
    if kind == "neg":
        return -eval_element(node[1], sig, text)
    if kind in ("add", "sub", "mul", "div"):
        a = eval_element(node[1], sig, text)
        b = eval_element(node[2], sig, text)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        return a * b.inverse()
    if kind == "pow":
        return eval_element(node[1], sig, text) ** node[2]
    raise InputError(f"bad element expression in {text!r}")


def parse_element(text: str, sig: AlgebraSignature) -> AlgebraElement:
    return eval_element(parse_expression(text), sig, text)


# -- Laurent series evaluation ---------------------------------------------------


def eval_series(node, sig: AlgebraSignature, trunc, text: str = "") -> LaurentSeries:
    kind = node[0]
    if kind == "num":
        return LaurentSeries(sig, {0: sig.scalar(node[1])})
    if kind == "name":
        if node[1] == "x":
            return LaurentSeries.monomial(sig, 1)
        return LaurentSeries(sig, {0: eval_element(node, sig, text)})
    if kind == "neg":
        return -eval_series(node[1], sig, trunc, text)
    if kind in ("add", "sub", "mul", "div"):
        a = eval_series(node[1], sig, trunc, text)
        b = eval_series(node[2], sig, trunc, text)
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        return a * b.truncate(trunc).inverse()
    if kind == "pow":
        base = eval_series(node[1], sig, trunc, text)
        n = node[2]
        if n < 0:
            return base.truncate(trunc) ** n
        return base ** n
    raise InputError(f"bad series expression in {text!r}")


def parse_series(text: str, sig: AlgebraSignature, trunc=INF) -> LaurentSeries:
    series = eval_series(parse_expression(text), sig, trunc, text)
    return series.truncate(trunc)


# -- factored rational function evaluation -----------------------------------------


def _polyfrac(node, sig: AlgebraSignature, text: str):
    """Evaluate a subtree as a fraction (num, den) of A-polynomials in x."""
    kind = node[0]
    one = [sig.one()]
    if kind == "num":
        return [sig.scalar(node[1])], one
    if kind == "name":
        if node[1] == "x":
            return [sig.zero(), sig.one()], one
        return [eval_element(node, sig, text)], one
    if kind == "neg":
        n, d = _polyfrac(node[1], sig, text)
        return [-c for c in n], d
    if kind in ("add", "sub"):
        n1, d1 = _polyfrac(node[1], sig, text)
        n2, d2 = _polyfrac(node[2], sig, text)
        left = poly_mul(n1, d2, sig)
        right = poly_mul(n2, d1, sig)
        size = max(len(left), len(right))
        left = left + [sig.zero()] * (size - len(left))
        right = right + [sig.zero()] * (size - len(right))
        combined = [
            a + b if kind == "add" else a - b for a, b in zip(left, right)
        ]
        return poly_trim(combined), poly_mul(d1, d2, sig)
    if kind == "mul":
        n1, d1 = _polyfrac(node[1], sig, text)
        n2, d2 = _polyfrac(node[2], sig, text)
        return poly_mul(n1, n2, sig), poly_mul(d1, d2, sig)
    if kind == "div":
        n1, d1 = _polyfrac(node[1], sig, text)
        n2, d2 = _polyfrac(node[2], sig, text)
        return poly_mul(n1, d2, sig), poly_mul(d1, n2, sig)
    if kind == "pow":
        n, d = _polyfrac(node[1], sig, text)
        e = node[2]
        if e < 0:
            n, d = d, n
            e = -e
        out_n, out_d = one, one
        for _ in range(e):
            out_n = poly_mul(out_n, n, sig)
            out_d = poly_mul(out_d, d, sig)
        return out_n, out_d
    raise InputError(f"bad function expression in {text!r}")


def _classify_poly(p: list, sig: AlgebraSignature, text: str) -> RationalFunctionA:
    """Turn an A-polynomial into factored form.  The reduction must be a
    constant, a monomial c*x^k, or affine c*(x-r); anything else needs
    explicitly factored input."""
    p = poly_trim(list(p))
    red = poly_reduction(p)
    if not red:
        raise InputError(f"nilpotent (non-invertible) factor in {text!r}")
    support = [k for k, c in enumerate(red) if c]
    c_lead = red[-1]
    c_elt = sig.scalar(c_lead)
    if len(support) == 1:
        k = support[0]
        base = ((gaussian(0), 1),) * k
        den = [sig.zero()] * k + [c_elt]
        return RationalFunctionA(sig, base, c_elt, tuple(p), tuple(den))
    if len(red) == 2:
        root = -(red[0] / red[1])
        base = ((root, 1),)
        den = [sig.scalar(-root) * c_lead, c_elt]
        return RationalFunctionA(sig, base, c_elt, tuple(p), tuple(den))
    raise InputError(
        f"factor with reduction of degree {len(red) - 1} in {text!r}; "
        "write the input as a product of (x - root)^m factors"
    )


def eval_ratfunc(node, sig: AlgebraSignature, text: str = "") -> RationalFunctionA:
    kind = node[0]
    if kind == "mul":
        return eval_ratfunc(node[1], sig, text) * eval_ratfunc(node[2], sig, text)
    if kind == "div":
        return eval_ratfunc(node[1], sig, text) * eval_ratfunc(node[2], sig, text).inverse()
    if kind == "pow":
        return eval_ratfunc(node[1], sig, text) ** node[2]
    if kind == "neg":
        return RationalFunctionA.constant(sig, -1) * eval_ratfunc(node[1], sig, text)
    if kind == "name" and node[1] == "x":
        return RationalFunctionA.monic_linear(sig, 0)
    if kind in ("num", "name"):
        return RationalFunctionA.constant(sig, eval_element(node, sig, text))
    if kind in ("add", "sub"):
        num, den = _polyfrac(node, sig, text)
        return _classify_poly(num, sig, text) * _classify_poly(den, sig, text).inverse()
    raise InputError(f"bad function expression in {text!r}")


def parse_ratfunc(text: str, sig: AlgebraSignature) -> RationalFunctionA:
    f = eval_ratfunc(parse_expression(text), sig, text)
    f.validate_poles()
    return f


# -- path literals -------------------------------------------------------------------


class PathParser(ExpressionParser):
    """Path grammar: circle(c,r[,angle]), seg(a,b), concat(p,...),
    rev(p), comm(p,q); parameters are scalar expressions."""

    def parse_path(self) -> Path:
        tok = self.advance()
        if tok.kind != "NAME":
            raise InputError(
                f"expected a path constructor at position {tok.pos} in {self.text!r}"
            )
        name = tok.text
        self.expect("(")
        if name == "circle":
            args = self.scalar_args(2, 3)
            center = complex(args[0])
            radius = complex(args[1])
            if radius.imag:
                raise InputError("circle radius must be real")
            angle = 2 * math.pi * float(complex(args[2]).real) if len(args) > 2 else 0.0
            return circle(center, radius.real, angle)
        if name == "seg":
            args = self.scalar_args(2, 2)
            return segment(complex(args[0]), complex(args[1]))
        if name == "concat":
            paths = [self.parse_path()]
            while self.peek().text == ",":
                self.advance()
                paths.append(self.parse_path())
            self.expect(")")
            return concat(*paths)
        if name == "rev":
            inner = self.parse_path()
            self.expect(")")
            return inner.reversed()
        if name == "comm":
            first = self.parse_path()
            self.expect(",")
            second = self.parse_path()
            self.expect(")")
            return commutator(first, second)
        raise InputError(f"unknown path constructor {name!r} in {self.text!r}")

    def scalar_args(self, at_least: int, at_most: int):
        args = [eval_scalar(self.parse_expression(), self.text)]
        while self.peek().text == ",":
            self.advance()
            args.append(eval_scalar(self.parse_expression(), self.text))
        self.expect(")")
        if not at_least <= len(args) <= at_most:
            raise InputError(
                f"wrong number of arguments in {self.text!r}: got {len(args)}"
            )
        return args


def parse_path(text: str) -> Path:
    parser = PathParser(text)
    path = parser.parse_path()
    tok = parser.peek()
    if tok.kind != "END":
        raise InputError(f"trailing input {tok.text!r} at position {tok.pos} in {text!r}")
    return path
