"""Exact sparse multivariate polynomial arithmetic over the integers.

A Polynomial stores a map from exponent tuples to nonzero integer
coefficients; the zero polynomial has an empty map.  The canonical term
order is graded-lexicographic descending, which fixes printing and
tokenization.  Variables are named x1..xn (1-based externally, 0-based in
exponent tuples).

The eliminants needed by CAD projection live here as well: resultant
(subresultant PRS, with a Sylvester-determinant oracle for tests),
discriminant, multivariate gcd (subresultant PRS) and squarefree part.
"""

from __future__ import annotations

import math
import re
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from cadkit import _kernel

Exponents = tuple[int, ...]

RELATIONS = ("=", ">", ">=", "<", "<=", "!=", "none")

# Cooperative interruption point for long eliminant computations.  Callers
# with a work budget (the projection module) install a check here; it is
# polled inside the division and remainder loops with an estimated work
# weight (term pairs scaled by coefficient word counts) and may raise to
# abort.  Work-based budgets keep screening decisions deterministic.
budget_check: ContextVar[Callable[[int], None] | None] = ContextVar(
    "cadkit_budget_check", default=None
)


def _words(value: int) -> int:
    return (value.bit_length() >> 6) + 1


class PolynomialError(ValueError):
    pass


class ParseError(PolynomialError):
    """Syntax error in a polynomial expression string; carries a position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExactDivisionError(PolynomialError):
    pass


def grlex_key(exp: Exponents) -> tuple[int, Exponents]:
    return (sum(exp), exp)


# Term-pair count above which a budgeted multiplication is chunked so the
# budget check fires between chunks instead of only after the product.
_MUL_CHUNK_PAIRS = 50_000


def _mul_weight(a: dict, b: dict) -> int:
    # sample one coefficient per operand; exact sizes are not worth the scan
    wa = _words(abs(next(iter(a.values()))))
    wb = _words(abs(next(iter(b.values()))))
    return len(a) * len(b) * wa * wb


def _mul_terms_checked(a: dict, b: dict, check: Callable[[int], None]) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    if len(a) * len(b) <= _MUL_CHUNK_PAIRS:
        check(_mul_weight(a, b))
        return _kernel.mul_terms(a, b)
    out: dict = {}
    items = list(a.items())
    step = max(1, _MUL_CHUNK_PAIRS // len(b))
    for i in range(0, len(items), step):
        chunk = dict(items[i : i + step])
        check(_mul_weight(chunk, b))
        out = _kernel.add_terms(out, _kernel.mul_terms(chunk, b))
    return out


class Polynomial:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict[Exponents, int]):
        if nvars < 1:
            raise PolynomialError("nvars must be positive")
        for exp, coeff in terms.items():
            if len(exp) != nvars:
                raise PolynomialError(f"exponent vector {exp} has wrong length")
            if coeff == 0:
                raise PolynomialError("zero coefficient stored")
            if any(e < 0 for e in exp):
                raise PolynomialError(f"negative exponent in {exp}")
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: int) -> "Polynomial":
        if value == 0:
            return cls(nvars, {})
        return cls(nvars, {(0,) * nvars: int(value)})

    @classmethod
    def variable(cls, nvars: int, v: int) -> "Polynomial":
        _check_var(nvars, v)
        exp = [0] * nvars
        exp[v - 1] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def from_terms(cls, nvars: int, items: Iterable[tuple[Sequence[int], int]]) -> "Polynomial":
        terms: dict[Exponents, int] = {}
        for exp, coeff in items:
            key = tuple(int(e) for e in exp)
            s = terms.get(key, 0) + int(coeff)
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        return cls(nvars, terms)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> int:
        if self.is_zero():
            return 0
        if not self.is_constant():
            raise PolynomialError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def num_terms(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(exp) for exp in self.terms)

    def partial_degree(self, v: int) -> int:
        _check_var(self.nvars, v)
        if not self.terms:
            return 0
        return max(exp[v - 1] for exp in self.terms)

    def involves(self, v: int) -> bool:
        _check_var(self.nvars, v)
        return any(exp[v - 1] for exp in self.terms)

    def variables(self) -> list[int]:
        """1-based indices of variables that actually occur."""
        return [v for v in range(1, self.nvars + 1) if self.involves(v)]

    def sorted_terms(self) -> list[tuple[Exponents, int]]:
        """Terms in canonical (graded-lexicographic descending) order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponents, int]:
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    def leading_sign(self) -> int:
        if not self.terms:
            return 0
        return 1 if self.leading_term()[1] > 0 else -1

    def int_content(self) -> int:
        """Gcd of the coefficients (non-negative); 0 for the zero polynomial."""
        g = 0
        for coeff in self.terms.values():
            g = math.gcd(g, coeff)
            if g == 1:
                break
        return g

    # -- arithmetic --------------------------------------------------------

    def _wrap(self, terms: dict[Exponents, int]) -> "Polynomial":
        out = Polynomial.__new__(Polynomial)
        object.__setattr__(out, "nvars", self.nvars)
        object.__setattr__(out, "terms", terms)
        object.__setattr__(out, "_hash", None)
        return out

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        return self._wrap(_kernel.add_terms(self.terms, other.terms))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        return self._wrap(_kernel.sub_terms(self.terms, other.terms))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        check = budget_check.get()
        if check is None:
            return self._wrap(_kernel.mul_terms(self.terms, other.terms))
        return self._wrap(_mul_terms_checked(self.terms, other.terms, check))

    def __neg__(self) -> "Polynomial":
        return self._wrap(_kernel.scale_terms(self.terms, -1))

    def scale(self, c: int) -> "Polynomial":
        return self._wrap(_kernel.scale_terms(self.terms, int(c)))

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise PolynomialError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def derivative_wrt(self, v: int) -> "Polynomial":
        _check_var(self.nvars, v)
        i = v - 1
        terms: dict[Exponents, int] = {}
        for exp, coeff in self.terms.items():
            e = exp[i]
            if e:
                new = exp[:i] + (e - 1,) + exp[i + 1:]
                terms[new] = terms.get(new, 0) + coeff * e
        return self._wrap({e: c for e, c in terms.items() if c})

    def leading_coefficient_wrt(self, v: int) -> "Polynomial":
        """Coefficient of v^deg_v as a polynomial embedded with nvars unchanged."""
        _check_var(self.nvars, v)
        if not self.terms:
            return self
        i = v - 1
        d = self.partial_degree(v)
        terms = {
            exp[:i] + (0,) + exp[i + 1:]: coeff
            for exp, coeff in self.terms.items()
            if exp[i] == d
        }
        return self._wrap(terms)

    def coefficient_wrt(self, v: int, d: int) -> "Polynomial":
        """Coefficient of v^d, embedded with nvars unchanged."""
        _check_var(self.nvars, v)
        i = v - 1
        terms = {
            exp[:i] + (0,) + exp[i + 1:]: coeff
            for exp, coeff in self.terms.items()
            if exp[i] == d
        }
        return self._wrap(terms)

    def rename_variables(self, perm: Sequence[int]) -> "Polynomial":
        """Apply the renaming x_i -> x_perm[i-1] (perm is 1-based)."""
        if sorted(perm) != list(range(1, self.nvars + 1)):
            raise PolynomialError("perm must be a permutation of 1..nvars")
        terms: dict[Exponents, int] = {}
        for exp, coeff in self.terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(exp):
                new[perm[i] - 1] = e
            terms[tuple(new)] = coeff
        return self._wrap(terms)

    def _check_compatible(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial):
            raise TypeError(f"expected Polynomial, got {type(other).__name__}")
        if self.nvars != other.nvars:
            raise PolynomialError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self.nvars}, {format_polynomial(self)!r})"


def _check_var(nvars: int, v: int) -> None:
    if not 1 <= v <= nvars:
        raise PolynomialError(f"variable index {v} out of range 1..{nvars}")


# -- systems and orderings --------------------------------------------------


@dataclass(frozen=True)
class PolynomialSystem:
    """An ordered, non-empty list of (polynomial, relation) constraints."""

    nvars: int
    constraints: tuple[tuple[Polynomial, str], ...]

    def __post_init__(self):
        if not self.constraints:
            raise PolynomialError("system must have at least one constraint")
        for poly, rel in self.constraints:
            if poly.nvars != self.nvars:
                raise PolynomialError("constraint nvars mismatch")
            if rel not in RELATIONS:
                raise PolynomialError(f"unknown relation {rel!r}")

    @classmethod
    def of(cls, polys: Iterable[Polynomial], relation: str = "none") -> "PolynomialSystem":
        polys = list(polys)
        return cls(polys[0].nvars, tuple((p, relation) for p in polys))

    @property
    def polynomials(self) -> list[Polynomial]:
        return [p for p, _ in self.constraints]

    def rename_variables(self, perm: Sequence[int]) -> "PolynomialSystem":
        return PolynomialSystem(
            self.nvars,
            tuple((p.rename_variables(perm), rel) for p, rel in self.constraints),
        )

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.polynomials)


@dataclass(frozen=True)
class VariableOrdering:
    """A permutation of 1..n, listed greatest (first-projected) variable first."""

    order: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.order) != list(range(1, len(self.order) + 1)):
            raise PolynomialError(f"not a permutation: {self.order}")

    @property
    def nvars(self) -> int:
        return len(self.order)

    def __str__(self) -> str:
        return "[" + ", ".join(f"x{i}" for i in self.order) + "]"


def system_to_record(F: PolynomialSystem) -> dict:
    """JSON-safe record {nvars, constraints:[{poly, relation}]}."""
    return {
        "nvars": F.nvars,
        "constraints": [
            {"poly": format_polynomial(p), "relation": rel}
            for p, rel in F.constraints
        ],
    }


def system_from_record(record: dict) -> PolynomialSystem:
    nvars = record["nvars"]
    return PolynomialSystem(
        nvars,
        tuple(
            (parse(c["poly"], nvars), c["relation"])
            for c in record["constraints"]
        ),
    )


# -- parsing and printing ----------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|x(\d+)|([+\-*^()/]))")


def parse(text: str, nvars: int) -> Polynomial:
    """Parse an expression over x1..xn with integer (or ratio) coefficients.

    Grammar: sum of products of factors; factors are integers, variables
    with optional ^exponent, or parenthesized subexpressions.  Rational
    coefficients written a/b are cleared to integers for the whole
    polynomial.
    """
    tokens: list[tuple[str, object, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start()))
        elif m.group(2) is not None:
            tokens.append(("var", int(m.group(2)), m.start()))
        else:
            tokens.append((m.group(3), None, m.start()))
        pos = m.end()
    parser = _Parser(tokens, nvars, len(text))
    frac_terms = parser.parse_expression()
    parser.expect_end()
    # clear denominators, then drop zero coefficients
    denom = 1
    for coeff in frac_terms.values():
        denom = denom * coeff.denominator // math.gcd(denom, coeff.denominator)
    terms = {}
    for exp, coeff in frac_terms.items():
        c = coeff * denom
        if c:
            terms[exp] = int(c)
    return Polynomial(nvars, terms)


class _Parser:
    """Recursive-descent parser producing a Fraction-coefficient term map."""

    def __init__(self, tokens, nvars: int, text_len: int):
        self.tokens = tokens
        self.nvars = nvars
        self.i = 0
        self.text_len = text_len

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text_len)
        self.i += 1
        return tok

    def expect_end(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok[0]!r}", tok[2])

    def parse_expression(self) -> dict[Exponents, Fraction]:
        sign = 1
        tok = self.peek()
        if tok and tok[0] in "+-":
            self.next()
            sign = -1 if tok[0] == "-" else 1
        acc = self._signed(self.parse_product(), sign)
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in "+-":
                return acc
            self.next()
            sign = -1 if tok[0] == "-" else 1
            acc = self._merge(acc, self._signed(self.parse_product(), sign))

    def parse_product(self) -> dict[Exponents, Fraction]:
        acc = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in ("*", "/"):
                return acc
            self.next()
            rhs = self.parse_factor()
            if tok[0] == "/":
                if len(rhs) != 1 or any(next(iter(rhs))):
                    raise ParseError("division only by integer constants", tok[2])
                c = next(iter(rhs.values()))
                acc = {e: v / c for e, v in acc.items()}
            else:
                acc = self._multiply(acc, rhs)

    def parse_factor(self) -> dict[Exponents, Fraction]:
        tok = self.next()
        kind, value, pos = tok
        if kind == "int":
            base = {(0,) * self.nvars: Fraction(value)}
        elif kind == "var":
            if not 1 <= value <= self.nvars:
                raise ParseError(f"variable x{value} out of range 1..x{self.nvars}", pos)
            exp = [0] * self.nvars
            exp[value - 1] = 1
            base = {tuple(exp): Fraction(1)}
        elif kind == "(":
            base = self.parse_expression()
            closing = self.next()
            if closing[0] != ")":
                raise ParseError("expected ')'", closing[2])
        else:
            raise ParseError(f"unexpected token {kind!r}", pos)
        tok = self.peek()
        if tok and tok[0] == "^":
            self.next()
            etok = self.next()
            if etok[0] != "int":
                raise ParseError("exponent must be a non-negative integer", etok[2])
            base = self._power(base, etok[1])
        return base

    @staticmethod
    def _signed(terms, sign):
        return terms if sign == 1 else {e: -c for e, c in terms.items()}

    @staticmethod
    def _merge(a, b):
        out = dict(a)
        for exp, coeff in b.items():
            s = out.get(exp, Fraction(0)) + coeff
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return out

    @staticmethod
    def _multiply(a, b):
        out: dict[Exponents, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = out.get(exp, Fraction(0)) + ca * cb
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return out

    def _power(self, base, n):
        result = {(0,) * self.nvars: Fraction(1)}
        for _ in range(n):
            result = self._multiply(result, base)
        return result


def format_polynomial(f: Polynomial) -> str:
    """Canonical string form; parse(format(f), f.nvars) == f."""
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for idx, (exp, coeff) in enumerate(f.sorted_terms()):
        factors = [
            f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
            for i, e in enumerate(exp)
            if e
        ]
        mag = abs(coeff)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if idx == 0:
            parts.append(body if coeff > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if coeff > 0 else '-'} {body}")
    return " ".join(parts)


# -- exact division ----------------------------------------------------------


def divexact(f: Polynomial, d: Polynomial) -> Polynomial:
    """Exact quotient f / d; raises ExactDivisionError if d does not divide f."""
    f._check_compatible(d)
    if d.is_zero():
        raise ExactDivisionError("division by zero polynomial")
    if f.is_zero():
        return f
    d_lead_exp, d_lead_coeff = d.leading_term()
    quotient: dict[Exponents, int] = {}
    rem = f.terms
    check = budget_check.get()
    d_size = len(d.terms)
    while rem:
        r_exp = max(rem, key=grlex_key)
        r_coeff = rem[r_exp]
        if check is not None:
            check(d_size * _words(abs(r_coeff)))
        q_exp = tuple(a - b for a, b in zip(r_exp, d_lead_exp))
        if any(e < 0 for e in q_exp) or r_coeff % d_lead_coeff:
            raise ExactDivisionError("not an exact division")
        q_coeff = r_coeff // d_lead_coeff
        quotient[q_exp] = q_coeff
        rem = _kernel.sub_terms(rem, _kernel.mul_monomial(d.terms, q_exp, q_coeff))
    return Polynomial(f.nvars, quotient)


# -- univariate view helpers (coefficients are Polynomials) ------------------


def _univariate(f: Polynomial, v: int) -> dict[int, Polynomial]:
    """View f as univariate in v: degree -> coefficient polynomial (v-free)."""
    i = v - 1
    buckets: dict[int, dict[Exponents, int]] = {}
    for exp, coeff in f.terms.items():
        d = exp[i]
        buckets.setdefault(d, {})[exp[:i] + (0,) + exp[i + 1:]] = coeff
    return {d: Polynomial(f.nvars, t) for d, t in buckets.items()}


def _from_univariate(coeffs: dict[int, Polynomial], v: int, nvars: int) -> Polynomial:
    i = v - 1
    terms: dict[Exponents, int] = {}
    for d, poly in coeffs.items():
        for exp, coeff in poly.terms.items():
            terms[exp[:i] + (d,) + exp[i + 1:]] = coeff
    return Polynomial(nvars, terms)


def _uni_prem(
    f: dict[int, Polynomial], g: dict[int, Polynomial], nvars: int
) -> dict[int, Polynomial]:
    """Pseudo-remainder prem(f, g) = lc(g)^(deg f - deg g + 1) * f mod g."""
    df = max(f)
    dg = max(g)
    if df < dg:
        raise PolynomialError("prem requires deg f >= deg g")
    lg = g[dg]
    r = dict(f)
    e = df - dg + 1
    check = budget_check.get()
    while r and max(r) >= dg:
        if check is not None:
            check(1)
        dr = max(r)
        lr = r[dr]
        new: dict[int, Polynomial] = {}
        for d, c in r.items():
            if d != dr:
                new[d] = lg * c
        for d, c in g.items():
            if d != dg:
                nd = d + dr - dg
                val = new.get(nd, Polynomial.zero(nvars)) - lr * c
                if val:
                    new[nd] = val
                else:
                    new.pop(nd, None)
        r = new
        e -= 1
    if e > 0 and r:
        factor = lg ** e
        r = {d: factor * c for d, c in r.items()}
    return r


def _uni_content(f: dict[int, Polynomial], nvars: int) -> Polynomial:
    """Gcd of the coefficient polynomials of a univariate view."""
    acc = Polynomial.zero(nvars)
    for c in f.values():
        acc = gcd(acc, c)
        if acc.is_constant() and abs(acc.constant_value()) == 1:
            return Polynomial.constant(nvars, 1)
    return acc


def _uni_primitive(f: dict[int, Polynomial], nvars: int) -> tuple[Polynomial, dict[int, Polynomial]]:
    cont = _uni_content(f, nvars)
    if cont.is_constant() and abs(cont.constant_value()) == 1:
        return Polynomial.constant(nvars, 1), dict(f)
    return cont, {d: divexact(c, cont) for d, c in f.items()}


# -- gcd and squarefree part -------------------------------------------------


def _normalize_gcd(f: Polynomial) -> Polynomial:
    """Positive leading coefficient under the canonical term order."""
    if f.is_zero():
        return f
    return f if f.leading_sign() > 0 else -f


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor in Z[x1..xn], positive-lead normalized.

    Subresultant PRS with recursion on the highest occurring variable;
    integer contents are included (gcd(4x, 6x) == 2x).
    """
    a._check_compatible(b)
    if a.is_zero():
        return _normalize_gcd(b)
    if b.is_zero():
        return _normalize_gcd(a)
    nvars = a.nvars
    vars_a = set(a.variables())
    vars_b = set(b.variables())
    if not vars_a and not vars_b:
        return Polynomial.constant(nvars, math.gcd(a.constant_value(), b.constant_value()))
    if not vars_a:
        return gcd(b, a)
    if not vars_b:
        # b is a nonzero integer: gcd is gcd(int content of a, b)
        g = math.gcd(a.int_content(), abs(b.constant_value()))
        return Polynomial.constant(nvars, g)
    v = max(vars_a | vars_b)
    ua = _univariate(a, v)
    ub = _univariate(b, v)
    if max(ua) < max(ub):
        ua, ub = ub, ua
    if max(ub) == 0:
        # b free of v: gcd(a, b) divides every v-coefficient of a
        return gcd(_uni_content(ua, nvars), ub[0])
    cont_a, ua = _uni_primitive(ua, nvars)
    cont_b, ub = _uni_primitive(ub, nvars)
    cont = gcd(cont_a, cont_b)
    one = Polynomial.constant(nvars, 1)
    g_ = one
    h = one
    while True:
        delta = max(ua) - max(ub)
        r = _uni_prem(ua, ub, nvars)
        if not r:
            break
        if max(r) == 0:
            # nontrivial remainder of degree 0: primitive parts are coprime in v
            return _normalize_gcd(cont)
        divisor = g_ * h ** delta
        ua, ub = ub, {d: divexact(c, divisor) for d, c in r.items()}
        g_ = ua[max(ua)]
        if delta:
            h = divexact(g_ ** delta, h ** (delta - 1))
    _, pp = _uni_primitive(ub, nvars)
    return _normalize_gcd(cont * _from_univariate(pp, v, nvars))


def squarefree_part(f: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of f, content-free,
    positive-lead normalized."""
    if f.is_zero():
        raise PolynomialError("squarefree part of the zero polynomial")
    if f.is_constant():
        return Polynomial.constant(f.nvars, 1)
    g = f
    for v in f.variables():
        g = gcd(g, f.derivative_wrt(v))
        if g.is_constant():
            break
    sf = divexact(f, g)
    content = sf.int_content()
    if content > 1:
        sf = Polynomial(f.nvars, {e: c // content for e, c in sf.terms.items()})
    return _normalize_gcd(sf)


# -- resultant and discriminant ----------------------------------------------


def resultant(f: Polynomial, g: Polynomial, v: int) -> Polynomial:
    """Resultant of f and g w.r.t. v: determinant of their Sylvester matrix.

    Computed with the subresultant polynomial remainder sequence; all
    divisions are exact.  Degree-0 arguments follow the determinant
    convention res(f, c) = c^deg(f).
    """
    f._check_compatible(g)
    _check_var(f.nvars, v)
    nvars = f.nvars
    if f.is_zero() or g.is_zero():
        return Polynomial.zero(nvars)
    A = _univariate(f, v)
    B = _univariate(g, v)
    da, db = max(A), max(B)
    if da == 0 and db == 0:
        return Polynomial.constant(nvars, 1)
    if db == 0:
        return B[0] ** da
    if da == 0:
        return A[0] ** db
    cont_a, A = _uni_primitive(A, nvars)
    cont_b, B = _uni_primitive(B, nvars)
    sign = 1
    scale = (cont_a ** db) * (cont_b ** da)
    if da < db:
        if da % 2 and db % 2:
            sign = -sign
        A, B = B, A
    one = Polynomial.constant(nvars, 1)
    g_ = one
    h = one
    while True:
        dA, dB = max(A), max(B)
        delta = dA - dB
        if dA % 2 and dB % 2:
            sign = -sign
        r = _uni_prem(A, B, nvars)
        A = B
        divisor = g_ * h ** delta
        if r:
            B = {d: divexact(c, divisor) for d, c in r.items()}
        else:
            B = {}
        if not B:
            # remainder vanished while deg(A) > 0: common factor of positive degree
            if max(A) > 0:
                return Polynomial.zero(nvars)
            break
        g_ = A[max(A)]
        if delta:
            h = divexact(g_ ** delta, h ** (delta - 1))
        if max(B) == 0:
            dA = max(A)
            res_pp = divexact(B[0] ** dA, h ** (dA - 1)) if dA > 1 else B[0] ** dA
            result = scale * res_pp
            return result if sign > 0 else -result
    raise PolynomialError("unreachable")  # pragma: no cover


def sylvester_matrix(f: Polynomial, g: Polynomial, v: int) -> list[list[Polynomial]]:
    """The (m+n) x (m+n) Sylvester matrix of f and g w.r.t. v (m, n > 0)."""
    f._check_compatible(g)
    m = f.partial_degree(v)
    n = g.partial_degree(v)
    if m == 0 or n == 0:
        raise PolynomialError("Sylvester matrix needs positive degrees in v")
    zero = Polynomial.zero(f.nvars)
    fc = [f.coefficient_wrt(v, m - j) for j in range(m + 1)]
    gc = [g.coefficient_wrt(v, n - j) for j in range(n + 1)]
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + fc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gc + [zero] * (size - n - 1 - i))
    return rows


def sylvester_resultant(f: Polynomial, g: Polynomial, v: int) -> Polynomial:
    """Resultant via fraction-free (Bareiss) elimination of the Sylvester
    matrix; independent cross-check oracle for `resultant`."""
    rows = sylvester_matrix(f, g, v)
    n = len(rows)
    nvars = f.nvars
    one = Polynomial.constant(nvars, 1)
    prev = one
    sign = 1
    for k in range(n - 1):
        if rows[k][k].is_zero():
            for i in range(k + 1, n):
                if not rows[i][k].is_zero():
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero(nvars)
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * rows[i][j] - rows[i][k] * rows[k][j]
                rows[i][j] = divexact(num, prev)
            rows[i][k] = Polynomial.zero(nvars)
        prev = pivot
    det = rows[n - 1][n - 1]
    return det if sign > 0 else -det


def discriminant(f: Polynomial, v: int) -> Polynomial:
    """res(f, df/dv, v) with no leading-coefficient division and no sign
    adjustment (the projection module applies its own convention)."""
    if f.partial_degree(v) < 2:
        raise PolynomialError("discriminant needs degree >= 2 in v")
    return resultant(f, f.derivative_wrt(v), v)
