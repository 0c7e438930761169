"""Token encoding of systems, orderings and feature matrices.

The vocabulary has seven fixed categories: special markers, separators,
variable symbols, arithmetic operators, relational operators, plain digits
(exponents and feature values) and coefficient digits c0..c9.  Systems are
encoded either with Method-A, which completes every non-constant term so
that each variable appears with an explicit exponent, or Method-B, which
omits absent variables and the exponent 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from cadkit.features import FeatureMatrix
from cadkit.polynomial import (
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    VariableOrdering,
)

START = "<s>"
END = "</s>"
PAD = "<pad>"
SEP = "<sep>"

_SPECIAL = (START, END, PAD)
_SEPARATORS = (SEP, ";", ",")
_ARITHMETIC = ("+", "-", "*", "^")
_RELATIONAL = ("=", ">", ">=", "<", "<=", "!=")
_DIGITS = tuple(str(d) for d in range(10))
_COEFF_DIGITS = tuple(f"c{d}" for d in range(10))


class TokenizerError(PolynomialError):
    """Malformed token sequence; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at token {position})")
        self.position = position


@dataclass(frozen=True)
class Vocabulary:
    """Ordered token list for a fixed variable count; ids are positional."""

    nvars: int

    @property
    def tokens(self) -> tuple[str, ...]:
        variables = tuple(f"x{i}" for i in range(1, self.nvars + 1))
        return (
            _SPECIAL + _SEPARATORS + variables + _ARITHMETIC
            + _RELATIONAL + _DIGITS + _COEFF_DIGITS
        )

    def __len__(self) -> int:
        return 26 + self.nvars + 10

    def id_of(self, token: str) -> int:
        try:
            return self.tokens.index(token)
        except ValueError:
            raise PolynomialError(f"token not in vocabulary: {token!r}") from None

    def to_ids(self, tokens: Sequence[str]) -> list[int]:
        index = {t: i for i, t in enumerate(self.tokens)}
        try:
            return [index[t] for t in tokens]
        except KeyError as e:
            raise PolynomialError(f"token not in vocabulary: {e.args[0]!r}") from None

    def from_ids(self, ids: Sequence[int]) -> list[str]:
        table = self.tokens
        return [table[i] for i in ids]

    def to_json(self) -> str:
        return json.dumps({"nvars": self.nvars, "tokens": list(self.tokens)})

    @classmethod
    def from_json(cls, text: str) -> "Vocabulary":
        data = json.loads(text)
        vocab = cls(data["nvars"])
        if list(vocab.tokens) != data["tokens"]:
            raise PolynomialError("vocabulary file does not match the fixed layout")
        return vocab


@dataclass(frozen=True)
class TokenSequence:
    """Framed token sequence; pads only ever follow the end marker."""

    tokens: tuple[str, ...]
    kind: str

    def __post_init__(self):
        if not self.tokens or self.tokens[0] != START:
            raise PolynomialError("sequence must start with <s>")
        body = list(self.tokens[1:])
        while body and body[-1] == PAD:
            body.pop()
        if not body or body[-1] != END:
            raise PolynomialError("sequence must end with </s> (pads excepted)")
        if PAD in body or START in body:
            raise PolynomialError("misplaced <s> or <pad> token")

    def __len__(self) -> int:
        return len(self.tokens)

    def body(self) -> list[str]:
        """Tokens between <s> and </s>."""
        out = []
        for t in self.tokens[1:]:
            if t == END:
                return out
            out.append(t)
        raise PolynomialError("missing </s>")  # pragma: no cover


def _coeff_tokens(magnitude: int) -> list[str]:
    return [f"c{d}" for d in str(magnitude)]


def _digit_tokens(value: int) -> list[str]:
    if value < 0:
        raise PolynomialError("negative value in digit encoding")
    return list(str(value))


def _encode_term(
    exp: tuple[int, ...], coeff: int, scheme: str, first: bool
) -> list[str]:
    out: list[str] = []
    if coeff < 0:
        out.append("-")
    elif not first:
        out.append("+")
    magnitude = abs(coeff)
    if not any(exp):
        # constant terms are never completed
        factors = []
    elif scheme == "A":
        factors = list(enumerate(exp, start=1))
    else:
        factors = [(i, e) for i, e in enumerate(exp, start=1) if e]
    if not factors:
        out.extend(_coeff_tokens(magnitude))
        return out
    if magnitude != 1:
        out.extend(_coeff_tokens(magnitude))
        out.append("*")
    for pos, (i, e) in enumerate(factors):
        if pos:
            out.append("*")
        out.append(f"x{i}")
        if scheme == "A" or e != 1:
            out.append("^")
            out.extend(_digit_tokens(e))
    return out


def encode_system(F: PolynomialSystem, scheme: str = "A") -> TokenSequence:
    """Token sequence for a system in canonical term order.

    Constrained polynomials are followed by their relation token and c0;
    relation "none" encodes the bare polynomial.  A positive sign is elided
    only at the very start of the sequence.
    """
    if scheme not in ("A", "B"):
        raise PolynomialError(f"unknown encoding scheme: {scheme!r}")
    tokens: list[str] = [START]
    for k, (f, rel) in enumerate(F.constraints):
        if f.is_zero():
            raise PolynomialError("zero polynomial cannot be encoded")
        if k:
            tokens.append(",")
        for j, (exp, coeff) in enumerate(f.sorted_terms()):
            tokens.extend(_encode_term(exp, coeff, scheme, first=(k == 0 and j == 0)))
        if rel != "none":
            tokens.append(rel)
            tokens.append("c0")
    tokens.append(END)
    return TokenSequence(tuple(tokens), "system")


class _Stream:
    def __init__(self, tokens: Sequence[str]):
        self.tokens = list(tokens)
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        t = self.peek()
        if t is None:
            raise TokenizerError("unexpected end of input", self.pos)
        self.pos += 1
        return t

    def error(self, message: str) -> TokenizerError:
        return TokenizerError(message, self.pos)


def _decode_int(s: _Stream, prefix: str = "") -> int:
    digits = ""
    while (t := s.peek()) is not None and t.startswith(prefix) and t[len(prefix):].isdigit():
        digits += s.next()[len(prefix):]
    if not digits:
        raise s.error("expected digits")
    return int(digits)


def _decode_term(s: _Stream, nvars: int, first: bool) -> tuple[tuple[int, ...], int]:
    sign = 1
    t = s.peek()
    if t == "-":
        sign = -1
        s.next()
    elif t == "+":
        s.next()
    elif not first:
        raise s.error("expected a sign token")
    magnitude = 1
    t = s.peek()
    if t is not None and t.startswith("c"):
        magnitude = _decode_int(s, "c")
        if s.peek() == "*":
            s.next()
        else:
            return (0,) * nvars, sign * magnitude
    exp = [0] * nvars
    saw_variable = False
    while True:
        t = s.peek()
        if t is None or not (t.startswith("x") and t[1:].isdigit()):
            break
        v = int(s.next()[1:])
        if not 1 <= v <= nvars:
            raise s.error(f"variable x{v} out of range")
        e = 1
        if s.peek() == "^":
            s.next()
            e = _decode_int(s)
        exp[v - 1] += e
        saw_variable = True
        if s.peek() == "*":
            s.next()
        else:
            break
    if not saw_variable:
        raise s.error("expected a variable or coefficient")
    return tuple(exp), sign * magnitude


def decode_system(t: TokenSequence, scheme: str, nvars: int) -> PolynomialSystem:
    """Inverse of encode_system on canonical systems."""
    if scheme not in ("A", "B"):
        raise PolynomialError(f"unknown encoding scheme: {scheme!r}")
    s = _Stream(t.body())
    constraints: list[tuple[Polynomial, str]] = []
    while True:
        terms: dict[tuple[int, ...], int] = {}
        first = True
        while s.peek() is not None and (first or s.peek() in ("+", "-")):
            exp, coeff = _decode_term(s, nvars, first)
            terms[exp] = terms.get(exp, 0) + coeff
            first = False
        poly = Polynomial(nvars, {e: c for e, c in terms.items() if c})
        if poly.is_zero():
            raise s.error("decoded polynomial is zero")
        rel = "none"
        nxt = s.peek()
        if nxt in ("=", ">", ">=", "<", "<=", "!="):
            rel = s.next()
            if s.next() != "c0":
                raise s.error("expected c0 after relation")
        constraints.append((poly, rel))
        nxt = s.peek()
        if nxt is None:
            break
        if nxt != ",":
            raise s.error("expected ',' between constraints")
        s.next()
    return PolynomialSystem(nvars, tuple(constraints))


def encode_ordering(o: VariableOrdering) -> TokenSequence:
    tokens = [START] + [f"x{v}" for v in o.order] + [END]
    return TokenSequence(tuple(tokens), "ordering")


def decode_ordering(t: TokenSequence) -> VariableOrdering:
    """Inverse of encode_ordering; rejects non-permutations."""
    order = []
    for pos, tok in enumerate(t.body()):
        if not (tok.startswith("x") and tok[1:].isdigit()):
            raise TokenizerError("expected a variable token", pos + 1)
        order.append(int(tok[1:]))
    return VariableOrdering(tuple(order))


FeatureGroups = Sequence[Sequence[Sequence[int]]]


def _feature_rows(obj, task: str):
    if task == "e":
        return [list(feature) for group in obj for feature in group]
    if isinstance(obj, FeatureMatrix):
        return [list(row) for row in obj.values]
    return [list(feature) for feature in obj]


def encode_features(obj, task: str) -> TokenSequence:
    """Digit-token encoding of feature rows.

    Entries within one feature are separated by <sep>, features by ";" and,
    for task_e only, per-polynomial groups by ",".  Multi-digit values are
    split into one token per decimal digit.
    """
    if task not in ("e", "f", "m", "p", "r", "s"):
        raise PolynomialError(f"unknown task: {task!r}")
    tokens: list[str] = [START]

    def emit_feature(feature: Sequence[int]) -> None:
        for j, value in enumerate(feature):
            if j:
                tokens.append(SEP)
            tokens.extend(_digit_tokens(int(value)))

    if task == "e":
        for g, group in enumerate(obj):
            if g:
                tokens.append(",")
            for i, feature in enumerate(group):
                if i:
                    tokens.append(";")
                emit_feature(feature)
    else:
        rows = _feature_rows(obj, task)
        for i, feature in enumerate(rows):
            if i:
                tokens.append(";")
            emit_feature(feature)
    tokens.append(END)
    return TokenSequence(tuple(tokens), f"features({task})")


def decode_features(t: TokenSequence) -> list[list[list[int]]]:
    """Groups of features of integer entries; single-group unless the
    sequence used ','."""
    groups: list[list[list[int]]] = [[]]
    feature: list[int] = []
    digits = ""

    def close_entry(pos: int) -> None:
        nonlocal digits
        if not digits:
            raise TokenizerError("empty feature entry", pos)
        feature.append(int(digits))
        digits = ""

    body = t.body()
    for pos, tok in enumerate(body):
        if tok.isdigit():
            digits += tok
        elif tok == SEP:
            close_entry(pos)
        elif tok in (";", ","):
            close_entry(pos)
            groups[-1].append(feature)
            feature = []
            if tok == ",":
                groups.append([])
        else:
            raise TokenizerError(f"unexpected token {tok!r}", pos)
    close_entry(len(body))
    groups[-1].append(feature)
    return groups


def pad_batch(batch: Sequence[TokenSequence]) -> list[TokenSequence]:
    """Pad every sequence with <pad> to the batch maximum length."""
    if not batch:
        raise PolynomialError("empty batch")
    width = max(len(t) for t in batch)
    return [
        TokenSequence(t.tokens + (PAD,) * (width - len(t)), t.kind)
        for t in batch
    ]
