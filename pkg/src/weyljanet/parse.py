"""Expression grammar and the line-oriented problem file format.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | VAR | '(' expr ')'

Variables are ``x0`` (homogenized rings only), ``x1..xn`` and ``d1..dn``.
Multiplication must be written out; products are normal ordered as they are
parsed, so ``d1*x1`` reads as ``x1*d1 + 1`` in A.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, WeylAlgebra, format_element
from .errors import ParseError
from .order import AdmissibleOrder, format_order, parse_order

MAX_EXPONENT = 4096

_TOKEN = re.compile(r"\s*(?:(\d+)|([xd]\d+)|(\S))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("var", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", text, start)
            out.append((ch, ch, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, ring: WeylAlgebra):
        self.text = text
        self.ring = ring
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def expr(self) -> Element:
        acc = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Element:
        acc = self.unary()
        while self.peek()[0] == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self) -> Element:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Element:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            _, k, pos = self.take("int")
            if k > MAX_EXPONENT:
                raise ParseError(f"exponent {k} exceeds {MAX_EXPONENT}", self.text, pos)
            return base ** k
        return base

    def atom(self) -> Element:
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            c = Fraction(val)
            if self.peek()[0] == "/":
                self.take()
                _, den, dpos = self.take("int")
                if den == 0:
                    raise ParseError("division by zero", self.text, dpos)
                c = Fraction(val, den)
            return self.ring.scalar(c)
        if kind == "var":
            self.take()
            return self.variable(val, pos)
        if kind == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", self.text, pos)

    def variable(self, name: str, pos: int) -> Element:
        v = int(name[1:])
        ring = self.ring
        if name[0] == "x" and v == 0:
            if not ring.homogenized:
                raise ParseError("x0 is only available in the homogenized algebra", self.text, pos)
            return ring.x(0)
        if not 1 <= v <= ring.n:
            raise ParseError(f"unknown variable {name!r} for n={ring.n}", self.text, pos)
        return ring.x(v) if name[0] == "x" else ring.d(v)


def parse_element(text: str, ring: WeylAlgebra) -> Element:
    p = _Parser(text, ring)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", text, 0)
    e = p.expr()
    p.take("end")
    return e


def _split_vector(text: str) -> list[tuple[str, int]]:
    """Split ``[a, b, c]`` at top-level commas; returns (piece, offset) pairs."""
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("vector must be enclosed in brackets", text, lead)
    inner = s[1:-1]
    pieces, depth, start = [], 0, 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            pieces.append((inner[start:i], lead + 1 + start))
            start = i + 1
    pieces.append((inner[start:], lead + 1 + start))
    return pieces


def parse_vector(text: str, ring: WeylAlgebra, rank: int) -> Element:
    """``[f1, ..., fl]``; a bare expression is accepted when the rank is 1."""
    if not text.strip().startswith("["):
        if rank != 1:
            raise ParseError(f"expected a vector of length {rank}", text, 0)
        return parse_element(text, ring)
    comps = []
    for piece, off in _split_vector(text):
        try:
            comps.append(parse_element(piece, ring))
        except ParseError as exc:
            pos = None if exc.pos is None else off + exc.pos
            raise ParseError(exc.message, text, pos) from None
    if len(comps) != rank:
        raise ParseError(f"vector has {len(comps)} entries, expected {rank}", text, 0)
    if rank == 1:
        return comps[0]
    return ring.vector(comps)


def format_vector(f: Element) -> str:
    return format_element(f)


def format_matrix_row(row) -> str:
    return "[" + ", ".join(format_element(a) for a in row) + "]"


# problem files -------------------------------------------------------------------

ALGEBRAS = {
    "A": (False, False),
    "hA": (True, False),
    "grA": (False, True),
    "cA": (True, True),
}


def ring_tag(ring: WeylAlgebra) -> str:
    for tag, flags in ALGEBRAS.items():
        if flags == (ring.homogenized, ring.commutative):
            return tag
    raise AssertionError


@dataclass
class ProblemFile:
    """Header plus named sections of vectors (``generators`` is the default section)."""

    ring: WeylAlgebra
    rank: int
    order: AdmissibleOrder
    sections: dict = field(default_factory=dict)

    @property
    def generators(self) -> list[Element]:
        return self.sections.get("generators", [])

    def section(self, name: str) -> list[Element]:
        return self.sections.get(name, [])

    def header(self) -> str:
        return (f"algebra={ring_tag(self.ring)} n={self.ring.n} l={self.rank} "
                f"order={format_order(self.order)} field=QQ")

    def dumps(self) -> str:
        lines = [self.header()]
        for name, vecs in self.sections.items():
            if name != "generators" or list(self.sections)[0] != "generators":
                lines.append(f"@{name}")
            lines.extend(_format_entry(v, self.rank) for v in vecs)
        return "\n".join(lines) + "\n"


def _format_entry(v: Element, rank: int) -> str:
    return format_element(v)


def parse_header(line: str) -> tuple[WeylAlgebra, int, AdmissibleOrder]:
    fields = {}
    for tok in line.split():
        if "=" not in tok:
            raise ParseError(f"header field {tok!r} is not key=value", line, line.find(tok))
        k, v = tok.split("=", 1)
        fields[k] = v
    unknown = set(fields) - {"algebra", "n", "l", "order", "field"}
    if unknown:
        raise ParseError(f"unknown header fields {sorted(unknown)}", line, 0)
    tag = fields.get("algebra", "A")
    if tag not in ALGEBRAS:
        raise ParseError(f"unknown algebra {tag!r}", line, line.find(tag))
    if fields.get("field", "QQ") != "QQ":
        raise ParseError("only field=QQ is supported", line, line.find("field"))
    try:
        n = int(fields["n"])
        rank = int(fields.get("l", "1"))
    except (KeyError, ValueError):
        raise ParseError("header needs integer n= (and optional l=)", line, 0) from None
    if n < 0 or rank < 1:
        raise ParseError("need n >= 0 and l >= 1", line, 0)
    try:
        order = parse_order(fields.get("order", "deglex"), n)
    except ValueError as exc:
        raise ParseError(str(exc), line, line.find("order")) from None
    hom, comm = ALGEBRAS[tag]
    return WeylAlgebra(n, hom, comm), rank, order


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file; ``#`` starts a comment, blank lines are skipped."""
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty problem file")
    _, head = lines[0]
    ring, rank, order = parse_header(head)
    sections: dict[str, list] = {"generators": []}
    current = "generators"
    for lineno, ln in lines[1:]:
        if ln.startswith("@"):
            current = ln[1:].strip()
            if not re.fullmatch(r"[a-z_]+", current):
                raise ParseError(f"line {lineno}: bad section name", ln, 0)
            sections.setdefault(current, [])
            continue
        try:
            sections[current].append(parse_vector(ln, ring, rank))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc.message}", ln, exc.pos) from None
    return ProblemFile(ring, rank, order, sections)
