"""Input language: operator expressions and problem files.

Expression grammar (extends the minimal core with '/' and derivative
powers so that canonical renderings reparse):

    expr    := ['-'] term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := primary ['^' sint]
    primary := NUMBER | 'e' '[' ints ']' | 'de' '[' ints ']'
             | IDENT | '(' expr ')'

An IDENT is a coordinate name (multiplication by that coordinate) or
'd' followed by a coordinate name (the partial derivative).  '*'
composes operators, which reduces to the wedge product on
multiplication operators; '/' divides by scalar-coefficient factors
such as '2' or '(z^2+1)'; 'de[a,b]' is the ascending contraction
string.  Coordinate names starting with 'd' or named 'e'/'de' are
rejected when a cover is declared, keeping the grammar unambiguous.

Problem files are key-value sections:

    [cover]
    mode = p1             # or formal
    degrees = -2 -2 -2    # p1: ascending bundle degrees
    coords = z w          # p1 chart coordinates (default)
    # formal instead uses: charts = 3, variables = x y, rank = 6

    [cochains]
    u2[1,2] = z^-1 * e[1,2] * dz    # chart indices are 1-based
    v[1]    = e[1,2] * dz           # one index: a 0-cochain entry

    [task]
    q = 2
    bound = 8
    seed = 42
    trials = 100

Pair entries live in the coordinates of their lower chart; 0-cochain
entries in their own chart's coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cech import Cochain0, Cochain1, CoverDescriptor
from .coeffs import RationalFunction
from .exterior import AlgebraSignature, FormSection
from .operators import SuperOperator


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, expected=None):
        self.line = line
        self.col = col
        self.expected = tuple(expected) if expected else ()
        loc = f"line {line}, col {col}: " if line else ""
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{loc}{message}{exp}")


class SemanticError(ParseError):
    pass


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([+\-*/^()\[\],]))")


@dataclass
class _Token:
    kind: str  # num | ident | sym | end
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1) -> list[_Token]:
    out = []
    pos = 0
    col0 = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stray = text[pos:].strip()
            if not stray:
                break
            raise ParseError(f"stray character {stray[0]!r}", line, pos - col0 + 1)
        num, ident, sym = m.groups()
        col = m.start(m.lastindex) - col0 + 1
        if num:
            out.append(_Token("num", num, line, col))
        elif ident:
            out.append(_Token("ident", ident, line, col))
        else:
            out.append(_Token("sym", sym, line, col))
        pos = m.end()
    out.append(_Token("end", "", line, len(text) - col0 + 1))
    return out


class ExpressionParser:
    """Recursive-descent parser producing a SuperOperator."""

    def __init__(self, sig: AlgebraSignature, text: str, line: int = 1):
        self.sig = sig
        self.toks = _tokenize(text, line)
        self.pos = 0

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def take(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect_sym(self, sym: str) -> _Token:
        tok = self.take()
        if tok.kind != "sym" or tok.text != sym:
            raise ParseError(
                f"found {tok.text!r}" if tok.text else "unexpected end of input",
                tok.line,
                tok.col,
                expected=[repr(sym)],
            )
        return tok

    def parse(self) -> SuperOperator:
        op = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(
                f"trailing input {tok.text!r}", tok.line, tok.col,
                expected=["'+'", "'-'", "'*'", "'/'", "end of input"],
            )
        return op

    def expr(self) -> SuperOperator:
        negate = False
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "-":
            self.take()
            negate = True
        out = self.term()
        if negate:
            out = -out
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "+-":
                self.take()
                rhs = self.term()
                out = out + rhs if tok.text == "+" else out - rhs
            else:
                return out

    def term(self) -> SuperOperator:
        out = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "*/":
                self.take()
                rhs = self.factor()
                if tok.text == "*":
                    out = out.compose(rhs)
                else:
                    out = self._divide(out, rhs, tok)
            else:
                return out

    def _divide(self, a: SuperOperator, b: SuperOperator, tok: _Token) -> SuperOperator:
        c = _as_scalar(b)
        if c is None:
            raise SemanticError(
                "can only divide by scalar-coefficient factors", tok.line, tok.col
            )
        if c.is_zero():
            raise SemanticError("division by zero", tok.line, tok.col)
        return a.scale(c ** -1)

    def factor(self) -> SuperOperator:
        out = self.primary()
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "^":
            self.take()
            k = self.signed_int()
            out = self._power(out, k, tok)
        return out

    def _power(self, a: SuperOperator, k: int, tok: _Token) -> SuperOperator:
        c = _as_scalar(a)
        if c is not None:
            return SuperOperator.mult(FormSection.scalar(self.sig, c ** k))
        if k < 0:
            raise SemanticError(
                "negative power of a non-scalar factor", tok.line, tok.col
            )
        out = SuperOperator.identity(self.sig)
        for _ in range(k):
            out = out.compose(a)
        return out

    def signed_int(self) -> int:
        tok = self.take()
        sign = 1
        if tok.kind == "sym" and tok.text == "-":
            sign = -1
            tok = self.take()
        if tok.kind != "num":
            raise ParseError(
                f"found {tok.text!r}" if tok.text else "unexpected end of input",
                tok.line,
                tok.col,
                expected=["integer"],
            )
        return sign * int(tok.text)

    def index_list(self) -> list[int]:
        self.expect_sym("[")
        out = [self.signed_int()]
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text == ",":
                self.take()
                out.append(self.signed_int())
            else:
                self.expect_sym("]")
                return out

    def primary(self) -> SuperOperator:
        tok = self.take()
        if tok.kind == "num":
            return SuperOperator.mult(FormSection.scalar(self.sig, Fraction(tok.text)))
        if tok.kind == "sym" and tok.text == "(":
            out = self.expr()
            self.expect_sym(")")
            return out
        if tok.kind == "ident":
            return self._ident(tok)
        raise ParseError(
            f"found {tok.text!r}" if tok.text else "unexpected end of input",
            tok.line,
            tok.col,
            expected=["number", "identifier", "'('", "'e['", "'de['"],
        )

    def _ident(self, tok: _Token) -> SuperOperator:
        name = tok.text
        nxt = self.peek()
        bracketed = nxt.kind == "sym" and nxt.text == "["
        if name == "e" and bracketed:
            idx = self.index_list()
            self._check_indices(idx, tok)
            return SuperOperator.mult(FormSection.basis(self.sig, idx))
        if name == "de" and bracketed:
            idx = self.index_list()
            self._check_indices(idx, tok)
            out = SuperOperator.identity(self.sig)
            for a in idx:
                out = out.compose(SuperOperator.contraction(self.sig, a))
            return out
        if name in self.sig.coords:
            return SuperOperator.mult(
                FormSection.scalar(self.sig, RationalFunction.variable(self.sig.coords, name))
            )
        if name.startswith("d") and name[1:] in self.sig.coords:
            return SuperOperator.coord_deriv(self.sig, name[1:])
        raise SemanticError(
            f"unknown symbol {name!r}",
            tok.line,
            tok.col,
            expected=[f"one of {self.sig.coords}", "d<coordinate>", "e[...]", "de[...]"],
        )

    def _check_indices(self, idx, tok):
        seen = set()
        for a in idx:
            if not 1 <= a <= self.sig.rank:
                raise SemanticError(
                    f"generator index {a} exceeds rank {self.sig.rank}", tok.line, tok.col
                )
            if a in seen:
                raise SemanticError(f"repeated generator index {a}", tok.line, tok.col)
            seen.add(a)


def _as_scalar(op: SuperOperator):
    """RationalFunction when the operator is multiplication by one."""
    if op.is_zero():
        return RationalFunction.zero(op.sig.coords)
    zero_alpha = (0,) * len(op.sig.coords)
    if list(op.terms) == [(0, zero_alpha, 0)]:
        return op.terms[(0, zero_alpha, 0)]
    return None


def parse_expression(text: str, sig: AlgebraSignature, line: int = 1) -> SuperOperator:
    return ExpressionParser(sig, text, line).parse()


# ---------------------------------------------------------------------------
# problem files


@dataclass
class Problem:
    cover: CoverDescriptor
    cochains0: dict = field(default_factory=dict)
    cochains1: dict = field(default_factory=dict)
    task: dict = field(default_factory=dict)

    def cochain1(self, name: str) -> Cochain1:
        if name not in self.cochains1:
            raise SemanticError(f"problem declares no 1-cochain {name!r}")
        return self.cochains1[name]

    def cochain1_or_zero(self, name: str) -> Cochain1:
        return self.cochains1.get(name, Cochain1.zero(self.cover))


_ENTRY_RE = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)\[([0-9, ]+)\]$")


def parse_problem(text: str) -> Problem:
    """Parse a problem file; raises ParseError with the offending line."""
    sections: dict[str, list[tuple[int, str, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ParseError("content before the first [section] header", lineno, 1)
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, 1)
        key, value = line.split("=", 1)
        sections[current].append((lineno, key.strip(), value.strip()))

    if "cover" not in sections:
        raise ParseError("missing [cover] section")
    cover = _parse_cover(sections["cover"])

    problem = Problem(cover)
    entries0: dict[str, dict[int, SuperOperator]] = {}
    entries1: dict[str, dict[tuple[int, int], SuperOperator]] = {}
    for lineno, key, value in sections.get("cochains", []):
        m = _ENTRY_RE.match(key)
        if not m:
            raise ParseError(
                f"bad cochain entry key {key!r}", lineno, 1,
                expected=["name[i]", "name[i,j]"],
            )
        name = m.group(1)
        charts = [int(s) for s in m.group(2).replace(" ", "").split(",")]
        if any(not 1 <= c <= cover.ncharts for c in charts):
            raise SemanticError(
                f"chart index out of range 1..{cover.ncharts} in {key!r}", lineno, 1
            )
        if len(charts) == 1:
            i = charts[0] - 1
            op = parse_expression(value, cover.signature(i), lineno)
            _check_cochain_value(op, key, lineno, chart_regular=cover.is_p1)
            if name in entries1:
                raise SemanticError(f"{name!r} mixes 0- and 1-cochain entries", lineno, 1)
            dst = entries0.setdefault(name, {})
            if i in dst:
                raise SemanticError(f"duplicate entry {key!r}", lineno, 1)
            dst[i] = op
        elif len(charts) == 2:
            i, j = charts[0] - 1, charts[1] - 1
            if i >= j:
                raise SemanticError(
                    f"pair {key!r} must name increasing charts", lineno, 1
                )
            op = parse_expression(value, cover.pair_signature(i, j), lineno)
            _check_cochain_value(op, key, lineno, chart_regular=False)
            if name in entries0:
                raise SemanticError(f"{name!r} mixes 0- and 1-cochain entries", lineno, 1)
            dst1 = entries1.setdefault(name, {})
            if (i, j) in dst1:
                raise SemanticError(f"duplicate entry {key!r}", lineno, 1)
            dst1[(i, j)] = op
        else:
            raise ParseError(f"too many chart indices in {key!r}", lineno, 1)

    for name, vals in entries0.items():
        problem.cochains0[name] = Cochain0(cover, vals)
    for name, vals in entries1.items():
        problem.cochains1[name] = Cochain1(cover, vals)

    task = {"q": 2, "bound": 8, "seed": 0, "trials": 50}
    for lineno, key, value in sections.get("task", []):
        if key not in task:
            raise ParseError(f"unknown task key {key!r}", lineno, 1, expected=sorted(task))
        try:
            task[key] = int(value)
        except ValueError:
            raise ParseError(f"task {key} must be an integer", lineno, 1) from None
    problem.task = task
    return problem


def _parse_cover(entries) -> CoverDescriptor:
    data = {}
    lines = {}
    for lineno, key, value in entries:
        data[key] = value
        lines[key] = lineno
    mode = data.get("mode", "formal").lower()
    try:
        if mode == "p1":
            degrees = tuple(int(s) for s in data.get("degrees", "").split())
            coords = tuple(data.get("coords", "z w").split())
            _check_coord_names(coords, lines.get("coords", 0))
            return CoverDescriptor.p1(degrees, coords)
        if mode == "formal":
            charts = int(data.get("charts", "3"))
            variables = tuple(data.get("variables", "x").split())
            _check_coord_names(variables, lines.get("variables", 0))
            rank = int(data.get("rank", "4"))
            return CoverDescriptor.formal(charts, variables, rank)
    except ParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise SemanticError(f"bad cover: {exc}", lines.get("mode", 0), 1) from None
    raise SemanticError(f"unknown cover mode {mode!r}", lines.get("mode", 0), 1)


def _check_coord_names(names, lineno):
    for name in names:
        if name in ("e", "de") or name.startswith("d"):
            raise SemanticError(
                f"coordinate name {name!r} collides with the operator tokens",
                lineno,
                1,
            )


def _check_cochain_value(op: SuperOperator, key: str, lineno: int, chart_regular: bool):
    """Cochain entries must be even degree-raising derivations; p1
    0-cochain entries additionally need polynomial coefficients."""
    for (i, a, s), c in op.terms.items():
        shift = i.bit_count() - s.bit_count()
        if shift % 2:
            raise SemanticError(
                f"{key}: odd-parity component (exterior-degree shift {shift})", lineno, 1
            )
        if shift < 2:
            raise SemanticError(
                f"{key}: component of degree {shift} < 2", lineno, 1
            )
        if sum(a) + s.bit_count() != 1:
            raise SemanticError(f"{key}: value is not a derivation", lineno, 1)
        if chart_regular and not c.is_polynomial():
            raise SemanticError(
                f"{key}: coefficient {c} is not regular on its chart", lineno, 1
            )
