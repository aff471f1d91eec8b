"""Exact multivariate rational functions over the rationals.

Everything downstream (form sections, operators, cochains) carries
coefficients from here.  A Polynomial is a dict from exponent tuples to
Fraction over a fixed ordered variable tuple; a RationalFunction is a
reduced fraction of polynomials whose denominator is monic in graded-lex
order.  Equality is structural on the canonical form.

The scalar type Rational is fractions.Fraction: it already guarantees
the reduced form with positive denominator that the canonical form
needs.
"""

from __future__ import annotations

from fractions import Fraction

from ._kernel import poly_add_terms, poly_mul_terms

Rational = Fraction


class CoeffsError(ValueError):
    """Base error for coefficient arithmetic."""


class ZeroDenominator(CoeffsError):
    pass


class UnknownVariable(CoeffsError):
    pass


class NotLaurent(CoeffsError):
    pass


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Multivariate polynomial over Q with a fixed variable tuple."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: dict):
        self.vars = tuple(vars)
        self.terms = {e: c for e, c in terms.items() if c}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars):
        return cls(vars, {})

    @classmethod
    def const(cls, vars, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return cls.zero(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def one(cls, vars):
        return cls.const(vars, 1)

    @classmethod
    def variable(cls, vars, name: str) -> "Polynomial":
        vars = tuple(vars)
        if name not in vars:
            raise UnknownVariable(f"unknown variable {name!r} (have {vars})")
        e = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {e: Fraction(1)})

    @classmethod
    def monomial(cls, vars, exps, c=1) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return cls.zero(vars)
        return cls(vars, {tuple(exps): c})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise CoeffsError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, var: str) -> int:
        i = self._var_index(var)
        return max((e[i] for e in self.terms), default=0)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise CoeffsError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def _var_index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise UnknownVariable(f"unknown variable {var!r} (have {self.vars})") from None

    def _check(self, other: "Polynomial"):
        if self.vars != other.vars:
            raise CoeffsError(f"variable mismatch: {self.vars} vs {other.vars}")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        return Polynomial(self.vars, poly_add_terms(self.terms, other.terms, 1))

    def __sub__(self, other):
        self._check(other)
        return Polynomial(self.vars, poly_add_terms(self.terms, other.terms, -1))

    def __neg__(self):
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        return Polynomial(self.vars, poly_mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.vars)
        return Polynomial(self.vars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise CoeffsError("negative power of a polynomial")
        out = Polynomial.one(self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def diff(self, var: str) -> "Polynomial":
        i = self._var_index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[e2] = out.get(e2, Fraction(0)) + c * e[i]
        return Polynomial(self.vars, out)

    def subst(self, assignment: dict) -> "RationalFunction":
        """Evaluate at RationalFunction values; all variables must be assigned."""
        missing = [v for v in self.vars if v not in assignment]
        if missing:
            raise UnknownVariable(f"assignment misses variables {missing}")
        images = [assignment[v] for v in self.vars]
        if not images:
            raise CoeffsError("empty variable tuple")
        target = images[0].vars
        out = RationalFunction.const(target, 0)
        for e, c in self.terms.items():
            term = RationalFunction.const(target, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            out = out + term
        return out

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            factors = [
                f"{v}^{k}" if k != 1 else v
                for v, k in zip(self.vars, e)
                if k
            ]
            if not factors:
                body = str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = "*".join([str(c)] + factors)
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += "-" + p[1:] if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"Polynomial({self})"


# -- gcd machinery ----------------------------------------------------------
#
# Content/primitive-part recursion: a polynomial in vars (x0, x1, ...) is a
# univariate polynomial in x0 with Polynomial coefficients in the rest;
# gcd = gcd(contents) * primitive-PRS of the primitive parts.


def _to_univar(p: Polynomial, i: int) -> dict:
    """Split off variable i: dict from x_i-degree to Polynomial in the rest."""
    rest = p.vars[:i] + p.vars[i + 1 :]
    out: dict[int, dict] = {}
    for e, c in p.terms.items():
        out.setdefault(e[i], {})[e[:i] + e[i + 1 :]] = c
    return {k: Polynomial(rest, t) for k, t in out.items()}


def _from_univar(coeffs: dict, i: int, vars) -> Polynomial:
    terms = {}
    for k, poly in coeffs.items():
        for e, c in poly.terms.items():
            terms[e[:i] + (k,) + e[i:]] = c
    return Polynomial(vars, terms)


def poly_divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact division a / b; raises CoeffsError when b does not divide a."""
    a._check(b)
    if b.is_zero():
        raise ZeroDenominator("division by the zero polynomial")
    if b.is_constant():
        return a.scale(1 / b.const_value())
    q = Polynomial.zero(a.vars)
    r = a
    eb, cb = b.leading()
    while not r.is_zero():
        er, cr = r.leading()
        diff = tuple(x - y for x, y in zip(er, eb))
        if any(d < 0 for d in diff):
            raise CoeffsError("inexact polynomial division")
        t = Polynomial.monomial(a.vars, diff, cr / cb)
        q = q + t
        r = r - t * b
    return q


def _gcd_univar_fractions(a: dict, b: dict) -> dict:
    """Euclid on univariate dicts {deg: Fraction}; result monic."""
    def degree(p):
        return max(p, default=-1)

    def rem(p, q):
        p = dict(p)
        dq = degree(q)
        cq = q[dq]
        while p and degree(p) >= dq:
            dp = degree(p)
            f = p[dp] / cq
            for k, c in q.items():
                t = p.get(k + dp - dq, Fraction(0)) - f * c
                if t:
                    p[k + dp - dq] = t
                else:
                    p.pop(k + dp - dq, None)
        return p

    while b:
        a, b = b, rem(a, b)
    if not a:
        return {}
    lc = a[degree(a)]
    return {k: c / lc for k, c in a.items()}


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Gcd over Q[vars], normalized monic in graded-lex order."""
    a._check(b)
    if a.is_zero():
        return _monic(b)
    if b.is_zero():
        return _monic(a)
    if a.is_constant() or b.is_constant():
        return Polynomial.one(a.vars)
    if len(a.vars) == 1:
        ua = {e[0]: c for e, c in a.terms.items()}
        ub = {e[0]: c for e, c in b.terms.items()}
        g = _gcd_univar_fractions(ua, ub)
        return Polynomial(a.vars, {(k,): c for k, c in g.items()})
    return _monic(_gcd_multivar(a, b))


def _monic(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    _, lc = p.leading()
    return p.scale(1 / lc) if lc != 1 else p


def _content_pp(p: Polynomial, i: int):
    """(content, primitive part) of p as univariate in variable i."""
    coeffs = _to_univar(p, i)
    rest_polys = list(coeffs.values())
    cont = rest_polys[0]
    for q in rest_polys[1:]:
        cont = poly_gcd(cont, q)
        if cont.is_constant():
            cont = Polynomial.one(cont.vars)
            break
    cont_lift = _from_univar({0: cont}, i, p.vars)
    return cont_lift, poly_divexact(p, cont_lift)


def _gcd_multivar(a: Polynomial, b: Polynomial) -> Polynomial:
    i = 0
    cont_a, pp_a = _content_pp(a, i)
    cont_b, pp_b = _content_pp(b, i)
    cont_rest = poly_gcd(
        Polynomial(a.vars[1:], {e[1:]: c for e, c in cont_a.terms.items()}),
        Polynomial(b.vars[1:], {e[1:]: c for e, c in cont_b.terms.items()}),
    )
    cont = _from_univar({0: cont_rest}, i, a.vars)

    # primitive PRS in variable i
    u, v = pp_a, pp_b
    if u.degree_in(a.vars[i]) < v.degree_in(a.vars[i]):
        u, v = v, u
    while True:
        r = _pseudo_rem(u, v, i)
        if r.is_zero():
            g = v
            break
        if r.degree_in(a.vars[i]) == 0:
            g = Polynomial.one(a.vars)
            break
        u, v = v, _content_pp(r, i)[1]
    if g.is_constant():
        return cont
    g = _content_pp(g, i)[1]
    return cont * g


def _pseudo_rem(u: Polynomial, v: Polynomial, i: int) -> Polynomial:
    """Pseudo-remainder of u by v as univariate in variable i."""
    var = u.vars[i]
    du, dv = u.degree_in(var), v.degree_in(var)
    uc, vc = _to_univar(u, i), _to_univar(v, i)
    lc_v = vc[dv]
    r = uc
    for _ in range(du - dv + 1):
        dr = max(r, default=-1)
        if dr < dv:
            break
        lead = r[dr]
        r = {k: c * lc_v for k, c in r.items()}
        for k, c in vc.items():
            t = r.get(k + dr - dv, Polynomial.zero(lead.vars)) - c * lead
            if t.is_zero():
                r.pop(k + dr - dv, None)
            else:
                r[k + dr - dv] = t
    return _from_univar(r, i, u.vars)


class RationalFunction:
    """Reduced fraction of polynomials with monic graded-lex denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial, reduce: bool = True):
        num._check(den)
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        if num.is_zero():
            den = Polynomial.one(num.vars)
            reduce = False
        if reduce:
            num, den = self._reduce(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _reduce(num, den):
        if den.is_constant():
            c = den.const_value()
            return (num.scale(1 / c), Polynomial.one(num.vars))
        if len(den.terms) == 1:
            # monomial denominator: cancel per-variable minimum exponents
            (ed, cd), = den.terms.items()
            mins = tuple(
                min(min(e[i] for e in num.terms), ed[i])
                for i in range(len(num.vars))
            )
            if any(mins):
                num = Polynomial(
                    num.vars,
                    {tuple(x - m for x, m in zip(e, mins)): c for e, c in num.terms.items()},
                )
                ed = tuple(x - m for x, m in zip(ed, mins))
            if not any(ed):
                return num.scale(1 / cd), Polynomial.one(num.vars)
            den = Polynomial.monomial(num.vars, ed, 1)
            return num.scale(1 / cd), den
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = poly_divexact(num, g)
            den = poly_divexact(den, g)
        _, lc = den.leading()
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.scale(1 / lc)
        return num, den

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, vars, c):
        return cls(Polynomial.const(vars, c), Polynomial.one(vars), reduce=False)

    @classmethod
    def zero(cls, vars):
        return cls.const(vars, 0)

    @classmethod
    def one(cls, vars):
        return cls.const(vars, 1)

    @classmethod
    def variable(cls, vars, name):
        return cls(Polynomial.variable(vars, name), Polynomial.one(vars), reduce=False)

    @classmethod
    def from_poly(cls, p: Polynomial):
        return cls(p, Polynomial.one(p.vars), reduce=False)

    @classmethod
    def monomial(cls, vars, var: str, k: int, c=1):
        """c * var**k with k possibly negative."""
        x = cls.variable(vars, var)
        return cls.const(vars, c) * x ** k

    # -- queries -----------------------------------------------------------

    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def const_value(self):
        return self.num.const_value() / self.den.const_value()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.const(self.vars, other)
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(self.vars, other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if self.den == other.den:
            return RationalFunction(self.num - other.num, self.den)
        return RationalFunction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        out = RationalFunction.__new__(RationalFunction)
        out.num = -self.num
        out.den = self.den
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            out = RationalFunction.__new__(RationalFunction)
            out.num = self.num.scale(other)
            out.den = self.den if other else Polynomial.one(self.vars)
            return out
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero(self.vars)
        if self.den.is_constant() and other.den.is_constant():
            out = RationalFunction.__new__(RationalFunction)
            out.num = (self.num * other.num).scale(
                1 / (self.den.const_value() * other.den.const_value())
            )
            out.den = Polynomial.one(self.vars)
            return out
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDenominator("zero denominator")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int):
        if k == 0:
            return RationalFunction.one(self.vars)
        if k < 0:
            if self.is_zero():
                raise ZeroDenominator("zero denominator")
            return RationalFunction(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num ** k, self.den ** k)

    def diff(self, var: str) -> "RationalFunction":
        self.num._var_index(var)
        if self.den.is_constant():
            out = RationalFunction.__new__(RationalFunction)
            out.num = self.num.diff(var).scale(1 / self.den.const_value())
            out.den = Polynomial.one(self.vars)
            return out
        return RationalFunction(
            self.num.diff(var) * self.den - self.num * self.den.diff(var),
            self.den * self.den,
        )

    def subst(self, assignment: dict) -> "RationalFunction":
        num = self.num.subst(assignment)
        den = self.den.subst(assignment)
        if den.is_zero():
            raise ZeroDenominator("substitution sends the denominator to zero")
        return num / den

    # -- Laurent structure ---------------------------------------------------

    def laurent_terms(self, var: str) -> dict:
        """Dict from exponent of var to RationalFunction free of var.

        Requires a monomial denominator in var with no other variables.
        """
        i = self.num._var_index(var)
        if len(self.den.terms) != 1:
            raise NotLaurent(f"denominator {self.den} is not a monomial in {var}")
        (ed, cd), = self.den.terms.items()
        if any(ed[j] for j in range(len(ed)) if j != i):
            raise NotLaurent(f"denominator {self.den} involves variables besides {var}")
        shift = ed[i]
        out: dict[int, Polynomial] = {}
        for e, c in self.num.terms.items():
            k = e[i] - shift
            e0 = e[:i] + (0,) + e[i + 1 :]
            t = out.setdefault(k, {})
            t[e0] = t.get(e0, Fraction(0)) + c / cd
        return {
            k: RationalFunction.from_poly(Polynomial(self.vars, t))
            for k, t in out.items()
            if any(t.values())
        }

    def is_laurent(self, var: str) -> bool:
        try:
            self.laurent_terms(var)
            return True
        except NotLaurent:
            return False

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        if self.den.is_constant() and self.den.const_value() == 1:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1 or not self.den.is_constant():
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self})"


# -- spec-facing operation surface -------------------------------------------


def field_ops(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Field arithmetic on rational functions: op in add|sub|mul|div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise CoeffsError(f"unknown op {op!r}")


def rf_diff(f: RationalFunction, var: str) -> RationalFunction:
    """Exact partial derivative."""
    return f.diff(var)


def rf_subst(f: RationalFunction, assignment: dict) -> RationalFunction:
    """Exact composition f(assignment); assignment covers all variables."""
    return f.subst(assignment)


def laurent_split(f: RationalFunction, var: str):
    """Split a Laurent polynomial in var into (exponents >= 0, exponents < 0)."""
    terms = f.laurent_terms(var)
    x = RationalFunction.variable(f.vars, var)
    nonneg = RationalFunction.zero(f.vars)
    neg = RationalFunction.zero(f.vars)
    for k in sorted(terms):
        piece = terms[k] * x ** k
        if k >= 0:
            nonneg = nonneg + piece
        else:
            neg = neg + piece
    return nonneg, neg
