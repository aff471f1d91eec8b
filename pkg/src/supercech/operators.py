"""Normal-ordered super differential operators on form sections.

An operator is a sum of atoms

    coeff * e_I  ∘  d/dx^alpha  ∘  d_{e_{s1}} ∘ ... ∘ d_{e_{sm}}     (s1 < ... < sm)

stored as a dict from (imask, alpha, smask) to the RationalFunction
coeff.  Left multiplications sit left of all derivatives, coordinate
derivatives left of all contractions; this normal form is unique, so
operator equality is dict equality.  Contractions are the odd interior
products dual to the generators; coordinate derivatives act on the
rational-function coefficients only.

Composition re-normal-orders with the graded Leibniz rule: contraction
strings commute through form coefficients with Koszul signs (kernel
push_contractions) and coordinate derivatives through function
coefficients with the multi-index Leibniz rule.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb

from ._kernel import contract_sign, push_contractions, wedge_sign
from .coeffs import RationalFunction
from .exterior import AlgebraSignature, FormSection, SignatureMismatch, mask_str


class ParityError(ValueError):
    pass


def _derivative_tower(r: RationalFunction, alpha, coords):
    """[(beta, multinomial, d^(alpha-beta) r)] over beta <= alpha, zeros pruned."""
    derivs = {(0,) * len(alpha): r}
    for gamma in product(*(range(a + 1) for a in alpha)):
        if gamma in derivs:
            continue
        i = next(t for t, g in enumerate(gamma) if g)
        prev = gamma[:i] + (gamma[i] - 1,) + gamma[i + 1 :]
        src = derivs.get(prev)
        derivs[gamma] = None if src is None else (src.diff(coords[i]) or None)
    out = []
    for gamma, d in derivs.items():
        if d is None:
            continue
        beta = tuple(a - g for a, g in zip(alpha, gamma))
        out.append((beta, prod_comb(alpha, gamma), d))
    return out


def prod_comb(alpha, gamma) -> int:
    n = 1
    for a, g in zip(alpha, gamma):
        n *= comb(a, g)
    return n


class SuperOperator:
    """Finite-order differential operator on the exterior algebra."""

    __slots__ = ("sig", "terms")

    def __init__(self, sig: AlgebraSignature, terms: dict):
        self.sig = sig
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, sig):
        return cls(sig, {})

    @classmethod
    def identity(cls, sig):
        return cls(sig, {(0, (0,) * len(sig.coords), 0): RationalFunction.one(sig.coords)})

    @classmethod
    def mult(cls, form: FormSection) -> "SuperOperator":
        """Left multiplication by a form section."""
        sig = form.sig
        z = (0,) * len(sig.coords)
        return cls(sig, {(m, z, 0): c for m, c in form.terms.items()})

    @classmethod
    def coord_deriv(cls, sig, var: str) -> "SuperOperator":
        i = sig.coords.index(var) if var in sig.coords else None
        if i is None:
            raise ValueError(f"unknown coordinate {var!r} (have {sig.coords})")
        alpha = tuple(1 if t == i else 0 for t in range(len(sig.coords)))
        return cls(sig, {(0, alpha, 0): RationalFunction.one(sig.coords)})

    @classmethod
    def contraction(cls, sig, a: int) -> "SuperOperator":
        if not 1 <= a <= sig.rank:
            raise ValueError(f"generator index {a} out of range 1..{sig.rank}")
        z = (0,) * len(sig.coords)
        return cls(sig, {(0, z, 1 << (a - 1)): RationalFunction.one(sig.coords)})

    @classmethod
    def atom(cls, sig, coeff, i_indices=(), alpha=None, s_indices=()) -> "SuperOperator":
        """Single normal-ordered atom; coeff may be int, Fraction or RF."""
        if isinstance(coeff, (int, Fraction)):
            coeff = RationalFunction.const(sig.coords, coeff)
        if alpha is None:
            alpha = (0,) * len(sig.coords)
        smask = sig.subset_mask(s_indices)
        return cls(sig, {(sig.subset_mask(i_indices), tuple(alpha), smask): coeff})

    # -- structure ---------------------------------------------------------

    def _check_sig(self, other):
        if self.sig != other.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, SuperOperator)
            and self.sig == other.sig
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.sig, frozenset(self.terms.items())))

    def order(self) -> int:
        return max((sum(a) + s.bit_count() for (_, a, s) in self.terms), default=0)

    def coefficient(self, alpha, s_indices) -> FormSection:
        """Coefficient form section of the (alpha, S) derivative part."""
        smask = self.sig.subset_mask(s_indices)
        alpha = tuple(alpha)
        return FormSection(
            self.sig,
            {i: c for (i, a, s), c in self.terms.items() if a == alpha and s == smask},
        )

    def atoms(self):
        """Iterate (imask, alpha, smask, coeff)."""
        for (i, a, s), c in self.terms.items():
            yield i, a, s, c

    # -- linear operations ---------------------------------------------------

    def __add__(self, other):
        self._check_sig(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(k, None)
            else:
                out[k] = acc
        return SuperOperator(self.sig, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SuperOperator(self.sig, {k: -c for k, c in self.terms.items()})

    def scale(self, c) -> "SuperOperator":
        if isinstance(c, (int, Fraction)):
            c = Fraction(c)
            if not c:
                return SuperOperator.zero(self.sig)
        elif c.is_zero():
            return SuperOperator.zero(self.sig)
        return SuperOperator(self.sig, {k: v * c for k, v in self.terms.items()})

    # -- action and composition ---------------------------------------------

    def apply(self, a: FormSection) -> FormSection:
        """Act on a form section: contractions, then x-derivatives, then
        left multiplication."""
        if self.sig != a.sig:
            raise SignatureMismatch(f"{self.sig} vs {a.sig}")
        coords = self.sig.coords
        out: dict[int, RationalFunction] = {}
        for (im, alpha, sm), r in self.terms.items():
            for jm, f in a.terms.items():
                sc = contract_sign(sm, jm)
                if not sc:
                    continue
                jm2 = jm ^ sm
                g = f
                for t, k in enumerate(alpha):
                    for _ in range(k):
                        g = g.diff(coords[t])
                    if g.is_zero():
                        break
                if g.is_zero():
                    continue
                sw = wedge_sign(im, jm2)
                if not sw:
                    continue
                c = r * g
                if sc * sw < 0:
                    c = -c
                m = im | jm2
                acc = out.get(m)
                acc = c if acc is None else acc + c
                if acc.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = acc
        return FormSection(self.sig, out)

    def compose(self, other: "SuperOperator") -> "SuperOperator":
        """Normal-ordered product: apply(self.compose(other), a) ==
        apply(self, apply(other, a))."""
        self._check_sig(other)
        coords = self.sig.coords
        out: dict = {}
        for (i1, a1, s1), r1 in self.terms.items():
            needs_leibniz = any(a1)
            for (i2, a2, s2), r2 in other.terms.items():
                pushes = push_contractions(s1, i2)
                tower = (
                    _derivative_tower(r2, a1, coords)
                    if needs_leibniz
                    else ((a1, 1, r2),)
                )
                for sg, j2, s1rem in pushes:
                    rho = wedge_sign(s1rem, s2)
                    if not rho:
                        continue
                    tau = wedge_sign(i1, j2)
                    if not tau:
                        continue
                    im = i1 | j2
                    sm = s1rem | s2
                    base = sg * rho * tau
                    for beta, binom, dr2 in tower:
                        c = r1 * dr2
                        n = base * binom
                        if n != 1:
                            c = c * Fraction(n)
                        if c.is_zero():
                            continue
                        key = (im, tuple(b + g for b, g in zip(beta, a2)), sm)
                        acc = out.get(key)
                        acc = c if acc is None else acc + c
                        if acc.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = acc
        return SuperOperator(self.sig, out)

    __mul__ = compose

    def commutator(self, other: "SuperOperator") -> "SuperOperator":
        if not (self.is_even() and other.is_even()):
            raise ParityError("commutator is defined here for even operators only")
        return self.compose(other) - other.compose(self)

    # -- grading -------------------------------------------------------------

    def is_even(self) -> bool:
        return all((i.bit_count() - s.bit_count()) % 2 == 0 for (i, _, s) in self.terms)

    def is_derivation(self) -> bool:
        """First order and no multiplication part: every atom has
        |alpha| + |S| = 1."""
        return all(sum(a) + s.bit_count() == 1 for (_, a, s) in self.terms)

    def degree_components(self) -> dict:
        """Split by exterior-degree shift 2k; raises on odd atoms."""
        buckets: dict[int, dict] = {}
        for (i, a, s), c in self.terms.items():
            shift = i.bit_count() - s.bit_count()
            if shift % 2:
                raise ParityError(
                    f"odd-degree atom (shift {shift}) in {self._atom_str(i, a, s, c)}"
                )
            buckets.setdefault(shift, {})[(i, a, s)] = c
        return {k: SuperOperator(self.sig, t) for k, t in sorted(buckets.items())}

    def degree_shifts(self) -> tuple[int, ...]:
        return tuple(sorted({i.bit_count() - s.bit_count() for (i, _, s) in self.terms}))

    def min_shift(self) -> int:
        return min((i.bit_count() - s.bit_count() for (i, _, s) in self.terms), default=0)

    def project_shift(self, shift: int) -> "SuperOperator":
        """Atoms with exterior-degree shift exactly `shift` (pr_{2k})."""
        return SuperOperator(
            self.sig,
            {
                (i, a, s): c
                for (i, a, s), c in self.terms.items()
                if i.bit_count() - s.bit_count() == shift
            },
        )

    # -- rendering ---------------------------------------------------------

    def _atom_str(self, i, a, s, c) -> str:
        pieces = []
        cs = str(c)
        neg = False
        if cs == "-1":
            neg = True
        elif cs != "1":
            if len(c.num.terms) > 1 and c.is_polynomial():
                cs = f"({cs})"
            pieces.append(cs)
        if i:
            pieces.append(mask_str(self.sig, i))
        for t, k in enumerate(a):
            if k:
                d = f"d{self.sig.coords[t]}"
                pieces.append(d if k == 1 else f"{d}^{k}")
        for b in self.sig.mask_indices(s):
            pieces.append(f"de[{b}]")
        if not pieces:
            pieces.append("1")
        body = "*".join(pieces)
        return "-" + body if neg else body

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(
            self.terms,
            key=lambda k: (
                sum(k[1]) + k[2].bit_count(),
                k[1],
                self.sig.mask_indices(k[2]),
                self.sig.mask_indices(k[0]),
            ),
        )
        parts = [self._atom_str(i, a, s, self.terms[(i, a, s)]) for (i, a, s) in keys]
        out = parts[0]
        for p in parts[1:]:
            out += "-" + p[1:] if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"SuperOperator({self})"


# -- spec-facing operation surface -------------------------------------------


def apply(d: SuperOperator, a: FormSection) -> FormSection:
    return d.apply(a)


def compose(d1: SuperOperator, d2: SuperOperator) -> SuperOperator:
    return d1.compose(d2)


def commutator(d1: SuperOperator, d2: SuperOperator) -> SuperOperator:
    return d1.commutator(d2)


def is_derivation(d: SuperOperator) -> bool:
    return d.is_derivation()


def degree_components(d: SuperOperator) -> dict:
    return d.degree_components()
