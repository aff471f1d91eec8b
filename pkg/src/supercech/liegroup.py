"""Exponential correspondence between nilpotent even derivations and
degree-raising algebra automorphisms.

Operators whose components all raise exterior degree by at least 2 are
nilpotent: with rank capped at 7, any 4-fold composition vanishes, so
exp truncates after the cubic term and log after the cubic term of
phi - Id.  The truncation bound is asserted, not assumed: whenever the
cubic term survives, the quartic one is checked to vanish.
"""

from __future__ import annotations

from fractions import Fraction

from .exterior import FormSection
from .operators import ParityError, SuperOperator


class ShapeError(ValueError):
    pass


def _check_nilpotent_shape(u: SuperOperator, what: str):
    """Even, all exterior-degree shifts >= 2."""
    for (i, a, s), c in u.terms.items():
        shift = i.bit_count() - s.bit_count()
        if shift % 2:
            raise ParityError(f"{what}: odd component present (shift {shift})")
        if shift < 2:
            raise ShapeError(f"{what}: degree-{shift} component present")


def _check_aut_shape(op: SuperOperator):
    """Identity in degree 0, all other components even of degree >= 2."""
    sig = op.sig
    id_key = (0, (0,) * len(sig.coords), 0)
    rest = dict(op.terms)
    c0 = rest.pop(id_key, None)
    if c0 is None or not (c0.is_constant() and c0.const_value() == 1):
        raise ShapeError("degree-0 part is not the identity")
    for (i, a, s) in rest:
        shift = i.bit_count() - s.bit_count()
        if shift % 2:
            raise ParityError(f"odd component present (shift {shift})")
        if shift < 2:
            raise ShapeError(f"degree-{shift} component besides the identity")


class Automorphism:
    """Algebra automorphism equal to the identity up to degree-raising terms.

    `certified` records that multiplicativity is known, either because
    the operator arose as exp of a derivation-valued argument or because
    certify_automorphism checked it on basis pairs.
    """

    __slots__ = ("op", "certified")

    def __init__(self, op: SuperOperator, certified: bool = False):
        _check_aut_shape(op)
        self.op = op
        self.certified = certified

    @classmethod
    def identity(cls, sig):
        return cls(SuperOperator.identity(sig), certified=True)

    def compose(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(
            self.op.compose(other.op), certified=self.certified and other.certified
        )

    def inverse(self) -> "Automorphism":
        n = self.op - SuperOperator.identity(self.op.sig)
        n2 = n.compose(n)
        n3 = n2.compose(n)
        _assert_quartic_vanishes(n, n3)
        inv = SuperOperator.identity(self.op.sig) - n + n2 - n3
        return Automorphism(inv, certified=self.certified)

    def is_identity(self) -> bool:
        return self.op == SuperOperator.identity(self.op.sig)

    def apply(self, a: FormSection) -> FormSection:
        return self.op.apply(a)

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.op == other.op

    def __hash__(self):
        return hash(self.op)

    def __str__(self):
        return str(self.op)

    def __repr__(self):
        return f"Automorphism({self.op})"


def _assert_quartic_vanishes(u: SuperOperator, u3: SuperOperator):
    # rank <= 7 makes four degree-raising factors vanish; cheap to verify
    # because it only triggers when the cubic term is already nonzero
    if not u3.is_zero() and not u3.compose(u).is_zero():
        raise ShapeError("4-fold composition of degree-raising factors is nonzero")


def op_exp(u: SuperOperator) -> Automorphism:
    """exp(u) = Id + u + u^2/2 + u^3/6 for u even with components of
    degree >= 2; the series is exact, not truncated, for rank <= 7."""
    _check_nilpotent_shape(u, "op_exp")
    u2 = u.compose(u)
    u3 = u2.compose(u)
    _assert_quartic_vanishes(u, u3)
    op = (
        SuperOperator.identity(u.sig)
        + u
        + u2.scale(Fraction(1, 2))
        + u3.scale(Fraction(1, 6))
    )
    return Automorphism(op, certified=u.is_derivation())


def op_log(phi) -> SuperOperator:
    """log(phi) = N - N^2/2 + N^3/3 with N = phi - Id; inverse of op_exp."""
    op = phi.op if isinstance(phi, Automorphism) else phi
    _check_aut_shape(op)
    n = op - SuperOperator.identity(op.sig)
    n2 = n.compose(n)
    n3 = n2.compose(n)
    _assert_quartic_vanishes(n, n3)
    return n - n2.scale(Fraction(1, 2)) + n3.scale(Fraction(1, 3))


def truncate(d, q: int) -> SuperOperator:
    """Keep the degree components 2..2q inclusive (drops the identity)."""
    if q < 1:
        raise ValueError("truncation order q must be >= 1")
    op = d.op if isinstance(d, Automorphism) else d
    return SuperOperator(
        op.sig,
        {
            (i, a, s): c
            for (i, a, s), c in op.terms.items()
            if 2 <= i.bit_count() - s.bit_count() <= 2 * q
        },
    )


def certify_automorphism(phi: Automorphism, rng=None, samples: int = 40) -> bool:
    """Check multiplicativity apply(phi, a∧b) = apply(phi,a)∧apply(phi,b)
    on basis pairs: the full basis for rank <= 5, a random sample above."""
    sig = phi.op.sig
    nmasks = 1 << sig.rank
    if sig.rank <= 5 or rng is None:
        pairs = [(a, b) for a in range(nmasks) for b in range(nmasks)]
    else:
        pairs = [
            (rng.randrange(nmasks), rng.randrange(nmasks)) for _ in range(samples)
        ]
    one = FormSection.one(sig)
    basis = {}

    def form(mask):
        if mask not in basis:
            basis[mask] = FormSection(sig, {mask: one.terms[0]})
        return basis[mask]

    for ma, mb in pairs:
        a, b = form(ma), form(mb)
        if phi.apply(a.wedge(b)) != phi.apply(a).wedge(phi.apply(b)):
            return False
    return True
