"""Seeded random instances for the property campaigns.

Coefficients come from a small fixed rational pool with polynomial
degree <= 2 (degree <= 3 for the kernel stress cases); degree-2
cocycles are built as coboundaries of random derivation-valued
0-cochains, the constructible cocycle supply on covers with three or
more charts.
"""

from __future__ import annotations

from fractions import Fraction

from .cech import Cochain0, Cochain1, CoverDescriptor, d0
from .coeffs import Polynomial, RationalFunction
from .exterior import AlgebraSignature, FormSection
from .operators import SuperOperator

COEFF_POOL = (
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 2),
    Fraction(1, 3),
    Fraction(-1, 3),
    Fraction(3),
)


def rand_fraction(rng) -> Fraction:
    return rng.choice(COEFF_POOL)


def rand_poly(rng, vars, maxdeg: int = 2, terms: int = 2) -> Polynomial:
    p = Polynomial.zero(vars)
    for _ in range(rng.randint(1, terms)):
        exps = [0] * len(vars)
        for _ in range(rng.randint(0, maxdeg)):
            exps[rng.randrange(len(vars))] += 1
        p = p + Polynomial.monomial(vars, tuple(exps), rand_fraction(rng))
    return p


def rand_rf(rng, vars, maxdeg: int = 2, terms: int = 2) -> RationalFunction:
    f = RationalFunction.from_poly(rand_poly(rng, vars, maxdeg, terms))
    if f.is_zero():
        return RationalFunction.one(vars)
    return f


def rand_form(rng, sig: AlgebraSignature, terms: int = 2, maxdeg: int = 2) -> FormSection:
    out = FormSection.zero(sig)
    for _ in range(rng.randint(1, terms)):
        mask = rng.randrange(1 << sig.rank)
        out = out + FormSection(sig, {mask: rand_rf(rng, sig.coords, maxdeg)})
    return out


def rand_operator(rng, sig: AlgebraSignature, atoms: int = 2, maxdeg: int = 3) -> SuperOperator:
    """General operator: multiplication parts, derivatives up to second
    order, contraction strings up to two generators."""
    out = SuperOperator.zero(sig)
    nvars = len(sig.coords)
    for _ in range(rng.randint(1, atoms)):
        imask = rng.randrange(1 << sig.rank)
        alpha = [0] * nvars
        for _ in range(rng.randint(0, 2)):
            alpha[rng.randrange(nvars)] += 1
        smask = rng.randrange(1 << sig.rank)
        smask &= rng.randrange(1 << sig.rank)  # thin out the contraction string
        out = out + SuperOperator(
            sig, {(imask, tuple(alpha), smask): rand_rf(rng, sig.coords, maxdeg)}
        )
    return out


def rand_derivation(rng, sig: AlgebraSignature, shift: int, atoms: int = 2, maxdeg: int = 2) -> SuperOperator:
    """Derivation with every atom raising exterior degree by `shift`."""
    n = sig.rank
    nvars = len(sig.coords)
    masks_dx = [m for m in range(1 << n) if m.bit_count() == shift]
    masks_de = [m for m in range(1 << n) if m.bit_count() == shift + 1]
    out = SuperOperator.zero(sig)
    for _ in range(rng.randint(1, atoms)):
        if masks_dx and (not masks_de or rng.random() < 0.5):
            m = rng.choice(masks_dx)
            t = rng.randrange(nvars)
            alpha = tuple(1 if i == t else 0 for i in range(nvars))
            key = (m, alpha, 0)
        elif masks_de:
            m = rng.choice(masks_de)
            a = rng.randint(1, n)
            key = (m, (0,) * nvars, 1 << (a - 1))
        else:
            continue
        out = out + SuperOperator(sig, {key: rand_rf(rng, sig.coords, maxdeg)})
    return out


def rand_nilpotent(rng, sig: AlgebraSignature, shifts=(2, 4, 6), atoms: int = 2) -> SuperOperator:
    """Even derivation with components in the given degree shifts."""
    out = SuperOperator.zero(sig)
    for shift in shifts:
        if shift + 1 <= sig.rank or shift <= sig.rank:
            out = out + rand_derivation(rng, sig, shift, atoms)
    return out


def rand_cochain0(rng, cover: CoverDescriptor, shifts=(2,), atoms: int = 2) -> Cochain0:
    values = {}
    for i in range(cover.ncharts):
        sig = cover.signature(i)
        op = SuperOperator.zero(sig)
        for shift in shifts:
            op = op + rand_derivation(rng, sig, shift, atoms)
        values[i] = op
    return Cochain0(cover, values)


def rand_cocycle2(rng, cover: CoverDescriptor, atoms: int = 2) -> Cochain1:
    """Degree-2 cocycle as the coboundary of a random 0-cochain."""
    return d0(rand_cochain0(rng, cover, (2,), atoms))


def rand_cochain1(rng, cover: CoverDescriptor, shift: int, atoms: int = 2) -> Cochain1:
    values = {}
    for pair in cover.pairs():
        sig = cover.pair_signature(*pair)
        values[pair] = rand_derivation(rng, sig, shift, atoms)
    return Cochain1(cover, values)


def rand_nonabelian_cocycle(rng, cover: CoverDescriptor, shifts=(2, 4), atoms: int = 1) -> Cochain1:
    """Element whose exponential is a non-abelian cocycle: the twisted
    coboundary log(exp(w_i) exp(-w_j)) of a random 0-cochain."""
    from .cech import twisted_action

    w = rand_cochain0(rng, cover, shifts, atoms)
    return twisted_action(w, Cochain1.zero(cover))


def rand_p1_cochain1(rng, cover: CoverDescriptor, shift: int = 2, atoms: int = 2, window=(-3, 3)) -> Cochain1:
    """Laurent-coefficient derivation cochain on the two-chart cover;
    every such cochain is a cocycle there (no triples)."""
    sig = cover.signature(0)
    z = cover.coords[0]
    n = sig.rank
    masks_dx = [m for m in range(1 << n) if m.bit_count() == shift]
    masks_de = [m for m in range(1 << n) if m.bit_count() == shift + 1]
    op = SuperOperator.zero(sig)
    for _ in range(rng.randint(1, atoms)):
        c = RationalFunction.monomial(
            sig.coords, z, rng.randint(*window), rand_fraction(rng)
        )
        if masks_dx and (not masks_de or rng.random() < 0.5):
            key = (rng.choice(masks_dx), (1,), 0)
        elif masks_de:
            key = (rng.choice(masks_de), (0,), 1 << (rng.randint(1, n) - 1))
        else:
            continue
        op = op + SuperOperator(sig, {key: c})
    return Cochain1(cover, {(0, 1): op})
