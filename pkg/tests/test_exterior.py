import random
from fractions import Fraction

import pytest

from supercech.coeffs import RationalFunction
from supercech.exterior import AlgebraSignature, FormSection, SignatureMismatch
from supercech.randgen import rand_form

SIG4 = AlgebraSignature(("z",), 4)


def basis(indices, sig=SIG4, coeff=1):
    return FormSection.basis(sig, indices, coeff)


def wedge_sign_oracle(a, b):
    """Independent sign computation: concatenate index lists and count
    bubble-sort swaps."""
    if set(a) & set(b):
        return 0
    seq = list(a) + list(b)
    swaps = 0
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                swaps += 1
    return (-1) ** swaps


class TestWedgeExamples:
    def test_e1_e2(self):
        assert basis([1]).wedge(basis([2])) == basis([1, 2])

    def test_antisymmetry(self):
        assert basis([2]).wedge(basis([1])) == basis([1, 2], coeff=-1)

    def test_repeated_generator(self):
        z = RationalFunction.variable(("z",), "z")
        assert basis([1, 2], coeff=1).scale(z).wedge(basis([1, 3])).is_zero()

    def test_signature_mismatch(self):
        other = AlgebraSignature(("z",), 5)
        with pytest.raises(SignatureMismatch):
            basis([1]).wedge(FormSection.basis(other, [2]))


def test_wedge_signs_against_oracle():
    sig = AlgebraSignature(("z",), 7)
    rng = random.Random(3)
    for _ in range(300):
        ia = sorted(rng.sample(range(1, 8), rng.randint(0, 4)))
        ib = sorted(rng.sample(range(1, 8), rng.randint(0, 4)))
        got = FormSection.basis(sig, ia).wedge(FormSection.basis(sig, ib))
        sign = wedge_sign_oracle(ia, ib)
        if sign == 0:
            assert got.is_zero()
        else:
            assert got == FormSection.basis(sig, sorted(ia + ib), coeff=sign)


class TestDegreeProject:
    def test_selects_degree(self):
        a = FormSection.one(SIG4) + basis([1, 2]) + basis([1, 2, 3, 4])
        assert a.degree_project(2) == basis([1, 2])

    def test_beyond_rank(self):
        a = rand_form(random.Random(5), AlgebraSignature(("z",), 7))
        assert a.degree_project(8).is_zero()

    def test_degree_one(self):
        z = RationalFunction.variable(("z",), "z")
        a = basis([1]).scale(z)
        assert a.degree_project(1) == a

    def test_partition(self):
        rng = random.Random(6)
        for _ in range(20):
            sig = AlgebraSignature(("z",), rng.choice((4, 6, 7)))
            a = rand_form(rng, sig, terms=4)
            total = FormSection.zero(sig)
            for j in range(sig.rank + 1):
                total = total + a.degree_project(j)
            assert total == a


def test_graded_commutativity_random():
    rng = random.Random(7)
    for _ in range(60):
        sig = AlgebraSignature(("z",), rng.choice((4, 6, 7)))
        p = rand_form(rng, sig, terms=3).degree_project(rng.randint(0, sig.rank))
        q = rand_form(rng, sig, terms=3).degree_project(rng.randint(0, sig.rank))
        sign = (-1) ** (p.degree() * q.degree())
        assert p.wedge(q) == q.wedge(p).scale(sign)


def test_associativity_random():
    rng = random.Random(8)
    for _ in range(60):
        sig = AlgebraSignature(("z",), rng.choice((4, 6, 7)))
        a, b, c = (rand_form(rng, sig, terms=3) for _ in range(3))
        assert a.wedge(b.wedge(c)) == a.wedge(b).wedge(c)


def test_nilpotency():
    rng = random.Random(9)
    for _ in range(30):
        sig = AlgebraSignature(("z",), rng.choice((4, 6, 7)))
        a = rand_form(rng, sig, terms=4)
        a = a - a.degree_project(0)
        power = a
        for _ in range(sig.rank // 2):
            power = power.wedge(a)
        assert power.is_zero()


class TestSignatureValidation:
    def test_rank_cap(self):
        with pytest.raises(ValueError):
            AlgebraSignature(("z",), 8)

    def test_duplicate_coords(self):
        with pytest.raises(ValueError):
            AlgebraSignature(("z", "z"), 3)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            SIG4.subset_mask([5])

    def test_repeated_index(self):
        with pytest.raises(ValueError):
            SIG4.subset_mask([2, 2])


def test_rendering_deterministic():
    z = RationalFunction.variable(("z",), "z")
    a = basis([1, 3]).scale(z ** 2 * Fraction(3, 2)) + basis([1]) + FormSection.one(SIG4)
    assert str(a) == "1+e[1]+3/2*z^2*e[1,3]"
