import random

import pytest

from supercech.coeffs import RationalFunction
from supercech.exterior import AlgebraSignature, FormSection
from supercech.liegroup import (
    Automorphism,
    ShapeError,
    certify_automorphism,
    op_exp,
    op_log,
    truncate,
)
from supercech.operators import ParityError, SuperOperator
from supercech.randgen import rand_nilpotent

X4 = AlgebraSignature(("x",), 4)
X7 = AlgebraSignature(("x",), 7)


class TestExp:
    def test_exp_zero(self):
        assert op_exp(SuperOperator.zero(X4)).is_identity()

    def test_exp_square_vanishes(self):
        u = SuperOperator.atom(X4, 1, [1, 2], (1,), [])
        phi = op_exp(u)
        assert phi.op == SuperOperator.identity(X4) + u

    def test_group_inverse(self):
        rng = random.Random(1)
        for _ in range(20):
            u = rand_nilpotent(rng, X7, (2, 4))
            assert op_exp(u).compose(op_exp(-u)).is_identity()

    def test_rejects_degree_zero(self):
        with pytest.raises(ShapeError):
            op_exp(SuperOperator.identity(X4))

    def test_rejects_odd(self):
        with pytest.raises(ParityError):
            op_exp(SuperOperator.atom(X4, 1, [1], (1,), []))


class TestLog:
    def test_log_identity(self):
        assert op_log(Automorphism.identity(X4)).is_zero()

    def test_roundtrip(self):
        rng = random.Random(2)
        for _ in range(50):
            sig = AlgebraSignature(("x",), rng.choice((4, 6, 7)))
            u = rand_nilpotent(rng, sig, (2, 4))
            assert op_log(op_exp(u)) == u

    def test_recovers_degree_two(self):
        # exp of a pure degree-2 derivation has a genuine degree-4 part
        # (the half square); log strips it back off
        x = RationalFunction.variable(("x",), "x")
        u = SuperOperator.atom(X7, x, [1, 2], (1,), []) + SuperOperator.atom(
            X7, 1, [3, 4], (1,), []
        )
        phi = op_exp(u)
        assert not truncate(phi.op, 2).project_shift(4).is_zero()
        got = op_log(phi)
        assert got == u and got.degree_shifts() == (2,)

    def test_rejects_wrong_unit(self):
        bad = SuperOperator.identity(X4).scale(2)
        with pytest.raises(ShapeError):
            op_log(bad)


class TestTruncate:
    def test_drops_identity_and_high(self):
        u2 = SuperOperator.atom(X7, 1, [1, 2], (1,), [])
        u4 = SuperOperator.atom(X7, 1, [1, 2, 3, 4], (1,), [])
        d = SuperOperator.identity(X7) + u2 + u4
        assert truncate(d, 1) == u2

    def test_commutes_with_exp(self):
        rng = random.Random(4)
        for _ in range(20):
            u = rand_nilpotent(rng, X7, (2, 4, 6))
            for q in (1, 2, 3):
                assert truncate(op_exp(u), q) == truncate(op_exp(truncate(u, q)), q)

    def test_zero(self):
        assert truncate(SuperOperator.zero(X4), 3).is_zero()


class TestMultiplicativity:
    def test_certified_for_derivations(self):
        rng = random.Random(5)
        u = rand_nilpotent(rng, X4, (2,))
        phi = op_exp(u)
        assert phi.certified
        assert certify_automorphism(phi)

    def test_non_derivation_witness_contraction(self):
        # order-2 contraction string: the certificate flags it on the
        # basis pair (e3, e4)
        u = SuperOperator.atom(X4, 1, [1, 2, 3, 4], (0,), [3, 4])
        phi = op_exp(u)
        assert not phi.certified
        e3, e4 = FormSection.basis(X4, [3]), FormSection.basis(X4, [4])
        assert phi.apply(e3.wedge(e4)) != phi.apply(e3).wedge(phi.apply(e4))
        assert not certify_automorphism(phi)

    def test_non_derivation_witness_second_order(self):
        # second-order x-derivative: multiplicativity fails on (x, x);
        # the basis-pair spot check cannot see it since x-derivatives
        # kill constant coefficients
        x = RationalFunction.variable(("x",), "x")
        u = SuperOperator.atom(X4, 1, [1, 2], (2,), [])
        phi = op_exp(u)
        assert not phi.certified
        fx = FormSection.scalar(X4, x)
        assert phi.apply(fx.wedge(fx)) != phi.apply(fx).wedge(phi.apply(fx))


def test_automorphism_shape_validation():
    with pytest.raises(ShapeError):
        Automorphism(SuperOperator.zero(X4))
    ok = SuperOperator.identity(X4) + SuperOperator.atom(X4, 1, [1, 2], (1,), [])
    Automorphism(ok)
    with pytest.raises(ShapeError):
        Automorphism(ok + SuperOperator.atom(X4, 1, [1], (0,), [2]))  # degree-0 extra


def test_inverse_consistency():
    rng = random.Random(6)
    for _ in range(10):
        u = rand_nilpotent(rng, X7, (2, 4))
        phi = op_exp(u)
        assert phi.inverse().op == op_exp(-u).op or phi.compose(phi.inverse()).is_identity()
        assert phi.compose(phi.inverse()).is_identity()
