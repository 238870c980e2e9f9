import pytest

from src.coeff import tpow
from src.exceptions import FreeAlgebraError
from src.freealg import (A, E, F, Monomial, TensorPoly, counit, expansion_count, multiply, render_monomial,
                         substitute, tensor_multiply)


class TestMultiply:
    def test_k_commutes_to_the_right(self, pair_algebra):
        """K0 E0 = t^2 E0 K0 and K0 F1 = t F1 K0 in a2^1"""
        alg = pair_algebra
        assert alg.k(0) * alg.letter(E(0)) == alg.term((E(0),), alg.kvec(0, 1), tpow(2))
        assert alg.k(0) * alg.letter(F(1)) == alg.term((F(1),), alg.kvec(0, 1), tpow(1))
        assert alg.letter(E(0)) * alg.k(0) == alg.term((E(0),), alg.kvec(0, 1))

    def test_k_inverse(self, pair_algebra):
        alg = pair_algebra
        assert alg.k(1) * alg.k(1, -1) == alg.one()
        assert alg.k(1, -1) * alg.letter(E(1)) == alg.term((E(1),), alg.kvec(1, -1), tpow(-2))

    def test_associative(self, pair_algebra):
        alg = pair_algebra
        x = alg.letter(E(0)) * alg.k(1) + alg.letter(F(2)).scale(alg.cf.gen("c0"))
        y = alg.k(0, 2) + alg.letter(E(1))
        z = alg.letter(F(0)) * alg.k(2, -1) + 3
        assert (x * y) * z == x * (y * z)
        assert multiply(x, y) == x * y

    def test_distributive_and_scalars(self, pair_algebra):
        alg = pair_algebra
        x, y, z = alg.letter(E(0)), alg.letter(F(1)), alg.k(2)
        assert x * (y + z) == x * y + x * z
        assert 2 * x - x == x
        assert (x - x) == alg.zero()
        assert not alg.zero()

    def test_degree_and_letters(self, pair_algebra):
        alg = pair_algebra
        p = alg.term((E(0), F(1), E(0))) + alg.letter(F(2))
        assert p.degree() == 3
        assert p.letters() == {E(0), F(1), F(2)}
        assert len(p) == 2

    def test_mismatched_cartan_data(self, pair_algebra, a22):
        with pytest.raises(FreeAlgebraError):
            multiply(pair_algebra.one(), pair_algebra.one(), a22)


class TestWords:
    def test_a_words_carry_no_k(self, pair_algebra):
        with pytest.raises(FreeAlgebraError):
            pair_algebra.term((A(0),), pair_algebra.kvec(0, 1))

    def test_no_mixed_words(self, pair_algebra):
        with pytest.raises(FreeAlgebraError):
            pair_algebra.term((A(0), E(1)))
        with pytest.raises(FreeAlgebraError):
            pair_algebra.letter(A(0)) * pair_algebra.letter(E(1))

    def test_node_range(self, pair_algebra):
        with pytest.raises(FreeAlgebraError):
            pair_algebra.letter(E(3))

    def test_kexp_length(self, pair_algebra):
        with pytest.raises(FreeAlgebraError):
            pair_algebra.term((E(0),), (1, 0))

    def test_render_monomial(self):
        assert render_monomial(Monomial((F(1), E(0)), (2, -1, 0))) == "F1 E0 K0^2 K1^-1"
        assert render_monomial(Monomial((), (0, 1, 0))) == "K1"
        assert render_monomial(Monomial((), (0, 0, 0))) == "1"

    def test_render_poly(self, pair_algebra):
        assert pair_algebra.letter(E(0)).render() == "(1)*E0"
        assert pair_algebra.zero().render() == "0"


class TestCounit:
    def test_kills_letters(self, pair_algebra):
        alg = pair_algebra
        p = alg.letter(E(0)) + alg.k(0).scale(3) + alg.k(1, -1) + alg.letter(F(1)) * alg.k(2)
        assert counit(p) == alg.cf.const(4)

    def test_rejects_a_words(self, pair_algebra):
        with pytest.raises(FreeAlgebraError):
            counit(pair_algebra.letter(A(0)))


class TestSubstitute:
    def test_word_images(self, pair_algebra):
        alg = pair_algebra
        p = alg.term((A(0), A(1))) + alg.term((A(1),)).scale(2)
        images = {0: alg.letter(E(0)) + alg.k(0), 1: alg.letter(F(1))}
        expected = (alg.letter(E(0)) + alg.k(0)) * alg.letter(F(1)) + alg.letter(F(1)).scale(2)
        assert substitute(p, images) == expected

    def test_reduce_hook_applies(self, pair_algebra):
        alg = pair_algebra
        p = alg.term((A(0), A(0)))
        images = {0: alg.letter(E(0))}
        assert substitute(p, images, reduce=lambda x: alg.zero()) == alg.zero()

    def test_missing_image(self, pair_algebra):
        alg = pair_algebra
        with pytest.raises(FreeAlgebraError):
            substitute(alg.term((A(0), A(1))), {0: alg.letter(E(0))})
        with pytest.raises(FreeAlgebraError):
            substitute(alg.term((A(0),)), {})

    def test_expansion_count(self, pair_algebra):
        alg = pair_algebra
        images = {0: alg.letter(E(0)) + alg.k(0), 1: alg.letter(F(1)) + alg.k(1) + alg.letter(E(1))}
        p = alg.term((A(0), A(0), A(1))) + alg.term((A(1),))
        assert expansion_count(p, images) == 2 * 2 * 3 + 3


class TestTensor:
    def test_product(self, pair_algebra):
        alg = pair_algebra
        x = TensorPoly.pure(alg.k(0), alg.letter(A(0)))
        y = TensorPoly.pure(alg.letter(E(0)), alg.letter(A(1)))
        expected = TensorPoly.pure(alg.term((E(0),), alg.kvec(0, 1), tpow(2)), alg.term((A(0), A(1))))
        assert not (x * y - expected)
        assert not (tensor_multiply(x, y) - expected)

    def test_groups(self, pair_algebra):
        alg = pair_algebra
        tp = (TensorPoly.pure(alg.letter(E(0)), alg.letter(A(0)))
              + TensorPoly.pure(alg.k(1), alg.letter(A(0)))
              + TensorPoly.pure(alg.letter(F(1)), alg.one()))
        groups = tp.by_right()
        assert set(groups) == {(A(0),), ()}
        assert groups[(A(0),)] == alg.letter(E(0)) + alg.k(1)
        assert not (TensorPoly.from_groups(alg, groups) - tp)
        assert len(tp.by_left()) == 3

    def test_factor_kinds(self, pair_algebra):
        alg = pair_algebra
        with pytest.raises(FreeAlgebraError):
            TensorPoly.pure(alg.letter(A(0)), alg.letter(A(1)))
        with pytest.raises(FreeAlgebraError):
            TensorPoly.pure(alg.letter(E(0)), alg.letter(E(1)))

    def test_render(self, pair_algebra):
        alg = pair_algebra
        tp = TensorPoly.pure(alg.k(1), alg.letter(A(0)))
        assert tp.render() == "(1)*K1 (x) A0"
