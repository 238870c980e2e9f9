from fractions import Fraction

from src.cartan import classify_link, links
from src.coeff import coefficient_field, evaluate
from src.constraints import (FREE, K1, K2, ROOT, ROOT2, ZERO, Constraint, W, allowed_tags, atom_value, implies,
                             maximal_assignments, minimal, relaxes, satisfied, template_for_link)

from .conftest import cartan


class TestConstraint:
    def test_atoms_are_sorted(self):
        assert Constraint.of(K1(1), W(0)) == Constraint.of(W(0), K1(1))

    def test_render(self):
        assert Constraint.of(W(0), K1(1)).render() == "(w1^2 + kappa1)*w0"
        assert Constraint.of(K2(2)).render() == "(w2^2 + kappa2*(q2 + q2^-1 - 1)^2)"
        assert Constraint.of().render() == "1"
        assert Constraint.of(W(1), generic=["w0 - w1"]).render() == "w1*(w0 - w1)"

    def test_divides(self):
        small = Constraint.of(W(0))
        big = Constraint.of(W(0), K1(1))
        assert small.divides(big)
        assert not big.divides(small)
        assert not Constraint.of(W(0), W(0)).divides(big)

    def test_nodes_and_dict(self):
        c = Constraint.of(W(2), K1(0), K2(0))
        assert c.nodes() == [0, 2]
        assert c.to_dict()["atoms"] == [["K1", 0], ["K2", 0], ["W", 2]]

    def test_minimal_and_implies(self):
        a, b = Constraint.of(W(0)), Constraint.of(W(0), K1(1))
        assert minimal([b, a, a]) == [a]
        assert implies([a], [b])
        assert not implies([b], [a])
        assert implies([], [])


class TestTemplates:
    def test_simple(self, a21):
        link = classify_link(a21, 0, 1)
        assert template_for_link(link) == sorted([Constraint.of(W(0), K1(1)), Constraint.of(W(1), K1(0))])

    def test_triple(self, g21):
        link = classify_link(g21, 1, 2)
        assert set(template_for_link(link)) == {Constraint.of(W(2), K1(1)),
                                               Constraint.of(W(1), K1(2), K2(2))}

    def test_quadruple_and_double(self, a22):
        (link,) = links(a22)
        assert template_for_link(link) == [Constraint.of(W(1), K1(0))]
        cd = cartan("c2^1")
        assert template_for_link(classify_link(cd, 0, 1)) == [Constraint.of(W(1), K1(0))]

    def test_no_constraint(self, a11):
        (link,) = links(a11)
        assert template_for_link(link) == []
        assert template_for_link(classify_link(cartan("d4^1"), 0, 1)) == []


class TestAtomValues:
    def test_root_kills_first_factor(self, a21):
        cf = coefficient_field(("c0", "cb0", "w0"))
        value = atom_value(cf, a21, K1(0))
        # c = cb = 1, q = 4: kappa = 4/9, so w^2 = -4/9 is a root
        assert abs(evaluate(value, {"t": 2, "c0": 1, "cb0": 1, "w0": 2j / 3})) < 1e-12
        assert atom_value(cf, a21, W(0)) == cf.fgen("w0")

    def test_second_factor(self, g21):
        cf = coefficient_field(("c2", "cb2", "w2"))
        value = atom_value(cf, g21, K2(2))
        # kappa = 4/9 and (q + 1/q - 1)^2 = (13/4)^2
        assert evaluate(value, {"t": 2, "c2": 1, "cb2": 1, "w2": 0}) == Fraction(169, 36)


class TestTags:
    def test_satisfied(self):
        c = Constraint.of(W(0), K1(1))
        assert satisfied(c, {0: ZERO, 1: FREE})
        assert satisfied(c, {0: FREE, 1: ROOT})
        assert not satisfied(c, {0: ROOT, 1: ZERO})
        assert satisfied(Constraint.of(K2(1)), {1: ROOT2})

    def test_allowed_tags(self):
        cs = [Constraint.of(W(1), K1(2), K2(2))]
        assert ROOT2 in allowed_tags(cs, 2)
        assert ROOT2 not in allowed_tags(cs, 1)

    def test_relaxes(self):
        assert relaxes({0: ROOT, 1: ZERO}, {0: ROOT, 1: FREE})
        assert not relaxes({0: ROOT, 1: FREE}, {0: ROOT, 1: ZERO})

    def test_maximal_assignments(self):
        pool = [{0: ROOT, 1: ZERO}, {0: ROOT, 1: FREE}, {0: ZERO, 1: ZERO}]
        assert maximal_assignments(pool) == [{0: ROOT, 1: FREE}, {0: ZERO, 1: ZERO}]
