import pytest

from src.coeff import coefficient_field, kappa, render
from src.constraints import FREE, K1, ROOT, ZERO, Constraint, W, atom_value
from src.exceptions import HomomorphismError
from src.freealg import E, F, FreeAlgebra
from src.homver import (branches_for, check_bar_symmetry, check_necessity, extract_constraints, impose,
                        matrix_oracle_sl2, realize, relation_constraints, session_symbols, solve_rho, verify_pair)
from src.onsager import rho_symbols

from .conftest import cartan


@pytest.fixture(scope="module")
def a21_report():
    return verify_pair(cartan("a2^1"), 0, 1)


@pytest.fixture(scope="module")
def a21_bar_report():
    return verify_pair(cartan("a2^1"), 0, 1, "bar")


@pytest.fixture(scope="module")
def c21_report():
    return verify_pair(cartan("c2^1"), 0, 1)


@pytest.fixture
def rho_algebra(a21):
    cf = coefficient_field(("c0", "cb0", "w0", "c1", "cb1", "w1", "rho"))
    return FreeAlgebra(a21, cf)


class TestRealization:
    def test_session_symbols(self, a21):
        assert session_symbols(a21, 1, 0) == ("c0", "cb0", "w0", "c1", "cb1", "w1", "rho0_10", "rho0_01")

    def test_standard_images(self, pair_algebra):
        alg = pair_algebra
        images = realize(alg.cd, "std", alg, (0, 1)).images
        cf = alg.cf
        expected = (alg.term((E(0),), alg.kvec(0, 1), cf.gen("c0"))
                    + alg.term((F(0),), alg.kvec(0, 1), cf.gen("cb0"))
                    + alg.term((), alg.kvec(0, 2), cf.gen("w0")))
        assert images[0] == expected
        assert set(images) == {0, 1}

    def test_bar_images_use_inverse_k(self, pair_algebra):
        alg = pair_algebra
        image = realize(alg.cd, "bar", alg, (1,)).images[1]
        assert {m.kexp for m, _ in image} == {alg.kvec(1, -1), alg.kvec(1, -2)}

    def test_default_session(self, a21):
        realization = realize(a21)
        assert set(realization.images) == {0, 1, 2}
        assert "A2" in realization.render()

    def test_unknown_variant(self, a21):
        with pytest.raises(HomomorphismError):
            realize(a21, "mirror")


class TestSolveRho:
    def test_single_unknown(self, rho_algebra):
        alg = rho_algebra
        cf = alg.cf
        coeff = cf.gen("rho") - cf.gen("c0") * cf.gen("cb0")
        reduced = alg.term((E(0),), None, coeff) + alg.term((F(1),), None, coeff * cf.gen("w0"))
        solution = solve_rho(cf, reduced, ["rho"], ["w0", "w1"])
        assert solution == {"rho": cf.fgen("c0") * cf.fgen("cb0")}

    def test_inconsistent(self, rho_algebra):
        alg = rho_algebra
        cf = alg.cf
        reduced = (alg.term((E(0),), None, cf.gen("rho") - 1)
                   + alg.term((F(0),), None, cf.gen("rho") - 2))
        with pytest.raises(HomomorphismError):
            solve_rho(cf, reduced, ["rho"], ["w0", "w1"])

    def test_undetermined(self, rho_algebra):
        alg = rho_algebra
        with pytest.raises(HomomorphismError):
            solve_rho(alg.cf, alg.letter(E(0)), ["rho"], ["w0", "w1"])

    def test_nonlinear(self, rho_algebra):
        alg = rho_algebra
        cf = alg.cf
        with pytest.raises(HomomorphismError):
            solve_rho(cf, alg.term((E(0),), None, cf.gen("rho") ** 2), ["rho"], ["w0", "w1"])

    def test_no_unknowns(self, rho_algebra):
        assert solve_rho(rho_algebra.cf, rho_algebra.letter(E(0)), [], ["w0"]) == {}


class TestConstraintExtraction:
    def test_atoms_are_recognized(self, pair_algebra):
        alg = pair_algebra
        cf = alg.cf
        value = atom_value(cf, alg.cd, W(0)) * atom_value(cf, alg.cd, K1(1))
        residual = alg.term((E(0),), None, cf.from_field(value * 3))
        assert extract_constraints(cf, alg.cd, residual, [0, 1]) == [Constraint.of(W(0), K1(1))]

    def test_generic_leftover(self, pair_algebra):
        alg = pair_algebra
        cf = alg.cf
        value = atom_value(cf, alg.cd, W(1)) * (cf.fgen("w0") - cf.fgen("w1"))
        (constraint,) = extract_constraints(cf, alg.cd, alg.term((E(0),), None, cf.from_field(value)), [0, 1])
        assert constraint.atoms == (W(1),)
        assert len(constraint.generic) == 1

    def test_multiples_are_dropped(self, pair_algebra):
        alg = pair_algebra
        cf = alg.cf
        w0 = atom_value(cf, alg.cd, W(0))
        residual = (alg.term((E(0),), None, cf.from_field(w0))
                    + alg.term((F(0),), None, cf.from_field(w0 * atom_value(cf, alg.cd, K1(1)))))
        assert extract_constraints(cf, alg.cd, residual, [0, 1]) == [Constraint.of(W(0))]

    def test_relations_are_read_separately(self, pair_algebra):
        """Opposite residuals on the same word must not cancel"""
        alg = pair_algebra
        cf = alg.cf
        w0 = cf.from_field(atom_value(cf, alg.cd, W(0)))
        first = alg.term((E(0), E(1)), None, w0)
        second = alg.term((E(0), E(1)), None, -w0)
        assert relation_constraints(cf, alg.cd, [first, second], [0, 1]) == [Constraint.of(W(0))]
        assert extract_constraints(cf, alg.cd, first + second, [0, 1]) == []

    def test_union_is_reduced(self, pair_algebra):
        alg = pair_algebra
        cf = alg.cf
        w0 = atom_value(cf, alg.cd, W(0))
        first = alg.term((E(0),), None, cf.from_field(w0))
        second = alg.term((F(1),), None, cf.from_field(w0 * atom_value(cf, alg.cd, K1(1))))
        assert relation_constraints(cf, alg.cd, [first, second], [0, 1]) == [Constraint.of(W(0))]


class TestBranches:
    def test_impose_root(self, pair_algebra):
        cf = pair_algebra.cf
        p = cf.gen("w0") ** 2 + (cf.gen("c0") * cf.gen("cb0")).mul_ground(kappa(1))
        assert not impose(cf, pair_algebra.cd, p, {0: ROOT})
        assert impose(cf, pair_algebra.cd, p * cf.gen("w0"), {0: ZERO}) == cf.ring.zero
        assert impose(cf, pair_algebra.cd, p, {0: FREE}) == p

    def test_branches_for_simple_constraint(self):
        branches = branches_for([Constraint.of(W(0), K1(1))], [0, 1])
        assert branches == [{0: ZERO, 1: FREE}, {0: FREE, 1: ROOT}]

    def test_no_constraints(self):
        assert branches_for([], [0, 1]) == [{0: FREE, 1: FREE}]


class TestNecessity:
    def test_nonzero_residual(self, pair_algebra):
        alg = pair_algebra
        residual = alg.term((E(0),), None, alg.cf.gen("w0"))
        holds, points = check_necessity(alg.cf, residual, ["c0", "cb0", "w0"], 5, 7)
        assert holds
        assert len(points) == 5
        assert all(set(p) == {"t", "c0", "cb0", "w0"} for p in points)

    def test_seeded(self, pair_algebra):
        alg = pair_algebra
        residual = alg.term((E(0),), None, alg.cf.gen("w0"))
        assert check_necessity(alg.cf, residual, ["w0"], 3, 11) == check_necessity(alg.cf, residual, ["w0"], 3, 11)

    def test_zero_residual(self, pair_algebra):
        assert check_necessity(pair_algebra.cf, pair_algebra.zero(), ["w0"], 5, 7) == (False, [])


class TestVerifyPair:
    def test_simple_link_rho(self, a21_report):
        assert a21_report.rho == {"rho0_01": "c0*cb0", "rho0_10": "c1*cb1"}
        assert a21_report.rho_matches_paper

    def test_simple_link_constraints(self, a21_report):
        assert set(a21_report.constraints) == {Constraint.of(W(0), K1(1)), Constraint.of(W(1), K1(0))}
        assert a21_report.constraints_agree
        assert a21_report.residual_zero
        assert a21_report.paper_branches_zero
        assert a21_report.passed

    def test_simple_link_is_fully_checked(self, a21_report):
        assert a21_report.mode == "full"
        assert a21_report.necessity is True
        assert len(a21_report.necessity_points) == 5

    def test_report_dict(self, a21_report):
        data = a21_report.to_dict()
        assert data["pair"] == [0, 1]
        assert data["link"]["kind"] == "Simple"
        assert data["rangeInferred"] == []
        assert "passed" not in data["gates"]
        assert data["trace"]["steps"] > 0
        assert data["constraints"] == [c.render() for c in a21_report.constraints]

    def test_bar_variant_agrees(self, a21_report, a21_bar_report):
        assert a21_bar_report.variant == "bar"
        assert check_bar_symmetry(a21_report, a21_bar_report)

    def test_bar_symmetry_needs_same_pair(self, a21_report):
        other = verify_pair(cartan("a2^1"), 1, 2)
        assert not check_bar_symmetry(a21_report, other)

    def test_double_both_link_has_no_constraint(self, a11):
        report = verify_pair(a11, 0, 1)
        assert report.constraints == []
        assert report.residual_zero
        assert report.branches == [{"tags": {"0": FREE, "1": FREE}, "zero": True}]
        assert report.rho_matches_paper
        assert report.passed

    def test_double_link(self, c21_report):
        report = c21_report
        assert report.rho_matches_paper
        assert report.constraints_agree
        assert report.residual_zero
        assert report.paper_branches_zero
        assert report.passed

    def test_double_link_rho(self, c21_report):
        """rho0 = c cb (q + q^-1)^2 on the node with a = -2, q read as q_node"""
        cd = cartan("c2^1")
        report = c21_report
        cf = coefficient_field(session_symbols(cd, 0, 1))
        t = cf.fgen("t")
        for x, y in ((0, 1), (1, 0)):
            if cd.a[x][y] != -2:
                continue
            q = t ** (2 * cd.d[x])
            expected = cf.fgen(f"c{x}") * cf.fgen(f"cb{x}") * (q + 1 / q) ** 2
            assert report.rho[rho_symbols(cd, x, y)[0]] == render(expected)

    def test_double_link_is_fully_checked(self, c21_report):
        report = c21_report
        assert report.constraints
        assert report.mode == "full"
        assert report.gates["idealCorpus"]["instances"] >= 250
        assert report.necessity is True
        assert len(report.necessity_points) == 5

    @pytest.mark.slow
    def test_triple_link(self, g21):
        report = verify_pair(g21, 1, 2)
        assert len(report.rho_values) == 3
        assert report.rho_matches_paper
        assert report.constraints_agree
        assert report.residual_zero
        assert report.paper_branches_zero
        assert report.mode == "full"
        assert report.necessity is True

    @pytest.mark.slow
    def test_quadruple_link(self, a22):
        report = verify_pair(a22, 0, 1)
        assert report.range_inferred == ["gamma10_10", "gamma11_10"]
        assert report.rho_matches_paper
        assert report.constraints_agree
        assert report.residual_zero
        assert report.paper_branches_zero
        assert report.mode == "full"
        assert report.necessity is True

    @pytest.mark.parametrize("name,pair", [
        ("a1^1", (0, 1)),
        ("c2^1", (0, 1)),
        pytest.param("g2^1", (1, 2), marks=pytest.mark.slow),
        pytest.param("a2^2", (0, 1), marks=pytest.mark.slow),
    ])
    def test_bar_symmetry_on_every_link(self, name, pair):
        cd = cartan(name)
        assert check_bar_symmetry(verify_pair(cd, *pair), verify_pair(cd, *pair, "bar"))



class TestMatrixOracle:
    def test_relations_hold(self):
        assert matrix_oracle_sl2()

    def test_shifted_rho_breaks_relations(self):
        assert not matrix_oracle_sl2(rho_shift=1)


def test_rho_render_matches_tabulated_double_both(a11):
    report = verify_pair(a11, 0, 1)
    cf = coefficient_field(session_symbols(a11, 0, 1))
    t = cf.fgen("t")
    expected = cf.fgen("c0") * cf.fgen("cb0") * (t ** 2 + 1 / t ** 2) ** 2
    assert report.rho["rho0_01"] == render(expected)
