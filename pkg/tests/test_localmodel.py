from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ghostcheck.laurent import LaurentPoly
from ghostcheck.localmodel import (
    XYT,
    ZW,
    GhostVanishingViolated,
    LocalModelError,
    NonConstantLevel,
    PhiConvention,
    chart,
    effective_branch_derivative,
    expand_ghost,
    node_coordinates,
    sigma_values,
    verify_chart_relations,
    verify_residue_theorem,
)
from ghostcheck.obstruction import (
    AttachmentColumn,
    ObstructionProblem,
    Verdict,
    theorem_check,
)
from ghostcheck.selftest import oracle_chain_restrictions


def mono(exps, coeff=1):
    return LaurentPoly.monomial(XYT, exps, coeff)


X = mono((1, 0, 0))
Y = mono((0, 1, 0))
T = mono((0, 0, 1))


class TestCharts:
    def test_m1_is_smooth_model(self):
        ch = chart(1, 0)
        assert ch.x == LaurentPoly.monomial(ZW, (1, 0))
        assert ch.y == LaurentPoly.monomial(ZW, (0, 1))
        assert ch.t == LaurentPoly.monomial(ZW, (1, 1))

    def test_m2_chart0(self):
        ch = chart(2, 0)
        assert ch.x == LaurentPoly.monomial(ZW, (1, 0))
        assert ch.y == LaurentPoly.monomial(ZW, (1, 2))
        assert ch.t == LaurentPoly.monomial(ZW, (1, 1))

    def test_m3_chart1(self):
        ch = chart(3, 1)
        assert ch.x == LaurentPoly.monomial(ZW, (2, 1))
        assert ch.y == LaurentPoly.monomial(ZW, (1, 2))

    def test_index_range(self):
        with pytest.raises(LocalModelError):
            chart(2, 2)
        with pytest.raises(LocalModelError):
            chart(2, -1)

    @pytest.mark.parametrize("m", range(1, 9))
    def test_relations_all_pass(self, m):
        report = verify_chart_relations(m)
        assert report.all_passed
        named = [c.name for c in report.checks]
        assert len(named) == len(set(named))

    def test_m1_has_no_exceptional_equations(self):
        report = verify_chart_relations(1)
        assert len(report.checks) == 1  # just x*y = t

    def test_m5_equation_count(self):
        # per chart: one product identity and m defining equations; m-1 transitions
        report = verify_chart_relations(5)
        assert len(report.checks) == 5 * (1 + 5) + 4

    def test_m_out_of_range(self):
        with pytest.raises(LocalModelError):
            verify_chart_relations(9)
        with pytest.raises(LocalModelError):
            verify_chart_relations(0)


class TestNodeCoordinates:
    def test_m1_node_is_xy(self):
        nc = node_coordinates(1, 1)
        assert nc.x_in_xyt == mono((1, 0, 0))
        assert nc.y_in_xyt == mono((-1, 0, 1))
        assert nc.x_local * nc.y_local == chart(1, 0).t

    def test_m2_level2(self):
        nc = node_coordinates(2, 2)
        # y_2 = w of chart 1, which is the global y there
        assert nc.chart_index == 1
        assert nc.y_local == chart(2, 1).y

    @pytest.mark.parametrize("m", range(1, 7))
    def test_product_is_t(self, m):
        for level in range(1, m + 1):
            nc = node_coordinates(m, level)
            assert nc.x_local * nc.y_local == chart(m, level - 1).t
            assert nc.x_in_xyt * nc.y_in_xyt == mono((0, 0, 1))

    def test_level_out_of_range(self):
        with pytest.raises(LocalModelError):
            node_coordinates(2, 3)
        with pytest.raises(LocalModelError):
            node_coordinates(2, 0)


class TestExpandGhost:
    def test_m1_simple_pole(self):
        expansion = expand_ghost(X, 1)
        assert expansion.constants == ((Fraction(0),),)
        (level,) = expansion.levels
        (comp,) = level.components
        assert comp.name == "C_tilde"
        assert comp.pole_order == 1
        assert level.residue_at_node == (Fraction(1),)

    def test_m2_residues_at_both_levels(self):
        expansion = expand_ghost(X, 2)
        first, second = expansion.levels
        assert [c.name for c in first.components] == ["E_1", "C_tilde"]
        assert first.residue_at_node == (Fraction(1),)
        assert first.components[1].pole_order == 0
        assert expansion.constants[1] == (Fraction(0),)
        assert [c.name for c in second.components] == ["C_tilde"]
        assert second.residue_at_node == (Fraction(1),)

    def test_m2_no_linear_term_means_no_poles(self):
        g = mono((1, 0, 1)) + mono((2, 0, 0))  # x t + x^2
        expansion = expand_ghost(g, 2)
        for level in expansion.levels:
            assert level.residue_at_node == (Fraction(0),)
            for comp in level.components:
                assert comp.pole_order == 0

    def test_zero_map(self):
        expansion = expand_ghost(LaurentPoly.zero(XYT), 1)
        assert expansion.levels[0].residue_at_node == (Fraction(0),)
        assert expansion.levels[0].components[0].pole_order == 0

    def test_vector_valued(self):
        expansion = expand_ghost([X, X.scale(3)], 2)
        assert expansion.n_coords == 2
        assert expansion.levels[0].residue_at_node == (Fraction(1), Fraction(3))

    def test_ghost_vanishing_precondition(self):
        with pytest.raises(GhostVanishingViolated):
            expand_ghost(Y, 2)
        with pytest.raises(GhostVanishingViolated):
            expand_ghost(LaurentPoly.constant(XYT, 1), 2)

    def test_mixed_xy_rejected(self):
        with pytest.raises(LocalModelError):
            expand_ghost(mono((1, 1, 0)), 2)

    def test_negative_exponent_rejected(self):
        with pytest.raises(LocalModelError):
            expand_ghost(mono((-1, 0, 2)), 2)

    def test_wrong_variables_rejected(self):
        with pytest.raises(LocalModelError):
            expand_ghost(LaurentPoly.monomial(ZW, (1, 0)), 2)

    def test_non_constant_level_ty(self):
        with pytest.raises(NonConstantLevel) as info:
            expand_ghost(T * Y, 3)
        assert info.value.level == 2
        assert info.value.component == "C_tilde"
        assert len(info.value.levels_completed) == 1

    def test_non_constant_level_t2y(self):
        with pytest.raises(NonConstantLevel) as info:
            expand_ghost(T * T * Y, 3)
        assert info.value.level == 3

    def test_ghost_branch_tail_is_regular(self):
        # y t^m restricts to the coordinate on the ghost branch only at the
        # last level, where positive powers are allowed
        g = Y * (T**3)
        expansion = expand_ghost(g, 3)
        final = expansion.levels[-1]
        assert final.residue_at_node == (Fraction(0),)
        ghost = final.components[-1]
        assert ghost.pole_order == 0
        assert not ghost.restriction[0].is_zero

    def test_level_shift_consistency(self):
        rng = random.Random(61)
        for _ in range(40):
            m = rng.randint(2, 5)
            terms = {}
            for _ in range(rng.randint(1, 5)):
                a = rng.randint(1, 3)
                c = rng.randint(0, 3 - min(a, 3))
                terms[(a, 0, c)] = terms.get((a, 0, c), 0) + rng.randint(-9, 9)
            g = LaurentPoly(XYT, terms)
            base = expand_ghost(g, m)
            shifted = expand_ghost(g * T, m)
            assert shifted.constants[1:] == base.constants[: m - 1]
            for lvl in range(1, m):
                base_level = base.levels[lvl - 1]
                shift_level = shifted.levels[lvl]
                base_by_name = {c.name: c for c in base_level.components}
                for comp in shift_level.components:
                    assert comp.restriction == base_by_name[comp.name].restriction
                    assert comp.residue == base_by_name[comp.name].residue

    def test_linearity(self):
        rng = random.Random(67)
        for _ in range(30):
            m = rng.randint(1, 4)

            def rand_admissible():
                terms = {}
                for _ in range(rng.randint(0, 4)):
                    a = rng.randint(1, 3)
                    c = rng.randint(0, 2)
                    terms[(a, 0, c)] = terms.get((a, 0, c), 0) + rng.randint(-9, 9)
                return LaurentPoly(XYT, terms)

            g1, g2 = rand_admissible(), rand_admissible()
            scale = Fraction(rng.randint(1, 5), rng.randint(1, 3))
            sum_expansion = expand_ghost(g1 + g2, m)
            e1, e2 = expand_ghost(g1, m), expand_ghost(g2, m)
            scaled = expand_ghost(g1.scale(scale), m)
            for lvl in range(m):
                s = sum_expansion.levels[lvl].residue_at_node
                a = e1.levels[lvl].residue_at_node
                b = e2.levels[lvl].residue_at_node
                assert s == tuple(x + y for x, y in zip(a, b))
                assert scaled.levels[lvl].residue_at_node == tuple(
                    scale * x for x in e1.levels[lvl].residue_at_node
                )


class TestResidueTheorem:
    @pytest.mark.parametrize("m", range(1, 6))
    def test_scaled_linear_map(self, m):
        for c in (Fraction(1), Fraction(-3), Fraction(5, 7)):
            report = verify_residue_theorem(X.scale(c), m)
            assert report.passed
            assert report.expected_residue == (c,)
            for level in report.expansion.levels:
                assert level.residue_at_node == (c,)

    def test_zero_map_passes(self):
        report = verify_residue_theorem(LaurentPoly.zero(XYT), 1)
        assert report.passed
        assert report.expected_residue == (Fraction(0),)

    def test_oracle_agreement(self):
        rng = random.Random(71)
        for _ in range(40):
            m = rng.randint(1, 5)
            terms = {}
            for _ in range(rng.randint(0, 6)):
                a = rng.randint(1, 4)
                c = rng.randint(0, 4 - a)
                terms[(a, 0, c)] = terms.get((a, 0, c), 0) + rng.randint(-9, 9)
            g = LaurentPoly(XYT, terms)
            report = verify_residue_theorem(g, m)
            assert report.passed
            oracle = oracle_chain_restrictions(g, m)
            for level in report.expansion.levels:
                for comp in level.components:
                    j = m if comp.name == "C_tilde" else int(comp.name.split("_")[1])
                    got = {e[0]: c for e, c in comp.restriction[0].terms.items()}
                    assert got == oracle.get((level.level, j), {})

    def test_expected_from_effective_branch(self):
        g = X.scale(4) + mono((2, 0, 0), 7) + mono((1, 0, 2), -5)
        assert effective_branch_derivative(g) == (Fraction(4),)


class TestPhiConvention:
    @pytest.mark.parametrize("m", range(1, 7))
    def test_factorization(self, m):
        assert PhiConvention(m).verify_factorization()


class TestSigmaValues:
    def test_packaging(self):
        values = sigma_values(2, [(1, 0)])
        assert values[0].tangent_coeff == 1
        assert values[0].deriv == (Fraction(1), Fraction(0))
        assert not values[0].is_zero

    def test_zero_value_when_derivative_vanishes(self):
        report = verify_residue_theorem([mono((2, 0, 0)), mono((2, 0, 0))], 2)
        (value,) = sigma_values(2, [report.expansion.levels[-1].residue_at_node])
        assert value.is_zero

    def test_length_mismatch(self):
        with pytest.raises(LocalModelError):
            sigma_values(2, [(1, 0), (1,)])
        with pytest.raises(LocalModelError):
            sigma_values(2, [])

    def test_convention_m_must_match(self):
        with pytest.raises(LocalModelError):
            sigma_values(2, [(1,)], convention=PhiConvention(3))

    def test_residues_from_expansion(self):
        g = [X.scale(2), X.scale(-1)]
        report = verify_residue_theorem(g, 3)
        (value,) = sigma_values(3, [report.expansion.levels[-1].residue_at_node])
        assert value.deriv == (Fraction(2), Fraction(-1))

    def test_feeds_obstruction_single_point(self):
        # a nonzero leading-term value at one attachment point makes the
        # injectivity test fire; a zero one leaves it inconclusive
        for g, expected in (
            (X, Verdict.NOT_EVENTUALLY_SMOOTHABLE),
            (mono((2, 0, 0)), Verdict.INCONCLUSIVE),
        ):
            report = verify_residue_theorem([g, g], 2)
            (value,) = sigma_values(2, [report.expansion.levels[-1].residue_at_node])
            delta = [value.tangent_coeff * Fraction(1, 2), value.tangent_coeff * Fraction(1, 2)]
            prob = ObstructionProblem(
                2, 2, [AttachmentColumn(delta=delta, deriv=value.deriv)]
            )
            assert theorem_check(prob).verdict is expected
