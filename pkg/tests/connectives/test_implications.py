"""Tests for fuzzy implications, generators and their property checks."""

import numpy as np
import pytest

from aggreason.connectives.aggregations import builtin_aggregation, sugeno_negation, standard_negation
from aggreason.connectives.base import Implication, ImplicationAttributes
from aggreason.connectives.implications import (
    Generator,
    an_implication,
    builtin_implication,
    check_implication_properties,
    check_right_continuity_second_arg,
    f_implication,
    f_power,
    g_implication,
    identity,
    neg_log,
    one_minus,
    probabilistic_implication,
    probabilistic_s_implication,
    r_implication_from_tnorm,
    validate_generator,
)
from aggreason.errors import (
    InvalidGenerator,
    InvalidParameter,
    NotACopula,
    NotADisjunctor,
    NotATNorm,
    UnknownName,
)


def _open_godel(x, y):
    return np.where(x < y, 1.0, y)


class TestBuiltinImplication:
    """Tests for the closed-form implications."""

    @pytest.mark.parametrize(
        "name,x,y,expected",
        [
            ("goguen", 0.5, 0.2, 0.4),
            ("goguen", 0.2, 0.5, 1.0),
            ("godel", 0.5, 0.2, 0.2),
            ("lukasiewicz", 0.5, 0.2, 0.7),
            ("kleene_dienes", 0.3, 0.2, 0.7),
            ("reichenbach", 0.5, 0.2, 0.6),
            ("rescher_gaines", 0.5, 0.2, 0.0),
            ("rescher_gaines", 0.2, 0.2, 1.0),
            ("fodor", 0.6, 0.3, 0.4),
            ("fodor", 0.3, 0.2, 0.7),
        ],
    )
    def test_values(self, name, x, y, expected):
        """Test sample values of each builtin."""
        assert builtin_implication(name)(x, y) == pytest.approx(expected)

    def test_goguen_at_origin(self):
        """Test that I(0, 0) = 1 without a division by zero."""
        assert builtin_implication("goguen")(0.0, 0.0) == 1.0

    def test_unknown_name(self):
        """Test that an unknown name raises UnknownName."""
        with pytest.raises(UnknownName):
            builtin_implication("zadeh")

    def test_induced_names(self):
        """Test the closed forms of the induced aggregations."""
        assert builtin_implication("goguen").induced_name == "product"
        assert builtin_implication("godel").induced_name == "min"
        assert builtin_implication("kleene_dienes").induced_fn is not None


class TestGenerators:
    """Tests for f- and g-generators and the implications they generate."""

    def test_yager_from_neg_log(self):
        """Test that -log generates I(x, y) = y^x."""
        imp = f_implication(neg_log())
        assert imp(0.5, 0.25) == pytest.approx(0.5)
        assert imp(0.0, 0.0) == 1.0
        assert imp(0.5, 0.0) == 0.0
        assert imp.resolution == 0.0

    def test_reichenbach_from_one_minus(self):
        """Test that 1 - t generates the Reichenbach implication."""
        assert f_implication(one_minus())(0.5, 0.2) == pytest.approx(0.6)

    def test_goguen_from_identity(self):
        """Test that the identity g-generator gives Goguen's implication."""
        imp = g_implication(identity())
        assert imp(0.5, 0.2) == pytest.approx(0.4)
        assert imp(0.0, 0.3) == 1.0
        assert imp(0.2, 0.5) == 1.0

    def test_pseudo_inverse_by_bisection(self):
        """Test that a generator without an inverse is bisected."""
        gen = Generator("linear", "f", lambda t: 1.0 - t)
        imp = f_implication(gen)
        assert imp.resolution > 0.0
        assert abs(imp(0.5, 0.2) - 0.6) <= 1e-8

    def test_wrong_kind(self):
        """Test that a g-generator is refused by the f-constructor."""
        with pytest.raises(InvalidGenerator):
            f_implication(identity())

    def test_boundary_violation(self):
        """Test that an f-generator must vanish at 1."""
        with pytest.raises(InvalidGenerator):
            validate_generator(Generator("shifted", "f", lambda t: 2.0 - t))

    def test_not_strictly_monotone(self):
        """Test that a flat g-generator is rejected."""
        flat = Generator("flat", "g", lambda t: np.minimum(t, 0.5))
        with pytest.raises(InvalidGenerator):
            validate_generator(flat)

    def test_power_parameter(self):
        """Test that the power must be positive."""
        with pytest.raises(InvalidParameter):
            f_power(0.0)


class TestConstructors:
    """Tests for implications built from aggregations."""

    def test_r_implication_of_product(self):
        """Test that the residual of the product is Goguen's implication."""
        imp = r_implication_from_tnorm(builtin_aggregation("product"))
        assert imp.name == "goguen"

    def test_r_implication_needs_tnorm(self):
        """Test that a mean is refused."""
        with pytest.raises(NotATNorm):
            r_implication_from_tnorm(builtin_aggregation("arithmetic_mean"))

    def test_s_implication_of_max(self):
        """Test that max with the standard negation gives Kleene-Dienes."""
        imp = an_implication(builtin_aggregation("max"), standard_negation())
        assert imp(0.3, 0.2) == pytest.approx(0.7)
        assert imp.attrs.family == "s_implication"
        assert imp.attrs.satisfies_cp is True

    def test_an_implication_with_sugeno(self):
        """Test an (A,N)-implication with a non-standard negation."""
        imp = an_implication(builtin_aggregation("probabilistic_sum"), sugeno_negation(1.0))
        # N(0.5) = 1/3, S(1/3, 0.5) = 2/3
        assert imp(0.5, 0.5) == pytest.approx(2.0 / 3.0)
        assert imp.attrs.satisfies_cp is None

    def test_an_implication_needs_disjunctor(self):
        """Test that the product is not a disjunctor."""
        with pytest.raises(NotADisjunctor):
            an_implication(builtin_aggregation("product"), standard_negation())

    def test_probabilistic_of_product(self):
        """Test that the product copula gives I(x, y) = y for x > 0."""
        imp = probabilistic_implication(builtin_aggregation("product"))
        assert imp(0.5, 0.2) == pytest.approx(0.2)
        assert imp(0.0, 0.2) == 1.0
        assert imp.certified

    def test_probabilistic_of_min_is_goguen(self):
        """Test that the minimum copula gives Goguen's implication."""
        imp = probabilistic_implication(builtin_aggregation("min"))
        assert imp(0.5, 0.2) == pytest.approx(0.4)
        assert imp.certified

    def test_probabilistic_uncertified(self):
        """Test that the Lukasiewicz copula yields an uncertified descriptor."""
        imp = probabilistic_implication(builtin_aggregation("lukasiewicz_tnorm"))
        assert not imp.certified
        assert "nonincreasing" in imp.warnings[0]

    def test_probabilistic_needs_copula(self):
        """Test that a non-copula is refused."""
        with pytest.raises(NotACopula):
            probabilistic_implication(builtin_aggregation("arithmetic_mean"))

    def test_probabilistic_s_of_product(self):
        """Test that the product gives the Reichenbach implication."""
        imp = probabilistic_s_implication(builtin_aggregation("product"))
        assert imp(0.5, 0.2) == pytest.approx(0.6)


class TestImplicationProperties:
    """Tests for check_implication_properties."""

    @pytest.mark.parametrize(
        "name",
        ["goguen", "godel", "lukasiewicz", "kleene_dienes", "reichenbach", "rescher_gaines"],
    )
    def test_declarations_hold(self, name, grid21):
        """Test that no declared property of a builtin is refuted."""
        report = check_implication_properties(builtin_implication(name), grid21)
        assert report.contradictions == []
        for axiom in ("I1", "I2", "I3", "I4", "I5", "LB", "RB"):
            assert report.holds(axiom), axiom

    def test_goguen(self, grid11):
        """Test the profile of Goguen's implication."""
        report = check_implication_properties(builtin_implication("goguen"), grid11)
        assert report.holds("NP")
        assert report.holds("IP")
        assert report.holds("EP")
        assert report.holds("OP")
        assert not report.holds("CP")
        assert report.holds("strictly_increasing_section")
        assert report.details["negation"] == "standard"

    def test_kleene_dienes(self, grid11):
        """Test that Kleene-Dienes satisfies CP but not IP."""
        report = check_implication_properties(builtin_implication("kleene_dienes"), grid11)
        assert report.holds("CP")
        assert not report.holds("IP")
        assert report.checks["IP"].counterexample["I(x,x)"] < 1.0

    def test_rescher_gaines_section(self, grid11):
        """Test that I(1, y) of Rescher-Gaines is not strictly increasing."""
        report = check_implication_properties(builtin_implication("rescher_gaines"), grid11)
        assert not report.holds("NP")
        assert not report.holds("strictly_increasing_section")

    def test_false_declaration(self, grid11):
        """Test that a wrongly declared CP is a contradiction."""
        fake = Implication(
            name="goguen_with_cp",
            fn=builtin_implication("goguen").fn,
            attrs=ImplicationAttributes(satisfies_cp=True),
        )
        report = check_implication_properties(fake, grid11)
        assert [check.name for check in report.contradictions] == ["CP"]

    def test_other_negation_is_not_compared(self, grid11):
        """Test that CP declarations only bind for the standard negation."""
        report = check_implication_properties(
            builtin_implication("lukasiewicz"), grid11, negation=sugeno_negation(1.0)
        )
        assert report.checks["CP"].declared is None
        assert report.details["negation"] == "sugeno(1)"


class TestRightContinuity:
    """Tests for check_right_continuity_second_arg."""

    def test_goguen_has_no_jump(self, grid11):
        """Test that Goguen's implication is right-continuous in y."""
        assert check_right_continuity_second_arg(builtin_implication("goguen"), grid11).holds

    def test_open_godel_jumps(self, grid11):
        """Test that a jump with its value on the lower side is found."""
        verdict = check_right_continuity_second_arg(Implication(name="open", fn=_open_godel), grid11)
        assert not verdict.holds
        cex = verdict.counterexample
        assert cex["right_limit"] == 1.0
        assert cex["value"] == pytest.approx(cex["y"])
        assert verdict.note is None

    def test_declared_flag_is_contradicted(self, grid11):
        """Test that the note flags a declared right-continuity."""
        imp = Implication(
            name="open",
            fn=_open_godel,
            attrs=ImplicationAttributes(right_continuous_in_second_arg=True),
        )
        verdict = check_right_continuity_second_arg(imp, grid11)
        assert not verdict.holds
        assert "declared right-continuous" in verdict.note
