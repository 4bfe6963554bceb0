"""Tests for randomized GMP-rule validation."""

import pytest

from aggreason.errors import InvalidParameter
from aggreason.validity import (
    RULES,
    ConnectiveSelection,
    HypothesisConfig,
    RuleVerdict,
    Sampling,
    applicable_rules,
    check_rule,
    default_configs,
    extended_configs,
    fodor_witness,
    qip_witnesses,
    replay_counterexample,
    validity_report,
)

PRODUCT_GOGUEN = ConnectiveSelection(aggregation="product", implication="goguen")
PRODUCT_KD = ConnectiveSelection(aggregation="product", implication="kleene_dienes")
NORMAL = frozenset({"D_normal"})


class TestSampling:
    """Tests for Sampling validation."""

    def test_defaults(self):
        """Test the default plan."""
        sampling = Sampling()
        assert sampling.universe_sizes == (3, 5)
        assert sampling.step == 0.25
        assert sampling.trials == 500

    @pytest.mark.parametrize(
        "kwargs",
        [{"step": 0.3}, {"step": 0.0}, {"universe_sizes": (0, 3)}, {"universe_sizes": (4, 2)}, {"trials": -1}],
    )
    def test_rejects(self, kwargs):
        """Test that bad plans raise InvalidParameter."""
        with pytest.raises(InvalidParameter):
            Sampling(**kwargs)


class TestHypothesisConfig:
    """Tests for HypothesisConfig validation."""

    def test_unknown_method(self):
        """Test that the method must be known."""
        with pytest.raises(InvalidParameter):
            HypothesisConfig("x", "mamdani", PRODUCT_GOGUEN)

    def test_unknown_requirement(self):
        """Test that requirements must be known."""
        with pytest.raises(InvalidParameter):
            HypothesisConfig("x", "acri", PRODUCT_GOGUEN, frozenset({"B_normal"}))

    def test_unknown_rule(self):
        """Test that expectations must name rules."""
        with pytest.raises(InvalidParameter):
            HypothesisConfig("x", "acri", PRODUCT_GOGUEN, expected={"GMP5": True})

    def test_rule_override(self):
        """Test that an override replaces the connectives for one rule."""
        cfg = HypothesisConfig("x", "acri", PRODUCT_GOGUEN, rule_overrides={"GMP4": PRODUCT_KD})
        assert cfg.selection("GMP4") is PRODUCT_KD
        assert cfg.selection("GMP1") is PRODUCT_GOGUEN

    def test_applicable_rules(self):
        """Test that similarity schemes 1 and 2 swap GMP2 for GMP2'."""
        assert applicable_rules("asbr1") == ("GMP1", "GMP2'", "GMP3", "GMP4")
        assert applicable_rules("aqip") == ("GMP1", "GMP2", "GMP3", "GMP4")


class TestRuleVerdict:
    """Tests for RuleVerdict."""

    def test_symbols(self):
        """Test the grid symbols."""
        assert RuleVerdict("GMP1", "pass").symbol == "✓"
        assert RuleVerdict("GMP1", "fail").symbol == "×"
        assert RuleVerdict("GMP1", "not-applicable").symbol == ""

    def test_expectation(self):
        """Test that only asserted expectations can be contradicted."""
        assert RuleVerdict("GMP1", "fail").matches_expectation
        assert RuleVerdict("GMP1", "fail", expected=False).matches_expectation
        assert not RuleVerdict("GMP1", "fail", expected=True).matches_expectation
        assert RuleVerdict("GMP1", "not-applicable", expected=True).matches_expectation


class TestCheckRule:
    """Tests for check_rule."""

    @pytest.mark.parametrize("rule", ["GMP1", "GMP2", "GMP3", "GMP4"])
    def test_product_goguen_passes(self, rule):
        """Test that the compositional rule with product and Goguen keeps every rule."""
        cfg = HypothesisConfig("ACRI", "acri", PRODUCT_GOGUEN, NORMAL)
        verdict = check_rule(cfg, rule)
        assert verdict.status == "pass"
        assert verdict.trials == 500

    def test_kleene_dienes_breaks_gmp4(self):
        """Test that a random counterexample is found and can be replayed."""
        cfg = HypothesisConfig("KD", "acri", PRODUCT_KD, NORMAL, Sampling(trials=200, seed=5))
        verdict = check_rule(cfg, "GMP4")
        assert verdict.status == "fail"
        cex = verdict.counterexample
        assert cex["source"] == "random"
        assert cex["seed"] == [5, RULES.index("GMP4"), cex["trial"]]
        assert verdict.trials == cex["trial"] + 1

        instance = replay_counterexample(cfg, "GMP4", cex["trial"])
        assert instance.d.to_dict() == cex["sets"]["D"]
        assert instance.b.to_dict() == cex["sets"]["B"]
        assert list(instance.d.universe.labels) == cex["universes"]["U"]

    def test_not_applicable_rule(self):
        """Test that GMP2 is blank for similarity scheme 1."""
        cfg = HypothesisConfig("ASBR1", "asbr1", PRODUCT_GOGUEN, NORMAL)
        verdict = check_rule(cfg, "GMP2")
        assert verdict.status == "not-applicable"
        assert verdict.symbol == ""

    def test_unsatisfiable_requirements(self):
        """Test that one-point universes cannot hold a normal D with a normal complement."""
        cfg = HypothesisConfig(
            "tiny", "asbr1", PRODUCT_GOGUEN, NORMAL, Sampling(universe_sizes=(1, 2), trials=10)
        )
        verdict = check_rule(cfg, "GMP3")
        assert verdict.status == "not-applicable"
        assert "cannot meet" in verdict.note

    def test_shifted_input_witness(self):
        """Test that the QIP witness breaks GMP1 at y5."""
        cfg = HypothesisConfig(
            "AQIP", "aqip", ConnectiveSelection(implication="goguen"), NORMAL,
            Sampling(trials=0), witnesses=qip_witnesses(),
        )
        verdict = check_rule(cfg, "GMP1")
        assert verdict.status == "fail"
        assert verdict.trials == 0
        cex = verdict.counterexample
        assert cex["source"] == "witness"
        assert cex["violation"]["point"] == "y5"
        assert cex["violation"]["B_prime"] == pytest.approx(0.5)

    def test_complement_witness(self):
        """Test that the complement witness breaks GMP3 at y1."""
        cfg = HypothesisConfig(
            "AQIP", "aqip", ConnectiveSelection(implication="goguen"), NORMAL,
            Sampling(trials=0), witnesses=qip_witnesses(),
        )
        verdict = check_rule(cfg, "GMP3")
        assert verdict.status == "fail"
        assert verdict.counterexample["violation"]["point"] == "y1"

    def test_fodor_witness(self):
        """Test that the nested Fodor inputs break GMP2."""
        cfg = HypothesisConfig(
            "AQIP", "aqip", ConnectiveSelection(implication="fodor"), NORMAL,
            Sampling(trials=0), witnesses={"GMP2": fodor_witness()},
        )
        verdict = check_rule(cfg, "GMP2")
        assert verdict.status == "fail"
        violation = verdict.counterexample["violation"]
        assert violation["point"] == "y1"
        assert violation["B_prime"] == pytest.approx(0.25)
        assert violation["B_second"] == 0.0

    def test_missing_aggregation(self):
        """Test that the compositional rule needs an aggregation."""
        cfg = HypothesisConfig("x", "acri", ConnectiveSelection(implication="goguen"))
        with pytest.raises(InvalidParameter):
            check_rule(cfg, "GMP1")


class TestValidityReport:
    """Tests for validity_report over the builtin configurations."""

    @pytest.fixture(scope="class")
    def report(self):
        return validity_report(default_configs(Sampling(trials=20)))

    def test_rows(self, report):
        """Test the row labels."""
        assert [row.config.label for row in report.rows] == ["ACRI", "ASBR1", "ASBR2", "ASBR3", "ASBR4", "AQIP"]

    def test_no_mismatches(self, report):
        """Test that every asserted expectation holds."""
        assert report.mismatches() == []

    def test_grid(self, report):
        """Test the symbols of the ACRI, ASBR1 and ASBR4 rows."""
        grid = dict(report.grid())
        assert grid["ACRI"] == ["✓", "✓", "", "✓", "✓"]
        assert grid["ASBR1"] == ["✓", "", "✓", "✓", "✓"]
        assert grid["ASBR4"] == ["✓", "✓", "", "×", "✓"]

    def test_aqip_row(self, report):
        """Test that AQIP keeps GMP4 and breaks GMP1, GMP2 and GMP3."""
        verdicts = report.rows[-1].verdicts
        assert verdicts["GMP4"].status == "pass"
        for rule in ("GMP1", "GMP2", "GMP3"):
            assert verdicts[rule].status == "fail"
            assert verdicts[rule].counterexample["source"] == "witness"
        assert "y5" in verdicts["GMP1"].note

    def test_extended_rows(self):
        """Test the extra rows with their expectations."""
        report = validity_report(extended_configs(Sampling(trials=50)))
        assert report.mismatches() == []
        assert report.rows[1].verdicts["GMP4"].status == "fail"
