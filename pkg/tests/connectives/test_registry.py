"""Tests for the connective registry."""

import pytest

from aggreason.connectives.base import Aggregation, Implication
from aggreason.connectives.registry import ConnectiveRegistry, get_registry, split_spec
from aggreason.errors import InvalidParameter, NotATNorm, UnknownName


class TestSplitSpec:
    """Tests for split_spec."""

    def test_plain_name(self):
        """Test that a string is a name without parameters."""
        assert split_spec("product") == ("product", {})

    def test_object(self):
        """Test that an object carries its parameters."""
        assert split_spec({"name": "clayton_copula", "params": {"theta": 2}}) == (
            "clayton_copula",
            {"theta": 2},
        )

    def test_missing_name(self):
        """Test that a selection without a name is rejected."""
        with pytest.raises(InvalidParameter):
            split_spec({"params": {}})

    def test_params_must_be_object(self):
        """Test that params must be a mapping."""
        with pytest.raises(InvalidParameter):
            split_spec({"name": "product", "params": [1]})


class TestConnectiveRegistry:
    """Tests for ConnectiveRegistry."""

    def test_singleton(self):
        """Test that the registry is a singleton."""
        assert get_registry() is ConnectiveRegistry()

    def test_builtin_names(self, registry):
        """Test that all families are registered."""
        assert "product" in registry.aggregation_names()
        assert "goguen" in registry.implication_names()
        assert "sugeno" in registry.negation_names()
        assert "jaccard" in registry.similarity_names()

    def test_parameterized_aggregation(self, registry):
        """Test a clayton copula selected with a parameter."""
        agg = registry.aggregation({"name": "clayton_copula", "params": {"theta": 1}})
        assert agg(0.5, 0.5) == pytest.approx(1.0 / 3.0)

    def test_non_numeric_parameter(self, registry):
        """Test that parameters must be numbers."""
        with pytest.raises(InvalidParameter):
            registry.aggregation({"name": "clayton_copula", "params": {"theta": "1"}})

    def test_unknown_aggregation(self, registry):
        """Test that an unknown aggregation raises UnknownName."""
        with pytest.raises(UnknownName, match="unknown aggregation 'median'"):
            registry.aggregation("median")

    def test_builtin_implication_takes_no_params(self, registry):
        """Test that builtin implications refuse parameters."""
        with pytest.raises(InvalidParameter):
            registry.implication({"name": "goguen", "params": {"p": 1}})

    def test_residual(self, registry):
        """Test the residual constructor."""
        imp = registry.implication({"name": "residual", "params": {"aggregation": "product"}})
        assert imp.name == "goguen"

    def test_r_implication_needs_tnorm(self, registry):
        """Test that r_implication checks its argument."""
        with pytest.raises(NotATNorm):
            registry.implication({"name": "r_implication", "params": {"tnorm": "max"}})

    def test_an_implication(self, registry):
        """Test an (A,N)-implication with a named negation."""
        imp = registry.implication(
            {"name": "an_implication", "params": {"aggregation": "max", "negation": "standard"}}
        )
        assert imp(0.3, 0.2) == pytest.approx(0.7)

    def test_f_implication(self, registry):
        """Test an f-implication with a parameterized generator."""
        imp = registry.implication(
            {"name": "f_implication", "params": {"generator": {"name": "power", "params": {"lam": 1}}}}
        )
        # f(t) = 1 - t gives the Reichenbach implication
        assert imp(0.5, 0.2) == pytest.approx(0.6)

    def test_missing_constructor_parameter(self, registry):
        """Test that a constructor without its argument is rejected."""
        with pytest.raises(InvalidParameter, match="generator"):
            registry.implication({"name": "g_implication"})

    def test_induced(self, registry):
        """Test the induced aggregation constructor."""
        agg = registry.aggregation({"name": "induced", "params": {"implication": "goguen"}})
        assert agg.name == "product"

    def test_connective_dispatch(self, registry):
        """Test that connective resolves either kind."""
        assert isinstance(registry.connective("min"), Aggregation)
        assert isinstance(registry.connective("godel"), Implication)
        assert isinstance(
            registry.connective({"name": "probabilistic", "params": {"copula": "product"}}), Implication
        )

    def test_connective_unknown(self, registry):
        """Test that connective rejects names of neither kind."""
        with pytest.raises(UnknownName, match="neither"):
            registry.connective("standard")

    def test_unknown_generator(self, registry):
        """Test that generators are looked up per kind."""
        with pytest.raises(UnknownName):
            registry.generator("f", "identity")
