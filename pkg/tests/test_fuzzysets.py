"""Tests for discrete fuzzy sets and similarity measures."""

import numpy as np
import pytest

from aggreason.connectives.aggregations import standard_negation
from aggreason.errors import InvalidUniverse, RangeError, UniverseMismatch, UnknownName
from aggreason.fuzzysets import (
    JACCARD,
    DiscreteFuzzySet,
    FiniteUniverse,
    SimilarityMeasure,
    builtin_similarity,
    check_nested_monotonicity_exhaustive,
    check_similarity_axioms,
    complement,
    is_crisp,
    is_normal,
    is_subset,
    jaccard_similarity,
    membership_levels,
    random_fuzzy_set,
    ruspini_partition_check,
)


def _inclusion(a, b):
    size = np.sum(a, axis=-1)
    return np.where(size > 0.0, np.sum(np.minimum(a, b), axis=-1) / np.where(size > 0.0, size, 1.0), 1.0)


def _sup_distance_complement(a, b):
    return 1.0 - np.max(np.abs(a - b), axis=-1)


def _sup_distance(a, b):
    return np.max(np.abs(a - b), axis=-1)


class TestFiniteUniverse:
    """Tests for FiniteUniverse."""

    def test_empty(self):
        """Test that a universe needs at least one label."""
        with pytest.raises(InvalidUniverse):
            FiniteUniverse("U", ())

    def test_repeated_label(self):
        """Test that labels must be distinct."""
        with pytest.raises(InvalidUniverse):
            FiniteUniverse("U", ("a", "a"))

    def test_index(self, universes):
        """Test label lookup."""
        u, _ = universes
        assert u.index("x3") == 2
        with pytest.raises(UniverseMismatch):
            u.index("y1")


class TestDiscreteFuzzySet:
    """Tests for DiscreteFuzzySet."""

    def test_absent_labels_are_zero(self, shifted_rule):
        """Test that unlisted points have membership 0."""
        d, _, _ = shifted_rule
        assert d["x4"] == 0.0
        assert list(d.vector) == [1.0, 0.2, 0.5, 0.0, 0.0]

    def test_rejects_out_of_range(self, universes):
        """Test that memberships must lie in [0, 1]."""
        u, _ = universes
        with pytest.raises(RangeError, match="D.x1"):
            DiscreteFuzzySet(u, {"x1": 1.5}, "D")

    def test_rejects_foreign_label(self, universes):
        """Test that labels must belong to the universe."""
        u, _ = universes
        with pytest.raises(UniverseMismatch):
            DiscreteFuzzySet(u, {"y1": 0.5})

    def test_from_vector_size(self, universes):
        """Test that from_vector checks the length."""
        u, _ = universes
        with pytest.raises(UniverseMismatch):
            DiscreteFuzzySet.from_vector(u, [0.1, 0.2])

    def test_equality_ignores_name(self, universes):
        """Test that equality compares universe and memberships."""
        u, _ = universes
        assert DiscreteFuzzySet(u, {"x1": 0.5}, "A") == DiscreteFuzzySet.from_vector(u, [0.5, 0, 0, 0, 0])

    def test_to_dict_is_sparse(self, shifted_rule):
        """Test that zero memberships are omitted."""
        d, _, _ = shifted_rule
        assert d.to_dict() == {"x1": 1.0, "x2": 0.2, "x3": 0.5}

    def test_predicates(self, universes, shifted_rule):
        """Test normality, crispness and inclusion."""
        u, _ = universes
        d, _, d_prime = shifted_rule
        assert is_normal(d)
        assert not is_crisp(d)
        assert is_crisp(DiscreteFuzzySet.universal(u))
        assert not is_subset(d, d_prime)
        assert is_subset(DiscreteFuzzySet.empty(u), d)

    def test_complement(self, shifted_rule):
        """Test that the complement covers points outside the support."""
        d, _, _ = shifted_rule
        assert np.allclose(complement(d, standard_negation()).vector, [0.0, 0.8, 0.5, 1.0, 1.0])

    def test_universe_mismatch(self, shifted_rule):
        """Test that sets on different universes are not compared."""
        d, b, _ = shifted_rule
        with pytest.raises(UniverseMismatch):
            is_subset(d, b)


class TestRandomSets:
    """Tests for membership_levels and random_fuzzy_set."""

    def test_levels(self):
        """Test the levels of step 0.25."""
        assert list(membership_levels(0.25)) == [0.0, 0.25, 0.5, 0.75, 1.0]

    @pytest.mark.parametrize("step", [0.3, 0.0, 1.5])
    def test_bad_step(self, step):
        """Test that the step must divide [0, 1]."""
        with pytest.raises(ValueError):
            membership_levels(step)

    def test_normal_draw(self, universes):
        """Test that normal draws reach 1 and stay on the levels."""
        u, _ = universes
        rng = np.random.default_rng(7)
        for _ in range(20):
            fs = random_fuzzy_set(rng, u, step=0.25, normal=True)
            assert is_normal(fs)
            assert set(fs.vector) <= {0.0, 0.25, 0.5, 0.75, 1.0}

    def test_seeded(self, universes):
        """Test that the same seed draws the same set."""
        u, _ = universes
        first = random_fuzzy_set(np.random.default_rng(3), u)
        second = random_fuzzy_set(np.random.default_rng(3), u)
        assert first == second


class TestSimilarity:
    """Tests for the Jaccard similarity and the similarity axiom checks."""

    def test_jaccard_value(self, shifted_rule):
        """Test Jaccard(D, D') = 0.7 / 2.7."""
        d, _, d_prime = shifted_rule
        assert jaccard_similarity(d, d_prime) == pytest.approx(7.0 / 27.0)

    def test_jaccard_identical(self, shifted_rule):
        """Test that a set is fully similar to itself."""
        d, _, _ = shifted_rule
        assert jaccard_similarity(d, d) == 1.0

    def test_jaccard_empty_sets(self, universes):
        """Test the convention for two empty sets."""
        u, _ = universes
        assert jaccard_similarity(DiscreteFuzzySet.empty(u), DiscreteFuzzySet.empty(u)) == 1.0

    def test_jaccard_disjoint(self, universes):
        """Test that disjoint sets have similarity 0."""
        u, _ = universes
        assert jaccard_similarity(DiscreteFuzzySet(u, {"x1": 1.0}), DiscreteFuzzySet(u, {"x2": 1.0})) == 0.0

    def test_jaccard_universe_mismatch(self, shifted_rule):
        """Test that sets on different universes raise."""
        d, b, _ = shifted_rule
        with pytest.raises(UniverseMismatch):
            jaccard_similarity(d, b)

    def test_builtin_lookup(self):
        """Test similarity lookup by name."""
        assert builtin_similarity("jaccard") is JACCARD
        with pytest.raises(UnknownName):
            builtin_similarity("cosine")

    def test_jaccard_axioms(self):
        """Test that Jaccard passes all randomized axiom checks."""
        report = check_similarity_axioms(JACCARD, trials=500, seed=1)
        for axiom in ("S1", "S2", "S3", "S4"):
            assert report.holds(axiom), axiom
        assert report.details["trials"] == 500

    def test_inclusion_is_not_symmetric(self):
        """Test that an inclusion degree fails the symmetry check."""
        report = check_similarity_axioms(SimilarityMeasure("inclusion", _inclusion), trials=200)
        assert not report.holds("S1")
        assert set(report.checks["S1"].counterexample) == {"D", "D_prime"}

    def test_sup_distance_fails_s3(self):
        """Test that 1 - max|D - D'| scores overlapping sets 0."""
        measure = SimilarityMeasure("sup_distance", _sup_distance_complement)
        report = check_similarity_axioms(measure, trials=500, seed=1)

        assert report.holds("S1")
        assert not report.holds("S3")
        cex = report.checks["S3"].counterexample
        overlap = np.minimum(cex["D"], cex["D_prime"])
        assert np.any(overlap > 0.0)
        assert np.max(np.abs(np.subtract(cex["D"], cex["D_prime"]))) == 1.0

    @pytest.mark.parametrize(
        "universe_size,denominator,chains",
        [(2, 8, 165**2), (3, 4, 35**3), (4, 2, 10**4), (3, 8, 165**3)],
    )
    def test_exhaustive_nested_monotonicity(self, universe_size, denominator, chains):
        """Test S4 for Jaccard on every nested chain of small sets."""
        verdict = check_nested_monotonicity_exhaustive(JACCARD, universe_size, denominator)
        assert verdict.holds, verdict.counterexample
        assert verdict.note == f"{chains} chains checked"

    @pytest.mark.slow
    def test_exhaustive_nested_monotonicity_largest(self):
        """Test S4 for Jaccard on four points with memberships in eighths."""
        verdict = check_nested_monotonicity_exhaustive(JACCARD, 4, 8)
        assert verdict.holds, verdict.counterexample
        assert verdict.note == f"{165**4} chains checked"

    def test_exhaustive_reports_first_failure(self):
        """Test that a distance used as a similarity breaks nested monotonicity."""
        measure = SimilarityMeasure("distance", _sup_distance)
        verdict = check_nested_monotonicity_exhaustive(measure, 3, 2)

        assert not verdict.holds
        assert set(verdict.counterexample) == {"D", "D_prime", "D_second"}
        cex = verdict.counterexample
        assert all(d <= m <= t for d, m, t in zip(cex["D"], cex["D_prime"], cex["D_second"]))


class TestRuspiniPartition:
    """Tests for ruspini_partition_check."""

    def test_partition(self):
        """Test three overlapping sets that sum to 1."""
        u = FiniteUniverse("U", ("u1", "u2", "u3", "u4", "u5"))
        low = DiscreteFuzzySet(u, {"u1": 1.0, "u2": 0.5})
        mid = DiscreteFuzzySet(u, {"u2": 0.5, "u3": 1.0, "u4": 0.5})
        high = DiscreteFuzzySet(u, {"u4": 0.5, "u5": 1.0})
        assert ruspini_partition_check([low, mid, high]).holds

    def test_not_a_partition(self, shifted_rule):
        """Test that the first failing point is reported."""
        d, _, d_prime = shifted_rule
        verdict = ruspini_partition_check([d, d_prime])
        assert not verdict.holds
        assert verdict.counterexample["label"] == "x2"
        assert verdict.counterexample["sum"] == pytest.approx(0.7)

    def test_empty_list(self):
        """Test that no sets is not a partition."""
        assert not ruspini_partition_check([]).holds
