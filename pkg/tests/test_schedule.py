"""Schedule math: initialization, decay factors, per-epoch updates, reversal."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from currikit.errors import (
    EmptyDatasetError,
    InvalidProbabilityError,
    ReversalOutOfRangeError,
    ScheduleExhaustedError,
    UnknownFineLabelError,
)
from currikit.schedule import (
    DEFAULT_SCORES,
    ScheduleParams,
    ScoreTable,
    advance_epoch,
    compute_lambda,
    from_external_probabilities,
    init_probabilities,
    make_schedule,
    probability_trajectory,
    reverse_scores,
    uniform_probabilities,
)
from currikit.synth import DEFAULT_TRAIN_COUNTS

score_tables = st.dictionaries(
    st.text(min_size=1, max_size=8), st.integers(1, 100), min_size=1, max_size=12
).map(ScoreTable)


def expand_counts(counts: dict) -> list[str]:
    labels = []
    for label, count in counts.items():
        labels.extend([label] * count)
    return labels


class TestInitProbabilities:
    def test_worked_example(self):
        # Summation oracle: scores 30, 30, 70, 10 sum to 140.
        p = init_probabilities(["normal", "a", "c", "f"], DEFAULT_SCORES)
        expected = np.array([30, 30, 70, 10]) / 140.0
        np.testing.assert_allclose(p, expected, rtol=1e-15)
        np.testing.assert_allclose(
            p, [0.21429, 0.21429, 0.50000, 0.07143], atol=5e-6
        )
        assert abs(p.sum() - 1.0) < 1e-9

    def test_single_class_is_uniform(self):
        p = init_probabilities(["e"] * 7, DEFAULT_SCORES)
        np.testing.assert_array_equal(p, np.full(7, 1.0 / 7.0))

    def test_full_default_profile(self):
        # Brute-force accumulation over per-class counts and scores.
        labels = expand_counts(DEFAULT_TRAIN_COUNTS)
        score_sum = sum(
            DEFAULT_SCORES.score(l) * c for l, c in DEFAULT_TRAIN_COUNTS.items()
        )
        assert score_sum == 47210
        p = init_probabilities(labels, DEFAULT_SCORES)
        assert len(p) == 1392
        by_label = dict(zip(labels, p))
        np.testing.assert_allclose(by_label["normal"], 30 / 47210, rtol=1e-12)
        np.testing.assert_allclose(by_label["e"], 90 / 47210, rtol=1e-12)
        np.testing.assert_allclose(by_label["normal"], 6.3546e-4, rtol=1e-4)
        np.testing.assert_allclose(by_label["e"], 1.9064e-3, rtol=1e-4)

    def test_empty_labels_rejected(self):
        with pytest.raises(EmptyDatasetError):
            init_probabilities([], DEFAULT_SCORES)

    def test_unknown_label_rejected(self):
        with pytest.raises(UnknownFineLabelError) as err:
            init_probabilities(["normal", "zz"], DEFAULT_SCORES)
        assert err.value.label == "zz"

    @given(table=score_tables, data=st.data())
    @settings(max_examples=200, deadline=None)
    def test_sums_to_one_and_preserves_rank(self, table, data):
        labels = data.draw(
            st.lists(st.sampled_from(table.labels()), min_size=1, max_size=50)
        )
        p = init_probabilities(labels, table)
        assert abs(p.sum() - 1.0) < 1e-9
        assert np.all(p > 0)
        for i in range(len(labels)):
            for j in range(len(labels)):
                si, sj = table.score(labels[i]), table.score(labels[j])
                if si > sj:
                    assert p[i] > p[j]
                elif si == sj:
                    assert p[i] == p[j]


class TestComputeLambda:
    def test_uniform_probability_gives_one(self):
        for n in (1, 4, 97):
            assert compute_lambda(1.0 / n, n, 5) == 1.0

    def test_worked_examples(self):
        lam = compute_lambda(0.5, 4, 4)
        np.testing.assert_allclose(lam, 0.5**0.25, rtol=1e-15)
        np.testing.assert_allclose(lam, 0.84090, atol=5e-6)
        np.testing.assert_allclose(lam**4 * 0.5, 0.25, rtol=1e-12)

        lam = compute_lambda(0.1, 4, 2)
        np.testing.assert_allclose(lam, np.sqrt(2.5), rtol=1e-15)
        np.testing.assert_allclose(lam, 1.58114, atol=5e-6)
        np.testing.assert_allclose(lam**2 * 0.1, 0.25, rtol=1e-12)

    def test_direction(self):
        assert compute_lambda(0.01, 10, 3) > 1.0
        assert compute_lambda(0.5, 10, 3) < 1.0

    def test_invalid_probability(self):
        with pytest.raises(InvalidProbabilityError):
            compute_lambda(0.0, 4, 2)
        with pytest.raises(InvalidProbabilityError):
            compute_lambda(-0.2, 4, 2)


class TestAdvanceEpoch:
    def test_worked_example(self):
        p0 = np.array([0.5, 0.25, 0.15, 0.10])
        params = ScheduleParams(total_epochs=5, transition_epoch=2)
        state = from_external_probabilities(p0, params)
        lam = ((0.25) / p0) ** 0.5
        np.testing.assert_allclose(state.lambdas, lam, rtol=1e-15)

        state2 = advance_epoch(state, params)
        np.testing.assert_allclose(state2.current_probs, p0 * lam, rtol=1e-15)
        np.testing.assert_allclose(
            state2.current_probs, [0.35355, 0.25, 0.19365, 0.15811], atol=5e-6
        )
        state3 = advance_epoch(state2, params)
        np.testing.assert_array_equal(state3.current_probs, np.full(4, 0.25))
        state4 = advance_epoch(state3, params)
        np.testing.assert_array_equal(state4.current_probs, np.full(4, 0.25))

    def test_uniform_stays_uniform(self):
        params = ScheduleParams(total_epochs=6, transition_epoch=4)
        state = from_external_probabilities(uniform_probabilities(5), params)
        for probs in probability_trajectory(state, params):
            np.testing.assert_array_equal(probs, np.full(5, 0.2))

    def test_transition_epoch_one_means_uniform_from_epoch_two(self):
        params = ScheduleParams(total_epochs=4, transition_epoch=1)
        state = from_external_probabilities(np.array([0.4, 0.1]), params)
        trajectory = probability_trajectory(state, params)
        np.testing.assert_allclose(trajectory[0], [0.8, 0.2], rtol=1e-15)
        for probs in trajectory[1:]:
            np.testing.assert_array_equal(probs, np.full(2, 0.5))

    def test_exhaustion(self):
        params = ScheduleParams(total_epochs=2, transition_epoch=1)
        state = from_external_probabilities(np.array([0.7, 0.3]), params)
        state = advance_epoch(state, params)
        with pytest.raises(ScheduleExhaustedError):
            advance_epoch(state, params)

    def test_epoch_one_untouched(self):
        p0 = np.array([0.7, 0.2, 0.1])
        state = from_external_probabilities(p0, ScheduleParams(4, 2))
        np.testing.assert_array_equal(state.current_probs, state.initial_probs)
        assert state.current_epoch == 1

    @given(
        data=st.data(),
        n=st.integers(1, 32),
        total=st.integers(1, 24),
    )
    @settings(max_examples=150, deadline=None)
    def test_iterative_matches_closed_form(self, data, n, total):
        transition = data.draw(st.integers(1, total))
        raw = data.draw(
            st.lists(
                st.floats(0.01, 100.0, allow_nan=False), min_size=n, max_size=n
            )
        )
        params = ScheduleParams(total, transition)
        state = from_external_probabilities(np.array(raw), params)
        p0 = state.initial_probs
        lam = state.lambdas
        for epoch, probs in enumerate(probability_trajectory(state, params), start=1):
            if epoch <= transition:
                np.testing.assert_allclose(
                    probs, p0 * lam ** (epoch - 1), rtol=1e-12
                )
            else:
                assert np.all(probs == 1.0 / n)

    def test_monotone_transition(self):
        # Samples above 1/N decay strictly; samples below grow strictly.
        p0 = np.array([0.5, 0.3, 0.1, 0.06, 0.04])
        params = ScheduleParams(total_epochs=9, transition_epoch=7)
        state = from_external_probabilities(p0, params)
        trajectory = probability_trajectory(state, params)[: params.transition_epoch]
        stacked = np.stack(trajectory)
        n = len(p0)
        for i in range(n):
            column = stacked[:, i]
            if p0[i] > 1.0 / n:
                assert np.all(np.diff(column) < 0)
            elif p0[i] < 1.0 / n:
                assert np.all(np.diff(column) > 0)
            else:
                assert np.all(column == 1.0 / n)


class TestReverseScores:
    def test_default_table(self):
        reversed_table = reverse_scores(DEFAULT_SCORES)
        assert reversed_table.entries == {
            "normal": 70, "a": 70, "b": 70, "c": 30, "d": 60, "e": 10, "f": 90,
        }

    def test_fixed_point(self):
        table = ScoreTable({"x": 50})
        assert reverse_scores(table).entries == {"x": 50}

    def test_score_100_rejected(self):
        with pytest.raises(ReversalOutOfRangeError):
            reverse_scores(ScoreTable({"x": 100}))

    @given(
        st.dictionaries(
            st.text(min_size=1, max_size=8), st.integers(1, 99), min_size=1, max_size=12
        )
    )
    @settings(max_examples=300, deadline=None)
    def test_involution(self, entries):
        table = ScoreTable(entries)
        assert reverse_scores(reverse_scores(table)).entries == table.entries


class TestFromExternalProbabilities:
    def test_normalization(self):
        state = from_external_probabilities([2, 1, 1], ScheduleParams(4, 2))
        np.testing.assert_allclose(state.initial_probs, [0.5, 0.25, 0.25], rtol=1e-15)

    def test_already_uniform_is_constant(self):
        params = ScheduleParams(6, 3)
        state = from_external_probabilities([0.25] * 4, params)
        np.testing.assert_array_equal(state.lambdas, np.ones(4))
        for probs in probability_trajectory(state, params):
            np.testing.assert_array_equal(probs, np.full(4, 0.25))

    def test_rejects_bad_input(self):
        params = ScheduleParams(4, 2)
        with pytest.raises(EmptyDatasetError):
            from_external_probabilities([], params)
        with pytest.raises(InvalidProbabilityError):
            from_external_probabilities([0.5, 0.0], params)
        with pytest.raises(InvalidProbabilityError):
            from_external_probabilities([0.5, -1.0], params)
        with pytest.raises(InvalidProbabilityError):
            from_external_probabilities([0.5, np.nan], params)


class TestScoreTable:
    def test_bounds_enforced(self):
        with pytest.raises(ValueError):
            ScoreTable({"x": 0})
        with pytest.raises(ValueError):
            ScoreTable({"x": 101})
        with pytest.raises(ValueError):
            ScoreTable({})
        with pytest.raises(ValueError):
            ScoreTable({"x": 2.5})

    def test_lookup(self):
        assert DEFAULT_SCORES.score("e") == 90
        assert "e" in DEFAULT_SCORES
        with pytest.raises(UnknownFineLabelError):
            DEFAULT_SCORES.score("unknown")


class TestScheduleParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ScheduleParams(0, 1)
        with pytest.raises(ValueError):
            ScheduleParams(4, 0)
        with pytest.raises(ValueError):
            ScheduleParams(4, 5)
        ScheduleParams(4, 4)


def test_make_schedule_matches_init_probabilities():
    labels = ["normal", "a", "c", "f", "e"]
    params = ScheduleParams(8, 4)
    state = make_schedule(labels, DEFAULT_SCORES, params)
    np.testing.assert_array_equal(
        state.initial_probs, init_probabilities(labels, DEFAULT_SCORES)
    )
    np.testing.assert_allclose(
        state.lambdas,
        ((1.0 / 5) / state.initial_probs) ** 0.25,
        rtol=1e-15,
    )
