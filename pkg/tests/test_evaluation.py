import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from bnqa import (
    AnswerRanker,
    ConfusionCounts,
    QaFormatError,
    SenseClass,
    cumulative_percentages,
    evaluate,
    load_qa_pairs,
    metrics,
    rank_buckets,
)
from bnqa.evaluation import BUCKET_LABELS

from conftest import DATA, WORKED_QUESTION, nfc

ranks_strategy = st.lists(
    st.one_of(st.none(), st.integers(min_value=1, max_value=40)), max_size=60
)


class TestMetrics:
    def test_large_suite_counts(self):
        m = metrics(ConfusionCounts(tp=106, tn=3, fp=2, fn=1))
        assert m.accuracy == 97.32
        assert m.precision == 98.14  # truncated, not rounded, from 98.148...
        assert m.recall == 99.06
        assert m.f1 == 98.59
        assert not m.degenerate

    def test_f1_uses_the_truncated_operands(self):
        m = metrics(ConfusionCounts(tp=106, tn=3, fp=2, fn=1))
        assert m.f1 == 98.59
        # from the raw ratios F1 would truncate to 98.60
        raw_p = 100 * 106 / 108
        raw_r = 100 * 106 / 107
        assert int(2 * raw_p * raw_r / (raw_p + raw_r) * 100) / 100 == 98.60

    def test_perfect_run(self):
        m = metrics(ConfusionCounts(tp=5, tn=0, fp=0, fn=0))
        assert (m.accuracy, m.precision, m.recall, m.f1) == (
            100.0,
            100.0,
            100.0,
            100.0,
        )
        assert not m.degenerate

    def test_all_zero_is_degenerate(self):
        m = metrics(ConfusionCounts(0, 0, 0, 0))
        assert (m.accuracy, m.precision, m.recall, m.f1) == (0.0, 0.0, 0.0, 0.0)
        assert m.degenerate

    def test_only_true_negatives_is_degenerate(self):
        m = metrics(ConfusionCounts(tp=0, tn=1, fp=0, fn=0))
        assert m.accuracy == 100.0
        assert m.precision == 0.0
        assert m.recall == 0.0
        assert m.f1 == 0.0
        assert m.degenerate

    def test_unclassified_not_in_denominators(self):
        with_u = metrics(ConfusionCounts(3, 1, 1, 1, unclassified=9))
        without_u = metrics(ConfusionCounts(3, 1, 1, 1))
        assert with_u == without_u

    @settings(max_examples=80, deadline=None)
    @given(
        st.integers(0, 200),
        st.integers(0, 200),
        st.integers(0, 200),
        st.integers(0, 200),
    )
    def test_ranges_and_flag(self, tp, tn, fp, fn):
        m = metrics(ConfusionCounts(tp, tn, fp, fn))
        for value in (m.accuracy, m.precision, m.recall, m.f1):
            assert 0.0 <= value <= 100.0
            # already truncated to 2 decimals: re-truncating is a no-op
            assert value == math.floor(value * 100 + 1e-9) / 100
        if not m.degenerate:
            assert m.f1 > 0.0


class TestRankBuckets:
    def test_large_suite_distribution(self):
        ranks = [1] * 107 + [2] * 10 + [6] * 4 + [11] * 3 + [None] * 6
        assert rank_buckets(ranks) == {
            "1": 107,
            "2-5": 10,
            "6-10": 4,
            "11-15": 3,
            ">15": 6,
        }

    def test_boundaries(self):
        buckets = rank_buckets([1, 2, 5, 6, 10, 11, 15, 16, None])
        assert buckets == {"1": 1, "2-5": 2, "6-10": 2, "11-15": 2, ">15": 2}

    def test_empty(self):
        assert rank_buckets([]) == {label: 0 for label in BUCKET_LABELS}

    @settings(max_examples=60, deadline=None)
    @given(ranks_strategy)
    def test_conservation(self, ranks):
        buckets = rank_buckets(ranks)
        assert sum(buckets.values()) == len(ranks)
        assert set(buckets) == set(BUCKET_LABELS)


class TestCumulativePercentages:
    def test_large_suite_values(self):
        ranks = [1] * 107 + [2] * 10 + [6] * 4 + [11] * 3 + [None] * 6
        cumulative = cumulative_percentages(rank_buckets(ranks), len(ranks))
        assert cumulative == [82.30, 90.0, 93.07, 95.38]

    def test_zero_total(self):
        assert cumulative_percentages(rank_buckets([]), 0) == [0.0, 0.0, 0.0, 0.0]

    @settings(max_examples=60, deadline=None)
    @given(ranks_strategy)
    def test_monotone_and_bounded(self, ranks):
        cumulative = cumulative_percentages(rank_buckets(ranks), len(ranks))
        assert len(cumulative) == 4
        assert cumulative == sorted(cumulative)
        assert all(0.0 <= v <= 100.0 for v in cumulative)


class TestLoadQaPairs:
    def test_bundled_pairs(self):
        pairs = load_qa_pairs(DATA / "qa_mini.tsv")
        assert len(pairs) == 10
        assert sum(1 for _, expected in pairs if expected is None) == 2
        assert pairs[0][1] == 12

    def test_comments_and_blanks_skipped(self, tmp_path):
        path = tmp_path / "qa.tsv"
        path.write_text("# header\n\nক?\t3\n", encoding="utf-8")
        assert load_qa_pairs(path) == [("ক?", 3)]

    def test_none_sentinel(self, tmp_path):
        path = tmp_path / "qa.tsv"
        path.write_text("ক?\t-\n", encoding="utf-8")
        assert load_qa_pairs(path) == [("ক?", None)]

    def test_wrong_column_count(self, tmp_path):
        path = tmp_path / "qa.tsv"
        path.write_text("ক?\t1\textra\n", encoding="utf-8")
        with pytest.raises(QaFormatError, match="line 1"):
            load_qa_pairs(path)

    def test_unparsable_id(self, tmp_path):
        path = tmp_path / "qa.tsv"
        path.write_text("ক?\t1\nখ?\tx\n", encoding="utf-8")
        with pytest.raises(QaFormatError, match="line 2.*unparsable"):
            load_qa_pairs(path)


class TestEvaluate:
    def test_mini_suite_counts(self, mini_ranker, mini_qa_pairs):
        report = evaluate(mini_ranker, mini_qa_pairs)
        c = report.counts
        assert (c.tp, c.tn, c.fp, c.fn, c.unclassified) == (6, 1, 1, 1, 1)

    def test_mini_suite_buckets(self, mini_ranker, mini_qa_pairs):
        report = evaluate(mini_ranker, mini_qa_pairs)
        assert report.buckets == {"1": 6, "2-5": 1, "6-10": 0, "11-15": 0, ">15": 3}
        assert sum(report.buckets.values()) == report.total_questions == 10

    def test_mini_suite_cumulative(self, mini_ranker, mini_qa_pairs):
        report = evaluate(mini_ranker, mini_qa_pairs)
        assert report.cumulative == [60.0, 70.0, 70.0, 70.0]

    def test_mini_suite_metrics(self, mini_ranker, mini_qa_pairs):
        m = evaluate(mini_ranker, mini_qa_pairs).metrics
        assert (m.accuracy, m.precision, m.recall, m.f1) == (
            77.77,
            85.71,
            85.71,
            85.71,
        )
        assert not m.degenerate

    def test_mini_suite_sense_distribution(self, mini_ranker, mini_qa_pairs):
        report = evaluate(mini_ranker, mini_qa_pairs)
        assert report.sense_distribution == {
            "object": 2,
            "person": 2,
            "time": 2,
            "cause": 0,
            "place": 1,
            "quantity": 0,
            "number": 0,
            "description": 1,
        }
        # one question per answered question, no more
        assert sum(report.sense_distribution.values()) == 8

    def test_single_perfect_question(self, worked_ranker):
        report = evaluate(worked_ranker, [(WORKED_QUESTION, 0)])
        assert report.metrics.accuracy == 100.0
        assert report.buckets["1"] == 1

    def test_dangling_expected_id(self, worked_ranker):
        with pytest.raises(ValueError, match="expected id 42"):
            evaluate(worked_ranker, [(WORKED_QUESTION, 42)])

    def test_expected_none_with_candidates_is_fp(self, worked_ranker):
        report = evaluate(worked_ranker, [(WORKED_QUESTION, None)])
        assert report.counts.fp == 1
        assert report.buckets[">15"] == 1

    def test_expected_none_without_candidates_is_tn(self, worked_ranker):
        report = evaluate(
            worked_ranker, [(nfc("দুর্গাপূজা কখন অনুষ্ঠিত হয়?"), None)]
        )
        assert report.counts.tn == 1

    def test_expected_below_rank_one_is_unclassified(self, worked_ranker):
        report = evaluate(worked_ranker, [(WORKED_QUESTION, 3)])
        assert report.counts.unclassified == 1
        assert report.buckets["2-5"] == 1

    def test_requires_fitted_ranker(self, mini_qa_pairs):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            evaluate(AnswerRanker(), mini_qa_pairs)


class TestReportSerialization:
    def test_json_shape(self, mini_ranker, mini_qa_pairs):
        report = evaluate(mini_ranker, mini_qa_pairs)
        payload = json.loads(report.to_json())
        assert set(payload) == {
            "buckets",
            "cumulative",
            "counts",
            "metrics",
            "sense_distribution",
        }
        assert payload["counts"] == {
            "tp": 6,
            "tn": 1,
            "fp": 1,
            "fn": 1,
            "unclassified": 1,
        }
        assert payload["metrics"]["f1"] == 85.71
        assert payload["metrics"]["degenerate"] is False

    def test_json_is_deterministic_and_unescaped(self, mini_ranker, mini_qa_pairs):
        report = evaluate(mini_ranker, mini_qa_pairs)
        again = evaluate(mini_ranker, mini_qa_pairs)
        assert report.to_json() == again.to_json()
        # keys come out sorted so the payload is byte-stable
        text = report.to_json()
        assert text.index('"buckets"') < text.index('"counts"') < text.index(
            '"metrics"'
        )

    def test_table_contents(self, mini_ranker, mini_qa_pairs):
        table = evaluate(mini_ranker, mini_qa_pairs).render_table()
        assert "questions evaluated: 10" in table
        assert "tp 6  tn 1  fp 1  fn 1  unclassified 1" in table
        assert "accuracy 77.77" in table
        assert ">15" in table
        for cls in SenseClass:
            assert cls.value in table
