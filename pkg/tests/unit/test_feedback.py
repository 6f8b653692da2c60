"""Tests for blind relevance feedback and the HEW intersection."""

from collections import Counter

import numpy as np
import pytest


def _question(text, target="tgt1", qid="q"):
    from irqa.models.schemas import Question

    return Question(question_id=qid, target=target, raw_text=text)


class TestSelectRfTerms:
    def test_most_frequent_first(self, make_index):
        from irqa.core.feedback.relevance_feedback import select_rf_terms
        from irqa.models.schemas import RfConfig

        index = make_index(
            {
                "a#0": "coup pakistan pakistan army",
                "b#0": "coup pakistan pakistan kashmir",
                "c#0": "coup pakistan army",
                "d#0": "coup pakistan general",
                "e#0": "coup pakistan kashmir general",
                "f#0": "weather report",
            }
        )
        selection = select_rf_terms(index, _question("Who led the coup?"), RfConfig(r=5, k=3, level="passage"))
        assert [t.stem for t in selection.terms][0] == "pakistan"
        assert selection.terms[0].tf == 7
        assert [t.stem for t in selection.terms] == ["pakistan", "armi", "gener"]
        assert sorted(selection.irt_unit_ids) == ["a#0", "b#0", "c#0", "d#0", "e#0"]

    def test_empty_retrieval(self, make_index):
        from irqa.core.feedback.relevance_feedback import select_rf_terms
        from irqa.models.schemas import RfConfig

        index = make_index({"a#0": "cat"})
        selection = select_rf_terms(index, _question("Who led the coup?"), RfConfig(r=5, level="passage"))
        assert selection.empty_retrieval
        assert selection.terms == []

    def test_k_beyond_vocabulary(self, make_index):
        from irqa.core.feedback.relevance_feedback import select_rf_terms
        from irqa.models.schemas import RfConfig

        index = make_index({"a#0": "coup army", "b#0": "coup kashmir"})
        selection = select_rf_terms(index, _question("Who led the coup?"), RfConfig(r=5, k=10, level="passage"))
        assert [t.stem for t in selection.terms] == ["armi", "kashmir"]

    def test_excludes_question_and_target(self, make_index):
        from irqa.core.feedback.relevance_feedback import select_rf_terms
        from irqa.models.schemas import RfConfig

        index = make_index({"a#0": "coup coups pakistan army the of"})
        selection = select_rf_terms(
            index, _question("Who led the coup?", target="Pakistan"), RfConfig(r=1, level="passage")
        )
        assert [t.stem for t in selection.terms] == ["armi"]

    def test_level_must_match_index(self, make_index):
        from irqa.core.feedback.relevance_feedback import select_rf_terms
        from irqa.exceptions import IncompatibleIndexError
        from irqa.models.schemas import RfConfig

        with pytest.raises(IncompatibleIndexError):
            select_rf_terms(make_index({"a#0": "coup"}), _question("coup?"), RfConfig(r=1, level="document"))

    def test_terms_requery_to_their_stems(self, make_index):
        from irqa.core.feedback.relevance_feedback import apply_rf, select_rf_terms
        from irqa.models.schemas import RfConfig

        index = make_index({"a#0": "summit İstanbul İstanbul", "b#0": "summit İstanbul Ankara"})
        q = _question("Where was the summit?", target="talks")
        selection = select_rf_terms(index, q, RfConfig(r=2, k=2, level="passage"))
        [stem] = index.analyzer.stems("İstanbul")
        got = [(t.stem, t.surface, t.tf) for t in selection.terms]
        assert got == [(stem, "İstanbul", 3), ("ankara", "Ankara", 1)]
        assert index.analyzer.stems(apply_rf(q, selection.terms))[-2:] == [stem, "ankara"]

    def test_skips_stem_without_requeryable_surface(self, analyzer_cfg):
        from irqa.core.feedback.relevance_feedback import select_rf_terms
        from irqa.core.retrieval.index import IndexUnit, InvertedIndex
        from irqa.models.enums import Granularity
        from irqa.models.schemas import IndexConfig, RfConfig
        from irqa.preprocessing.text_processor import Term, get_analyzer

        unit = IndexUnit("a#0", "a", "summit İstanbul İstanbul Ankara")
        analyzed = get_analyzer(analyzer_cfg).analyze(unit.text)
        lowered = tuple(Term(surface=t.surface.lower(), stem=t.stem) for t in analyzed)
        index = InvertedIndex(
            IndexConfig(granularity=Granularity.PASSAGE, analyzer=analyzer_cfg), [unit], {unit.unit_id: lowered}
        )
        selection = select_rf_terms(index, _question("Where was the summit?"), RfConfig(r=1, k=1, level="passage"))
        assert [t.stem for t in selection.terms] == ["ankara"]

    def test_tf_oracle(self, make_index):
        from irqa.core.feedback.relevance_feedback import select_rf_terms
        from irqa.core.retrieval.retriever import retrieve
        from irqa.models.schemas import RfConfig

        rng = np.random.default_rng(99)
        for _ in range(100):
            vocab = [f"w{i}" for i in range(int(rng.integers(4, 40)))]
            texts = {
                f"u{j:02d}#0": " ".join(str(w) for w in rng.choice(vocab, size=int(rng.integers(1, 12))))
                for j in range(int(rng.integers(1, 30)))
            }
            index = make_index(texts)
            q = _question(" ".join(str(w) for w in rng.choice(vocab, size=2)), target=str(rng.choice(vocab)))
            cfg = RfConfig(r=int(rng.integers(1, 8)), k=int(rng.integers(1, 6)), level="passage")

            irt = [e.unit_id for e in retrieve(index, q.resolved_text, cfg.r).entries]
            excluded = set(index.analyzer.stems(q.resolved_text + " " + q.target))
            counts = Counter(
                t.stem for uid in irt for t in index.analyzer.analyze(texts[uid]) if t.stem not in excluded
            )
            want = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[: cfg.k]

            got = select_rf_terms(index, q, cfg)
            assert [(t.stem, t.tf) for t in got.terms] == want
            assert got.irt_unit_ids == irt


class TestApplyRf:
    def test_empty(self):
        from irqa.core.feedback.relevance_feedback import apply_rf

        q = _question("Who led the coup?")
        assert apply_rf(q, []) == q.resolved_text

    def test_appended(self):
        from irqa.core.feedback.relevance_feedback import apply_rf
        from irqa.models.schemas import RfTerm

        q = _question("Who led the coup?")
        assert apply_rf(q, ["a", "b"]).endswith(" a b")
        terms = [RfTerm(stem=f"s{i}", surface=f"w{i}", tf=1) for i in range(5)]
        assert apply_rf(q, terms) == "Who led the coup? w0 w1 w2 w3 w4"


class TestIntersection:
    def test_micro_suite(self):
        from irqa.core.feedback.relevance_feedback import rf_hew_intersection

        result = rf_hew_intersection(
            {"q1": {"a", "b"}, "q2": {"c"}, "q3": {"d", "e"}},
            {"q1": [{"a", "x"}, {"y"}], "q2": [{"z"}], "q3": [{"d", "c"}]},
            {"q1": ["a", "x"], "q2": ["z"], "q3": ["d"]},
        )
        assert result.hew_found_in_irt == pytest.approx(2 / 5)
        assert result.irt_containing_hew == pytest.approx(2 / 4)
        assert result.rf_words_in_hew == pytest.approx(2 / 4)
        assert result.hew_found_in_irt_macro == pytest.approx((0.5 + 0.0 + 0.5) / 3)
        assert result.rf_words_in_hew_macro == pytest.approx((0.5 + 0.0 + 1.0) / 3)
        assert result.questions == 3

    def test_all_rf_terms_helpful(self):
        from irqa.core.feedback.relevance_feedback import rf_hew_intersection

        result = rf_hew_intersection({"q": {"a", "b"}}, {"q": [{"a"}, {"b"}]}, {"q": ["a", "b"]})
        assert result.rf_words_in_hew == 1.0
        assert result.hew_found_in_irt == 1.0

    def test_disjoint(self):
        from irqa.core.feedback.relevance_feedback import rf_hew_intersection

        result = rf_hew_intersection({"q": {"a"}}, {"q": [{"x"}, {"y"}]}, {"q": ["x", "y"]})
        assert (result.hew_found_in_irt, result.irt_containing_hew, result.rf_words_in_hew) == (0.0, 0.0, 0.0)

    def test_brute_force_recount(self):
        from irqa.core.feedback.relevance_feedback import rf_hew_intersection

        rng = np.random.default_rng(3)
        vocab = [f"s{i}" for i in range(15)]
        for _ in range(50):
            qids = [f"q{i}" for i in range(int(rng.integers(1, 5)))]
            hews = {q: {str(w) for w in rng.choice(vocab, size=int(rng.integers(1, 4)))} for q in qids}
            irts = {
                q: [{str(w) for w in rng.choice(vocab, size=3)} for _ in range(int(rng.integers(0, 4)))] for q in qids
            }
            rf = {q: [str(w) for w in rng.choice(vocab, size=3, replace=False)] for q in qids}
            result = rf_hew_intersection(hews, irts, rf)
            hits = sum(1 for q in qids for s in rf[q] if s in hews[q])
            assert result.rf_words_in_hew == pytest.approx(hits / (3 * len(qids)))

    def test_empty_hews(self):
        from irqa.core.feedback.relevance_feedback import rf_hew_intersection
        from irqa.exceptions import UndefinedMetricError

        with pytest.raises(UndefinedMetricError):
            rf_hew_intersection({"q": set()}, {"q": [{"a"}]}, {"q": ["a"]})

    def test_mismatched_questions(self):
        from irqa.core.feedback.relevance_feedback import rf_hew_intersection
        from irqa.exceptions import DatasetMismatchError

        with pytest.raises(DatasetMismatchError):
            rf_hew_intersection({"q": {"a"}}, {"other": [{"a"}]}, {"q": ["a"]})


class TestCoverageExperiment:
    def _key(self, doc="ans"):
        from irqa.models.schemas import AnswerKey

        return {"q": AnswerKey(question_id="q", patterns=["ANSWERX"], supporting_doc_ids=[doc])}

    def test_noise_lowers_coverage(self, make_index):
        from irqa.core.feedback.relevance_feedback import rf_coverage_experiment
        from irqa.models.schemas import RfConfig

        texts = {"ans#0": "qa1 qb1 ANSWERX"}
        texts.update({f"d{i}#0": "qa1 qb1 noise1 noise2 noise3 noise1 noise2 noise3" for i in range(5)})
        texts.update({f"n{i:02d}#0": "noise1 noise2 noise3" for i in range(25)})
        texts.update({f"f{i:03d}#0": "qa1 filler" for i in range(170)})
        index = make_index(texts)

        cfg = RfConfig(r=5, k=3, level="passage")
        experiment = rf_coverage_experiment(index, [_question("qa1 qb1?")], self._key(), cfg, [5, 10, 20])
        assert [t.stem for t in experiment.selections[cfg.label][0].terms] == ["noise1", "noise2", "noise3"]
        assert experiment.table.columns == ["Rank", "r=5 Para", "Baseline"]
        assert experiment.table.rows[-1] == [20, 0.0, 1.0]
        assert experiment.baseline.run_id.endswith(":rf-baseline")
        assert [r.config.rf for r in experiment.records] == [cfg, None]

    def test_helpful_terms_rescue(self, make_index):
        from irqa.core.feedback.relevance_feedback import irt_stems, rf_coverage_experiment, rf_hew_intersection
        from irqa.models.schemas import RfConfig

        index = make_index({"d#0": "qx1 helper helper", "ans#0": "ANSWERX helper", "z#0": "unrelated"})
        cfg = RfConfig(r=1, k=1, level="passage")
        experiment = rf_coverage_experiment(index, [_question("qx1?")], self._key(), cfg, [20])
        assert experiment.table.rows == [[20, 1.0, 0.0]]

        selection = experiment.selections[cfg.label][0]
        result = rf_hew_intersection(
            {"q": {"helper"}}, {"q": irt_stems(selection, index)}, {"q": [t.stem for t in selection.terms]}
        )
        assert result.rf_words_in_hew == 1.0
        assert result.irt_containing_hew == 1.0

    def test_feedback_from_other_index(self, make_index):
        from irqa.core.feedback.relevance_feedback import rf_coverage_experiment
        from irqa.exceptions import IncompatibleIndexError
        from irqa.models.enums import Granularity
        from irqa.models.schemas import RfConfig

        passage = make_index({"d#0": "qx1 helper helper", "ans#0": "ANSWERX helper"})
        document = make_index({"d": "qx1 helper helper", "ans": "ANSWERX helper"}, granularity=Granularity.DOCUMENT)
        cfg = RfConfig(r=1, k=1, level="document")
        with pytest.raises(IncompatibleIndexError):
            rf_coverage_experiment(passage, [_question("qx1?")], self._key(), cfg, [20])
        experiment = rf_coverage_experiment(
            passage, [_question("qx1?")], self._key(), cfg, [20], feedback_indexes={Granularity.DOCUMENT: document}
        )
        assert experiment.table.rows == [[20, 1.0, 0.0]]

    def test_unsorted_ranks(self, make_index):
        from irqa.core.feedback.relevance_feedback import rf_coverage_experiment
        from irqa.exceptions import ConfigError
        from irqa.models.schemas import RfConfig

        with pytest.raises(ConfigError):
            rf_coverage_experiment(make_index({"a#0": "x"}), [], {}, RfConfig(r=1, level="passage"), [20, 5])
