"""Tests for question sets, answer keys and query formulation."""

import pytest


class TestQuestions:
    def test_five_fields(self):
        from irqa.preprocessing.dataset_reader import parse_questions

        qs = parse_questions("1.1\t1\tWarren Moon\tWhere did he play in college?\tWhere did Warren Moon play?\n")
        assert len(qs) == 1
        assert qs[0].target == "Warren Moon"
        assert qs[0].resolved_text == "Where did Warren Moon play?"

    def test_resolved_defaults_to_raw(self):
        from irqa.preprocessing.dataset_reader import parse_questions

        qs = parse_questions("2.1\t2\tPakistan coup\tWho led the coup?\n")
        assert qs[0].resolved_text == "Who led the coup?"

    def test_duplicate_id(self):
        from irqa.exceptions import DuplicateIdError
        from irqa.preprocessing.dataset_reader import parse_questions

        with pytest.raises(DuplicateIdError):
            parse_questions("1\ts\tt\tq one\n1\ts\tt\tq two\n")

    def test_missing_field_names_line(self):
        from irqa.exceptions import ParseError
        from irqa.preprocessing.dataset_reader import parse_questions

        with pytest.raises(ParseError) as exc_info:
            parse_questions("# header\n1\ts\tt\tok\n2\ts\n")
        assert exc_info.value.line == 3
        assert "target" in exc_info.value.message

    def test_jsonl_detected(self):
        from irqa.preprocessing.dataset_reader import parse_questions

        qs = parse_questions('{"question_id": "q1", "target": "T", "raw_text": "Who?"}\n')
        assert qs[0].question_id == "q1"
        assert qs[0].resolved_text == "Who?"

    def test_dump_reads_back(self, mini_questions):
        from irqa.models.enums import QuestionFormat
        from irqa.preprocessing.dataset_reader import dump_questions, parse_questions

        for fmt in QuestionFormat:
            assert parse_questions(dump_questions(mini_questions, fmt), fmt) == mini_questions

    def test_dump_with_fingerprint(self, mini_questions):
        from irqa.preprocessing.dataset_reader import dump_questions, parse_questions

        text = dump_questions(mini_questions, fingerprint="abc123")
        assert text.splitlines()[0] == "# fingerprint=abc123 schema_version=1"
        assert parse_questions(text) == mini_questions


class TestAnswerKeys:
    def test_patterns_and_judgments(self):
        from irqa.preprocessing.dataset_reader import parse_answer_keys

        keys = parse_answer_keys(
            "q1 Moon\nq1 Warren\\s+Moon\n",
            "q1 D3\nq1 D1\nq1 D2\nq1 D1\n",
        )
        assert keys["q1"].patterns == ["Moon", "Warren\\s+Moon"]
        assert keys["q1"].supporting_doc_ids == ["D1", "D2", "D3"]

    def test_patterns_only(self):
        from irqa.preprocessing.dataset_reader import parse_answer_keys

        keys = parse_answer_keys("q2 Oilers\n")
        assert keys["q2"].supporting_doc_ids == []

    def test_bad_pattern(self):
        from irqa.exceptions import PatternError
        from irqa.preprocessing.dataset_reader import parse_answer_keys

        with pytest.raises(PatternError) as exc_info:
            parse_answer_keys("q3 (unclosed\n")
        assert exc_info.value.question_id == "q3"
        assert exc_info.value.pattern == "(unclosed"

    def test_backreference_rejected(self):
        from irqa.exceptions import PatternError
        from irqa.preprocessing.dataset_reader import compile_pattern

        with pytest.raises(PatternError):
            compile_pattern("q", r"(a)\1")
        with pytest.raises(PatternError):
            compile_pattern("q", r"(a)\\\1")
        with pytest.raises(PatternError):
            compile_pattern("q", r"(?P<x>a)(?P=x)")

    def test_escaped_backslash_before_digit_allowed(self):
        from irqa.preprocessing.dataset_reader import compile_pattern

        pattern = compile_pattern("q", r"C:\\1999")
        assert pattern.search("saved to C:\\1999 archive")

    def test_mini_fixture(self, mini_keys):
        assert sorted(mini_keys) == ["1.1", "1.2", "2.1", "2.2"]
        assert mini_keys["2.1"].supporting == frozenset({"XIE19991013.0002"})
        assert mini_keys["1.2"].supporting == frozenset()

    def test_matcher_spans(self):
        from irqa.models.schemas import AnswerKey
        from irqa.preprocessing.dataset_reader import AnswerMatcher

        matcher = AnswerMatcher(AnswerKey(question_id="q", patterns=["Moon", "Warren Moon"]))
        assert matcher.spans("Warren Moon") == [(0, 11), (7, 11)]
        assert not matcher.matches("warren moon")
        assert AnswerMatcher(AnswerKey(question_id="q", patterns=["Moon"]), ignore_case=True).matches("moon")


class TestFormulateQuery:
    @pytest.fixture
    def moon(self):
        from irqa.models.schemas import Question

        return Question(
            question_id="1.1",
            target="Warren Moon",
            raw_text="Where did he play in college?",
            resolved_text="Where did he play in college?",
        )

    def test_q_unchanged(self, moon):
        from irqa.models.enums import VariantKind
        from irqa.models.schemas import QueryVariant
        from irqa.preprocessing.dataset_reader import formulate_query

        assert formulate_query(moon, QueryVariant(kind=VariantKind.Q)) == moon.resolved_text

    def test_qt(self, moon):
        from irqa.models.enums import VariantKind
        from irqa.models.schemas import QueryVariant
        from irqa.preprocessing.dataset_reader import formulate_query

        assert formulate_query(moon, QueryVariant(kind=VariantKind.QT)) == "Where did he play in college? Warren Moon"

    def test_qte(self, moon):
        from irqa.models.enums import VariantKind
        from irqa.models.schemas import QueryVariant
        from irqa.preprocessing.dataset_reader import formulate_query

        text = formulate_query(moon, QueryVariant(kind=VariantKind.QTE, extension="NFL"))
        assert text.endswith(" Warren Moon NFL")

    def test_qe(self, moon):
        from irqa.models.enums import VariantKind
        from irqa.models.schemas import QueryVariant
        from irqa.preprocessing.dataset_reader import formulate_query

        assert formulate_query(moon, QueryVariant(kind=VariantKind.QE, extension="NFL")).endswith("college? NFL")

    def test_variant_validation(self):
        from pydantic import ValidationError

        from irqa.models.enums import VariantKind
        from irqa.models.schemas import QueryVariant

        with pytest.raises(ValidationError):
            QueryVariant(kind=VariantKind.QE)
        with pytest.raises(ValidationError):
            QueryVariant(kind=VariantKind.Q, extension="x")
        with pytest.raises(ValidationError):
            QueryVariant(kind=VariantKind.QE, extension="two words")
