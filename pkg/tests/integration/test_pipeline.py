"""End-to-end runs of the mini manifest."""

from pathlib import Path

import pytest

MINI = Path(__file__).parents[1] / "fixtures" / "mini"

EXPECTED_FILES = [
    ".irqa-output",
    "indexes/document.json",
    "indexes/passage.json",
    "ranked/passage-Q.json",
    "ranked/document-QT.json",
    "runs.jsonl",
    "difficult.json",
    "difficult-questions.tsv",
    "candidates.jsonl",
    "hews.jsonl",
    "hew-baselines.jsonl",
    "hew-summary.json",
    "hew-summary.tsv",
    "hew-examples.tsv",
    "rf-table.tsv",
    "rf-table.txt",
    "rf-terms.jsonl",
    "rf-intersection.tsv",
    "reports/coverage-table.tsv",
    "reports/coverage-curve.txt",
    "reports/question-redundancy.tsv",
]


def _run(mini_dir, out, workers=1):
    from irqa.config import Settings
    from irqa.core.orchestrator import ExperimentPipeline, load_manifest

    manifest = load_manifest(mini_dir / "manifest.yaml")
    return ExperimentPipeline(manifest, out, settings=Settings(workers=workers)).run()


@pytest.fixture(scope="module")
def mini_run(tmp_path_factory):
    return _run(MINI, tmp_path_factory.mktemp("pipeline") / "out")


class TestMiniPipeline:
    def test_files(self, mini_run):
        for name in EXPECTED_FILES:
            assert (mini_run / name).is_file(), name

    def test_difficult(self, mini_run):
        from irqa.core.artifacts import DIFFICULT_ARTIFACT, read_json

        _, body = read_json(mini_run / "difficult.json", DIFFICULT_ARTIFACT)
        assert body["question_ids"] == ["2.1", "2.2"]
        exported = (mini_run / "difficult-questions.tsv").read_text(encoding="utf-8")
        assert "Who was the nominal leader after the overthrow?" in exported

    def test_run_log(self, mini_run):
        from irqa.core.evaluation.run_log import RunLog

        runs = RunLog(mini_run / "runs.jsonl").load_runs()
        assert len(runs) == 11
        assert sum(1 for r in runs if r.config.rf is not None) == 2
        assert sum(1 for r in runs if r.run_id.endswith(":rf-baseline")) == 1
        ids = {r.run_id for r in runs}
        assert "mini:document:QT:n5" in ids
        assert "mini:passage:Q:n20:rf-r2-k3-passage" in ids

    def test_hew_summary(self, mini_run):
        from irqa.core.artifacts import HEW_SUMMARY_ARTIFACT, read_json

        _, body = read_json(mini_run / "hew-summary.json", HEW_SUMMARY_ARTIFACT)
        assert body["difficult_used"] == 2
        assert body["questions_benefited"] == 1
        assert body["benefited_fraction"] == pytest.approx(0.5)
        assert body["hew_count_strict"] == 4
        assert body["mean_hew_per_question"] == pytest.approx(2.0)
        assert body["mean_redundancy_increase"] == pytest.approx(1.0)
        assert body["variations_tested"] == 8

    def test_hews_for_coup_question(self, mini_run):
        from irqa.core.artifacts import HEW_ARTIFACT, read_models
        from irqa.models.schemas import HewRecord

        _, records = read_models(mini_run / "hews.jsonl", HEW_ARTIFACT, HewRecord)
        lifted = {r.term for r in records if r.question_id == "2.1" and r.strict_redundancy > 0}
        assert lifted == {"gen", "control", "kashmir", "conflict"}

    def test_tables_carry_fingerprint(self, mini_run):
        for name in ("rf-table.tsv", "hew-summary.tsv", "reports/coverage-table.tsv", "difficult-questions.tsv"):
            first = (mini_run / name).read_text(encoding="utf-8").splitlines()[0]
            assert first.startswith("# fingerprint=") and first.endswith("schema_version=1")


@pytest.mark.slow
def test_workers_do_not_change_outputs(tmp_path, mini_dir):
    single = _run(mini_dir, tmp_path / "one", workers=1)
    many = _run(mini_dir, tmp_path / "many", workers=8)
    names = sorted(p.relative_to(single).as_posix() for p in single.rglob("*") if p.is_file())
    assert names == sorted(p.relative_to(many).as_posix() for p in many.rglob("*") if p.is_file())
    for name in names:
        assert (single / name).read_bytes() == (many / name).read_bytes(), name


def test_rerun_replaces_owned_output(tmp_path, mini_dir):
    out = _run(mini_dir, tmp_path / "out")
    (out / "stale.txt").write_text("x", encoding="utf-8")
    _run(mini_dir, out)
    assert not (out / "stale.txt").exists()


def test_refuses_foreign_directory(tmp_path, mini_dir):
    from irqa.exceptions import ConfigError

    out = tmp_path / "foreign"
    out.mkdir()
    (out / "notes.txt").write_text("keep me", encoding="utf-8")
    with pytest.raises(ConfigError):
        _run(mini_dir, out)
    assert (out / "notes.txt").read_text(encoding="utf-8") == "keep me"


class TestManifest:
    def test_missing_manifest(self, tmp_path):
        from irqa.core.orchestrator import load_manifest
        from irqa.exceptions import MissingInputError

        with pytest.raises(MissingInputError):
            load_manifest(tmp_path / "none.yaml")

    @pytest.mark.parametrize(
        "body",
        [
            "- just\n- a list\n",
            "corpus: {paths: [c.sgml]}\nquestions: q.tsv\nanswers: {patterns: p.txt}\ngranularities: []\n",
            "corpus: {paths: [c.sgml]}\nquestions: q.tsv\nanswers: {patterns: p.txt}\ndepths: [5]\n"
            "difficulty: {n: 20}\n",
            "corpus: [unclosed\n",
        ],
    )
    def test_invalid(self, tmp_path, body):
        from irqa.core.orchestrator import load_manifest
        from irqa.exceptions import ConfigError

        path = tmp_path / "m.yaml"
        path.write_text(body, encoding="utf-8")
        with pytest.raises(ConfigError):
            load_manifest(path)

    def test_missing_inputs(self, tmp_path):
        from irqa.core.orchestrator import load_manifest
        from irqa.exceptions import MissingInputError

        path = tmp_path / "m.yaml"
        path.write_text("corpus: {paths: [c.sgml]}\nquestions: q.tsv\nanswers: {patterns: p.txt}\n", encoding="utf-8")
        with pytest.raises(MissingInputError):
            load_manifest(path)
