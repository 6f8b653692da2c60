"""Tests for the command-line surface, stage by stage through files."""

import pytest


@pytest.fixture
def staged(tmp_path, mini_dir):
    """Output dir holding a passage index, a Q ranking and its logged run."""
    from irqa.main import main

    out = tmp_path / "out"
    base = ["--output-dir", str(out)]
    assert main([*base, "index", "--corpus", str(mini_dir / "corpus.sgml"), str(mini_dir / "extra.jsonl")]) == 0
    index = out / "indexes" / "passage.json"
    assert main([*base, "retrieve", "--index", str(index), "--questions", str(mini_dir / "questions.tsv")]) == 0
    ranked = out / "ranked" / "passage-Q.json"
    keys = ["--patterns", str(mini_dir / "patterns.txt"), "--judgments", str(mini_dir / "judgments.txt")]
    assert main([*base, "eval", "--ranked", str(ranked), "--index", str(index), *keys]) == 0
    return out


class TestStages:
    def test_files_written(self, capsys, staged):
        assert (staged / "indexes" / "passage.json").is_file()
        assert (staged / "ranked" / "passage-Q.json").is_file()
        assert (staged / "runs.jsonl").is_file()
        assert "default:passage:Q:n20\tcoverage strict=" in capsys.readouterr().out

    def test_difficult(self, staged, mini_dir, capsys):
        from irqa.main import main

        capsys.readouterr()
        code = main(["--output-dir", str(staged), "difficult", "--questions", str(mini_dir / "questions.tsv")])
        assert code == 0
        printed = capsys.readouterr().out.split()
        assert "2.1" in printed
        assert "1.1" not in printed
        assert (staged / "difficult.json").is_file()
        exported = (staged / "difficult-questions.tsv").read_text(encoding="utf-8").splitlines()
        assert exported[0].startswith("# fingerprint=")
        assert exported[0].endswith("schema_version=1")

    def test_report(self, staged, capsys):
        from irqa.main import main

        capsys.readouterr()
        assert main(["--output-dir", str(staged), "report", "--kind", "coverage_table", "--format", "tsv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("# fingerprint=")
        assert lines[2].startswith("default:passage:Q:n20\t")

    def test_report_empty_filter(self, staged, capsys):
        from irqa.main import main

        capsys.readouterr()
        args = ["--output-dir", str(staged), "report", "--kind", "coverage_table", "--granularity", "document"]
        assert main(args) == 0
        assert len(capsys.readouterr().out.splitlines()) == 3

    def test_difficult_without_runs(self, staged):
        from irqa.main import main

        assert main(["--output-dir", str(staged), "difficult", "--granularity", "document"]) == 10


class TestExitCodes:
    def test_missing_input(self, tmp_path, mini_dir):
        from irqa.main import main

        args = ["retrieve", "--index", str(tmp_path / "none.json"), "--questions", str(mini_dir / "questions.tsv")]
        assert main(args) == 3

    def test_bad_variant(self, staged, mini_dir):
        from irqa.main import main

        index = staged / "indexes" / "passage.json"
        args = ["retrieve", "--index", str(index), "--questions", str(mini_dir / "questions.tsv"), "--variant", "QE"]
        assert main(args) == 10

    def test_bad_workers(self, tmp_path, mini_dir):
        from irqa.main import main

        assert main(["--workers", "0", "index", "--corpus", str(mini_dir / "corpus.sgml")]) == 1

    def test_pipeline_needs_manifest(self, tmp_path):
        from irqa.main import main

        assert main(["--output-dir", str(tmp_path / "o"), "pipeline"]) == 10


@pytest.mark.slow
def test_pipeline_command(tmp_path, mini_dir, capsys):
    from irqa.main import main

    out = tmp_path / "run"
    assert main(["--output-dir", str(out), "pipeline", "--manifest", str(mini_dir / "manifest.yaml")]) == 0
    assert capsys.readouterr().out.strip() == str(out)
    assert (out / "runs.jsonl").is_file()
    assert (out / "hew-summary.tsv").is_file()


def test_mining_and_feedback_chain(staged, mini_dir, capsys):
    from irqa.main import main

    base = ["--output-dir", str(staged)]
    corpus = [str(mini_dir / "corpus.sgml"), str(mini_dir / "extra.jsonl")]
    questions = ["--questions", str(mini_dir / "questions.tsv")]
    keys = ["--patterns", str(mini_dir / "patterns.txt"), "--judgments", str(mini_dir / "judgments.txt")]
    index = str(staged / "indexes" / "passage.json")
    difficult = str(staged / "difficult.json")

    assert main([*base, "difficult"]) == 0
    assert main([*base, "mine", "--difficult", difficult, "--corpus", *corpus, *questions, *keys]) == 0
    candidates = str(staged / "candidates.jsonl")
    assert main([*base, "eval-ext", "--candidates", candidates, "--index", index, *questions, *keys]) == 0
    assert (staged / "hew-summary.tsv").is_file()

    capsys.readouterr()
    rf = [
        "rf",
        "--index",
        index,
        *questions,
        *keys,
        "--config",
        "2:3:passage",
        "--ranks",
        "5,20",
        "--hews",
        str(staged / "hews.jsonl"),
        "--difficult",
        difficult,
        "--format",
        "tsv",
    ]
    assert main([*base, *rf]) == 0
    out = capsys.readouterr().out
    assert "Rank\tr=2 Para\tBaseline" in out
    assert "RF words in HEW" in out
    assert (staged / "rf-intersection.tsv").is_file()
