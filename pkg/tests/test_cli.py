import json

from clawpipe import corpus
from clawpipe.cli import main

from conftest import CORPUS_ADVERSARIAL, CORPUS_GENUINE, FIXTURE_PAPER


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPublishAndGet:
    def test_publish_then_get(self, tmp_path, capsys):
        data = str(tmp_path / "data")
        code, out, _ = _run(
            capsys, "--data-dir", data, "publish", str(FIXTURE_PAPER)
        )
        assert code == 0
        paper_id = json.loads(out)["paper_id"]

        code, out, _ = _run(capsys, "--data-dir", data, "get", paper_id)
        assert code == 0
        record = json.loads(out)
        assert record["word_count"] == 2072

    def test_get_unknown_is_user_error(self, tmp_path, capsys):
        code, _, err = _run(
            capsys, "--data-dir", str(tmp_path / "d"), "get", "p-does-not-exist"
        )
        assert code == 1
        assert "NOT_FOUND" in err

    def test_publish_rejected_stub_is_user_error(self, tmp_path, capsys):
        stub = tmp_path / "stub.md"
        stub.write_text("# Tiny\n\nfar too few words here")
        code, _, err = _run(
            capsys, "--data-dir", str(tmp_path / "d"), "publish", str(stub)
        )
        assert code == 1
        assert "HARD_REJECT" in err


class TestCorpusEval:
    def test_rates_reported(self, tmp_path, capsys):
        code, out, _ = _run(
            capsys,
            "--data-dir",
            str(tmp_path / "d"),
            "corpus-eval",
            str(CORPUS_GENUINE),
            str(CORPUS_ADVERSARIAL),
        )
        assert code == 0
        body = json.loads(out)
        assert body["detection_rate"] >= 0.85
        assert body["false_positive_rate"] < 0.05


class TestRecover:
    def test_recover_reports(self, tmp_path, capsys):
        source = tmp_path / "saved"
        source.mkdir()
        for i in range(2):
            paper = corpus.make_genuine_paper(i)
            (source / paper.filename).write_text(paper.content, encoding="utf-8")
        code, out, _ = _run(
            capsys, "--data-dir", str(tmp_path / "d"), "recover", str(source)
        )
        assert code == 0
        report = json.loads(out)
        assert report["republished"] == 2
