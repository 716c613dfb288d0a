#!/usr/bin/env python3
"""Regenerate the static end-to-end fixtures and golden outputs.

Writes tests/data/{corpus,mock_fixture.json,labels.tsv} and then runs the
real CLI over them to produce tests/data/golden/.  Run from the repo root
after any intentional change to the pipeline output format, and inspect the
diff before committing.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from click.testing import CliRunner

from factline import split_sentences
from factline.cli import main as cli_main

from fixture_world import DOC_SENTENCES, LABEL_ROWS, beams_for_sentence  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def write_corpus() -> None:
    corpus = DATA / "corpus"
    corpus.mkdir(parents=True, exist_ok=True)
    for doc_id, sentences in DOC_SENTENCES.items():
        text = " ".join(sentence for sentence, _ in sentences)
        (corpus / f"{doc_id}.txt").write_text(text, encoding="utf-8")
        recovered = [s.text for s in split_sentences(text)]
        assert recovered == [sentence for sentence, _ in sentences], doc_id


def write_fixture() -> None:
    fixture = {}
    for sentences in DOC_SENTENCES.values():
        for sentence, facts in sentences:
            fixture[sentence] = beams_for_sentence(sentence, facts)
    (DATA / "mock_fixture.json").write_text(
        json.dumps(fixture, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def write_labels() -> None:
    lines = [f"{kind}\t{label}\t{id_}" for kind, label, id_ in LABEL_ROWS]
    (DATA / "labels.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_golden() -> None:
    golden = DATA / "golden"
    if golden.exists():
        shutil.rmtree(golden)
    golden.mkdir(parents=True)
    runner = CliRunner()
    with runner.isolated_filesystem() as tmp:
        tmp = Path(tmp)
        build = runner.invoke(
            cli_main,
            ["link", "build", "--input", str(DATA / "labels.tsv"), "--store", str(tmp / "links.db")],
        )
        assert build.exit_code == 0, build.output
        for fmt in ("json", "nt"):
            outdir = tmp / f"out-{fmt}"
            result = runner.invoke(
                cli_main,
                [
                    "parse",
                    "--input", str(DATA / "corpus"),
                    "--store", str(tmp / "links.db"),
                    "--output", str(outdir),
                    "--format", fmt,
                    "--beams", "3",
                    "--mock", str(DATA / "mock_fixture.json"),
                    "--summary", str(tmp / f"summary-{fmt}.json"),
                ],
            )
            assert result.exit_code == 0, result.output
            for file in sorted(outdir.iterdir()):
                shutil.copy(file, golden / file.name)
        shutil.copy(tmp / "summary-json.json", golden / "summary.json")


def main() -> int:
    write_corpus()
    write_fixture()
    write_labels()
    write_golden()
    print(f"fixtures written under {DATA}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
