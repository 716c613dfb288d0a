import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from factline.cli import main

DATA = Path(__file__).parent / "data"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def store_path(tmp_path, runner):
    path = tmp_path / "links.db"
    result = runner.invoke(
        main, ["link", "build", "--input", str(DATA / "labels.tsv"), "--store", str(path)]
    )
    assert result.exit_code == 0, result.output
    return path


def test_link_build_reports_counts(runner, tmp_path):
    result = runner.invoke(
        main,
        ["link", "build", "--input", str(DATA / "labels.tsv"), "--store", str(tmp_path / "s.db")],
    )
    assert result.exit_code == 0
    assert "entries=28" in result.output
    assert "collisions=0" in result.output


def test_link_lookup_found_and_null(runner, store_path):
    found = runner.invoke(
        main, ["link", "lookup", "--store", str(store_path), "--kind", "entity", "--label", "Earth"]
    )
    assert found.output.strip() == "Q2"
    absent = runner.invoke(
        main, ["link", "lookup", "--store", str(store_path), "--kind", "entity", "--label", "Atlantis"]
    )
    assert absent.output.strip() == "null"


def test_parse_requires_exactly_one_backend(runner, store_path, tmp_path):
    base = [
        "parse",
        "--input", str(DATA / "corpus"),
        "--store", str(store_path),
        "--output", str(tmp_path / "out"),
    ]
    neither = runner.invoke(main, base)
    assert neither.exit_code == 2
    both = runner.invoke(
        main,
        base + ["--mock", str(DATA / "mock_fixture.json"), "--endpoint", "http://x/"],
    )
    assert both.exit_code == 2


def test_parse_missing_store_is_fatal(runner, tmp_path):
    result = runner.invoke(
        main,
        [
            "parse",
            "--input", str(DATA / "corpus"),
            "--store", str(tmp_path / "absent.db"),
            "--output", str(tmp_path / "out"),
            "--mock", str(DATA / "mock_fixture.json"),
        ],
    )
    assert result.exit_code == 2


def test_parse_end_to_end_matches_golden(runner, store_path, tmp_path):
    outdir = tmp_path / "out"
    result = runner.invoke(
        main,
        [
            "parse",
            "--input", str(DATA / "corpus"),
            "--store", str(store_path),
            "--output", str(outdir),
            "--format", "json",
            "--beams", "3",
            "--mock", str(DATA / "mock_fixture.json"),
            "--summary", str(tmp_path / "summary.json"),
        ],
    )
    assert result.exit_code == 0, result.output
    for name in ("doc-astro.jsonl", "doc-geo.jsonl", "doc-misc.jsonl"):
        assert (outdir / name).read_bytes() == (DATA / "golden" / name).read_bytes()
    summary = json.loads((tmp_path / "summary.json").read_text())
    golden_summary = json.loads((DATA / "golden" / "summary.json").read_text())
    assert summary == golden_summary


def test_parse_partial_failure_exits_one(runner, store_path, tmp_path):
    # strict mode turns the truncated hypotheses into sentence failures
    outdir = tmp_path / "out"
    result = runner.invoke(
        main,
        [
            "parse",
            "--input", str(DATA / "corpus"),
            "--store", str(store_path),
            "--output", str(outdir),
            "--beams", "3",
            "--mock", str(DATA / "mock_fixture.json"),
            "--strict",
            "--summary", str(tmp_path / "summary.json"),
        ],
    )
    assert result.exit_code == 1
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["sentences_failed"] == 10  # every fifth sentence has a truncated beam
    assert summary["sentences_ok"] + summary["sentences_failed"] == summary["sentences"]


def test_eval_table_and_dimension_json(runner, tmp_path):
    records_path = tmp_path / "records.jsonl"
    fact = {
        "subject": {"mention": "a", "label": "A", "type": "t"},
        "relation": "r",
        "object": {"mention": "b", "label": "B", "type": "t"},
    }
    extra = {
        "subject": {"mention": "c", "label": "C", "type": "t"},
        "relation": "r",
        "object": {"mention": "d", "label": "D", "type": "t"},
    }
    records_path.write_text(
        json.dumps({"sentence_id": "s0", "gold": [fact], "predicted": [fact, extra]}) + "\n"
    )
    table = runner.invoke(main, ["eval", "--records", str(records_path)])
    assert table.exit_code == 0
    assert "REL-F1" in table.output
    assert "Micro" in table.output

    rel = runner.invoke(
        main, ["eval", "--records", str(records_path), "--dim", "rel", "--avg", "micro"]
    )
    payload = json.loads(rel.output)
    assert payload["precision"] == 0.5
    assert payload["recall"] == 1.0
    assert payload["tp"] == 1

    macro_md = runner.invoke(
        main, ["eval", "--records", str(records_path), "--dim", "md", "--avg", "macro"]
    )
    assert macro_md.exit_code == 2  # macro is defined for rel only


def test_emit_converts_json_to_ntriples(runner, tmp_path):
    golden_doc = DATA / "golden" / "doc-misc.jsonl"
    result = runner.invoke(
        main, ["emit", "--input", str(golden_doc), "--format", "nt"]
    )
    assert result.exit_code == 0, result.output
    assert result.output == (DATA / "golden" / "doc-misc.nt").read_text()

    outdir = tmp_path / "conv"
    to_dir = runner.invoke(
        main,
        ["emit", "--input", str(golden_doc.parent), "--format", "nt", "--output", str(outdir)],
    )
    assert to_dir.exit_code == 0
    assert (outdir / "doc-misc.nt").read_bytes() == (DATA / "golden" / "doc-misc.nt").read_bytes()


def test_emit_json_is_idempotent(runner, tmp_path):
    golden_doc = DATA / "golden" / "doc-astro.jsonl"
    result = runner.invoke(main, ["emit", "--input", str(golden_doc), "--format", "json"])
    assert result.exit_code == 0
    assert result.output == golden_doc.read_text()


def test_report_tables(runner):
    overview = runner.invoke(main, ["report", "--input", str(DATA / "golden"), "--top", "3"])
    assert overview.exit_code == 0, overview.output
    assert "top types:" in overview.output
    assert "top entities:" in overview.output

    as_json = runner.invoke(
        main, ["report", "--input", str(DATA / "golden"), "--top", "3", "--json"]
    )
    payload = json.loads(as_json.output)
    assert len(payload["types"]) == 3
    assert all(isinstance(count, int) for _, count in payload["types"])

    by_type = runner.invoke(
        main,
        ["report", "--input", str(DATA / "golden"), "--type", "planet", "--json"],
    )
    planets = dict(json.loads(by_type.output)["entities"])
    assert "Earth" in planets


def test_enrich_cli_round_trip(runner, tmp_path):
    maps_path = tmp_path / "maps.json"
    maps_path.write_text(
        json.dumps(
            {
                "item_labels": {"Q2": "Earth", "Q525": "Sun", "Q634": "planet", "Q523": "star"},
                "property_labels": {"P397": "orbits"},
                "instance_of": {"Q2": "Q634", "Q525": "Q523"},
            }
        )
    )
    rows_path = tmp_path / "rows.jsonl"
    good = {
        "text": "Earth orbits the Sun.",
        "subject": "Earth", "subject_id": "Q2",
        "relation_id": "P397",
        "object": "Sun", "object_id": "Q525",
    }
    bad = dict(good, subject_id="Q999")
    rows_path.write_text(json.dumps(good) + "\n" + json.dumps(bad) + "\n")

    out = tmp_path / "enriched.jsonl"
    rejects = tmp_path / "rejects.jsonl"
    result = runner.invoke(
        main,
        [
            "enrich",
            "--input", str(rows_path),
            "--maps", str(maps_path),
            "--output", str(out),
            "--rejects", str(rejects),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "enriched=1 rejected=1" in result.output
    enriched = json.loads(out.read_text().splitlines()[0])
    assert enriched["subject"]["type"] == "planet"
    assert "[(Earth # Earth # planet)" in enriched["target"]
    reject = json.loads(rejects.read_text().splitlines()[0])
    assert reject["reason"] == "unresolved-entity-id"
