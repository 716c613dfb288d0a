import random

import pytest

from factline import LinkKind, LinkRecord, LinkStore, ScoredFact, read_tsv_records
from factline.errors import MalformedRecordError, StorageError

from corpusgen import make_fact


def record(kind, label, id_):
    return LinkRecord(LinkKind(kind), label, id_)


def test_distinct_records_ingest_without_collisions(tmp_path):
    records = [
        record("entity", "Semantic Web", "Q54837"),
        record("type", "concept", "Q151885"),
        record("relation", "use", "P2283"),
    ]
    store = LinkStore.build(records, tmp_path / "links.db")
    assert store.build_report.entries == 3
    assert store.build_report.collisions == 0
    assert store.count() == 3


def test_first_record_wins_and_collision_reported(tmp_path):
    records = [
        record("entity", "Mercury", "Q308"),
        record("entity", "Mercury", "Q925"),
    ]
    store = LinkStore.build(records, tmp_path / "links.db")
    assert store.lookup(LinkKind.ENTITY, "Mercury") == "Q308"
    assert store.build_report.collisions == 1
    assert store.build_report.entries == 1


def test_exact_duplicates_are_not_collisions(tmp_path):
    records = [record("entity", "Earth", "Q2")] * 3
    store = LinkStore.build(records, tmp_path / "links.db")
    assert store.build_report.collisions == 0
    assert store.build_report.duplicates == 2


def test_lookup_present_and_absent(tmp_path):
    store = LinkStore.build(
        [record("entity", "Semantic Web", "Q54837")], tmp_path / "links.db"
    )
    assert store.lookup(LinkKind.ENTITY, "Semantic Web") == "Q54837"
    assert store.lookup(LinkKind.ENTITY, "never ingested") is None
    # kinds are separate maps
    assert store.lookup(LinkKind.TYPE, "Semantic Web") is None


def test_case_sensitivity_is_configurable(tmp_path):
    records = [record("entity", "Germany", "Q183")]
    sensitive = LinkStore.build(records, tmp_path / "cs.db")
    assert sensitive.lookup(LinkKind.ENTITY, "germany") is None
    insensitive = LinkStore.build(records, tmp_path / "ci.db", case_insensitive=True)
    assert insensitive.lookup(LinkKind.ENTITY, "germany") == "Q183"


def test_nfc_normalization_unifies_composed_and_decomposed(tmp_path):
    composed = "café"
    decomposed = "café"
    store = LinkStore.build([record("entity", composed, "Q1")], tmp_path / "links.db")
    assert store.lookup(LinkKind.ENTITY, decomposed) == "Q1"


def test_labels_trimmed_on_ingest_and_lookup(tmp_path):
    store = LinkStore.build([record("entity", "  Earth ", "Q2")], tmp_path / "links.db")
    assert store.lookup(LinkKind.ENTITY, "Earth") == "Q2"
    assert store.lookup(LinkKind.ENTITY, " Earth\t") == "Q2"


def test_reopened_store_answers_identically(tmp_path):
    path = tmp_path / "links.db"
    records = [
        record("entity", "Earth", "Q2"),
        record("type", "planet", "Q634"),
        record("relation", "orbits", "P397"),
    ]
    built = LinkStore.build(records, path, case_insensitive=True)
    answers = {
        (kind, label): built.lookup(kind, label)
        for kind, label in [
            (LinkKind.ENTITY, "earth"),
            (LinkKind.TYPE, "PLANET"),
            (LinkKind.RELATION, "orbits"),
            (LinkKind.ENTITY, "missing"),
        ]
    }
    built.close()
    with LinkStore.open(path) as reopened:
        assert reopened.case_insensitive
        for (kind, label), expected in answers.items():
            assert reopened.lookup(kind, label) == expected


def test_link_fact_fills_available_ids(tmp_path):
    store = LinkStore.build(
        [
            record("entity", "Semantic Web", "Q54837"),
            record("entity", "inference rule", "Q3271064"),
            record("type", "concept", "Q151885"),
            record("relation", "use", "P2283"),
        ],
        tmp_path / "links.db",
    )
    fact = make_fact(
        "semantic web", "Semantic Web", "concept",
        "use",
        "inference rules", "inference rule", "concept",
    )
    linked = store.link_fact(ScoredFact(fact, 1.0, 1))
    assert linked.subject_id == "Q54837"
    assert linked.subject_type_id == "Q151885"
    assert linked.relation_id == "P2283"
    assert linked.object_id == "Q3271064"
    assert linked.object_type_id == "Q151885"


def test_link_fact_leaves_unknown_labels_unlinked(tmp_path):
    store = LinkStore.build(
        [
            record("entity", "Semantic Web", "Q54837"),
            record("entity", "inference rule", "Q3271064"),
            record("type", "concept", "Q151885"),
        ],
        tmp_path / "links.db",
    )
    fact = make_fact(
        "semantic web", "Semantic Web", "concept",
        "use",
        "inference rules", "inference rule", "concept",
    )
    linked = store.link_fact(ScoredFact(fact, 1.0, 1))
    assert linked.relation_id is None
    assert linked.subject_id == "Q54837"


def test_link_fact_with_empty_store_yields_all_nulls(tmp_path):
    store = LinkStore.build([], tmp_path / "links.db")
    fact = make_fact("novel", "Novel Thing", "new type", "made of", "stuff", "Stuff", "matter")
    linked = store.link_fact(ScoredFact(fact, 1.0, 1))
    assert (
        linked.subject_id,
        linked.subject_type_id,
        linked.relation_id,
        linked.object_id,
        linked.object_type_id,
    ) == (None, None, None, None, None)


def test_record_validation():
    with pytest.raises(ValueError):
        LinkRecord(LinkKind.ENTITY, "label", "P31")  # entity must be Q
    with pytest.raises(ValueError):
        LinkRecord(LinkKind.RELATION, "label", "Q42")  # relation must be P
    with pytest.raises(ValueError):
        LinkRecord(LinkKind.ENTITY, "   ", "Q42")


def test_tsv_reader_good_lines():
    lines = [
        "entity\tEarth\tQ2\n",
        "\n",
        "type\tplanet\tQ634\n",
        "relation\torbits\tP397\n",
    ]
    records = list(read_tsv_records(lines))
    assert [r.id for r in records] == ["Q2", "Q634", "P397"]


@pytest.mark.parametrize(
    "line, line_number",
    [
        ("entity\tEarth\n", 1),  # missing column
        ("planet\tEarth\tQ2\n", 1),  # unknown kind
        ("entity\tEarth\tX2\n", 1),  # bad id
        ("entity\t \tQ2\n", 1),  # blank label
    ],
)
def test_tsv_reader_malformed_lines(line, line_number):
    with pytest.raises(MalformedRecordError) as info:
        list(read_tsv_records([line]))
    assert info.value.line_number == line_number


def test_tsv_reader_reports_correct_line_number():
    lines = ["entity\tEarth\tQ2\n", "entity\tbroken\n"]
    with pytest.raises(MalformedRecordError) as info:
        list(read_tsv_records(lines))
    assert info.value.line_number == 2


def test_open_missing_or_invalid_store(tmp_path):
    with pytest.raises(StorageError):
        LinkStore.open(tmp_path / "absent.db")
    bogus = tmp_path / "bogus.db"
    bogus.write_text("not a database")
    with pytest.raises(StorageError):
        LinkStore.open(bogus)


def test_bulk_ingest_agrees_with_reference_map(tmp_path):
    rng = random.Random(1234)
    kinds = list(LinkKind)
    records = []
    for i in range(1000):
        kind = rng.choice(kinds)
        label = f"label {rng.randint(0, 700)}"
        prefix = "P" if kind is LinkKind.RELATION else "Q"
        records.append(record(kind.value, label, f"{prefix}{i + 1}"))

    reference: dict[tuple[str, str], str] = {}
    for r in records:
        reference.setdefault((r.kind.value, r.label), r.id)

    path = tmp_path / "bulk.db"
    LinkStore.build(records, path).close()
    with LinkStore.open(path) as store:
        for (kind_value, label), expected in reference.items():
            assert store.lookup(LinkKind(kind_value), label) == expected
        for i in range(200):
            assert store.lookup(rng.choice(kinds), f"absent {i}") is None
