import random

import pytest
from hypothesis import given, settings, strategies as st

from factline import (
    fact_to_string,
    linearize,
    parse_lenient,
    parse_strict,
    sort_facts,
)
from factline._scan import scan_facts, scan_facts_py
from factline.errors import EmptyFieldError, SequenceSyntaxError
from factline.grammar import SCAN_BACKEND

from corpusgen import make_fact, random_fact_set, random_sentence, simple_fact

RUNNING_EXAMPLE = (
    "[(semantic web # Semantic Web # concept)"
    " | use |"
    " (inference rules # inference rule # concept)]"
)

FIELD_TEXT = st.text(
    alphabet=st.characters(blacklist_characters="[]()|#$", blacklist_categories=("Cs",)),
    min_size=1,
    max_size=10,
).filter(lambda s: s.strip(" \t\n\r\f\v"))


@st.composite
def facts(draw):
    return make_fact(*[draw(FIELD_TEXT) for _ in range(7)])


def running_example_fact():
    return make_fact(
        "semantic web", "Semantic Web", "concept",
        "use",
        "inference rules", "inference rule", "concept",
    )


# ---------------------------------------------------------------------------
# linearize
# ---------------------------------------------------------------------------

def test_linearize_running_example():
    fact = running_example_fact()
    text = "The semantic web uses inference rules."
    assert linearize(text, [fact]) == RUNNING_EXAMPLE


def test_linearize_empty_fact_set():
    assert linearize("anything", []) == ""


def test_linearize_joins_in_sorted_order():
    text = "alpha then beta"
    first = simple_fact("alpha", "rel", "beta")
    second = simple_fact("beta", "rel", "alpha")
    expected = fact_to_string(first) + " $ " + fact_to_string(second)
    assert linearize(text, [second, first]) == expected


@given(st.lists(facts(), max_size=4))
def test_canonical_form_has_no_stray_reserved_characters(fact_list):
    text = linearize("", fact_list)
    n = len(fact_list)
    expected = {
        "[": n, "]": n, "(": 2 * n, ")": 2 * n,
        "#": 4 * n, "|": 2 * n, "$": max(0, n - 1),
    }
    for char, count in expected.items():
        assert text.count(char) == count


# ---------------------------------------------------------------------------
# parse_strict
# ---------------------------------------------------------------------------

def test_strict_parses_running_example():
    assert parse_strict(RUNNING_EXAMPLE) == [running_example_fact()]


def test_strict_missing_object_field_is_a_syntax_error():
    with pytest.raises(SequenceSyntaxError):
        parse_strict("[(a # b # c) | r | (d # e)]")


def test_strict_empty_input_yields_no_facts():
    assert parse_strict("") == []
    assert parse_strict("   ") == []


def test_strict_reports_offset_and_expected_token():
    bad = "[(a # b # c) | r | (d # e # f)] junk"
    with pytest.raises(SequenceSyntaxError) as info:
        parse_strict(bad)
    assert info.value.offset == bad.index("junk")
    assert "$" in info.value.expected


def test_strict_rejects_empty_fields_with_offset():
    with pytest.raises(EmptyFieldError) as info:
        parse_strict("[( # b # c) | r | (d # e # f)]")
    assert info.value.field_name == "subject mention"
    assert info.value.offset == 2


def test_strict_accepts_compact_whitespace():
    facts = parse_strict("[(a#b#c)|r|(d#e#f)]")
    assert facts == [make_fact("a", "b", "c", "r", "d", "e", "f")]


def test_strict_accepts_extra_spaces_at_ws_positions():
    text = "  [(a  #  b # c)   |  r  |   (d # e # f)]  $  [(g # h # i) | j | (k # l # m)]  "
    assert len(parse_strict(text)) == 2


def test_strict_rejects_tab_between_facts():
    with pytest.raises(SequenceSyntaxError):
        parse_strict("[(a # b # c) | r | (d # e # f)]\t$ [(g # h # i) | j | (k # l # m)]")


def test_strict_rejects_missing_separator():
    with pytest.raises(SequenceSyntaxError):
        parse_strict("[(a # b # c) | r | (d # e # f)] [(g # h # i) | j | (k # l # m)]")


# ---------------------------------------------------------------------------
# parse_lenient
# ---------------------------------------------------------------------------

def test_lenient_matches_strict_on_valid_input():
    text = "alpha beta"
    fact_list = [simple_fact("alpha", "rel", "beta"), simple_fact("beta", "rel", "alpha")]
    sequence = linearize(text, fact_list)
    facts, diagnostics = parse_lenient(sequence)
    assert facts == parse_strict(sequence)
    assert diagnostics.skipped_spans == ()
    assert diagnostics.recovered_count == 2


def test_lenient_recovers_prefix_and_reports_truncated_tail():
    sequence = RUNNING_EXAMPLE + " $ [(x # y"
    facts, diagnostics = parse_lenient(sequence)
    assert facts == [running_example_fact()]
    assert len(diagnostics.skipped_spans) == 1
    span = diagnostics.skipped_spans[0]
    assert (span.start, span.end) == (len(RUNNING_EXAMPLE), len(sequence))


def test_lenient_on_garbage_reports_single_span():
    facts, diagnostics = parse_lenient("no facts here")
    assert facts == []
    assert [s.reason for s in diagnostics.skipped_spans] == ["no-facts"]


def test_lenient_on_blank_input_is_clean():
    for text in ("", "   ", "\n\t"):
        facts, diagnostics = parse_lenient(text)
        assert facts == []
        assert diagnostics.clean


def test_lenient_rejects_empty_field_spans():
    sequence = "[( # b # c) | r | (d # e # f)] $ " + RUNNING_EXAMPLE
    facts, diagnostics = parse_lenient(sequence)
    assert facts == [running_example_fact()]
    assert [s.reason for s in diagnostics.skipped_spans] == ["empty-field"]


def test_lenient_flags_malformed_separator():
    sequence = RUNNING_EXAMPLE + " @ " + RUNNING_EXAMPLE
    facts, diagnostics = parse_lenient(sequence)
    assert len(facts) == 2
    assert [s.reason for s in diagnostics.skipped_spans] == ["malformed-separator"]


def test_lenient_skipped_spans_are_ascending_and_disjoint():
    sequence = "junk [(a # b # c) | r | (d # e # f)] ?? " + RUNNING_EXAMPLE + " tail"
    _, diagnostics = parse_lenient(sequence)
    spans = diagnostics.skipped_spans
    assert all(s.start < s.end for s in spans)
    assert all(a.end <= b.start for a, b in zip(spans, spans[1:]))


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@given(st.lists(facts(), max_size=5), st.data())
@settings(max_examples=200, deadline=None)
def test_round_trip_equals_sorted_input(fact_list, data):
    mentions = [f.subject.mention for f in fact_list] + [f.object.mention for f in fact_list]
    text = data.draw(st.text(max_size=30))
    if mentions and data.draw(st.booleans()):
        text = " ".join(data.draw(st.permutations(mentions)))
    sequence = linearize(text, fact_list)
    assert parse_strict(sequence) == sort_facts(text, fact_list)


@given(st.lists(facts(), max_size=4))
def test_lenient_agrees_with_strict_whenever_strict_succeeds(fact_list):
    sequence = linearize("", fact_list)
    strict_result = parse_strict(sequence)
    lenient_result, diagnostics = parse_lenient(sequence)
    assert lenient_result == strict_result
    assert diagnostics.clean


def test_parsing_is_deterministic():
    rng = random.Random(7)
    fact_list = random_fact_set(rng, 4)
    sequence = linearize("", fact_list)
    assert parse_strict(sequence) == parse_strict(sequence)
    assert parse_lenient(sequence) == parse_lenient(sequence)


# ---------------------------------------------------------------------------
# corruption fuzz (small; the acceptance suite runs the full 5000)
# ---------------------------------------------------------------------------

RESERVED = "[]()|#$"


def corrupt(rng: random.Random, sequence: str) -> str:
    """One structural single-edit corruption (see acceptance suite)."""
    ops = ["insert"]
    reserved_positions = [i for i, c in enumerate(sequence) if c in RESERVED]
    if reserved_positions:
        ops += ["delete", "replace_reserved"]
    if sequence:
        ops.append("replace_with_reserved")
    op = rng.choice(ops)
    if op == "insert":
        pos = rng.randint(0, len(sequence))
        return sequence[:pos] + rng.choice(RESERVED) + sequence[pos:]
    if op == "delete":
        pos = rng.choice(reserved_positions)
        return sequence[:pos] + sequence[pos + 1 :]
    if op == "replace_reserved":
        pos = rng.choice(reserved_positions)
        return sequence[:pos] + rng.choice("xyz ") + sequence[pos + 1 :]
    pos = rng.randint(0, len(sequence) - 1)
    return sequence[:pos] + rng.choice(RESERVED) + sequence[pos + 1 :]


def test_corrupted_sequences_recover_a_subset():
    rng = random.Random(20240809)
    for _ in range(300):
        fact_list = random_fact_set(rng, 4)
        sequence = linearize(random_sentence(rng, fact_list), fact_list)
        recovered, _ = parse_lenient(corrupt(rng, sequence))
        original = set(map(repr, parse_strict(sequence)))
        assert set(map(repr, recovered)) <= original


# ---------------------------------------------------------------------------
# backend equivalence
# ---------------------------------------------------------------------------

@pytest.mark.skipif(SCAN_BACKEND != "c", reason="compiled scanner not built")
@given(st.text(alphabet=st.sampled_from("[]()|#$ abc"), max_size=80))
@settings(max_examples=500, deadline=None)
def test_compiled_scanner_matches_reference_on_noise(text):
    assert scan_facts(text) == scan_facts_py(text)


@pytest.mark.skipif(SCAN_BACKEND != "c", reason="compiled scanner not built")
def test_compiled_scanner_matches_reference_on_corrupted_sequences():
    rng = random.Random(99)
    for _ in range(500):
        fact_list = random_fact_set(rng, 4)
        sequence = linearize("", fact_list)
        for _ in range(rng.randint(0, 3)):
            sequence = corrupt(rng, sequence)
        assert scan_facts(sequence) == scan_facts_py(sequence)
