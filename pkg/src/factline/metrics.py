"""Precision/recall/F1 over the five extraction dimensions.

A fact is projected into comparable items per dimension:

==========  ==============================================================
dimension   items per fact
==========  ==============================================================
MD          subject mention, object mention            (mention detection)
TYPE        subject type label, object type label      (type prediction)
EL          subject label, object label                (entity label)
RN          relation label                             (relation name)
REL         (subject label, relation, object label)    (full triple match)
==========  ==============================================================

Matching is exact string equality after trimming, and projections are sets
per record (repeated identical items in one sentence count once).  Micro
scores pool true/false positive/negative counts over all records before
computing PRF; the macro score is reported for REL only and averages
per-relation PRF with equal weight over every relation present in gold or
predicted data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Hashable, Iterable, Sequence

from .errors import EmptyDatasetError
from .facts import EntityAnnotation, GeneratedFact


class Dimension(Enum):
    MD = "md"
    TYPE = "type"
    EL = "el"
    RN = "rn"
    REL = "rel"


_PROJECTORS: dict[Dimension, Callable[[GeneratedFact], set[Hashable]]] = {
    Dimension.MD: lambda f: {f.subject.mention, f.object.mention},
    Dimension.TYPE: lambda f: {f.subject.type_label, f.object.type_label},
    Dimension.EL: lambda f: {f.subject.label, f.object.label},
    Dimension.RN: lambda f: {f.relation},
    Dimension.REL: lambda f: {(f.subject.label, f.relation, f.object.label)},
}


def project(facts: Iterable[GeneratedFact], dimension: Dimension) -> set[Hashable]:
    """The set of comparable items for a fact set under one dimension."""
    items: set[Hashable] = set()
    projector = _PROJECTORS[dimension]
    for fact in facts:
        items |= projector(fact)
    return items


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "PRF":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(precision, recall, f1, tp, fp, fn)

    @classmethod
    def from_rates(cls, precision: float, recall: float, f1: float, tp: int, fp: int, fn: int) -> "PRF":
        # Macro scores: rates are unweighted means, counts are the pooled totals.
        return cls(precision, recall, f1, tp, fp, fn)


@dataclass(frozen=True)
class EvalRecord:
    """One sentence with its gold and predicted fact sets."""

    sentence_id: str
    gold: frozenset[GeneratedFact]
    predicted: frozenset[GeneratedFact]

    def __post_init__(self):
        object.__setattr__(self, "gold", frozenset(self.gold))
        object.__setattr__(self, "predicted", frozenset(self.predicted))


def score_micro(records: Sequence[EvalRecord], dimension: Dimension) -> PRF:
    """Micro-averaged PRF: counts pooled over all records, PRF computed once."""
    if not records:
        raise EmptyDatasetError("no evaluation records")
    tp = fp = fn = 0
    for record in records:
        gold = project(record.gold, dimension)
        pred = project(record.predicted, dimension)
        tp += len(gold & pred)
        fp += len(pred - gold)
        fn += len(gold - pred)
    return PRF.from_counts(tp, fp, fn)


def score_macro_rel(records: Sequence[EvalRecord]) -> PRF:
    """Macro-averaged REL score: unweighted mean of per-relation PRF.

    Counts are summed globally per relation; the averaging set is every
    relation appearing in gold or predicted facts of the data (not a fixed
    relation inventory).
    """
    if not records:
        raise EmptyDatasetError("no evaluation records")
    counts: dict[str, list[int]] = {}
    for record in records:
        gold = project(record.gold, Dimension.REL)
        pred = project(record.predicted, Dimension.REL)
        for item in gold | pred:
            relation = item[1]
            entry = counts.setdefault(relation, [0, 0, 0])
            in_gold = item in gold
            in_pred = item in pred
            if in_gold and in_pred:
                entry[0] += 1
            elif in_pred:
                entry[1] += 1
            else:
                entry[2] += 1
    precision = recall = f1 = 0.0
    tp = fp = fn = 0
    for relation in sorted(counts):
        prf = PRF.from_counts(*counts[relation])
        precision += prf.precision
        recall += prf.recall
        f1 += prf.f1
        tp += prf.tp
        fp += prf.fp
        fn += prf.fn
    total = len(counts)
    if not total:
        return PRF.from_counts(0, 0, 0)
    return PRF.from_rates(precision / total, recall / total, f1 / total, tp, fp, fn)


# ---------------------------------------------------------------------------
# record files and the summary table
# ---------------------------------------------------------------------------

def fact_from_payload(payload: dict) -> GeneratedFact:
    subject = payload["subject"]
    obj = payload["object"]
    return GeneratedFact(
        subject=EntityAnnotation(subject["mention"], subject["label"], subject["type"]),
        relation=payload["relation"],
        object=EntityAnnotation(obj["mention"], obj["label"], obj["type"]),
    )


def fact_to_payload(fact: GeneratedFact) -> dict:
    return {
        "subject": {
            "mention": fact.subject.mention,
            "label": fact.subject.label,
            "type": fact.subject.type_label,
        },
        "relation": fact.relation,
        "object": {
            "mention": fact.object.mention,
            "label": fact.object.label,
            "type": fact.object.type_label,
        },
    }


def eval_records_from_jsonl(lines: Iterable[str]) -> list[EvalRecord]:
    """Read records from line-delimited JSON.

    Each line: ``{"sentence_id": ..., "gold": [fact...], "predicted": [fact...]}``
    with facts shaped as in :func:`fact_to_payload`.
    """
    records = []
    for line in lines:
        if not line.strip():
            continue
        payload = json.loads(line)
        records.append(
            EvalRecord(
                sentence_id=payload["sentence_id"],
                gold=frozenset(fact_from_payload(f) for f in payload["gold"]),
                predicted=frozenset(fact_from_payload(f) for f in payload["predicted"]),
            )
        )
    return records


def render_table(records: Sequence[EvalRecord]) -> str:
    """Score summary in the standard column layout (percentages)."""
    micro = {dim: score_micro(records, dim) for dim in Dimension}
    macro = score_macro_rel(records)

    def pct(value: float) -> str:
        return f"{100 * value:6.2f}"

    header = f"{'':8s} {'MD-F1':>7s} {'TYPE-F1':>8s} {'EL-F1':>7s} {'RN-F1':>7s} {'REL-P':>7s} {'REL-R':>7s} {'REL-F1':>7s}"
    micro_row = (
        f"{'Micro':8s} {pct(micro[Dimension.MD].f1):>7s} {pct(micro[Dimension.TYPE].f1):>8s}"
        f" {pct(micro[Dimension.EL].f1):>7s} {pct(micro[Dimension.RN].f1):>7s}"
        f" {pct(micro[Dimension.REL].precision):>7s} {pct(micro[Dimension.REL].recall):>7s}"
        f" {pct(micro[Dimension.REL].f1):>7s}"
    )
    macro_row = (
        f"{'Macro':8s} {'-':>7s} {'-':>8s} {'-':>7s} {'-':>7s}"
        f" {pct(macro.precision):>7s} {pct(macro.recall):>7s} {pct(macro.f1):>7s}"
    )
    return "\n".join([header, micro_row, macro_row])
