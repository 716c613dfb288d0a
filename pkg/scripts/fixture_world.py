"""Synthetic 50-sentence world behind the committed end-to-end fixtures.

Purely deterministic: entity/relation choices derive from the sentence index,
beam scores from a fixed formula.  Some labels are deliberately absent from
the label dump (null-ID paths) and every fifth sentence gets one corrupted
hypothesis (lenient-parse recovery paths).
"""

from __future__ import annotations

from dataclasses import replace

from factline import EntityAnnotation, GeneratedFact, linearize

ENTITIES = [
    ("Earth", "planet", "Q2"), ("Sun", "star", "Q525"), ("Moon", "satellite", "Q405"),
    ("Paris", "city", "Q90"), ("France", "country", "Q142"), ("Berlin", "city", "Q64"),
    ("Germany", "country", "Q183"), ("Rhine", "river", "Q584"), ("Danube", "river", "Q1653"),
    ("Vienna", "city", "Q1741"), ("Austria", "country", "Q40"), ("Alps", "mountain range", "Q1286"),
    ("Mercury", "planet", "Q308"), ("Venus", "planet", "Q313"), ("Mars", "planet", "Q111"),
    ("Jupiter", "planet", "Q319"), ("Saturn", "planet", "Q193"), ("Neptune", "planet", None),
    ("Kepler", "scientist", None), ("Newton", "scientist", "Q935"),
]

TYPE_IDS = {
    "planet": "Q634",
    "star": "Q523",
    "satellite": "Q1078",
    "city": "Q515",
    "country": "Q6256",
    "river": "Q4022",
    "scientist": "Q901",
    # "mountain range" left unlinked on purpose
}

RELATIONS = [
    ("orbits", "P397", "orbits"),
    ("capital of", "P1376", "is the capital of"),
    ("flows through", None, "flows through"),
    ("located in", "P131", "is located in"),
    ("studied", None, "studied"),
]


def _annotation(label: str, type_label: str) -> EntityAnnotation:
    return EntityAnnotation(mention=label, label=label, type_label=type_label)


def _fact(subject, relation_label, obj) -> GeneratedFact:
    return GeneratedFact(
        subject=_annotation(subject[0], subject[1]),
        relation=relation_label,
        object=_annotation(obj[0], obj[1]),
    )


def _sentence(index: int) -> tuple[str, list[GeneratedFact]]:
    subject = ENTITIES[index % len(ENTITIES)]
    obj = ENTITIES[(index * 7 + 3) % len(ENTITIES)]
    if obj == subject:
        obj = ENTITIES[(index * 7 + 4) % len(ENTITIES)]
    relation_label, _, verb = RELATIONS[index % len(RELATIONS)]
    sentence = f"In record {index}, {subject[0]} {verb} {obj[0]}."
    facts = [_fact(subject, relation_label, obj)]
    if index % 7 == 0:
        partner = ENTITIES[(index * 3 + 5) % len(ENTITIES)]
        if partner in (subject, obj):
            partner = ENTITIES[(index * 3 + 6) % len(ENTITIES)]
        facts.append(_fact(obj, "located in", partner))
    return sentence, facts


_ALL = [_sentence(i) for i in range(50)]

DOC_SENTENCES = {
    "doc-astro": _ALL[0:17],
    "doc-geo": _ALL[17:34],
    "doc-misc": _ALL[34:50],
}


def _score(index: int, beam: int) -> float:
    return round(0.35 + (index % 9) * 0.2 + beam * 0.15, 4)


def beams_for_sentence(sentence: str, facts: list[GeneratedFact]) -> list[dict]:
    index = int(sentence.split(",")[0].split()[-1])
    canonical = linearize(sentence, facts)

    if index % 3 == 1:
        second = canonical  # repeated hypothesis: exercises beam_count > 1
    else:
        lead = facts[0]
        variant = replace(
            lead,
            object=EntityAnnotation(
                mention=f"the {lead.object.mention}",
                label=lead.object.label,
                type_label=lead.object.type_label,
            ),
        )
        second = linearize(sentence, [variant] + facts[1:])

    if index % 5 == 0:
        third = canonical[: max(10, int(len(canonical) * 0.6))]  # truncated mid-fact
    else:
        lead = facts[0]
        relabeled = replace(lead, relation=f"alt {lead.relation}")
        third = linearize(sentence, [relabeled] + facts[1:])

    return [
        {"sequence": canonical, "score": _score(index, 0)},
        {"sequence": second, "score": _score(index, 1)},
        {"sequence": third, "score": _score(index, 2)},
    ]


LABEL_ROWS = (
    [("entity", label, qid) for label, _, qid in ENTITIES if qid]
    + [("type", label, qid) for label, qid in sorted(TYPE_IDS.items())]
    + [("relation", label, pid) for label, pid, _ in RELATIONS if pid]
)
