"""Synthetic labeled-phrase corpus generated from a template grammar.

Instructions mix one goal phrase with 0-3 constraint and 0-2 filler phrases,
so every phrase carries its label by construction. The grammar lives in a
data file and can be swapped without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .text import LabeledPhrase, Phrase, Vocabulary, normalize, split_phrases, tokenize

GOAL, CONSTRAINT, UNINFORMATIVE = "goal", "constraint", "uninformative"


@dataclass
class Corpus:
    train: list[LabeledPhrase]
    test: list[LabeledPhrase]
    seed: int
    vocab: Vocabulary
    instructions: list[str] = field(default_factory=list)
    label_counts: dict[str, dict[str, int]] = field(default_factory=dict)


def load_grammar(path=None) -> dict:
    if path is None:
        text = resources.files("langnav.data").joinpath("grammar.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def expected_label_weights(grammar: dict) -> dict[str, float]:
    """Expected label fractions implied by the grammar's mixing weights."""
    c = sum(i * w for i, w in enumerate(grammar["constraint_count_weights"]))
    f = sum(i * w for i, w in enumerate(grammar["filler_count_weights"]))
    total = 1.0 + c + f
    return {GOAL: 1.0 / total, CONSTRAINT: c / total, UNINFORMATIVE: f / total}


def _pick(rng: np.random.Generator, pool: list[str]) -> str:
    return pool[rng.integers(len(pool))]


def _fill(rng: np.random.Generator, template: str, g: dict) -> str:
    """Fill a noun slot; {any} draws from locations and objects alike."""
    if "{loc}" in template:
        return template.format(loc=_pick(rng, g["goal_locations"]))
    if "{obj}" in template:
        return template.format(obj=_pick(rng, g["constraint_objects"]))
    if "{any}" in template:
        pool = g["goal_locations"] + g["constraint_objects"]
        return template.format(any=_pick(rng, pool))
    return template


def _chain(rng: np.random.Generator, pool: list[str], probs: list[float]) -> list[str]:
    """Draw a run of decorations; probs[k] gates the (k+1)-th one."""
    out: list[str] = []
    for prob in probs:
        if rng.random() >= prob:
            break
        out.append(_pick(rng, pool))
    return out


def _sample_goal(rng: np.random.Generator, g: dict) -> str:
    phrase = _fill(rng, _pick(rng, g["goal_templates"]), g)
    pre = _chain(rng, g["goal_prefixes"], g["goal_prefix_probs"])
    post = _chain(rng, g["goal_suffixes"], g["goal_suffix_probs"])
    return " ".join(pre + [phrase] + post)


def _sample_constraint(rng: np.random.Generator, g: dict) -> str:
    if rng.random() < g["constraint_bare_prob"]:
        obj = _pick(rng, g["constraint_objects"])
        return _pick(rng, g["constraint_bare_templates"]).format(obj=obj)
    phrase = _fill(rng, _pick(rng, g["constraint_templates"]), g)
    pre = _chain(rng, g["constraint_prefixes"], g["constraint_prefix_probs"])
    post = _chain(rng, g["constraint_suffixes"], g["constraint_suffix_probs"])
    return " ".join(pre + [phrase] + post)


def _sample_filler(rng: np.random.Generator, g: dict) -> str:
    phrase = _pick(rng, g["filler_bases"])
    post = _chain(rng, g["filler_decorations"], g["filler_decoration_probs"])
    return " ".join([phrase] + post)


def _sample_count(rng: np.random.Generator, weights: list[float]) -> int:
    return int(rng.choice(len(weights), p=np.asarray(weights) / sum(weights)))


def generate_instruction(rng: np.random.Generator, g: dict) -> tuple[str, list[tuple[str, str]]]:
    """One raw instruction plus its (phrase surface, label) ground truth."""
    parts = [(_sample_goal(rng, g), GOAL)]
    for _ in range(_sample_count(rng, g["constraint_count_weights"])):
        parts.append((_sample_constraint(rng, g), CONSTRAINT))
    for _ in range(_sample_count(rng, g["filler_count_weights"])):
        parts.append((_sample_filler(rng, g), UNINFORMATIVE))
    order = rng.permutation(len(parts))
    parts = [parts[i] for i in order]
    seps = g["separators"]
    raw = parts[0][0]
    for surface, _ in parts[1:]:
        raw += seps[rng.integers(len(seps))] + surface
    if rng.random() < 0.5:
        raw = raw[0].upper() + raw[1:]
    if rng.random() < 0.5:
        raw += "."
    return raw, parts


def generate_corpus(
    seed: int,
    n_instructions: int,
    grammar: dict | None = None,
    test_fraction: float = 0.2,
) -> Corpus:
    """Deterministic template-grammar corpus with a surface-disjoint split."""
    if n_instructions < 10:
        raise ValueError("n_instructions must be >= 10")
    g = grammar if grammar is not None else load_grammar()
    rng = np.random.default_rng(seed)

    instructions: list[str] = []
    samples: list[tuple[str, str]] = []
    for _ in range(n_instructions):
        raw, parts = generate_instruction(rng, g)
        instructions.append(raw)
        # The normalizer/splitter must reproduce the construction exactly.
        resplit = split_phrases(normalize(raw))
        assert resplit == [s for s, _ in parts], (raw, resplit, parts)
        samples.extend(parts)

    by_surface: dict[str, str] = {}
    order: list[str] = []
    for surface, label in samples:
        if surface not in by_surface:
            by_surface[surface] = label
            order.append(surface)
        elif by_surface[surface] != label:
            raise ValueError(f"grammar produced conflicting labels for {surface!r}")

    shuffled = list(order)
    rng.shuffle(shuffled)
    n_test = max(1, int(round(test_fraction * len(shuffled))))
    test_surfaces = set(shuffled[:n_test])

    # Each class must be represented on both sides of the split.
    for label in (GOAL, CONSTRAINT, UNINFORMATIVE):
        of_label = [s for s in shuffled if by_surface[s] == label]
        if not any(s in test_surfaces for s in of_label):
            test_surfaces.add(of_label[0])
        if all(s in test_surfaces for s in of_label):
            test_surfaces.discard(of_label[-1])

    train_rows = [(s, l) for s, l in samples if s not in test_surfaces]
    test_rows = [(s, l) for s, l in samples if s in test_surfaces]

    vocab = Vocabulary.from_surfaces(s for s, _ in train_rows)
    train = [LabeledPhrase(tokenize(s, vocab), l) for s, l in train_rows]
    test = [LabeledPhrase(tokenize(s, vocab), l) for s, l in test_rows]

    counts = {
        "train": _label_counts(train),
        "test": _label_counts(test),
    }
    return Corpus(
        train=train,
        test=test,
        seed=seed,
        vocab=vocab,
        instructions=instructions,
        label_counts=counts,
    )


def _label_counts(rows: list[LabeledPhrase]) -> dict[str, int]:
    counts = {GOAL: 0, CONSTRAINT: 0, UNINFORMATIVE: 0}
    for row in rows:
        counts[row.label] += 1
    return counts


def save_corpus(corpus: Corpus, path) -> None:
    """Line-delimited records: {"phrase": .., "label": .., "split": ..}."""
    with open(path, "w", encoding="utf-8") as fh:
        for split, rows in (("train", corpus.train), ("test", corpus.test)):
            for row in rows:
                rec = {"phrase": row.phrase.surface, "label": row.label, "split": split}
                fh.write(json.dumps(rec, sort_keys=True) + "\n")


def load_corpus(path, seed: int = 0, test_fraction: float = 0.2) -> Corpus:
    """Read a corpus file; records without a split field are split by seed."""
    rows: list[tuple[str, str, str | None]] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            rows.append((rec["phrase"], rec["label"], rec.get("split")))
    if any(split is None for _, _, split in rows):
        rng = np.random.default_rng(seed)
        surfaces = sorted({s for s, _, _ in rows})
        rng.shuffle(surfaces)
        n_test = max(1, int(round(test_fraction * len(surfaces))))
        test_surfaces = set(surfaces[:n_test])
        rows = [(s, l, "test" if s in test_surfaces else "train") for s, l, _ in rows]

    train_rows = [(s, l) for s, l, split in rows if split == "train"]
    test_rows = [(s, l) for s, l, split in rows if split == "test"]
    vocab = Vocabulary.from_surfaces(s for s, _ in train_rows)
    train = [LabeledPhrase(tokenize(s, vocab), l) for s, l in train_rows]
    test = [LabeledPhrase(tokenize(s, vocab), l) for s, l in test_rows]
    return Corpus(
        train=train,
        test=test,
        seed=seed,
        vocab=vocab,
        label_counts={"train": _label_counts(train), "test": _label_counts(test)},
    )
