"""Linking classified phrases to the world: goal locations and constraint objects."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyMapError, NoMatchError, NoNounError
from .lexicon import Lexicon, cosine_similarity
from .text import Phrase

GOAL_THRESHOLD = 0.3
CONSTRAINT_THRESHOLD = 0.6


@dataclass(frozen=True)
class GoalGrounding:
    location: str
    position: tuple[float, float]
    score: float


@dataclass(frozen=True)
class ConstraintGrounding:
    noun: str
    label: str
    object_id: str
    position: tuple[float, float]  # robot-local meters
    score: float
    timestamp: float


@dataclass
class ParsedCommand:
    goal_noun: str | None = None
    constraint_nouns: list[str] = field(default_factory=list)
    instruction_id: int = 0


def fold_plural(word: str, lex: Lexicon) -> str | None:
    """Resolve a token to a lexicon noun, stripping -s/-es if needed."""
    if lex.is_noun(word):
        return word
    if word.endswith("es") and lex.is_noun(word[:-2]):
        return word[:-2]
    if word.endswith("s") and lex.is_noun(word[:-1]):
        return word[:-1]
    return None


def extract_nouns(phrase, lex: Lexicon) -> list[str]:
    """Content nouns in order; multiword nouns matched greedily longest-first.

    Stop words, verbs, and unknown tokens are skipped. Raises NoNounError
    when nothing remains.
    """
    words = phrase.words() if isinstance(phrase, Phrase) else str(phrase).split()
    nouns: list[str] = []
    i = 0
    while i < len(words):
        matched = False
        for n in range(min(lex.max_noun_words, len(words) - i), 0, -1):
            candidate = " ".join(words[i : i + n])
            folded = fold_plural(candidate, lex)
            if folded is not None:
                nouns.append(candidate)
                i += n
                matched = True
                break
        if not matched:
            i += 1
    if not nouns:
        raise NoNounError(f"no content noun in {' '.join(words)!r}")
    return nouns


def ground_goal(
    goal_noun: str,
    semantic_map,
    lex: Lexicon,
    threshold: float = GOAL_THRESHOLD,
) -> GoalGrounding:
    """Best-similarity named location; declaration order breaks ties."""
    locations = semantic_map.locations
    if not locations:
        raise EmptyMapError("semantic map has no named locations")
    noun = fold_plural(goal_noun, lex) or goal_noun
    best = None
    best_score = -2.0
    for loc in locations:
        score = cosine_similarity(noun, loc.name, lex)
        if score > best_score:
            best, best_score = loc, score
    if best_score <= threshold:
        raise NoMatchError(
            f"no location matches {goal_noun!r} (best {best.name!r} at {best_score:.3f})"
        )
    return GoalGrounding(location=best.name, position=tuple(best.position), score=best_score)


def ground_constraints(
    nouns: list[str],
    frame,
    lex: Lexicon,
    threshold: float = CONSTRAINT_THRESHOLD,
) -> list[ConstraintGrounding]:
    """One grounding per (noun, detected object) pair above the threshold.

    Detections whose labels are missing from the lexicon are skipped; the
    result is empty when nothing matches.
    """
    out: list[ConstraintGrounding] = []
    for noun in nouns:
        folded = fold_plural(noun, lex)
        if folded is None:
            continue
        for det in frame.detections:
            if det.label not in lex:
                continue
            score = cosine_similarity(folded, det.label, lex)
            if score > threshold:
                out.append(
                    ConstraintGrounding(
                        noun=noun,
                        label=det.label,
                        object_id=det.object_id,
                        position=tuple(det.position),
                        score=score,
                        timestamp=frame.timestamp,
                    )
                )
    return out


def parse_phrases(
    labeled: list[tuple[Phrase, str]], lex: Lexicon, instruction_id: int = 0
) -> ParsedCommand:
    """Assemble a command: last goal phrase wins, first noun per phrase.

    Constraint nouns are deduplicated in order of first appearance.
    """
    cmd = ParsedCommand(instruction_id=instruction_id)
    for phrase, label in labeled:
        if label == "goal":
            nouns = extract_nouns(phrase, lex)
            cmd.goal_noun = nouns[0]
        elif label == "constraint":
            try:
                nouns = extract_nouns(phrase, lex)
            except NoNounError:
                continue
            if nouns[0] not in cmd.constraint_nouns:
                cmd.constraint_nouns.append(nouns[0])
    return cmd
