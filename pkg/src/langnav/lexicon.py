"""Word-embedding lexicon used for goal and constraint grounding.

The shipped lexicon assigns each synonym cluster its own pair of basis
dimensions; members of a cluster sit within 15 degrees of each other and
distinct clusters are orthogonal, so cosine similarity cleanly separates
synonyms from unrelated words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import UnknownWordError

POS_NOUN = "noun"
POS_VERB = "verb"
POS_STOP = "stop"
POS_TAGS = (POS_NOUN, POS_VERB, POS_STOP)


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    pos: str
    vector: np.ndarray
    cluster: int


class Lexicon:
    """Immutable word -> (pos, vector) table with synonym-cluster metadata."""

    def __init__(self, entries: dict[str, tuple[str, np.ndarray]]):
        if not entries:
            raise ValueError("empty lexicon")
        self._entries: dict[str, LexiconEntry] = {}
        dim = None
        for word, (pos, vec) in entries.items():
            v = np.asarray(vec, dtype=np.float64)
            if dim is None:
                dim = v.shape[0]
            if v.shape != (dim,):
                raise ValueError(f"inconsistent vector length for {word!r}")
            if not np.all(np.isfinite(v)) or not np.any(v):
                raise ValueError(f"vector for {word!r} must be finite and non-zero")
            if pos not in POS_TAGS:
                raise ValueError(f"unknown pos tag {pos!r} for {word!r}")
            # Cluster metadata is recovered from the dominant axis pair.
            cluster = int(np.argmax(np.abs(v)) // 2)
            self._entries[word] = LexiconEntry(word, pos, v, cluster)
        self.dim = dim
        self._max_noun_words = max(
            (len(w.split()) for w, e in self._entries.items() if e.pos == POS_NOUN),
            default=1,
        )

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def entry(self, word: str) -> LexiconEntry:
        try:
            return self._entries[word]
        except KeyError:
            raise UnknownWordError(f"word not in lexicon: {word!r}") from None

    def vector(self, word: str) -> np.ndarray:
        return self.entry(word).vector

    def pos(self, word: str) -> str:
        return self.entry(word).pos

    def is_noun(self, word: str) -> bool:
        return word in self._entries and self._entries[word].pos == POS_NOUN

    @property
    def max_noun_words(self) -> int:
        """Longest multiword noun, in tokens; bounds greedy matching."""
        return self._max_noun_words

    def words(self) -> list[str]:
        return list(self._entries)

    def cluster_of(self, word: str) -> int:
        return self.entry(word).cluster


def cosine_similarity(a: str, b: str, lex: Lexicon) -> float:
    """cos angle between the embedded vectors of two lexicon words."""
    va = lex.vector(a)
    vb = lex.vector(b)
    return float(np.dot(va, vb) / (np.linalg.norm(va) * np.linalg.norm(vb)))


def load_lexicon(path=None) -> Lexicon:
    """Parse a lexicon file: one `word, pos, v1, .., vm` record per line.

    Lines starting with '#' and blank lines are ignored. The word field may
    contain spaces (multiword nouns such as "information desk").
    """
    if path is None:
        text = resources.files("langnav.data").joinpath("lexicon.txt").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    entries: dict[str, tuple[str, np.ndarray]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 3:
            raise ValueError(f"lexicon line {lineno}: expected `word, pos, v1, ..`")
        word, pos = parts[0], parts[1]
        vec = np.array([float(x) for x in parts[2:]], dtype=np.float64)
        entries[word] = (pos, vec)
    return Lexicon(entries)


def save_lexicon(entries: dict[str, tuple[str, np.ndarray]], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# langnav lexicon: word, pos, v1, .., vm (unit vectors)\n")
        for word, (pos, vec) in entries.items():
            nums = ", ".join(f"{x:.6f}" for x in vec)
            fh.write(f"{word}, {pos}, {nums}\n")


def build_cluster_vectors(clusters: list[list[str]], spread_deg: float = 15.0) -> dict[str, np.ndarray]:
    """Assign each cluster an orthogonal axis pair; members fan over spread_deg."""
    dim = 2 * len(clusters)
    vectors: dict[str, np.ndarray] = {}
    for k, members in enumerate(clusters):
        n = len(members)
        for j, word in enumerate(members):
            theta = math.radians(spread_deg) * (j / (n - 1) if n > 1 else 0.0)
            v = np.zeros(dim)
            v[2 * k] = math.cos(theta)
            v[2 * k + 1] = math.sin(theta)
            vectors[word] = v
    return vectors
