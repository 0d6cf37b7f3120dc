"""Instruction text frontend: normalization, phrase splitting, tokenization."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import EmptyInputError, NoPhrasesError

PAD_WORD = "<pad>"
UNK_WORD = "<unk>"
PAD_ID = 0
UNK_ID = 1

LABELS = ("goal", "constraint", "uninformative")

#: Words that split an instruction into phrases, alongside the comma.
CONJUNCTIONS = frozenset({"and", "then", "but", "also"})

_APOSTROPHE_RE = re.compile(r"[’']")
_NON_WORD_RE = re.compile(r"[^a-z0-9\s,]")
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class Phrase:
    """A tokenized phrase: vocabulary ids plus the normalized surface string."""

    tokens: tuple[int, ...]
    surface: str

    def __len__(self) -> int:
        return len(self.tokens)

    def words(self) -> list[str]:
        return self.surface.split()


@dataclass(frozen=True)
class LabeledPhrase:
    phrase: Phrase
    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")


@dataclass(frozen=True)
class Instruction:
    raw: str
    phrases: tuple[Phrase, ...]


class Vocabulary:
    """Word/id bijection with reserved PAD and UNK ids.

    Lookup of unseen words returns UNK; ids are assigned in first-seen order.
    """

    def __init__(self, words=()):
        self._id_to_word = [PAD_WORD, UNK_WORD]
        self._word_to_id = {PAD_WORD: PAD_ID, UNK_WORD: UNK_ID}
        for w in words:
            self.add(w)

    def add(self, word: str) -> int:
        wid = self._word_to_id.get(word)
        if wid is None:
            wid = len(self._id_to_word)
            self._word_to_id[word] = wid
            self._id_to_word.append(word)
        return wid

    def id(self, word: str) -> int:
        return self._word_to_id.get(word, UNK_ID)

    def word(self, wid: int) -> str:
        return self._id_to_word[wid]

    def __contains__(self, word: str) -> bool:
        return word in self._word_to_id

    def __len__(self) -> int:
        return len(self._id_to_word)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._id_to_word == other._id_to_word

    @classmethod
    def from_surfaces(cls, surfaces) -> "Vocabulary":
        vocab = cls()
        for s in surfaces:
            for w in s.split():
                vocab.add(w)
        return vocab

    def to_list(self) -> list[str]:
        """Non-reserved words in id order, for serialization."""
        return list(self._id_to_word[2:])

    @classmethod
    def from_list(cls, words) -> "Vocabulary":
        return cls(words)


def normalize(raw: str) -> str:
    """Lowercase, strip punctuation, and isolate commas as standalone tokens.

    Apostrophes are removed without inserting a space ("don't" -> "dont");
    any other punctuation becomes whitespace; runs of whitespace collapse.
    """
    if not raw or not raw.strip():
        raise EmptyInputError("instruction text is empty")
    s = raw.lower()
    s = _APOSTROPHE_RE.sub("", s)
    s = s.replace(",", " , ")
    s = _NON_WORD_RE.sub(" ", s)
    s = _WS_RE.sub(" ", s).strip()
    # A trailing or leading separator can survive punctuation stripping.
    return s


def is_separator(token: str) -> bool:
    return token == "," or token in CONJUNCTIONS


def split_phrases(text: str) -> list[str]:
    """Split normalized text into phrase surfaces at commas and conjunctions.

    Separators are dropped and empty fragments discarded.
    """
    phrases: list[str] = []
    current: list[str] = []
    for token in text.split():
        if is_separator(token):
            if current:
                phrases.append(" ".join(current))
                current = []
        else:
            current.append(token)
    if current:
        phrases.append(" ".join(current))
    if not phrases:
        raise NoPhrasesError(f"no phrases in {text!r}")
    return phrases


def tokenize(phrase_text: str, vocab: Vocabulary) -> Phrase:
    """Map whitespace-delimited words to vocabulary ids (unseen -> UNK)."""
    words = phrase_text.split()
    if not words:
        raise EmptyInputError("phrase text is empty")
    return Phrase(tokens=tuple(vocab.id(w) for w in words), surface=phrase_text)


def parse_instruction(raw: str, vocab: Vocabulary) -> Instruction:
    """normalize -> split_phrases -> tokenize, bundled."""
    normalized = normalize(raw)
    surfaces = split_phrases(normalized)
    return Instruction(raw=raw, phrases=tuple(tokenize(s, vocab) for s in surfaces))
