import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from langnav.errors import EmptyInputError, NoPhrasesError
from langnav.text import (
    CONJUNCTIONS,
    PAD_ID,
    UNK_ID,
    Vocabulary,
    is_separator,
    normalize,
    parse_instruction,
    split_phrases,
    tokenize,
)


class TestNormalize:
    def test_case_and_punctuation(self):
        assert normalize("Go to the Restaurant.") == "go to the restaurant"

    def test_whitespace_collapse(self):
        assert normalize("keep  away from people") == "keep away from people"

    def test_comma_becomes_standalone_token(self):
        assert normalize("go to the lift, and wait") == "go to the lift , and wait"

    def test_apostrophe_joins(self):
        assert normalize("don't collide with people") == "dont collide with people"

    def test_golden_fixtures(self):
        # Frozen outputs for a small fixture set.
        fixtures = {
            "Robot, go to the school and stay away from children": (
                "robot , go to the school and stay away from children"
            ),
            "MOVE to the Laboratory;  watch out!": "move to the laboratory watch out",
            "go   to the cafe...": "go to the cafe",
        }
        for raw, expected in fixtures.items():
            assert normalize(raw) == expected

    @pytest.mark.parametrize("raw", ["", "   ", "\n\t"])
    def test_empty_input(self, raw):
        with pytest.raises(EmptyInputError):
            normalize(raw)


class TestSplitPhrases:
    def test_overview_example(self):
        text = normalize("go to the restaurant and you know , keep away from people")
        assert split_phrases(text) == [
            "go to the restaurant",
            "you know",
            "keep away from people",
        ]

    def test_address_token_becomes_own_phrase(self):
        assert split_phrases(normalize("robot , go to the lift")) == ["robot", "go to the lift"]

    def test_no_separator(self):
        assert split_phrases("go home") == ["go home"]

    def test_all_separators_is_error(self):
        with pytest.raises(NoPhrasesError):
            split_phrases(", and then ,")

    def test_never_emits_separators(self):
        text = normalize("go to the hall, then wait and also hurry up, but listen")
        for phrase in split_phrases(text):
            assert not any(is_separator(tok) for tok in phrase.split())

    def test_round_trip(self):
        text = normalize("go to the hall and wait , keep away from dogs")
        phrases = split_phrases(text)
        assert split_phrases(" and ".join(phrases)) == phrases


class TestTokenize:
    def test_known_words(self):
        vocab = Vocabulary(["go", "to", "the", "lift"])
        phrase = tokenize("go to the lift", vocab)
        assert len(phrase) == 4
        assert UNK_ID not in phrase.tokens

    def test_oov_maps_to_unk(self):
        vocab = Vocabulary(["go", "to", "the"])
        phrase = tokenize("go to the zxqv", vocab)
        assert phrase.tokens[-1] == UNK_ID

    def test_empty_is_error(self):
        with pytest.raises(EmptyInputError):
            tokenize("  ", Vocabulary())

    def test_golden_ids(self):
        vocab = Vocabulary.from_surfaces(["go to the lift", "keep away from people"])
        assert tokenize("go to the lift", vocab).tokens == (2, 3, 4, 5)
        assert tokenize("keep away from people", vocab).tokens == (6, 7, 8, 9)
        assert tokenize("go away zxqv", vocab).tokens == (2, 7, UNK_ID)


class TestVocabulary:
    def test_reserved_ids(self):
        vocab = Vocabulary()
        assert vocab.id("<pad>") == PAD_ID
        assert vocab.id("anything") == UNK_ID

    def test_bijection(self):
        vocab = Vocabulary(["a", "b", "c"])
        for word in ("a", "b", "c"):
            assert vocab.word(vocab.id(word)) == word

    def test_serialization_round_trip(self):
        vocab = Vocabulary(["alpha", "beta"])
        assert Vocabulary.from_list(vocab.to_list()) == vocab


WORDS = st.sampled_from(["go", "to", "the", "hall", "keep", "away", "robot", "please", "zx"]) \
    .filter(lambda w: w not in CONJUNCTIONS)


class TestInstructionInvariant:
    @given(st.lists(st.lists(WORDS, min_size=1, max_size=4), min_size=1, max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_tokens_reproduce_normalized_stream(self, phrase_words):
        raw = " and ".join(" ".join(ws) for ws in phrase_words)
        vocab = Vocabulary.from_surfaces([" ".join(ws) for ws in phrase_words])
        instruction = parse_instruction(raw, vocab)
        rebuilt = [w for p in instruction.phrases for w in p.surface.split()]
        expected = [w for w in normalize(raw).split() if not is_separator(w)]
        assert rebuilt == expected

    @given(st.lists(st.lists(WORDS, min_size=1, max_size=4), min_size=1, max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_tokenize_total(self, phrase_words):
        vocab = Vocabulary(["go", "to"])
        for ws in phrase_words:
            phrase = tokenize(" ".join(ws), vocab)
            assert len(phrase) == len(ws)
            assert all(0 <= t < len(vocab) for t in phrase.tokens)
