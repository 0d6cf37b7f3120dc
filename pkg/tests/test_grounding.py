import math

import pytest

from langnav.errors import EmptyMapError, NoMatchError, NoNounError, UnknownWordError
from langnav.grounding import (
    cosine_similarity,
    extract_nouns,
    fold_plural,
    ground_constraints,
    ground_goal,
    parse_phrases,
)
from langnav.text import Phrase, Vocabulary, tokenize
from langnav.world import Detection, DetectionFrame


def phrase(text):
    return tokenize(text, Vocabulary.from_surfaces([text]))


class TestExtractNouns:
    def test_goal_noun(self, lexicon):
        assert extract_nouns(phrase("go to the restaurant"), lexicon) == ["restaurant"]

    def test_multiple_objects(self, lexicon):
        assert extract_nouns(phrase("watch out the table and chairs"), lexicon) == ["table", "chairs"]

    def test_multiword_location(self, lexicon):
        assert extract_nouns(phrase("walk to the information desk"), lexicon) == ["information desk"]

    def test_greedy_longest_first(self, lexicon):
        # "thrift shop" must win over bare "shop".
        assert extract_nouns(phrase("go to the thrift shop"), lexicon) == ["thrift shop"]

    def test_distractor_nouns_listed_in_order(self, lexicon):
        nouns = extract_nouns(phrase("watch out the table in the shop"), lexicon)
        assert nouns == ["table", "shop"]

    def test_no_noun_error(self, lexicon):
        with pytest.raises(NoNounError):
            extract_nouns(phrase("you know"), lexicon)

    def test_unknown_words_skipped(self, lexicon):
        assert extract_nouns(phrase("go to the zxqv cafe"), lexicon) == ["cafe"]


class TestFoldPlural:
    def test_known_word_passes_through(self, lexicon):
        assert fold_plural("chairs", lexicon) == "chairs"  # its own lexicon entry

    def test_s_strip(self, lexicon):
        lex_words = set(lexicon.words())
        assert "trolleys" in lex_words
        assert fold_plural("trolleys", lexicon) == "trolleys"

    def test_unknown(self, lexicon):
        assert fold_plural("zxqvs", lexicon) is None


class TestGroundGoal:
    def test_exact_name(self, lexicon, scene1):
        g = ground_goal("restaurant", scene1, lexicon)
        assert g.location == "restaurant"
        assert g.score == pytest.approx(1.0)
        assert g.position == scene1.location("restaurant").position

    def test_fig7_location_set(self, lexicon, scene1):
        for noun, expected in (
            ("restaurant", "restaurant"),
            ("lab", "laboratory"),
            ("elevator", "lift"),
            ("lobby", "hall"),
            ("reception", "information desk"),
        ):
            assert ground_goal(noun, scene1, lexicon).location == expected

    def test_school_vs_cafe(self, lexicon, sim_scene):
        assert ground_goal("school", sim_scene, lexicon).location == "school"

    def test_below_threshold(self, lexicon, scene1):
        with pytest.raises(NoMatchError):
            ground_goal("dog", scene1, lexicon)  # orthogonal to all location names

    def test_empty_map(self, lexicon, scene1):
        empty = scene1.fork()
        empty.locations = []
        with pytest.raises(EmptyMapError):
            ground_goal("restaurant", empty, lexicon)

    def test_unknown_noun(self, lexicon, scene1):
        with pytest.raises(UnknownWordError):
            ground_goal("zxqv", scene1, lexicon)

    def test_argmax_invariant_under_monotone_transform(self, lexicon, scene1):
        # Winner by raw cosine equals winner by any strictly increasing map.
        noun = "canteen"
        scores = [cosine_similarity(noun, loc.name, lexicon) for loc in scene1.locations]
        raw_winner = max(range(len(scores)), key=lambda i: scores[i])
        transformed = [math.exp(3.0 * s) + 1.0 for s in scores]
        assert max(range(len(scores)), key=lambda i: transformed[i]) == raw_winner
        assert ground_goal(noun, scene1, lexicon).location == scene1.locations[raw_winner].name


def frame(*dets, t=1.0):
    return DetectionFrame(timestamp=t, detections=tuple(dets))


class TestGroundConstraints:
    def test_empty_frame(self, lexicon):
        assert ground_constraints(["people"], frame(), lexicon) == []

    def test_person_detection_grounds_people(self, lexicon):
        f = frame(Detection("p1", "person", (2.0, 1.0)))
        out = ground_constraints(["people"], f, lexicon)
        assert len(out) == 1
        g = out[0]
        assert g.object_id == "p1"
        assert g.position == (2.0, 1.0)
        assert g.score > 0.6
        assert g.timestamp == 1.0

    def test_orthogonal_label_below_threshold(self, lexicon):
        f = frame(Detection("p1", "person", (1.0, 0.0)))
        assert ground_constraints(["table"], f, lexicon) == []

    def test_monotone_in_frame(self, lexicon):
        base = frame(Detection("p1", "person", (1.0, 0.0)))
        bigger = frame(
            Detection("p1", "person", (1.0, 0.0)),
            Detection("t1", "table", (0.5, 0.5)),
        )
        nouns = ["people", "tables"]
        small = {(g.noun, g.object_id) for g in ground_constraints(nouns, base, lexicon)}
        large = {(g.noun, g.object_id) for g in ground_constraints(nouns, bigger, lexicon)}
        assert small <= large

    def test_scores_strictly_exceed_threshold(self, lexicon):
        f = frame(
            Detection("p1", "person", (1.0, 0.0)),
            Detection("d1", "dog", (0.0, 1.0)),
            Detection("t1", "table", (1.0, 1.0)),
        )
        for g in ground_constraints(["people", "dogs", "table"], f, lexicon, threshold=0.6):
            assert g.score > 0.6

    def test_one_grounding_per_object_per_noun(self, lexicon):
        f = frame(Detection("p1", "person", (1.0, 0.0)))
        out = ground_constraints(["people", "children"], f, lexicon)
        # Both nouns are people-cluster words, so both ground to the object.
        assert {(g.noun, g.object_id) for g in out} == {("people", "p1"), ("children", "p1")}


class TestParsePhrases:
    def test_last_goal_wins_and_dedupe(self, lexicon):
        labeled = [
            (phrase("go to the cafe"), "goal"),
            (phrase("keep away from people"), "constraint"),
            (phrase("walk to the school"), "goal"),
            (phrase("dont collide with people"), "constraint"),
        ]
        cmd = parse_phrases(labeled, lexicon)
        assert cmd.goal_noun == "school"
        assert cmd.constraint_nouns == ["people"]

    def test_first_noun_per_phrase(self, lexicon):
        labeled = [
            (phrase("go to the thrift shop to buy some water"), "goal"),
            (phrase("watch out the table in the shop"), "constraint"),
        ]
        cmd = parse_phrases(labeled, lexicon)
        assert cmd.goal_noun == "thrift shop"
        assert cmd.constraint_nouns == ["table"]
