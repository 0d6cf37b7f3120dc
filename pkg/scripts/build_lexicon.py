#!/usr/bin/env python3
"""Regenerate src/langnav/data/lexicon.txt from the cluster tables below."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from langnav.lexicon import POS_NOUN, POS_STOP, POS_VERB, build_cluster_vectors, save_lexicon

NOUN_CLUSTERS = [
    ["restaurant", "restaurants", "canteen", "diner", "eatery"],
    ["cafe", "cafes", "coffeehouse"],
    ["school", "schools", "academy"],
    ["lift", "lifts", "elevator", "elevators"],
    ["hall", "halls", "lobby", "foyer"],
    ["laboratory", "laboratories", "lab", "labs"],
    ["information desk", "information desks", "reception", "front desk"],
    ["thrift shop", "thrift shops", "shop", "shops", "store", "stores"],
    ["post office", "post offices", "mailroom"],
    ["office building", "office buildings", "office", "offices"],
    ["playground", "playgrounds", "park", "parks"],
    ["workstation", "workstations", "workspace"],
    [
        "people", "person", "persons", "human", "humans", "pedestrian",
        "pedestrians", "crowd", "crowds", "child", "children", "kid", "kids",
        "man", "woman", "men", "women",
    ],
    ["table", "tables"],
    ["chair", "chairs"],
    ["desk", "desks"],
    ["door", "doors", "doorway"],
    ["cart", "carts", "trolley", "trolleys"],
    ["dog", "dogs", "puppy"],
    ["water", "drink", "drinks"],
    ["wall", "walls"],
    ["box", "boxes"],
    ["plant", "plants"],
    ["bench", "benches"],
]

VERBS = [
    "go", "goes", "going", "walk", "move", "navigate", "head", "drive",
    "proceed", "get", "come", "keep", "stay", "avoid", "watch", "collide",
    "run", "wait", "stop", "buy", "bring", "hurry", "remember", "listen",
    "take", "follow", "steer", "be", "hold", "find", "meet",
]

STOPS = [
    "the", "a", "an", "to", "from", "of", "in", "on", "at", "you", "know",
    "please", "robot", "dont", "with", "away", "out", "for", "some", "near",
    "close", "far", "clear", "is", "it", "that", "this", "there", "here",
    "me", "my", "your", "now", "right", "okay", "ok", "well", "um", "uh",
    "so", "just", "really", "quickly", "slowly", "carefully", "first",
    "when", "can", "careful", "quick", "possible", "thanks", "thank", "up",
    "by", "way", "mean", "sort", "time", "i", "as", "if", "hey", "what", "all", "times", "anyway", "bit",
    "never", "into", "off", "worry", "about",
]


def main():
    clusters = NOUN_CLUSTERS + [VERBS, STOPS]
    vectors = build_cluster_vectors(clusters)
    entries = {}
    for cluster in NOUN_CLUSTERS:
        for word in cluster:
            entries[word] = (POS_NOUN, vectors[word])
    for word in VERBS:
        entries[word] = (POS_VERB, vectors[word])
    for word in STOPS:
        entries[word] = (POS_STOP, vectors[word])
    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "langnav" / "data" / "lexicon.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_lexicon(entries, out)
    print(f"wrote {len(entries)} entries, dim {2 * len(clusters)} -> {out}")


if __name__ == "__main__":
    main()
