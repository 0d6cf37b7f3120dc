"""Command-line entry points: corpus, train, classify, ground, simulate, serve."""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from .corpus import generate_corpus, load_corpus, save_corpus
from .errors import LangNavError
from .grounding import extract_nouns, ground_constraints, ground_goal
from .lexicon import load_lexicon
from .model import ARCHITECTURES, load_model, save_model
from .navigation import Navigator, load_trace, path_metrics, save_trace
from .network import classify
from .scenarios import map_path
from .text import normalize, split_phrases, tokenize
from .training import TrainConfig, evaluate_accuracy, train
from .world import load_map


def cmd_corpus(args) -> int:
    corpus = generate_corpus(seed=args.seed, n_instructions=args.count)
    save_corpus(corpus, args.out)
    counts = corpus.label_counts
    print(f"wrote {args.out}: {len(corpus.train)} train / {len(corpus.test)} test phrases")
    print(f"train labels: {counts['train']}")
    print(f"test labels:  {counts['test']}")
    return 0


def cmd_train(args) -> int:
    corpus = load_corpus(args.corpus, seed=args.seed)
    config = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=args.seed,
        learning_rate=args.learning_rate,
        embedding_dim=args.embedding_dim,
        hidden_size=args.hidden_size,
    )
    model, curve = train(corpus, config, args.arch)
    save_model(model, corpus.vocab, args.out)
    acc = evaluate_accuracy(model, corpus.test) if corpus.test else float("nan")
    print(f"wrote {args.out}")
    print(f"final training loss: {curve[-1]:.6f}  test accuracy: {acc:.3f}")
    return 0


def cmd_classify(args) -> int:
    model, vocab = load_model(args.model)
    for surface in split_phrases(normalize(args.text)):
        result = classify(tokenize(surface, vocab), model)
        probs = " ".join(f"{lab}={p:.3f}" for lab, p in zip(("goal", "constraint", "uninformative"), result.probs))
        print(f"{surface!r}: {result.label}  [{probs}]")
        if result.attention is not None:
            pairs = " ".join(f"{w}:{a:.2f}" for w, a in zip(surface.split(), result.attention))
            print(f"  attention: {pairs}")
    return 0


def cmd_ground(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    smap = load_map(args.map)
    model, vocab = load_model(args.model) if args.model else (None, None)
    for surface in split_phrases(normalize(args.text)):
        if model is not None:
            label = classify(tokenize(surface, vocab), model).label
        else:
            label = "goal" if args.as_goal else "constraint"
        try:
            nouns = extract_nouns(tokenize(surface, lexiconless_vocab(surface)), lexicon)
        except LangNavError as e:
            print(f"{surface!r}: {label}  ({e})")
            continue
        line = f"{surface!r}: {label}  nouns={nouns}"
        if label == "goal" and nouns:
            try:
                g = ground_goal(nouns[0], smap, lexicon)
                line += f"  -> {g.location} at {g.position} (score {g.score:.3f})"
            except LangNavError as e:
                line += f"  -> {e}"
        print(line)
    return 0


def lexiconless_vocab(surface: str):
    from .text import Vocabulary

    return Vocabulary.from_surfaces([surface])


def cmd_simulate(args) -> int:
    model, vocab = load_model(args.model)
    lexicon = load_lexicon(args.lexicon)
    smap = load_map(args.map)
    nav = Navigator(smap, model, vocab, lexicon, seed=args.seed)
    parse = nav.submit(args.instruction)
    if parse.error and not parse.applied:
        print(f"instruction rejected: {parse.error}", file=sys.stderr)
        return 1
    for phrase in parse.phrases:
        print(f"phrase {phrase.surface!r}: {phrase.label} nouns={phrase.nouns}")
    if parse.goal:
        print(f"goal: {parse.goal.location} at {parse.goal.position}")
    status = nav.run(max_ticks=args.max_ticks)
    metrics = nav.metrics()
    print(f"status: {status} after {nav.tick} ticks ({nav.t:.1f} s sim time)")
    print(f"path length: {metrics.length:.2f} m, duration {metrics.duration:.1f} s")
    for label, dist in sorted(metrics.min_clearance.items()):
        print(f"min distance to {label}: {dist:.2f} m")
    if args.record:
        save_trace(nav.trajectory, args.record)
        print(f"trace written to {args.record}")
    return 0 if status == "arrived" else 2


def cmd_metrics(args) -> int:
    trajectory = load_trace(args.trace)
    m = path_metrics(trajectory)
    print(f"ticks: {len(trajectory) - 1}")
    print(f"path length: {m.length:.3f} m")
    print(f"duration: {m.duration:.3f} s")
    for label, dist in sorted(m.min_clearance.items()):
        print(f"min distance to {label}: {dist:.3f} m")
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(args.assets, host=args.host, port=args.port, ui_dir=args.ui)
    return 0


def cmd_assets(args) -> int:
    """Build a ready-to-serve assets directory (corpus, model, maps, lexicon)."""
    out = Path(args.out)
    (out / "maps").mkdir(parents=True, exist_ok=True)
    if args.quick:
        n, epochs, hidden, emb = 80, 25, 24, 16
    else:
        n, epochs, hidden, emb = 500, 25, 64, 32
    corpus = generate_corpus(seed=args.seed, n_instructions=n)
    save_corpus(corpus, out / "corpus.jsonl")
    config = TrainConfig(epochs=epochs, batch_size=16 if args.quick else 64, seed=args.seed,
                         hidden_size=hidden, embedding_dim=emb)
    model, _ = train(corpus, config, "attbilstm")
    save_model(model, corpus.vocab, out / "model.json")
    acc = evaluate_accuracy(model, corpus.test)
    for name in ("scene1", "sim_scene"):
        shutil.copy(map_path(name), out / "maps" / f"{name}.json")
    from importlib import resources

    (out / "lexicon.txt").write_text(
        resources.files("langnav.data").joinpath("lexicon.txt").read_text()
    )
    print(f"assets ready in {out} (classifier test accuracy {acc:.3f})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="langnav", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corpus", help="generate a synthetic labeled-phrase corpus")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("train", help="train a phrase classifier")
    p.add_argument("--arch", choices=ARCHITECTURES, default="attbilstm")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--embedding-dim", type=int, default=32)
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify each phrase of an instruction")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ground", help="parse and ground an instruction against a map")
    p.add_argument("--lexicon", default=None)
    p.add_argument("--map", required=True)
    p.add_argument("--model", default=None, help="classifier checkpoint; omit to label via --as-goal")
    p.add_argument("--as-goal", action="store_true")
    p.add_argument("--text", required=True)
    p.set_defaults(func=cmd_ground)

    p = sub.add_parser("simulate", help="run a full navigation session headlessly")
    p.add_argument("--map", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--instruction", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-ticks", type=int, default=3000)
    p.add_argument("--record", default=None, help="write a JSONL tick trace")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("metrics", help="summarize a recorded trace")
    p.add_argument("--trace", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--assets", default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--ui", default=None, help="static directory to serve at /")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("assets", help="generate a ready-to-serve assets directory")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--quick", action="store_true", help="small corpus and model; fast")
    p.set_defaults(func=cmd_assets)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LangNavError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
