"""langnav: language-driven robot navigation in a desk-scale 2D simulator."""

from .corpus import Corpus, generate_corpus, load_corpus, save_corpus
from .costmap import ConstraintDisk, ConstraintStore, Costmap, PlannerConfig, build_costmap
from .estimator import PhraseClassifier
from .grounding import cosine_similarity, extract_nouns, ground_constraints, ground_goal
from .lexicon import Lexicon, load_lexicon
from .model import ClassifierModel, init_model, load_model, save_model
from .navigation import Navigator, path_metrics
from .text import LABELS, Instruction, Phrase, Vocabulary, normalize, split_phrases, tokenize
from .training import TrainConfig, evaluate_accuracy, train
from .world import RobotState, SemanticMap, load_map

__version__ = "0.1.0"

__all__ = [
    "Corpus", "generate_corpus", "load_corpus", "save_corpus",
    "ConstraintDisk", "ConstraintStore", "Costmap", "PlannerConfig", "build_costmap",
    "PhraseClassifier",
    "cosine_similarity", "extract_nouns", "ground_constraints", "ground_goal",
    "Lexicon", "load_lexicon",
    "ClassifierModel", "init_model", "load_model", "save_model",
    "Navigator", "path_metrics",
    "LABELS", "Instruction", "Phrase", "Vocabulary", "normalize", "split_phrases", "tokenize",
    "TrainConfig", "evaluate_accuracy", "train",
    "RobotState", "SemanticMap", "load_map",
    "__version__",
]
