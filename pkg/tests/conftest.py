import pytest

from langnav.corpus import generate_corpus
from langnav.lexicon import load_lexicon
from langnav.scenarios import load_demo_map
from langnav.training import TrainConfig, train


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def quick_corpus():
    return generate_corpus(seed=3, n_instructions=80)


@pytest.fixture(scope="session")
def quick_model(quick_corpus):
    """Small attention model for pipeline tests; trains in a couple seconds."""
    config = TrainConfig(epochs=25, batch_size=16, seed=5, hidden_size=24, embedding_dim=16)
    model, _ = train(quick_corpus, config, "attbilstm")
    return model


@pytest.fixture(scope="session")
def scene1():
    return load_demo_map("scene1")


@pytest.fixture(scope="session")
def sim_scene():
    return load_demo_map("sim_scene")
