import pytest

from absa_adapter.model import init_tiny_model


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("tiny-model")
    init_tiny_model(out, seed=0)
    return str(out)
