import pytest

from absakit.fixtures import load_fixture


@pytest.fixture(scope="session")
def restaurant_train():
    return load_fixture("restaurant", "train")


@pytest.fixture(scope="session")
def restaurant_test():
    return load_fixture("restaurant", "test")


@pytest.fixture(scope="session")
def laptop_train():
    return load_fixture("laptop", "train")


@pytest.fixture(scope="session")
def all_fixture_manifests():
    return [
        load_fixture(ds, split)
        for ds in ("restaurant", "laptop")
        for split in ("train", "dev", "test")
    ]
