import pytest

from absakit.core import (
    IMPLICIT,
    Polarity,
    TASKS,
    Taxonomy,
    UnknownCategory,
    UnknownLabelWord,
    category_surface,
    get_task,
    polarity_to_word,
    project,
    word_to_polarity,
)
from absakit.core import AcosQuad
from absakit.fixtures import LAPTOP_TAXONOMY, RESTAURANT_TAXONOMY


def test_polarity_word_pairs():
    assert polarity_to_word(Polarity.POSITIVE) == "good"
    assert polarity_to_word(Polarity.NEUTRAL) == "ok"
    assert polarity_to_word(Polarity.NEGATIVE) == "bad"


def test_word_to_polarity_normalizes():
    assert word_to_polarity("ok") == Polarity.NEUTRAL
    assert word_to_polarity("GOOD ") == Polarity.POSITIVE


def test_word_to_polarity_closed_vocabulary():
    with pytest.raises(UnknownLabelWord):
        word_to_polarity("great")


@pytest.mark.parametrize("polarity", Polarity.ALL)
def test_polarity_round_trip(polarity):
    assert word_to_polarity(polarity_to_word(polarity)) == polarity


def test_category_surface():
    assert category_surface("FOOD#QUALITY") == "food quality"
    assert category_surface("LAPTOP#OPERATION_PERFORMANCE") == "laptop operation performance"


@pytest.mark.parametrize("categories", [RESTAURANT_TAXONOMY, LAPTOP_TAXONOMY])
def test_taxonomy_surface_bijective(categories):
    tax = Taxonomy(categories)
    for c in categories:
        assert tax.surface_to_canonical(category_surface(c)) == c


def test_taxonomy_inverse_unknown():
    tax = Taxonomy(RESTAURANT_TAXONOMY)
    assert tax.surface_to_canonical("food quality") == "FOOD#QUALITY"
    with pytest.raises(UnknownCategory):
        tax.surface_to_canonical("fud quality")


def test_registry_has_eleven_tasks():
    assert len(TASKS) == 11


EXPECTED_SIGNATURES = {
    "ATE": ("A", None),
    "ACD": ("C", None),
    "ABSC": ("S", "A"),
    "COSC": ("S", "C"),
    "AOOE": ("O", "A"),
    "ASPE": ("AS", None),
    "AOPE": ("AO", None),
    "CSPE": ("CS", None),
    "AOSTE": ("AOS", None),
    "ACSTE": ("ACS", None),
    "ACOSQE": ("ACOS", None),
}


@pytest.mark.parametrize("name", list(EXPECTED_SIGNATURES))
def test_registry_signatures_and_flags(name):
    task = TASKS[name]
    signature, given = EXPECTED_SIGNATURES[name]
    assert task.signature == signature
    assert task.given == given
    # Option flags track signature membership.
    assert task.uses_sentiment_options == ("S" in signature)
    assert task.uses_category_options == ("C" in signature)


def test_get_task_case_insensitive():
    assert get_task("aope").name == "AOPE"


def test_implicit_is_singleton():
    import pickle

    assert pickle.loads(pickle.dumps(IMPLICIT)) is IMPLICIT


def test_project_orders_slots():
    quad = AcosQuad("sushi", "FOOD#QUALITY", "delicious", Polarity.POSITIVE)
    assert project(quad, "AO") == ("sushi", "delicious")
    assert project(quad, "ACOS") == ("sushi", "FOOD#QUALITY", "delicious", "POSITIVE")
