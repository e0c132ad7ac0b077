"""Bundled miniature ACOS datasets in the public file format.

These stand in for the public Restaurant-ACOS / Laptop-ACOS releases when
those files are not on disk (see :func:`locate_public`).  Counts below are
the fixture ground truth asserted by the statistics checks.
"""

from __future__ import annotations

import os
from pathlib import Path

from ..data_io import DatasetManifest, load_acos_tsv

FIXTURE_DIR = Path(__file__).parent

#: Environment variable pointing at a directory holding the public ACOS
#: release files.
DATA_DIR_ENV = "ABSAKIT_DATA_DIR"

RESTAURANT_TAXONOMY = (
    "AMBIENCE#GENERAL",
    "FOOD#PRICES",
    "FOOD#QUALITY",
    "RESTAURANT#GENERAL",
    "SERVICE#GENERAL",
)

LAPTOP_TAXONOMY = (
    "BATTERY#OPERATION_PERFORMANCE",
    "KEYBOARD#USABILITY",
    "LAPTOP#GENERAL",
    "LAPTOP#OPERATION_PERFORMANCE",
    "LAPTOP#PRICE",
    "SUPPORT#QUALITY",
)

FIXTURE_STATS = {
    "restaurant": {"train": 7, "dev": 2, "test": 3, "quads": 16, "categories": 5},
    "laptop": {"train": 5, "dev": 1, "test": 2, "quads": 10, "categories": 6},
}

# Public release statistics (reviews per split, total quads, categories).
PUBLIC_STATS = {
    "restaurant": {"train": 1531, "dev": 170, "test": 585, "quads": 3658, "categories": 13},
    "laptop": {"train": 2934, "dev": 326, "test": 816, "quads": 5758, "categories": 121},
}

_TAXONOMIES = {"restaurant": RESTAURANT_TAXONOMY, "laptop": LAPTOP_TAXONOMY}

# Candidate filenames used by public ACOS releases, per dataset and split.
_PUBLIC_NAMES = {
    ("restaurant", "train"): ("rest16_quad_train.tsv", "Restaurant-ACOS/rest16_quad_train.tsv"),
    ("restaurant", "dev"): ("rest16_quad_dev.tsv", "Restaurant-ACOS/rest16_quad_dev.tsv"),
    ("restaurant", "test"): ("rest16_quad_test.tsv", "Restaurant-ACOS/rest16_quad_test.tsv"),
    ("laptop", "train"): ("laptop_quad_train.tsv", "Laptop-ACOS/laptop_quad_train.tsv"),
    ("laptop", "dev"): ("laptop_quad_dev.tsv", "Laptop-ACOS/laptop_quad_dev.tsv"),
    ("laptop", "test"): ("laptop_quad_test.tsv", "Laptop-ACOS/laptop_quad_test.tsv"),
}


def locate_public(dataset: str, split: str):
    """Path to the public ACOS file for a dataset/split, or None."""
    root = os.environ.get(DATA_DIR_ENV)
    if not root:
        return None
    for name in _PUBLIC_NAMES[(dataset, split)]:
        candidate = Path(root) / name
        if candidate.exists():
            return candidate
    return None


def fixture_path(dataset: str, split: str) -> Path:
    return FIXTURE_DIR / f"{dataset}_{split}.tsv"


def load_fixture(dataset: str, split: str) -> DatasetManifest:
    """Load the bundled fixture for a dataset/split."""
    return load_acos_tsv(
        fixture_path(dataset, split),
        taxonomy_mode=_TAXONOMIES[dataset],
        name=dataset,
        split=split,
    )


def load_dataset(dataset: str, split: str) -> DatasetManifest:
    """Load the public ACOS file when available, else the bundled fixture."""
    public = locate_public(dataset, split)
    if public is not None:
        return load_acos_tsv(public, taxonomy_mode="infer", name=dataset, split=split)
    return load_fixture(dataset, split)


def using_public_data() -> bool:
    return locate_public("restaurant", "train") is not None
