import numpy as np
import pytest

import paradigm_io


def _load(name):
    return paradigm_io.load(name)


@pytest.fixture(scope="session")
def english():
    return _load("english_weak_verb")


@pytest.fixture(scope="session")
def german_present():
    return _load("german_present")


@pytest.fixture(scope="session")
def german_full():
    return _load("german_full")


@pytest.fixture(scope="session")
def latin():
    return _load("latin_adjectives")


@pytest.fixture(scope="session")
def russian():
    return _load("russian_class1")


@pytest.fixture(scope="session")
def nuer():
    return _load("nuer_classes")


@pytest.fixture(scope="session")
def plurals():
    return _load("german_plurals")


@pytest.fixture(scope="session")
def spanish():
    return _load("spanish_verbs")


@pytest.fixture(scope="session")
def deponent():
    return _load("latin_deponent")


def row_for(c, label):
    """Competition row of the cell with this space-joined label"""
    return c.entries[[cell.label for cell in c.row_labels].index(label)]


def column_of(b, morpheme):
    return np.asarray(b.column(morpheme))
