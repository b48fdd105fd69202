import json
import sys
import os

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from treefo import Dfta, build_syntactic

import genutil


@pytest.fixture(scope="session")
def automata():
    return {
        name: Dfta.load(genutil.fixture_path(name + ".json"))
        for name in genutil.FIXTURE_NAMES
    }


@pytest.fixture(scope="session")
def clones(automata):
    return {name: build_syntactic(d) for name, d in automata.items()}


@pytest.fixture(scope="session")
def even_depth(clones):
    """The worked-example algebra with its published element names."""
    with open(genutil.fixture_path("even_depth_names.json")) as fh:
        names = json.load(fh)
    C = build_syntactic(Dfta.load(genutil.fixture_path("even_depth.json")))
    return C.rename(names)
