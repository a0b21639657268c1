import copy
import json
import os

import pytest

from models.problem import ProblemConfig

ROOT = os.path.dirname(os.path.abspath(__file__))
PROBLEMS_DIR = os.path.join(ROOT, "problems")


def problem_path(name):
    return os.path.join(PROBLEMS_DIR, f"{name}.json")


# Built-in problem document with nested keys overridden, e.g. {"operator": {"p": 3}}
def problem_document(name, overrides=None):
    with open(problem_path(name), encoding="utf-8") as f:
        document = json.load(f)
    return _merge(document, overrides or {})


def _merge(base, overrides):
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


@pytest.fixture
def make_config():
    def factory(name="heat", **overrides):
        return ProblemConfig.model_validate(problem_document(name, overrides))

    return factory


@pytest.fixture
def write_problem(tmp_path):
    def factory(name="heat", document=None, **overrides):
        document = problem_document(name, overrides) if document is None else document
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return factory
