"""Classify outer automorphisms of free groups by their action on the free
splitting complex."""

import json

from ._core import FreesplitError, REPORT_SCHEMA, fixture_names, rank2_classify, show_fixture
from . import _core

__all__ = [
    "FreesplitError",
    "REPORT_SCHEMA",
    "classify",
    "fills",
    "fixture_names",
    "rank2_classify",
    "show_fixture",
    "w",
]


def _settings(settings):
    return {str(k): str(v) for k, v in (settings or {}).items()}


def classify(fixture=None, document=None, settings=None):
    """Classification report as a dict; settings use the config file keys."""
    return json.loads(_core.classify_json(fixture, document, _settings(settings)))


def fills(classes, names=("x", "y")):
    """Filling verdict for conjugacy classes written in the basis letters."""
    return json.loads(_core.fills_json(list(classes), list(names)))


def w(fixture, classes=(), range=4, settings=None):
    """w of each class and the displacement table of the fixture's splitting."""
    return json.loads(_core.w_json(fixture, list(classes), range, _settings(settings)))
