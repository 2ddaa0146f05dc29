"""
Shared fixtures: spec files from tests/fixtures and a law parser for expected values.
"""
import os
from collections import OrderedDict

import pytest
from hypothesis import settings

from src.dsl import parse_document
from src.dsl.parser import Statement, expression

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

settings.register_profile("polarise", deadline=None, max_examples=40)
settings.load_profile("polarise")


def read_fixture(name: str) -> str:
  with open(os.path.join(FIXTURES, name), 'r', encoding='utf-8') as f:
    return f.read()


def load_document(name: str):
  return parse_document(read_fixture(name))


@pytest.fixture
def fixture_text():
  return read_fixture


@pytest.fixture
def document():
  return load_document


@pytest.fixture
def f2():
  return load_document("f2.spec").bundle()


@pytest.fixture
def f3():
  return load_document("f3.spec").bundle()


@pytest.fixture
def e1():
  return load_document("e1.spec").bundle()


@pytest.fixture
def m2():
  return load_document("m2.spec").bundle()


@pytest.fixture
def law():
  """Parse a polynomial in the coordinates and functions of a presentation."""

  def parse_law(P, text):
    symbols = OrderedDict((c.name, c.symbol) for c in P.coordinates)
    return expression(text, Statement(text, 1, 1), symbols, P.functions,
                      P.base_symbols(), [])

  return parse_law


@pytest.fixture
def g3():
  return load_document("g3.spec").bundle()


@pytest.fixture
def f4():
  return load_document("f4.spec").bundle()


@pytest.fixture
def manifold():
  return load_document("manifold.spec").bundle()
