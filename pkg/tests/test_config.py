"""
Tests for reading the sampling configuration from the environment.
"""
import os

import pytest

from src.cli.config import SamplingConfig


@pytest.fixture(autouse=True)
def no_dotenv(mocker):
  return mocker.patch("src.cli.config.load_dotenv")


def test_defaults(mocker, no_dotenv):
  mocker.patch.dict(os.environ, {}, clear=True)
  config = SamplingConfig()
  no_dotenv.assert_called_once()
  assert config.to_dict() == {"seed": 0, "samples": 20, "degree_cap": 2,
                              "coefficient_bound": 7}


def test_environment_values(mocker):
  mocker.patch.dict(os.environ, {"POLARISE_SEED": "11", "POLARISE_SAMPLES": "5",
                                 "POLARISE_DEGREE_CAP": "0",
                                 "POLARISE_COEFFICIENT_BOUND": "3"}, clear=True)
  config = SamplingConfig()
  assert (config.seed, config.samples, config.degree_cap, config.coefficient_bound) == \
    (11, 5, 0, 3)


def test_arguments_override_environment(mocker):
  mocker.patch.dict(os.environ, {"POLARISE_SEED": "11"}, clear=True)
  assert SamplingConfig(seed=4).seed == 4


@pytest.mark.parametrize("name, value", [
  ("POLARISE_SEED", "abc"),
  ("POLARISE_SAMPLES", "0"),
  ("POLARISE_DEGREE_CAP", "-1"),
  ("POLARISE_COEFFICIENT_BOUND", "1.5"),
])
def test_invalid_values(mocker, name, value):
  mocker.patch.dict(os.environ, {name: value}, clear=True)
  with pytest.raises(ValueError) as e:
    SamplingConfig()
  assert name in str(e.value)


def test_invalid_arguments(mocker):
  mocker.patch.dict(os.environ, {}, clear=True)
  with pytest.raises(ValueError):
    SamplingConfig(samples=0)
