"""
Sampling parameters for the numeric checks, read from the environment.
"""
import os
from typing import Dict, Optional

from dotenv import load_dotenv

DEFAULTS = {
  "POLARISE_SEED": 0,
  "POLARISE_SAMPLES": 20,
  "POLARISE_DEGREE_CAP": 2,
  "POLARISE_COEFFICIENT_BOUND": 7,
}


def _integer(name: str, minimum: int) -> int:
  raw = os.getenv(name)
  if raw is None or raw.strip() == "":
    return DEFAULTS[name]
  try:
    value = int(raw)
  except ValueError:
    raise ValueError(f"{name} must be an integer, got '{raw}'")
  if value < minimum:
    raise ValueError(f"{name} must be at least {minimum}, got {value}")
  return value


class SamplingConfig:
  """Seed and sizes used whenever symbols are instantiated by random polynomials."""

  def __init__(self, seed: Optional[int] = None, samples: Optional[int] = None,
               degree_cap: Optional[int] = None):
    """
    Load defaults from ``.env`` and the environment; explicit arguments win.

    Args:
        seed (int, optional): Overrides POLARISE_SEED
        samples (int, optional): Overrides POLARISE_SAMPLES
        degree_cap (int, optional): Overrides POLARISE_DEGREE_CAP

    Raises:
        ValueError: If a variable is not an integer or is out of range
    """
    load_dotenv()

    self.seed = _integer("POLARISE_SEED", 0) if seed is None else seed
    self.samples = _integer("POLARISE_SAMPLES", 1) if samples is None else samples
    self.degree_cap = (_integer("POLARISE_DEGREE_CAP", 0) if degree_cap is None
                       else degree_cap)
    self.coefficient_bound = _integer("POLARISE_COEFFICIENT_BOUND", 1)

    if self.samples < 1:
      raise ValueError(f"samples must be at least 1, got {self.samples}")
    if self.degree_cap < 0:
      raise ValueError(f"degree cap must be non-negative, got {self.degree_cap}")

  def to_dict(self) -> Dict[str, int]:
    return {
      "seed": self.seed,
      "samples": self.samples,
      "degree_cap": self.degree_cap,
      "coefficient_bound": self.coefficient_bound,
    }
