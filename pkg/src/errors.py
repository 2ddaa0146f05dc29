"""
Exceptions raised by the polarisation engine.
"""
from typing import Optional


class PresentationError(ValueError):
  """Structural problem in a bundle presentation."""

  def __init__(self, message: str, location: Optional[str] = None):
    self.location = location
    if location:
      message = f"{location}: {message}"
    super().__init__(message)


class MissingAssignmentError(PresentationError):
  """A substitution did not cover a coordinate it was required to cover."""


class SurgeryError(PresentationError):
  """Truncation or zero-negative surgery hit an inconsistent law."""


class FunctorError(PresentationError):
  """A functorial construction failed to intertwine transition laws."""


class SymmetryError(PresentationError):
  """A symmetric k-fold vector bundle condition does not hold."""


class PairingError(ValueError):
  """Covectors and points do not sit over matching foot-points."""


class SuperisationError(ValueError):
  """The sign rule does not hold, so the laws cannot be re-read."""


class DslError(ValueError):
  """Syntax or semantic error in a bundle spec file."""

  def __init__(self, message: str, line: int, column: int):
    self.line = line
    self.column = column
    super().__init__(f"line {line}, column {column}: {message}")
