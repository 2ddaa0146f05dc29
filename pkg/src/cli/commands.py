"""
Command dispatcher: runs one pipeline on a spec file and collects a report.
"""
import hashlib
import json
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from src.bundles.numeric import numeric_differences, numeric_instantiate
from src.bundles.presentation import presentation_differences
from src.bundles.validation import Check, ValidationReport, validate
from src.cli.config import SamplingConfig
from src.degree2 import (algebroid, algebroid_from_poisson, check_pairing, dual_dvb,
                         graph_isotropy, pairing_invariance, poisson, skew_form,
                         transport_poisson)
from src.dsl import parse_document, print_map, print_presentation
from src.dsl.parser import DslDocument
from src.errors import DslError
from src.functors import (full_lin, full_lin_direct, lin_direct_chart, parse_permutation,
                          plin, tangent_lift, vertical)
from src.functors.flips import format_permutation
from src.superise import superise, z2k_sign_check
from src.symmetric import (SymmetricKFoldVB, check_morphism_symmetry, diagonalise,
                           roundtrip_iso, symmetrise, validate_symmetric)

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

BANNER = "=" * 50


@dataclass
class Report:
  """Outcome of one command: checks, diagnostics and the emitted text."""

  command: str
  digest: str
  checks: List[Check] = field(default_factory=list)
  diagnostics: List[str] = field(default_factory=list)
  emitted: Optional[str] = None

  @property
  def passed(self) -> bool:
    return all(check.passed for check in self.checks)

  def extend(self, report: ValidationReport, prefix: str = "") -> None:
    for check in report.checks:
      self.checks.append(Check(prefix + check.name, check.passed, check.detail))
    self.diagnostics.extend(report.diagnostics)

  def to_dict(self) -> Dict[str, object]:
    data = OrderedDict()
    data["command"] = self.command
    data["digest"] = self.digest
    data["passed"] = self.passed
    data["checks"] = [check.to_dict() for check in self.checks]
    data["diagnostics"] = list(self.diagnostics)
    if self.emitted is not None:
      data["emitted"] = self.emitted
    return data

  def to_machine(self) -> str:
    return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

  def to_text(self) -> str:
    lines = [BANNER, f"{self.command}: {'PASS' if self.passed else 'FAIL'}",
             f"digest: {self.digest}", BANNER]
    for check in self.checks:
      line = f"[{'PASS' if check.passed else 'FAIL'}] {check.name}"
      if check.detail:
        line += f" ({check.detail})"
      lines.append(line)
    if self.diagnostics:
      lines.append("")
      lines.append("Diagnostics:")
      lines.extend(f"- {d}" for d in self.diagnostics)
    if self.emitted is not None:
      lines.append("")
      lines.append(self.emitted.rstrip("\n"))
    return "\n".join(lines) + "\n"

  def render(self, output_format: str) -> str:
    if output_format == "machine":
      return self.to_machine()
    if output_format == "text":
      return self.to_text()
    raise ValueError(f"Unknown format '{output_format}'")


def digest(text: str) -> str:
  return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


class CommandContext:
  """Parsed input plus the options shared by every command."""

  def __init__(self, document: DslDocument, config: SamplingConfig,
               g: Optional[str] = None, leg: str = "A"):
    if not document.bundles:
      raise DslError("No bundle declared", 1, 1)
    self.document = document
    self.config = config
    self.g = g
    self.leg = leg

  @property
  def bundle(self):
    return self.document.bundle()

  def structure(self, name: Optional[str] = None) -> SymmetricKFoldVB:
    """
    The symmetric structure carried by a bundle of the document.

    Declared sigma blocks are used as generators; a graded bundle of one
    weight field stands for the canonical structure of its linearisation, and
    any other bundle is read as a full linearisation in the direct chart.
    """
    D = self.document.bundle(name)
    sigmas = self.document.sigmas.get(D.name)
    if sigmas:
      return SymmetricKFoldVB(D, sigmas)
    if D.n == 1:
      return SymmetricKFoldVB.canonical(full_lin_direct(D))
    return SymmetricKFoldVB.canonical(D)

  def instance(self, D, extra=()):
    return numeric_instantiate(D, self.config.seed, self.config.degree_cap,
                               self.config.coefficient_bound, extra)


def _validate(report: Report, context: CommandContext) -> None:
  D = context.bundle
  report.extend(validate(D))
  if not D.transitions:
    report.checks.append(Check("presentation", True, "single chart, no transitions"))
  if context.document.sigmas.get(D.name):
    report.extend(validate_symmetric(context.structure()), prefix="symmetric ")


def _emit_functor(functor: Callable) -> Callable[[Report, CommandContext], None]:
  def handler(report: Report, context: CommandContext) -> None:
    result = functor(context.bundle)
    report.extend(validate(result), prefix=f"{result.name} ")
    report.emitted = print_presentation(result)
  return handler


def _lin(report: Report, context: CommandContext) -> None:
  F = context.bundle
  result = full_lin(F)
  report.extend(validate(result), prefix=f"{result.name} ")
  report.emitted = print_presentation(result)


def _lin_direct(report: Report, context: CommandContext) -> None:
  F = context.bundle
  direct = full_lin_direct(F)
  report.extend(validate(direct), prefix=f"{direct.name} ")
  iterated, _ = lin_direct_chart(F)
  if F.degree_bounds[0] <= 3:
    differences = presentation_differences(iterated, direct)
    label = "iterated agrees exactly"
  else:
    differences = numeric_differences(iterated, direct, context.instance(F),
                                      context.config.samples)
    label = "iterated agrees numerically"
  report.checks.append(Check(label, not differences, differences[0] if differences else ""))
  report.emitted = print_presentation(direct)


def _sigma(report: Report, context: CommandContext) -> None:
  S = context.structure()
  report.extend(validate_symmetric(S))
  if context.g:
    group = [parse_permutation(context.g)]
    if len(group[0]) != S.k:
      raise ValueError(f"Permutation {context.g} does not act on {S.k} weight fields")
  else:
    group = sorted(S.generators)
  report.emitted = "".join(print_map(f"sigma({format_permutation(g)})", S.sigma(g))
                           for g in group)


def _symmetrise(report: Report, context: CommandContext) -> None:
  S = context.structure()
  report.extend(validate_symmetric(S))
  symmetrisation = symmetrise(S)
  report.checks.append(Check("equivariant coordinates", True))
  report.emitted = print_map(f"z({S.name})", symmetrisation.change)


def _diagonalise(report: Report, context: CommandContext) -> None:
  diagonal = diagonalise(context.structure())
  report.extend(diagonal.report)
  report.diagnostics.extend(f"{old} -> {new}" for old, new in diagonal.identification.items())
  report.emitted = print_presentation(diagonal.presentation)


def _roundtrip(report: Report, context: CommandContext) -> None:
  roundtrip = roundtrip_iso(context.structure())
  report.extend(roundtrip.report)
  report.emitted = print_map("I", roundtrip.iso)


def _morphism_check(report: Report, context: CommandContext) -> None:
  if not context.document.maps:
    raise ValueError("No map declared")
  for name, phi in context.document.maps.items():
    S, S_prime = context.structure(phi.source), context.structure(phi.target)
    outcome = check_morphism_symmetry(phi, S, S_prime)
    report.extend(outcome.report, prefix=f"{name} ")
    if outcome.restriction is not None:
      report.emitted = (report.emitted or "") + print_map(f"diag({name})", outcome.restriction)
    if S.k == 2 and outcome.report.passed:
      report.extend(graph_isotropy(phi, S, S_prime, context.config.seed,
                                   context.config.samples), prefix=f"{name} ")


def _dual(report: Report, context: CommandContext) -> None:
  D = context.bundle
  dual = dual_dvb(D, context.leg)
  instance = context.instance(D)
  report.extend(validate(dual.presentation), prefix=f"{dual.presentation.name} ")
  report.extend(pairing_invariance(dual, instance, context.config.samples))
  report.extend(check_pairing(D, instance, context.config.samples))
  report.emitted = print_presentation(dual.presentation)


def _skew_form(report: Report, context: CommandContext) -> None:
  form = skew_form(context.structure(), context.config.seed, context.config.samples)
  report.extend(form.report)
  report.emitted = f"{form.expression}\n"


def _algebroid(report: Report, context: CommandContext) -> None:
  S = context.structure()
  structure = algebroid(S)
  report.extend(structure.validate())
  from_poisson = algebroid_from_poisson(poisson(S), structure.sections, structure.base)
  differences = structure.differences(from_poisson)
  report.checks.append(Check("agrees with poisson brackets", not differences,
                             differences[0] if differences else ""))
  lines = []
  for (s, t), combination in structure.brackets.items():
    if structure.sections.index(s) < structure.sections.index(t):
      terms = " + ".join(f"({value})*{u}" for u, value in combination.items()) or "0"
      lines.append(f"[{s}, {t}] = {terms}")
  for s, components in structure.anchor.items():
    terms = " + ".join(f"({value})*d/d{c}" for c, value in components.items()) or "0"
    lines.append(f"rho({s}) = {terms}")
  report.emitted = "\n".join(lines) + "\n"


def _poisson(report: Report, context: CommandContext) -> None:
  S = context.structure()
  tensor = poisson(S)
  report.extend(tensor.report)
  transported = transport_poisson(S)
  differences = tensor.differences(transported)
  report.checks.append(Check("transport agrees", not differences,
                             differences[0] if differences else ""))
  lines = [f"{{{i}, {j}}} = {value}" for (i, j), value in tensor.entries.items()
           if tensor.coordinates.index(i) < tensor.coordinates.index(j)]
  report.emitted = "\n".join(lines) + "\n"


def _superise_check(report: Report, context: CommandContext) -> None:
  report.extend(z2k_sign_check(context.bundle))


def _superise(report: Report, context: CommandContext) -> None:
  tagged = superise(context.bundle)
  report.checks.append(Check("sign rule", True))
  report.diagnostics.extend(f"{name}: degree {degree}, parity {degree.parity}"
                            for name, degree in tagged.degrees.items())
  report.emitted = print_presentation(tagged.presentation)


COMMANDS: Dict[str, Callable[[Report, CommandContext], None]] = OrderedDict([
  ("validate", _validate),
  ("lift", _emit_functor(tangent_lift)),
  ("vertical", _emit_functor(vertical)),
  ("plin", _emit_functor(plin)),
  ("lin", _lin),
  ("lin-direct", _lin_direct),
  ("sigma", _sigma),
  ("symmetrise", _symmetrise),
  ("diagonalise", _diagonalise),
  ("roundtrip", _roundtrip),
  ("morphism-check", _morphism_check),
  ("dual", _dual),
  ("skew-form", _skew_form),
  ("algebroid", _algebroid),
  ("poisson", _poisson),
  ("superise-check", _superise_check),
  ("superise", _superise),
])


def run(command: str, text: str, config: Optional[SamplingConfig] = None,
        g: Optional[str] = None, leg: str = "A") -> Tuple[Report, int]:
  """
  Run one command on the text of a spec file.

  Args:
      command (str): One of COMMANDS
      text (str): Spec file contents
      config (SamplingConfig, optional): Sampling parameters; read from the
          environment when omitted
      g (str, optional): Permutation as a 1-based image list, e.g. ``2,1``
      leg (str): Side over which ``dual`` dualises, 'A' or 'B'

  Returns:
      Tuple[Report, int]: The report and the exit code (0 pass, 1 a check
          failed, 2 usage or input error)
  """
  report = Report(command, digest(text))
  if command not in COMMANDS:
    report.checks.append(Check("input", False, f"Unknown command '{command}'"))
    return report, EXIT_USAGE
  try:
    context = CommandContext(parse_document(text), config or SamplingConfig(), g, leg)
  except (DslError, ValueError) as e:
    report.checks.append(Check("input", False, f"Error reading input: {str(e)}"))
    return report, EXIT_USAGE
  report.diagnostics.extend(context.bundle.warnings)

  try:
    COMMANDS[command](report, context)
  except Exception as e:
    report.checks.append(Check(command, False, f"Error running {command}: {str(e)}"))
  return report, EXIT_PASS if report.passed else EXIT_CHECK_FAILED
