"""
Tests for duals, the pairing, the skew form, the algebroid and the Poisson tensor.
"""
import pytest
import sympy as sp

from src.algebra import MultiWeight
from src.bundles import numeric_instantiate, validate
from src.degree2 import (AlgebroidStructure, Covector, PoissonTensor, algebroid,
                         algebroid_from_poisson, check_pairing, dual_dvb, graph_isotropy,
                         pairing, pairing_invariance, poisson, skew_form, transport_poisson,
                         validate_poisson)
from src.errors import PairingError, PresentationError
from src.symmetric import SymmetricKFoldVB

p = sp.Symbol


@pytest.fixture
def skew(document):
  doc = document("skew.spec")
  return SymmetricKFoldVB(doc.bundle(), doc.sigmas["S2"])


@pytest.fixture
def dvb(document):
  return document("dvb.spec").bundle()


def test_leg_a_dual_weights(skew):
  dual = dual_dvb(skew.D, "A")
  weights = dual.presentation.weights
  assert weights["py1_10"].components == (1, 1)
  assert weights["pz1_11"].components == (1, 0)
  assert [c.name for c in dual.base] == ["x1", "y1_01", "y2_01"]
  assert dual.presentation.name == "S2*A"


def test_leg_b_dual_weights(skew):
  dual = dual_dvb(skew.D, "B")
  assert dual.presentation.weights["py1_01"].components == (1, 1)
  assert dual.presentation.weights["pz1_11"].components == (0, 1)


def test_dual_needs_double_vector_bundle(f3, skew):
  with pytest.raises(PresentationError):
    dual_dvb(f3, "A")
  with pytest.raises(ValueError):
    dual_dvb(skew.D, "C")


@pytest.mark.parametrize("leg", ["A", "B"])
def test_dual_transition_preserves_pairing(dvb, leg):
  """Momenta move by the inverse fibre matrix, so the evaluation pairing is invariant."""
  dual = dual_dvb(dvb, leg)
  assert validate(dual.presentation).passed
  instance = numeric_instantiate(dvb, seed=4)
  report = pairing_invariance(dual, instance, samples=5)
  assert report.passed, report.failures()


def test_pairing_ignores_core_shifts(dvb):
  instance = numeric_instantiate(dvb, seed=6)
  assert check_pairing(dvb, instance, samples=5).passed


def test_pairing_rejects_mismatched_covectors():
  phi = Covector("A", {"x1": 1, "y1_01": 2}, {"y1_10": 3, "z1_11": 1})
  psi = Covector("B", {"x1": 1, "y1_10": 5}, {"y1_01": 7, "z1_11": 1})
  d = {"x1": 1, "y1_10": 5, "y1_01": 2, "z1_11": 4}
  assert pairing(phi, psi, d) == 3 * 5 + 4 - (7 * 2 + 4)
  with pytest.raises(PairingError):
    pairing(psi, phi, d)
  with pytest.raises(PairingError):
    pairing(phi, Covector("B", {"x1": 1, "y1_10": 5}, {"y1_01": 7, "z1_11": 2}), d)
  with pytest.raises(PairingError):
    phi({"x1": 2, "y1_10": 1, "z1_11": 0})
  with pytest.raises(PairingError):
    phi({"x1": 1})


def test_skew_form_of_skew_structure(skew):
  form = skew_form(skew, seed=1, samples=3)
  assert form.report.passed, form.report.failures()
  assert form.matrix[0, 1] == -3 * p("pz1_11")
  assert form.matrix[1, 0] == 3 * p("pz1_11")
  assert form.matrix[2, 0] == 1


def test_skew_form_evaluation(skew):
  form = skew_form(skew, samples=1)
  instance = numeric_instantiate(skew.D, 0)
  psi1 = Covector("B", {"x1": 1, "y1_10": 1, "y2_10": 0}, {"y1_01": 0, "y2_01": 0, "z1_11": 1})
  psi2 = Covector("B", {"x1": 1, "y1_10": 0, "y2_10": 1}, {"y1_01": 0, "y2_01": 0, "z1_11": 1})
  assert form.evaluate(instance, psi1, psi2) == -3
  assert form.evaluate(instance, psi2, psi1) == 3
  with pytest.raises(PairingError):
    form.evaluate(instance, psi1, Covector("B", {"x1": 1}, {"z1_11": 2}))


def test_scaling_morphism_graph_is_isotropic(document):
  doc = document("morphism.spec")
  S, S_prime = (SymmetricKFoldVB.canonical(doc.bundle(name)) for name in ("D", "E"))
  report = graph_isotropy(doc.maps["phi"], S, S_prime, samples=3)
  assert report.passed, report.failures()


def test_algebroid_of_skew_structure(skew):
  structure = algebroid(skew)
  assert structure.bracket("py1_10", "py2_10") == {"pz1_11": -3}
  assert structure.bracket("py2_10", "py1_10") == {"pz1_11": 3}
  assert structure.rho("py1_10", p("y1_01") ** 2) == 2 * p("y1_01")
  assert structure.validate().passed


def test_algebroid_agrees_with_poisson(skew):
  tensor = poisson(skew)
  structure = algebroid(skew)
  read_back = algebroid_from_poisson(tensor, structure.sections, structure.base)
  assert structure.differences(read_back) == []


def test_poisson_of_skew_structure(skew):
  tensor = poisson(skew)
  assert tensor.entry("py1_10", "py2_10") == -3 * p("pz1_11")
  assert tensor.entry("py1_10", "y1_01") == 1
  assert tensor.entry("y1_01", "py1_10") == -1
  assert tensor.report.passed, tensor.report.failures()


def test_transported_poisson_agrees(skew):
  assert transport_poisson(skew).differences(poisson(skew)) == []


def test_jacobi_failure_is_reported():
  """{a,b} = c and {c,d} = a fail Jacobi at (a, b, d)."""
  tensor = PoissonTensor.from_brackets(
    "N", ["a", "b", "c", "d"], {("a", "b"): p("c"), ("c", "d"): p("a")})
  assert ("a", "b", "d") in tensor.schouten()
  weights = {name: MultiWeight((0, 0)) for name in tensor.coordinates}
  report = validate_poisson(tensor, weights)
  assert not report.check("jacobi").passed
  assert "(a, b, d)" in report.check("jacobi").detail


def test_nonlinear_bracket_is_not_an_algebroid():
  tensor = PoissonTensor.from_brackets("N", ["s", "t"], {("s", "t"): p("s") * p("t")})
  with pytest.raises(PresentationError):
    algebroid_from_poisson(tensor, ["s", "t"], [])


def test_algebroid_jacobi_failure():
  structure = AlgebroidStructure(
    "bad", [], ["a", "b", "c", "d"],
    {("a", "b"): {"c": sp.Integer(1)}, ("c", "d"): {"a": sp.Integer(1)}})
  report = structure.validate()
  assert not report.check("jacobi").passed
  assert report.check("anchor homomorphism").passed
