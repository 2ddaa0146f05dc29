"""
Z2^k-superisation: sign-rule check and re-tagging of k-fold vector bundles.
"""
from src.superise.signs import (SignViolation, Z2kDegree, Z2kPresentation,
                                naive_superisation_report, sign_violations, superise,
                                z2k_sign_check)
