"""
Symmetric k-fold vector bundles, their diagonals and the round trip to Lin.
"""
from src.symmetric.diagonal import (Diagonalisation, MorphismSymmetry, RoundTrip,
                                    Symmetrisation, check_morphism_symmetry, diagonalise,
                                    factorial_rescaling, roundtrip_iso, symmetrise)
from src.symmetric.structure import (SymmetricKFoldVB, dvb_blocks, sigma_coefficients,
                                     validate_symmetric)
