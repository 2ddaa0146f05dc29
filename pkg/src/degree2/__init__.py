"""
Degree-2 structures: duals and their pairing, the induced skew form, the Lie
algebroid and the linear Poisson tensor.
"""
from src.degree2.algebroid import AlgebroidStructure, algebroid, algebroid_from_poisson
from src.degree2.duality import (Covector, DualDVBPresentation, SkewForm, check_pairing,
                                 dual_dvb, graph_isotropy, pairing, pairing_invariance,
                                 skew_form)
from src.degree2.poisson import PoissonTensor, poisson, transport_poisson, validate_poisson
