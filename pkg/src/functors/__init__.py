"""
Tangent lifts, linearisation functors and weight flips.
"""
from src.functors.flips import (all_permutations, canonical_sigma, compose_permutations,
                                flip, inverse_permutation, parse_permutation,
                                transposition)
from src.functors.lift import (higher_tangent, higher_tangent_renaming, iterated_tangent,
                               lift_map, tangent_lift)
from src.functors.linearisation import (direct_renaming, full_lin, full_lin_direct,
                                        full_lin_morphism, iota, lin_direct_chart, plin,
                                        plin_morphism, vertical)
