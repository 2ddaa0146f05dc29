"""
Graded bundle presentations, their validation, weight surgery and numeric instances.
"""
from src.bundles.numeric import (NumericInstance, check_cocycle, numeric_differences,
                                 numeric_instantiate)
from src.bundles.presentation import (FunctionFamily, GradedBundlePresentation,
                                      TransitionMap, compose_maps, identity_map,
                                      invert_transition, presentation_differences,
                                      rename_coordinates)
from src.bundles.surgery import (core, fixed_locus, inclusion_map, projection_map, side,
                                 truncate, truncate_map, zero_negative, zero_negative_map)
from src.bundles.validation import (Check, ValidationReport, intertwining_differences,
                                    validate, validate_morphism)
