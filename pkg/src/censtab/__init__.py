"""Central stability homology for modules over stability categories.

Exact computations with consistent sequences of representations of
stability groupoids (symmetric groups, wreath products): central
stability complexes and their homology, presentation and degree
detectors, group homology of kernel towers and the associated spectral
sequences.
"""
__version__ = "0.1.0"

from .groupoid import FiniteAbelianGroup, GroupElement, Groupoid
from .ucat import SemisimplicialSet, StabilityCategory, UMorphism
from .module import (ConsistentSequence, ModuleError, Presentation, dsum, free_module, free_cover,
                     nat_ker_coker, present, shift, tensor, truncate, validate, zero_module)
from .homology import (DegreeReport, central_stability_check, central_stability_degree, cs_complex,
                       cs_homology, cs_homology_table, generation_degree, h3_check, h4_check,
                       kan_colim_check, poly_vanishing_check, polynomial_degree, vanishing_bound)
from .seshom import (StabilitySES, group_homology, kernel_homology_generation, kernel_homology_module,
                     make_degenerate_ses, make_wreath_ses, reexpress_range, ses_double_complex,
                     ses_page_comparison, stabilization_range_check)

__all__ = [name for name in dir() if not name.startswith("_")]
