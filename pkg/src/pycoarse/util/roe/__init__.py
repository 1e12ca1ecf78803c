from .main import (BandOperator, Functional, IdentityMap, SchurMultiplier, FiniteRankMap, CPMapSpec,
                   InducedKernel, ConvergenceTable,
                   left_regular, band_compose, band_adjoint, apply_cp_map, induced_kernel,
                   approximate_unit_from_schedule, block_matrix,
                   verify_property_i, verify_property_ii, verify_property_iii)

__all__ = ["BandOperator","Functional","IdentityMap","SchurMultiplier","FiniteRankMap","CPMapSpec",
           "InducedKernel","ConvergenceTable",
           "left_regular","band_compose","band_adjoint","apply_cp_map","induced_kernel",
           "approximate_unit_from_schedule","block_matrix",
           "verify_property_i","verify_property_ii","verify_property_iii"]
