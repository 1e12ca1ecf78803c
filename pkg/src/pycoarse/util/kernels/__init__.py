from .main import (Kernel, ClassificationReport, PropernessProfile, ApproximateUnit,
                   DEFAULT_TOL, DEFAULT_EPS_GRID,
                   pd_matrix_report, nt_matrix_report, envelope_profile,
                   check_positive_definite, check_negative_type, schoenberg_transform,
                   unit_normalize, distance_kernel, properness_profile,
                   approximate_unit_from_proper, akemann_walter_synthesize)

__all__ = ["Kernel","ClassificationReport","PropernessProfile","ApproximateUnit",
           "DEFAULT_TOL","DEFAULT_EPS_GRID",
           "pd_matrix_report","nt_matrix_report","envelope_profile",
           "check_positive_definite","check_negative_type","schoenberg_transform",
           "unit_normalize","distance_kernel","properness_profile",
           "approximate_unit_from_proper","akemann_walter_synthesize"]
