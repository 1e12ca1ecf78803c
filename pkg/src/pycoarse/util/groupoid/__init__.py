from .main import (GroupoidKernel, HaagerupCertificate,
                   alpha_star, beta_star, default_arrows, safe_bases, check_groupoid_pd, check_groupoid_nt,
                   arrow_profile, haagerup_certificate, unit_deviation_table, descend_to_group)

__all__ = ["GroupoidKernel","HaagerupCertificate",
           "alpha_star","beta_star","default_arrows","safe_bases","check_groupoid_pd","check_groupoid_nt",
           "arrow_profile","haagerup_certificate","unit_deviation_table","descend_to_group"]
