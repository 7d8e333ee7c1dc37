"""Finite topological theories, T-categories and duality."""

from .cauchy import (AdjointPair, adjoint_pairs_bruteforce, cauchy_completion,
                     is_cauchy_complete, left_adjoint_distributors)
from .duality import (TFrame, eta, frm_conditions, is_frm_hom, main_thm, omega,
                      omega_map, pt)
from .quantale import (Quantale, QuantaleError, check_frm_hypotheses, goedel_chain,
                       lawvere_chain, product, totally_below, two, validate)
from .report import Check, Report, Verdict
from .tcat import (TCategory, TCategoryError, TDistributor, TGraph, enumerate_tcategories,
                   is_tcategory, is_tfunctor)
from .theory import (FiniteUltrafilterTheory, IdentityTheory, Theory, TheoryError,
                     TMatrix, kleisli_compose, make_theory, validate_theory)
from .vcat import VCategory
from .vmat import VMatrix

__version__ = "0.1.0"

__all__ = [
    "AdjointPair", "Check", "FiniteUltrafilterTheory", "IdentityTheory", "Quantale",
    "QuantaleError", "Report", "TCategory", "TCategoryError", "TDistributor", "TFrame",
    "TGraph", "TMatrix", "Theory", "TheoryError", "VCategory", "VMatrix", "Verdict",
    "adjoint_pairs_bruteforce", "cauchy_completion", "check_frm_hypotheses",
    "enumerate_tcategories", "eta", "frm_conditions", "goedel_chain", "is_cauchy_complete",
    "is_frm_hom", "is_tcategory", "is_tfunctor", "kleisli_compose", "lawvere_chain",
    "left_adjoint_distributors", "main_thm", "make_theory", "omega", "omega_map", "product",
    "pt", "totally_below", "two", "validate", "validate_theory",
]
