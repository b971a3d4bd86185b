from .cases import CASES, CaseSpec, get_case
from .runner import ErrorReport, RunConfig, convergence_study, l1_norm, linf_norm, run_case

__all__ = [
    "CASES",
    "CaseSpec",
    "ErrorReport",
    "RunConfig",
    "convergence_study",
    "get_case",
    "l1_norm",
    "linf_norm",
    "run_case",
]
