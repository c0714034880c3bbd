"""Peres-Horodecki (PPT) test.

Positivity of the partial transpose is necessary for separability and also
sufficient when ``dim_s * dim_a <= 6``; beyond that the verdict is flagged as
inconclusive.
"""
from dataclasses import dataclass

from . import linalg
from .states import BipartiteState

PPT_TOL = 1e-10


@dataclass(frozen=True)
class PptVerdict:
    min_eigenvalue: float
    is_ppt: bool
    conclusive: bool


def ppt_test(state: BipartiteState, tol: float = PPT_TOL) -> PptVerdict:
    pt = linalg.partial_transpose(state.rho, state.dim_s, state.dim_a)
    lo = float(linalg.eigvalsh(pt)[-1])
    return PptVerdict(lo, lo >= -tol, state.dim_s * state.dim_a <= 6)
