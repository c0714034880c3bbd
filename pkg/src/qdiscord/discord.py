"""Entropies, mutual informations and quantum discord.

All entropies are in bits. Three conditioning variants are supported:

``rank1``
    Rank-1 measurement; conditional states are the projected joint states
    ``(I (x) Pi_j) rho (I (x) Pi_j) / p_j``.
``traced``
    Any projective measurement; conditional states are
    ``Tr_A[(I (x) Pi_j) rho] / p_j`` on S.
``dephased``
    ``J = H(S) + H(A^D) - H(S,A^D)`` with ``rho^D`` the dephased state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from . import linalg
from .errors import (
    InvalidDistribution,
    InvalidMeasurement,
    NotPositive,
    UnsupportedDimension,
)
from .measurement import (
    ProjectiveMeasurement,
    condition,
    dephase,
    qubit_basis,
)
from .states import PSD_TOL, BipartiteState

VARIANTS = ("rank1", "traced", "dephased")
DISCORD_TOL = 1e-10
PROP1_TOL = 1e-9
PROP3_FORWARD_TOL = 1e-7
PROP3_BACKWARD_TOL = 1e-6
# residual / discord below these count as "holds" when deciding applicability
SUPERSELECTION_ZERO = 1e-9
DISCORD_ZERO = 1e-9

DEFAULT_GRID = (64, 32)
REFINE_MAXITER = 200
REFINE_FTOL = 1e-10


# --- entropies --------------------------------------------------------------


def shannon_entropy(p) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``; no clipping, exact zeros only."""
    p = np.asarray(p, dtype=float).ravel()
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def spectrum_entropy(eigenvalues) -> float:
    """Entropy of a density-matrix spectrum.

    Eigenvalues in ``(-PSD_TOL, PSD_TOL)`` count as zero; anything more negative
    means the input was not a state.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size and lam.min() < -PSD_TOL:
        raise NotPositive(f"eigenvalue {lam.min():.3e} below -{PSD_TOL:.0e}")
    dim = lam.size
    lam = lam[lam >= PSD_TOL]
    h = float(-np.sum(lam * np.log2(lam)))
    return min(max(h, 0.0), math.log2(dim)) if dim else 0.0


def von_neumann_entropy(state: Union[BipartiteState, np.ndarray]) -> float:
    """``-Tr rho log2 rho`` of a state or of a bare density matrix."""
    if isinstance(state, BipartiteState):
        return spectrum_entropy(state.spectrum)
    return spectrum_entropy(linalg.eigvalsh(state))


# --- classical baseline -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClassicalJoint:
    """Joint distribution ``p(x, y)`` as an ``n x m`` table (rows x, columns y)."""

    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=float)
        if t.ndim != 2:
            raise InvalidDistribution(f"table must be 2-D, got shape {t.shape}")
        if np.any(t < 0):
            raise InvalidDistribution(f"negative probability {t.min():.3e}")
        if abs(t.sum() - 1.0) > 1e-12:
            raise InvalidDistribution(f"table sums to {t.sum():.15g}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def p_x(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def p_y(self) -> np.ndarray:
        return self.table.sum(axis=0)

    def conditional_x(self, y: int) -> np.ndarray:
        """``p(x | Y = y)`` by Bayes' rule."""
        return self.table[:, y] / self.p_y[y]

    def entropy_x(self) -> float:
        return shannon_entropy(self.p_x)

    def entropy_y(self) -> float:
        return shannon_entropy(self.p_y)

    def joint_entropy(self) -> float:
        return shannon_entropy(self.table)

    def conditional_entropy(self) -> float:
        """``H(X|Y) = sum_y p(y) H(X | Y = y)``."""
        py = self.p_y
        return sum(py[y] * shannon_entropy(self.conditional_x(y)) for y in range(py.size) if py[y] > 0)

    def embed(self) -> BipartiteState:
        """``sum_xy p(x,y) |x><x| (x) |y><y|`` with X on S and Y on A."""
        n, m = self.table.shape
        return BipartiteState(np.diag(self.table.ravel().astype(complex)), n, m)


def classical_mutual_information(joint: ClassicalJoint, form: str = "J") -> float:
    """``J = H(X) - H(X|Y)`` or ``I = H(X) + H(Y) - H(X,Y)``."""
    if form == "J":
        return joint.entropy_x() - joint.conditional_entropy()
    if form == "I":
        return joint.entropy_x() + joint.entropy_y() - joint.joint_entropy()
    raise ValueError(f"form must be 'J' or 'I', got {form!r}")


# --- quantum mutual informations --------------------------------------------


def mutual_information_i(state: BipartiteState) -> float:
    """``I(S:A) = H(S) + H(A) - H(S,A)``."""
    return von_neumann_entropy(state.rho_s) + von_neumann_entropy(state.rho_a) - von_neumann_entropy(state)


def _check_variant(mode: str, meas: ProjectiveMeasurement):
    if mode not in VARIANTS:
        raise ValueError(f"mode must be one of {VARIANTS}, got {mode!r}")
    if mode == "rank1" and not meas.is_rank1:
        raise InvalidMeasurement(f"rank1 mode needs rank-1 projectors, got ranks {meas.ranks}")


def _conditional(state: BipartiteState, meas: ProjectiveMeasurement, mode: str):
    """Return ``(H(S|{Pi}), outcome probabilities)`` for the variant."""
    if mode == "dephased":
        dep = dephase(state, meas)
        probs = tuple(float(np.trace(p @ dep.rho_a).real) for p in meas.projectors)
        return von_neumann_entropy(dep) - von_neumann_entropy(dep.rho_a), probs
    ens = condition(state, meas, "projected" if mode == "rank1" else "traced")
    total = 0.0
    for o in ens.outcomes:
        if o.state is not None:
            total += o.probability * von_neumann_entropy(o.state)
    return total, tuple(o.probability for o in ens.outcomes)


def conditional_entropy(state: BipartiteState, meas: ProjectiveMeasurement, mode: str = "rank1") -> float:
    """Entropy of S left after measuring ``meas`` on A.

    ``rank1`` and ``traced`` give ``sum_j p_j H(rho_{S|j})``; ``dephased`` gives
    ``H(rho^D) - H(rho^D_A)``.
    """
    _check_variant(mode, meas)
    return _conditional(state, meas, mode)[0]


def mutual_information_j(state: BipartiteState, meas: ProjectiveMeasurement, mode: str = "rank1") -> float:
    """Information about S gained by measuring ``meas`` on A: ``H(S) - H(S|{Pi})``."""
    return von_neumann_entropy(state.rho_s) - conditional_entropy(state, meas, mode)


@dataclass(frozen=True)
class DiscordReport:
    h_s: float
    h_a: float
    h_sa: float
    conditional_entropy: float
    mutual_i: float
    mutual_j: float
    discord: float
    outcome_probs: tuple
    variant: str

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "h_s": self.h_s,
            "h_a": self.h_a,
            "h_sa": self.h_sa,
            "conditional_entropy": self.conditional_entropy,
            "mutual_i": self.mutual_i,
            "mutual_j": self.mutual_j,
            "discord": self.discord,
            "outcome_probs": list(self.outcome_probs),
        }


def _report(h_s, h_a, h_sa, cond, probs, mode) -> DiscordReport:
    mutual_i = h_s + h_a - h_sa
    mutual_j = h_s - cond
    return DiscordReport(h_s, h_a, h_sa, cond, mutual_i, mutual_j, mutual_i - mutual_j, probs, mode)


def discord(state: BipartiteState, meas: ProjectiveMeasurement, mode: str = "rank1") -> DiscordReport:
    """Quantum discord ``I(S:A) - J(S:A)_{Pi}`` with all intermediate entropies.

    Raises:
        DimensionMismatch: ``meas`` does not act on ``state.dim_a``.
        InvalidMeasurement: ``mode="rank1"`` with a multi-rank projector.
    """
    _check_variant(mode, meas)
    cond, probs = _conditional(state, meas, mode)
    return _report(
        von_neumann_entropy(state.rho_s),
        von_neumann_entropy(state.rho_a),
        von_neumann_entropy(state),
        cond,
        probs,
        mode,
    )


# --- minimisation over qubit bases ------------------------------------------


class MinimizeResult(NamedTuple):
    min_delta: float
    theta: float
    phi: float
    report: DiscordReport


def discord_grid(state: BipartiteState, thetas, phis, mode: str = "rank1") -> np.ndarray:
    """Discord at every ``(theta, phi)`` of a qubit-basis grid; shape ``(len(thetas), len(phis))``."""
    if state.dim_a != 2:
        raise UnsupportedDimension(f"qubit parametrisation needs dim_a = 2, got {state.dim_a}")
    h_s = von_neumann_entropy(state.rho_s)
    h_a = von_neumann_entropy(state.rho_a)
    h_sa = von_neumann_entropy(state)
    out = np.empty((len(thetas), len(phis)))
    for i, th in enumerate(thetas):
        for k, ph in enumerate(phis):
            cond, _ = _conditional(state, qubit_basis(th, ph), mode)
            out[i, k] = _report(h_s, h_a, h_sa, cond, (), mode).discord
    return out


def minimize_discord(
    state: BipartiteState,
    grid: tuple[int, int] = DEFAULT_GRID,
    refine: bool = True,
    mode: str = "rank1",
) -> MinimizeResult:
    """Minimise discord over rank-1 measurements on a qubit apparatus.

    A coarse grid over ``theta in [0, pi/2]``, ``phi in [0, pi)`` (these half
    ranges already cover every projector pair) picks the first minimiser in
    row-major order. With ``refine`` a Nelder-Mead simplex then starts from that
    cell, stopping after ``REFINE_MAXITER`` iterations or once the simplex
    values agree within ``REFINE_FTOL``.
    """
    if state.dim_a != 2:
        raise UnsupportedDimension(f"discord minimisation is qubit-only, got dim_a = {state.dim_a}")
    n_theta, n_phi = grid
    if n_theta < 1 or n_phi < 1:
        raise ValueError(f"grid must be positive, got {grid}")
    thetas = np.linspace(0.0, np.pi / 2, n_theta) if n_theta > 1 else np.zeros(1)
    phis = np.linspace(0.0, np.pi, n_phi, endpoint=False)
    values = discord_grid(state, thetas, phis, mode)
    i, k = np.unravel_index(int(np.argmin(values)), values.shape)  # first minimum, row-major
    best = (float(values[i, k]), float(thetas[i]), float(phis[k]))

    if refine:
        h_s = von_neumann_entropy(state.rho_s)
        h_a = von_neumann_entropy(state.rho_a)
        h_sa = von_neumann_entropy(state)

        def objective(x):
            cond, _ = _conditional(state, qubit_basis(x[0], x[1]), mode)
            return _report(h_s, h_a, h_sa, cond, (), mode).discord

        d_theta = (np.pi / 2) / max(n_theta - 1, 1)
        d_phi = np.pi / n_phi
        x0 = np.array([best[1], best[2]])
        simplex = np.array([x0, x0 + [d_theta / 2, 0.0], x0 + [0.0, d_phi / 2]])
        res = _scipy_minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "maxiter": REFINE_MAXITER,
                "fatol": REFINE_FTOL,
                "xatol": 1e-9,
            },
        )
        # round-off-level wins would move the argmin off exact grid zeros
        if float(res.fun) < best[0] - REFINE_FTOL:
            best = (float(res.fun), float(res.x[0]), float(res.x[1]))

    report = discord(state, qubit_basis(best[1], best[2]), mode)
    return MinimizeResult(report.discord, best[1], best[2], report)


# --- proposition checks -----------------------------------------------------


class PropositionResiduals(NamedTuple):
    """Residuals of the three discord propositions for one (state, basis) pair.

    ``prop3_forward`` / ``prop3_backward`` are ``None`` when their premise does
    not hold (no superselection / nonzero discord). ``discord`` is the rank-1
    discord the residuals were computed from.
    """

    prop1: float
    prop2_violation: float
    prop3_forward: Optional[float]
    prop3_backward: Optional[float]
    discord: float


def proposition_residuals(state: BipartiteState, meas: ProjectiveMeasurement) -> PropositionResiduals:
    if not meas.is_rank1:
        raise InvalidMeasurement(f"proposition checks need rank-1 projectors, got ranks {meas.ranks}")
    report = discord(state, meas, "rank1")
    dep = dephase(state, meas)
    block_form = von_neumann_entropy(dep) - von_neumann_entropy(dep.rho_a)
    prop1 = abs(report.conditional_entropy - block_form)
    violation = max(0.0, -report.discord)
    residual = linalg.frobenius_norm(state.rho - dep.rho)
    forward = abs(report.discord) if residual <= SUPERSELECTION_ZERO else None
    backward = residual if report.discord <= DISCORD_ZERO else None
    return PropositionResiduals(prop1, violation, forward, backward, report.discord)


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1.0 - p])
