"""Complete projective measurements on the apparatus factor A.

Projectors act on ``H_A`` and are lifted to ``I_S (x) Pi_j`` on the composite
space. Outcome order is the order the projectors were given in; every result
preserves it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidMeasurement, NonzeroDiscord
from .states import PSD_TOL, BipartiteState

PROJECTOR_TOL = 1e-10
P_FLOOR = 1e-12
DECOMP_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Orthogonal, complete set of (possibly multi-rank) projectors on ``H_A``."""

    projectors: tuple

    def __post_init__(self):
        projs = tuple(linalg.as_matrix(p).copy() for p in self.projectors)
        if not projs:
            raise InvalidMeasurement("measurement needs at least one projector")
        dim = projs[0].shape[0]
        total = np.zeros((dim, dim), dtype=np.complex128)
        for j, p in enumerate(projs):
            if p.shape != (dim, dim):
                raise DimensionMismatch(f"projector {j} has shape {p.shape}, expected {(dim, dim)}")
            herm = linalg.hermitian_residual(p)
            idem = float(np.max(np.abs(p @ p - p)))
            if herm > PROJECTOR_TOL or idem > PROJECTOR_TOL:
                raise InvalidMeasurement(
                    f"projector {j} not an orthogonal projector (herm {herm:.2e}, idem {idem:.2e})"
                )
            for k in range(j):
                cross = float(np.max(np.abs(p @ projs[k])))
                if cross > PROJECTOR_TOL:
                    raise InvalidMeasurement(f"projectors {k} and {j} overlap: {cross:.2e}")
            total += p
            p.setflags(write=False)
        gap = float(np.max(np.abs(total - np.eye(dim))))
        if gap > PROJECTOR_TOL:
            raise InvalidMeasurement(f"projectors do not sum to identity: {gap:.2e}")
        object.__setattr__(self, "projectors", projs)

    @property
    def dim_a(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    @property
    def is_rank1(self) -> bool:
        return all(r == 1 for r in self.ranks)

    def __len__(self) -> int:
        return len(self.projectors)

    @classmethod
    def from_basis(cls, vectors) -> "ProjectiveMeasurement":
        """Rank-1 measurement from an orthonormal basis given as matrix columns."""
        v = np.asarray(vectors, dtype=np.complex128)
        return cls(tuple(np.outer(v[:, k], v[:, k].conj()) for k in range(v.shape[1])))

    @classmethod
    def computational(cls, dim_a: int) -> "ProjectiveMeasurement":
        return cls.from_basis(np.eye(dim_a))

    @classmethod
    def identity(cls, dim_a: int) -> "ProjectiveMeasurement":
        """The trivial one-outcome measurement ``{I_A}``."""
        return cls((np.eye(dim_a, dtype=np.complex128),))

    def conjugated(self, u) -> "ProjectiveMeasurement":
        """Projectors ``U^H Pi_j U`` (same outcome order)."""
        u = np.asarray(u, dtype=np.complex128)
        return ProjectiveMeasurement(tuple(u.conj().T @ p @ u for p in self.projectors))


def qubit_basis(theta: float, phi: float) -> ProjectiveMeasurement:
    """Rank-1 qubit measurement onto

    ``cos(theta)|0> + e^{i phi} sin(theta)|1>`` and
    ``e^{-i phi} sin(theta)|0> - cos(theta)|1>``.
    """
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * phi)
    u = np.array([c, e * s], dtype=np.complex128)
    w = np.array([s / e, -c], dtype=np.complex128)
    return ProjectiveMeasurement((np.outer(u, u.conj()), np.outer(w, w.conj())))


def random_basis(dim_a: int, rng: np.random.Generator) -> ProjectiveMeasurement:
    """Haar-random rank-1 measurement (QR of a complex Gaussian matrix)."""
    g = rng.standard_normal((dim_a, dim_a)) + 1j * rng.standard_normal((dim_a, dim_a))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return ProjectiveMeasurement.from_basis(q)


def _check_dims(state: BipartiteState, meas: ProjectiveMeasurement):
    if meas.dim_a != state.dim_a:
        raise DimensionMismatch(f"measurement acts on dim {meas.dim_a}, state has dim_a = {state.dim_a}")


def lift(state: BipartiteState, proj) -> np.ndarray:
    """``I_S (x) proj`` on the composite space."""
    return np.kron(np.eye(state.dim_s), proj)


def _sandwich(rho4: np.ndarray, proj: np.ndarray) -> np.ndarray:
    # (I (x) P) rho (I (x) P) in 4-index form
    return np.einsum("ab,ibjc,cd->iajd", proj, rho4, proj)


@dataclass(frozen=True)
class Outcome:
    """One measurement outcome: probability and conditional state (``None`` below ``P_FLOOR``).

    In projected mode ``state`` is a :class:`BipartiteState`; in traced mode it
    is a density matrix on ``H_S``.
    """

    probability: float
    state: Optional[Union[BipartiteState, np.ndarray]]

    @property
    def defined(self) -> bool:
        return self.state is not None


@dataclass(frozen=True)
class ConditionalEnsemble:
    outcomes: tuple
    mode: str

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([o.probability for o in self.outcomes])

    def s_marginals(self) -> list:
        """Conditional states reduced to ``H_S`` (``None`` for undefined outcomes)."""
        out = []
        for o in self.outcomes:
            if o.state is None:
                out.append(None)
            elif isinstance(o.state, BipartiteState):
                out.append(o.state.rho_s)
            else:
                out.append(o.state)
        return out


MODES = ("projected", "traced")


def condition(state: BipartiteState, meas: ProjectiveMeasurement, mode: str = "projected") -> ConditionalEnsemble:
    """Outcome probabilities ``p_j = Tr[(I (x) Pi_j) rho]`` and conditional states.

    ``projected`` keeps the joint state ``(I (x) Pi_j) rho (I (x) Pi_j) / p_j``;
    ``traced`` returns ``Tr_A[(I (x) Pi_j) rho] / p_j`` on S alone.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    _check_dims(state, meas)
    ds, da = state.dim_s, state.dim_a
    rho4 = state.rho.reshape(ds, da, ds, da)
    outcomes = []
    for proj in meas.projectors:
        # Tr_A[(I (x) P) rho]
        reduced = np.einsum("ab,ibja->ij", proj, rho4)
        p = float(np.trace(reduced).real)
        if p < P_FLOOR:
            outcomes.append(Outcome(p, None))
            continue
        if mode == "traced":
            outcomes.append(Outcome(p, reduced / p))
        else:
            joint = _sandwich(rho4, proj).reshape(ds * da, ds * da) / p
            outcomes.append(Outcome(p, BipartiteState.trusted(joint, ds, da)))
    return ConditionalEnsemble(tuple(outcomes), mode)


def dephase(state: BipartiteState, meas: ProjectiveMeasurement) -> BipartiteState:
    """Unread measurement ``sum_j (I (x) Pi_j) rho (I (x) Pi_j)``."""
    _check_dims(state, meas)
    ds, da = state.dim_s, state.dim_a
    rho4 = state.rho.reshape(ds, da, ds, da)
    out = sum(_sandwich(rho4, proj) for proj in meas.projectors)
    out = out.reshape(ds * da, ds * da)
    return BipartiteState.trusted(0.5 * (out + out.conj().T), ds, da)


def superselection_residual(state: BipartiteState, meas: ProjectiveMeasurement) -> float:
    """Frobenius norm of ``rho - dephase(rho)``; zero iff rho is block diagonal in ``meas``."""
    return linalg.frobenius_norm(state.rho - dephase(state, meas).rho)


def classical_decomposition(state: BipartiteState, meas: ProjectiveMeasurement) -> list:
    """Split a zero-discord state into weighted pure product states.

    For each outcome ``j`` the conditional S state is diagonalised; eigenvector
    ``k`` gives the conditional projector ``pi_jk`` and the component
    ``pi_jk (x) Pi_j`` with weight ``p_j * lambda_jk``.

    Returns:
        list of ``(weight, BipartiteState)`` in outcome-major, eigenvalue-descending order.

    Raises:
        NonzeroDiscord: ``rho`` is not block diagonal in ``meas`` (residual above ``DECOMP_TOL``).
        InvalidMeasurement: ``meas`` is not rank-1.
    """
    if not meas.is_rank1:
        raise InvalidMeasurement(f"classical decomposition needs rank-1 projectors, got ranks {meas.ranks}")
    res = superselection_residual(state, meas)
    if res > DECOMP_TOL:
        raise NonzeroDiscord(f"superselection residual {res:.3e} exceeds {DECOMP_TOL:.0e}")
    ens = condition(state, meas, mode="traced")
    parts = []
    for outcome, proj in zip(ens.outcomes, meas.projectors):
        if outcome.state is None:
            continue
        eig = linalg.hermitian_eigen(outcome.state)
        for lam, vec in zip(eig.eigenvalues, eig.eigenvectors.T):
            if lam <= PSD_TOL:
                continue
            pure = np.kron(np.outer(vec, vec.conj()), proj)
            parts.append((outcome.probability * float(lam), BipartiteState(pure, state.dim_s, state.dim_a)))
    return parts


def reconstruct(parts: Sequence[tuple]) -> np.ndarray:
    return sum(w * s.rho for w, s in parts)
