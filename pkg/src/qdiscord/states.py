"""Validated bipartite density matrices and the named state families.

A :class:`BipartiteState` is a density matrix on ``H_S (x) H_A`` with the
factor dimensions recorded. Construction validates Hermiticity, unit trace and
positivity; the spectrum computed for the positivity check is cached and reused
by the entropy routines.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    NotNormalized,
    NotPositive,
    NotUnitTrace,
    OutOfRange,
    StateFormatError,
)

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix ``rho`` on ``H_S (x) H_A``; composite index ``s * dim_a + a``."""

    rho: np.ndarray
    dim_s: int
    dim_a: int
    _checked: bool = field(default=True, repr=False)

    def __post_init__(self):
        rho = linalg.as_matrix(self.rho).copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        if self.dim_s < 1 or self.dim_a < 1 or rho.shape[0] != self.dim_s * self.dim_a:
            raise DimensionMismatch(
                f"matrix of dim {rho.shape[0]} does not factor as {self.dim_s} x {self.dim_a}"
            )
        if self._checked:
            linalg.check_hermitian(rho)
            tr = np.trace(rho)
            if abs(tr - 1.0) > TRACE_TOL:
                raise NotUnitTrace(f"trace = {tr.real:.12g}{tr.imag:+.3g}j, |tr - 1| = {abs(tr - 1):.3e}")
            lo = float(self.spectrum[-1])
            if lo < -PSD_TOL:
                raise NotPositive(f"minimum eigenvalue {lo:.3e} below -{PSD_TOL:.0e}")

    @classmethod
    def trusted(cls, rho, dim_s: int, dim_a: int) -> "BipartiteState":
        """Wrap a matrix that is a density matrix by construction (skips the eigen check)."""
        return cls(rho, dim_s, dim_a, _checked=False)

    @property
    def dim(self) -> int:
        return self.dim_s * self.dim_a

    @cached_property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues of ``rho``, descending."""
        return linalg.eigvalsh(self.rho)

    @cached_property
    def rho_s(self) -> np.ndarray:
        return linalg.partial_trace(self.rho, self.dim_s, self.dim_a, keep="S")

    @cached_property
    def rho_a(self) -> np.ndarray:
        return linalg.partial_trace(self.rho, self.dim_s, self.dim_a, keep="A")

    def allclose(self, other: "BipartiteState", atol: float = 1e-12) -> bool:
        return (
            self.dim_s == other.dim_s
            and self.dim_a == other.dim_a
            and np.allclose(self.rho, other.rho, rtol=0.0, atol=atol)
        )

    def to_dict(self) -> dict:
        return {
            "dim_s": self.dim_s,
            "dim_a": self.dim_a,
            "re": self.rho.real.tolist(),
            "im": self.rho.imag.tolist(),
        }


def validate(rho, dim_s: int, dim_a: int) -> BipartiteState:
    """Build a :class:`BipartiteState`, raising the named error for the first failed check.

    Checks run in order: factor dimensions, Hermiticity, unit trace, positivity.
    """
    return BipartiteState(rho, dim_s, dim_a)


def ket_to_density(ket) -> np.ndarray:
    ket = np.asarray(ket, dtype=np.complex128).ravel()
    return np.outer(ket, ket.conj())


def _check_unit(vec, what: str) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.complex128).ravel()
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"{what} has norm {norm:.12g}")
    return vec


def _check_fraction(z: float, name: str = "z") -> float:
    z = float(z)
    if not 0.0 <= z <= 1.0:
        raise OutOfRange(f"{name} = {z} outside [0, 1]")
    return z


def pre_measurement(amplitudes: Sequence[complex]) -> BipartiteState:
    """Pure state ``sum_i alpha_i |i>|i>`` correlating system and apparatus records."""
    alpha = np.asarray(amplitudes, dtype=np.complex128).ravel()
    n = alpha.size
    if n == 0:
        raise NotNormalized("empty amplitude list")
    norm2 = float(np.sum(np.abs(alpha) ** 2))
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"sum |alpha|^2 = {norm2:.12g}")
    psi = np.zeros(n * n, dtype=np.complex128)
    psi[np.arange(n) * n + np.arange(n)] = alpha
    return BipartiteState(ket_to_density(psi), n, n)


def bell_state() -> BipartiteState:
    """``(|00> + |11>)/sqrt(2)`` projector."""
    return pre_measurement([2**-0.5, 2**-0.5])


def decohered_cnot(z: float) -> BipartiteState:
    """C-not record ``(|00><00| + |11><11|)/2 + z(|00><11| + |11><00|)/2``.

    ``z = 1`` is the Bell projector, ``z = 0`` the fully einselected mixture.
    """
    z = _check_fraction(z)
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0] = rho[3, 3] = 0.5
    rho[0, 3] = rho[3, 0] = 0.5 * z
    return BipartiteState(rho, 2, 2)


def werner(z: float) -> BipartiteState:
    """Two-qubit Werner state ``(1 - z) I/4 + z |psi><psi|`` with ``psi`` the Bell state."""
    z = _check_fraction(z)
    psi = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)
    rho = (1 - z) / 4 * np.eye(4) + z * ket_to_density(psi)
    return BipartiteState(rho, 2, 2)


@dataclass(frozen=True)
class SeparableSpec:
    """Mixture of product-eigenstate density matrices.

    ``weights[i]`` is the weight of sub-ensemble ``i``, and ``components[i]`` is
    a sequence of ``(p_ij, s_ket, a_ket)`` triples whose ``p_ij`` sum to one.
    """

    weights: Sequence[float]
    components: Sequence[Sequence[tuple]]

    def __post_init__(self):
        if len(self.weights) != len(self.components):
            raise DimensionMismatch("one component list per weight is required")
        _check_simplex(self.weights, "weights")
        dims = None
        for i, comp in enumerate(self.components):
            _check_simplex([c[0] for c in comp], f"component {i} sub-weights")
            for j, (_, s, a) in enumerate(comp):
                s = _check_unit(s, f"s ket ({i},{j})")
                a = _check_unit(a, f"a ket ({i},{j})")
                if dims is None:
                    dims = (s.size, a.size)
                elif dims != (s.size, a.size):
                    raise DimensionMismatch(f"ket ({i},{j}) has dims {(s.size, a.size)}, expected {dims}")
        if dims is None:
            raise NotNormalized("separable spec has no product terms")
        object.__setattr__(self, "_dims", dims)

    @property
    def dims(self) -> tuple[int, int]:
        return self._dims


def _check_simplex(ws, what: str):
    ws = np.asarray(ws, dtype=float)
    if ws.size == 0:
        raise NotNormalized(f"{what} is empty")
    if np.any(ws < 0):
        raise OutOfRange(f"{what} has negative entry {ws.min():.3e}")
    if abs(ws.sum() - 1.0) > NORM_TOL:
        raise NotNormalized(f"{what} sum to {ws.sum():.12g}")


def from_separable_spec(spec: SeparableSpec) -> BipartiteState:
    dim_s, dim_a = spec.dims
    rho = np.zeros((dim_s * dim_a, dim_s * dim_a), dtype=np.complex128)
    for p_i, comp in zip(spec.weights, spec.components):
        for p_ij, s, a in comp:
            rho += p_i * p_ij * np.kron(ket_to_density(s), ket_to_density(a))
    return BipartiteState(rho, dim_s, dim_a)


def random_state(dim_s: int, dim_a: int, seed: int) -> BipartiteState:
    """Full-rank random state ``G G^H / tr(G G^H)`` for a complex Gaussian ``G``."""
    if dim_s < 2 or dim_a < 2:
        raise DimensionMismatch(f"random_state needs dims >= 2, got {dim_s} x {dim_a}")
    rng = np.random.default_rng(seed)
    n = dim_s * dim_a
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return BipartiteState(rho / np.trace(rho).real, dim_s, dim_a)


# --- JSON state files -------------------------------------------------------


def state_from_dict(data) -> BipartiteState:
    if not isinstance(data, dict):
        raise StateFormatError("state file must hold a JSON object")
    missing = [k for k in ("dim_s", "dim_a", "re") if k not in data]
    if missing:
        raise StateFormatError(f"state file missing keys: {', '.join(missing)}")
    try:
        dim_s = int(data["dim_s"])
        dim_a = int(data["dim_a"])
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFormatError(f"state file has non-numeric or ragged entries: {exc}") from exc
    if re.shape != im.shape:
        raise StateFormatError(f"'re' shape {re.shape} differs from 'im' shape {im.shape}")
    if re.ndim != 2 or re.shape[0] != re.shape[1]:
        raise StateFormatError(f"'re' must be a square matrix, got shape {re.shape}")
    return validate(re + 1j * im, dim_s, dim_a)


def load_state(path) -> BipartiteState:
    """Read a state file ``{"dim_s", "dim_a", "re", "im"}`` and validate it.

    Raises:
        OSError: the file cannot be read.
        StateFormatError: the JSON is malformed or structurally wrong.
        NotHermitian, NotUnitTrace, NotPositive, DimensionMismatch: validation failures.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON: {exc}") from exc
    return state_from_dict(data)


def dump_state(state: BipartiteState, path) -> None:
    Path(path).write_text(json.dumps(state.to_dict(), indent=2) + "\n")
