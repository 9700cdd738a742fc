"""Dense complex linear algebra on finite-dimensional Hilbert spaces.

States and operators are thin immutable wrappers around numpy arrays.  The
wrappers validate on construction and cache whether an operator is Hermitian
or a projector, so the higher layers can check preconditions cheaply.

Conventions
-----------
* ``inner(a, b)`` is ``<a|b>``, antilinear in the first argument.
* Tensor products are Kronecker products in left-major order: the left factor
  indexes the most significant digit of the composite basis label.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import DimMismatch, NotHermitian, NotProjector, ZeroVector

CONSTRUCTION_TOL = 1e-12
COMPARISON_TOL = 1e-10
EIGEN_MERGE_TOL = 1e-9


def _readonly(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


class Kind(enum.Enum):
    GENERAL = "general"
    HERMITIAN = "hermitian"
    PROJECTOR = "projector"


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized state vector.

    The amplitudes passed in are normalized on construction, so two
    StateVectors built from parallel raw vectors are equal up to phase.
    """
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise ZeroVector("state vector must be non-empty")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or norm <= CONSTRUCTION_TOL:
            raise ZeroVector(f"state norm {norm:.3g} is too small to normalize")
        object.__setattr__(self, "amplitudes", _readonly(amps / norm))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"StateVector(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix with a cached :class:`Kind`.

    Parameters
    ----------
    matrix : array_like
        ``dim x dim`` complex matrix.
    kind : Kind or str, optional
        Declared kind.  When given it is verified and a mismatch raises
        ``NotHermitian`` (or ``NotProjector``).  When omitted the most specific
        kind consistent with the entries is inferred.
    tol : float
        Tolerance for the Hermitian and idempotency checks, scaled by the
        largest entry magnitude when that exceeds one.
    """
    matrix: np.ndarray
    kind: Kind = None
    tol: float = field(default=CONSTRUCTION_TOL, repr=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
            raise DimMismatch(f"operator must be a non-empty square matrix, got shape {mat.shape}")
        object.__setattr__(self, "matrix", _readonly(mat))
        inferred = _infer_kind(mat, self.tol)
        declared = self.kind
        if declared is None:
            object.__setattr__(self, "kind", inferred)
            return
        declared = Kind(declared)
        rank = {Kind.GENERAL: 0, Kind.HERMITIAN: 1, Kind.PROJECTOR: 2}
        if rank[inferred] < rank[declared]:
            exc = NotProjector if declared is Kind.PROJECTOR else NotHermitian
            raise exc(f"matrix declared {declared.value} but is {inferred.value}")
        object.__setattr__(self, "kind", declared)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_hermitian(self) -> bool:
        return self.kind in (Kind.HERMITIAN, Kind.PROJECTOR)

    @property
    def is_projector(self) -> bool:
        return self.kind is Kind.PROJECTOR

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def expectation(self, state: StateVector) -> complex:
        """``<state|self|state>``."""
        _check_dims(self, state)
        v = state.amplitudes
        return complex(np.vdot(v, self.matrix @ v))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __matmul__(self, other):
        if isinstance(other, Operator):
            return compose(self, other)
        return NotImplemented

    def __add__(self, other):
        _check_dims(self, other)
        return Operator(self.matrix + other.matrix)

    def __sub__(self, other):
        _check_dims(self, other)
        return Operator(self.matrix - other.matrix)

    def __mul__(self, scalar):
        if np.isscalar(scalar):
            return Operator(scalar * self.matrix)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"Operator(dim={self.dim}, kind={self.kind.value})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct real eigenvalues (ascending) and their eigenprojectors."""
    eigenvalues: tuple
    eigenprojectors: tuple

    def __iter__(self):
        return iter(zip(self.eigenvalues, self.eigenprojectors))

    def __len__(self):
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        dim = self.eigenprojectors[0].dim
        out = np.zeros((dim, dim), dtype=complex)
        for lam, proj in self:
            out += lam * proj.matrix
        return out


def _infer_kind(mat, tol):
    scale = max(1.0, float(np.max(np.abs(mat))))
    if np.max(np.abs(mat - mat.conj().T)) > tol * scale:
        return Kind.GENERAL
    if np.max(np.abs(mat @ mat - mat)) > tol * scale:
        return Kind.HERMITIAN
    return Kind.PROJECTOR


def _check_dims(*objs):
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise DimMismatch(f"dimension mismatch: {sorted(dims)}")


def as_matrix(x) -> np.ndarray:
    if isinstance(x, Operator):
        return x.matrix
    return np.asarray(x, dtype=complex)


def make_state(raw: Sequence[complex]) -> StateVector:
    """Return a normalized copy of ``raw``.

    >>> make_state([1, 1]).amplitudes.round(6)
    array([0.707107+0.j, 0.707107+0.j])
    """
    return StateVector(raw)


def basis_state(dim: int, index: int) -> StateVector:
    amps = np.zeros(dim, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=complex), Kind.PROJECTOR)


def inner(a: StateVector, b: StateVector) -> complex:
    _check_dims(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def outer(a: StateVector, b: StateVector) -> Operator:
    """Rank-one operator ``|a><b|``."""
    _check_dims(a, b)
    return Operator(np.outer(a.amplitudes, b.amplitudes.conj()))


def projector(state: StateVector) -> Operator:
    return Operator(np.outer(state.amplitudes, state.amplitudes.conj()), Kind.PROJECTOR)


def compose(x: Operator, y: Operator) -> Operator:
    _check_dims(x, y)
    return Operator(x.matrix @ y.matrix)


def adjoint(x: Operator) -> Operator:
    return Operator(x.matrix.conj().T)


def commutator(x: Operator, y: Operator) -> Operator:
    _check_dims(x, y)
    return Operator(x.matrix @ y.matrix - y.matrix @ x.matrix)


def anticommutator(x: Operator, y: Operator) -> Operator:
    _check_dims(x, y)
    return Operator(x.matrix @ y.matrix + y.matrix @ x.matrix)


Tensorable = Union[StateVector, Operator]


def tensor(a: Tensorable, b: Tensorable, *rest: Tensorable) -> Tensorable:
    """Kronecker product of states or of operators (left-major)."""
    factors = (a, b) + rest
    if all(isinstance(f, StateVector) for f in factors):
        out = factors[0].amplitudes
        for f in factors[1:]:
            out = np.kron(out, f.amplitudes)
        return StateVector(out)
    if all(isinstance(f, Operator) for f in factors):
        out = factors[0].matrix
        for f in factors[1:]:
            out = np.kron(out, f.matrix)
        return Operator(out)
    raise TypeError("tensor factors must be all StateVector or all Operator")


def op_norm(x) -> float:
    """Operator (spectral) norm: largest singular value.

    Computed as the square root of the top eigenvalue of ``x^dagger x``.
    """
    m = as_matrix(x)
    gram = m.conj().T @ m
    top = np.linalg.eigvalsh((gram + gram.conj().T) / 2)[-1]
    return float(np.sqrt(max(top, 0.0)))


def eig_hermitian(x: Operator, merge_tol: float = EIGEN_MERGE_TOL) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian operator.

    Eigenvalues closer than ``merge_tol`` to the previous one in ascending
    order are merged and share one eigenprojector.
    """
    if not x.is_hermitian:
        raise NotHermitian("eig_hermitian requires a Hermitian operator")
    m = x.matrix
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    groups = []
    for i, lam in enumerate(vals):
        if groups and lam - vals[groups[-1][-1]] <= merge_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    eigenvalues, projectors = [], []
    for idx in groups:
        v = vecs[:, idx]
        eigenvalues.append(float(np.mean(vals[idx])))
        projectors.append(Operator(v @ v.conj().T, Kind.PROJECTOR, tol=1e-10))
    return SpectralDecomposition(tuple(eigenvalues), tuple(projectors))
