"""Lattice operations on projection operators.

Projectors on a fixed Hilbert space form an orthomodular lattice: ``meet`` is
the projector onto the intersection of ranges, ``join`` onto the closed span,
and ``orthocomplement(p) = I - p``.  For commuting projectors the meet is the
plain product; otherwise it is the limit of ``(pq)^n``.

The effective-commutativity tests decide when a product of two projectors may
be treated as a projector in a measurement with finite error, using the
identity ``YXYX = (1 - w) YX`` where ``w`` is the weak value of ``[Y, X]``
post-selected on ``|y>`` and pre-selected on ``|x>``.  Note the ordering: the
*post* state belongs to the left factor ``Y``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    COMPARISON_TOL,
    CONSTRUCTION_TOL,
    Kind,
    Operator,
    StateVector,
    _check_dims,
    commutator,
    eig_hermitian,
    inner,
    op_norm,
)
from .errors import (
    NoConvergence,
    NotHermitian,
    NotProjector,
    NotProportional,
    PreconditionFailed,
    UndefinedWeakValue,
)

MEET_MAX_ITER = 10_000
MEET_TOL = 1e-12
# eigenvalues of pqp within this many multiples of tol below 1 cannot be told
# apart from a shared direction
_RESOLUTION_FACTOR = 100


def _require_projectors(*ops):
    for op in ops:
        if not isinstance(op, Operator) or not op.is_projector:
            raise NotProjector(f"expected a projector, got {op!r}")
    _check_dims(*ops)


@dataclass(frozen=True)
class LatticeVerdict:
    holds: bool
    defect: float

    def __bool__(self):
        return self.holds


def commutes(p: Operator, q: Operator, tol: float = CONSTRUCTION_TOL) -> bool:
    """True iff the operator norm of ``[p, q]`` is at most ``tol``."""
    _require_projectors(p, q)
    return op_norm(commutator(p, q)) <= tol


def orthocomplement(p: Operator) -> Operator:
    _require_projectors(p)
    return Operator(np.eye(p.dim) - p.matrix, Kind.PROJECTOR, tol=1e-9)


def _spectral_round(m):
    """Nearest projector to a (nearly) Hermitian matrix."""
    herm = (m + m.conj().T) / 2
    vals, vecs = np.linalg.eigh(herm)
    v = vecs[:, vals > 0.5]
    return v @ v.conj().T


def _spectral_limit(p, q, tol, iterations):
    """``lim (pqp)^n`` from the spectrum of ``pqp``: keep eigenvalues equal to 1."""
    t = p @ q @ p
    vals, vecs = np.linalg.eigh((t + t.conj().T) / 2)
    ambiguous = (vals < 1 - tol) & (vals > 1 - _RESOLUTION_FACTOR * tol)
    if np.any(ambiguous):
        worst = float(np.max(1 - vals[ambiguous]))
        raise NoConvergence(
            f"(pq)^n did not converge in {iterations} iterations and an eigenvalue of pqp "
            f"lies {worst:.3g} below 1, inside the resolution band",
            iterations=iterations, defect=worst,
        )
    v = vecs[:, vals >= 1 - tol]
    return v @ v.conj().T


def meet(p: Operator, q: Operator, max_iter: int = MEET_MAX_ITER, tol: float = MEET_TOL) -> Operator:
    """Projector onto ``range(p) & range(q)``.

    Commuting pairs return ``p @ q`` directly.  Otherwise ``(pq)^n`` is
    iterated until successive iterates differ by at most ``tol`` (operator
    norm), then symmetrized and rounded to the nearest projector.

    Nearly aligned pairs converge too slowly for the iteration (the rate is
    the largest ``cos^2`` of a principal angle below 1).  If ``max_iter`` is
    reached the limit is taken in closed form from the spectrum of the
    Hermitian iterate ``pqp``, which has the same limit.  ``NoConvergence`` is
    raised only when an eigenvalue sits so close to 1 that it cannot be
    resolved at ``tol``.
    """
    _require_projectors(p, q)
    if commutes(p, q, CONSTRUCTION_TOL):
        return Operator(p.matrix @ q.matrix)
    step = p.matrix @ q.matrix
    current = step
    for _ in range(max_iter):
        nxt = current @ step
        if op_norm(nxt - current) <= tol:
            return Operator(_spectral_round(nxt), Kind.PROJECTOR, tol=1e-9)
        current = nxt
    return Operator(_spectral_limit(p.matrix, q.matrix, tol, max_iter), Kind.PROJECTOR, tol=1e-9)


def join(p: Operator, q: Operator, max_iter: int = MEET_MAX_ITER, tol: float = MEET_TOL) -> Operator:
    """Projector onto the span of ``range(p)`` and ``range(q)`` (De Morgan dual of ``meet``)."""
    return orthocomplement(meet(orthocomplement(p), orthocomplement(q), max_iter, tol))


def is_below(p: Operator, q: Operator, tol: float = COMPARISON_TOL) -> bool:
    """Lattice order ``p <= q``, i.e. ``qp = p``."""
    _require_projectors(p, q)
    return op_norm(q.matrix @ p.matrix - p.matrix) <= tol


def check_orthomodular(p: Operator, q: Operator, tol: float = COMPARISON_TOL) -> LatticeVerdict:
    """Check ``q = p | (q & ~p)`` for ``p <= q``."""
    _require_projectors(p, q)
    if not is_below(p, q, tol):
        raise PreconditionFailed("orthomodular law needs p <= q (qp = p)")
    rhs = join(p, meet(q, orthocomplement(p)))
    defect = op_norm(q.matrix - rhs.matrix)
    return LatticeVerdict(defect <= tol, defect)


def product_coefficient(left: Operator, right: Operator, tol: float = COMPARISON_TOL) -> tuple:
    """Scalar ``c`` with ``(left right)^2 = c (left right)``, fitted by least squares.

    Returns ``(c, residual)``; raises ``NotProportional`` when the residual
    exceeds ``tol`` or the product vanishes.
    """
    _check_dims(left, right)
    prod = left.matrix @ right.matrix
    square = prod @ prod
    denom = np.vdot(prod, prod).real
    if denom <= CONSTRUCTION_TOL**2:
        raise NotProportional("product vanishes; coefficient undefined", residual=0.0)
    c = np.vdot(prod, square) / denom
    residual = op_norm(square - c * prod)
    if residual > tol:
        raise NotProportional(f"(pq)^2 is not proportional to pq (residual {residual:.3g})", residual)
    if abs(c.imag) <= tol:
        c = c.real
    return c, residual


@dataclass(frozen=True)
class CommutativityCheck:
    """Outcome of :func:`effective_commutativity`.

    ``commutator_weak_value`` is ``<[Y, X]>`` between the states; the identity
    coefficient is ``1 - commutator_weak_value`` and ``identity_residual`` is
    the operator-norm residual of ``YXYX - coefficient * YX``.
    """
    holds: bool
    commutator_weak_value: complex
    coefficient: complex
    identity_residual: float

    def __bool__(self):
        return self.holds


def _commutator_weak_value(y: Operator, x: Operator, post: StateVector, pre: StateVector) -> complex:
    overlap = inner(post, pre)
    if abs(overlap) <= CONSTRUCTION_TOL:
        raise UndefinedWeakValue("<y|x> = 0: commutator weak value undefined")
    comm = commutator(y, x).matrix
    return complex(np.vdot(post.amplitudes, comm @ pre.amplitudes) / overlap)


def effective_commutativity(
    p: Operator,
    q: Operator,
    relative_error: float,
    pre: StateVector,
    post: StateVector,
) -> CommutativityCheck:
    """Decide whether ``pq`` can be treated as a projector at a given relative error.

    ``p`` plays the role of ``Y`` (its eigenvector is ``post``) and ``q`` of
    ``X`` (eigenvector ``pre``).  Holds iff the magnitude of the commutator weak
    value is below ``relative_error``.
    """
    _require_projectors(p, q)
    _check_dims(p, pre, post)
    w = _commutator_weak_value(p, q, post, pre)
    coefficient = 1 - w
    prod = p.matrix @ q.matrix
    residual = op_norm(prod @ prod - coefficient * prod)
    return CommutativityCheck(abs(w) < relative_error, w, coefficient, residual)


@dataclass(frozen=True)
class ObservableProductCheck:
    holds: bool
    correction: complex

    def __bool__(self):
        return self.holds


def effective_observable_product(
    x_obs: Operator,
    y_proj: Operator,
    state: StateVector,
    absolute_error: float,
) -> ObservableProductCheck:
    """Decide whether ``<state|Y X|state>`` may be read as an expectation value.

    The correction term is the sum over eigenpairs ``(x_i, X_i)`` of ``x_obs``
    of ``<state|Y X_i|state> * x_i * <[Y, X_i]>``, each commutator weak value
    taken between ``|y>`` (post) and the normalized component ``X_i|y>`` (pre).
    For a rank-one ``X_i`` that component is its eigenvector.  ``y_proj`` must
    have rank one.
    """
    if not x_obs.is_hermitian:
        raise NotHermitian("x_obs must be Hermitian")
    _require_projectors(y_proj)
    _check_dims(x_obs, y_proj, state)
    rank = round(y_proj.trace().real)
    if rank != 1:
        raise NotProjector(f"y_proj must be a rank-1 projector, got rank {rank}")
    _, vecs = np.linalg.eigh(y_proj.matrix)
    y = StateVector(vecs[:, -1])
    xi = state.amplitudes
    correction = 0j
    for lam, proj in eig_hermitian(x_obs):
        component = proj.matrix @ y.amplitudes
        if np.linalg.norm(component) <= CONSTRUCTION_TOL:
            # Y X_i = |y><y|X_i vanishes
            continue
        x = StateVector(component)
        w = _commutator_weak_value(y_proj, proj, y, x)
        amplitude = np.vdot(xi, y_proj.matrix @ proj.matrix @ xi)
        correction += amplitude * lam * w
    holds = math.isinf(absolute_error) or abs(correction) < absolute_error
    return ObservableProductCheck(holds, complex(correction))
