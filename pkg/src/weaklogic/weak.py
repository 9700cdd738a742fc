"""Weak values between pre- and post-selected states.

The weak value of ``A`` for pre-selected ``|phi>`` and post-selected ``|psi>``
is ``<psi|A|phi> / <psi|phi>``.  For a projector ``A`` it is a conditional
probability exactly when ``A`` commutes with ``|psi><psi|``, or with
``|phi><phi|``, or when the two selection projectors commute; :func:`classify`
tests those three conditions at a given tolerance.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .core import (
    COMPARISON_TOL,
    CONSTRUCTION_TOL,
    Kind,
    Operator,
    StateVector,
    _check_dims,
    anticommutator,
    commutator,
    inner,
    op_norm,
    projector,
)
from .errors import IncompleteBasis, NotHermitian, NotProjector, OrthogonalSelection

OVERLAP_CUTOFF = CONSTRUCTION_TOL


class Classification(enum.Enum):
    CONDITIONAL_PROBABILITY = "ConditionalProbability"
    NOT_PROBABILITY = "NotProbability"

    def __str__(self):
        return self.value


class Condition(enum.Enum):
    POST_COMMUTES = "PostCommutes"
    PRE_COMMUTES = "PreCommutes"
    PRE_POST_COMMUTE = "PrePostCommute"

    def __str__(self):
        return self.value


def _overlap(pre: StateVector, post: StateVector) -> complex:
    _check_dims(pre, post)
    overlap = inner(post, pre)
    if abs(overlap) <= OVERLAP_CUTOFF:
        raise OrthogonalSelection("post-selection impossible: <post|pre> = 0")
    return overlap


def weak_value(a: Operator, pre: StateVector, post: StateVector) -> complex:
    """``<post|a|pre> / <post|pre>``."""
    _check_dims(a, pre, post)
    overlap = _overlap(pre, post)
    return complex(np.vdot(post.amplitudes, a.matrix @ pre.amplitudes) / overlap)


class Term(NamedTuple):
    probability: float
    weak_value: Optional[complex]

    @property
    def defined(self) -> bool:
        return self.weak_value is not None


def decompose_expectation(a: Operator, phi: StateVector, basis: Sequence[StateVector],
                          tol: float = COMPARISON_TOL) -> List[Term]:
    """Split ``<phi|a|phi>`` into ``sum_j Pr(psi_j|phi) * <a>_{psi_j, phi}``.

    Terms whose overlap with ``phi`` vanishes carry probability 0 and an
    undefined (``None``) weak value.
    """
    _check_dims(a, phi, *basis)
    if len(basis) != phi.dim:
        raise IncompleteBasis(f"basis has {len(basis)} vectors, dimension is {phi.dim}")
    vecs = np.column_stack([b.amplitudes for b in basis])
    gram_defect = np.max(np.abs(vecs.conj().T @ vecs - np.eye(phi.dim)))
    if gram_defect > tol:
        raise IncompleteBasis(f"basis is not orthonormal (defect {gram_defect:.3g})")
    terms = []
    for b in basis:
        overlap = inner(b, phi)
        if abs(overlap) <= OVERLAP_CUTOFF:
            terms.append(Term(0.0, None))
        else:
            terms.append(Term(abs(overlap) ** 2, weak_value(a, phi, b)))
    return terms


def real_imag_split(psi_proj: Operator, a_proj: Operator, phi: StateVector) -> tuple:
    """Split ``<phi|Psi A|phi>`` into symmetric (real) and commutator (imaginary) halves."""
    for op in (psi_proj, a_proj):
        if not op.is_projector:
            raise NotProjector(f"expected a projector, got {op!r}")
    _check_dims(psi_proj, a_proj, phi)
    symmetric = 0.5 * anticommutator(psi_proj, a_proj).expectation(phi)
    comm = 0.5 * commutator(psi_proj, a_proj).expectation(phi)
    return symmetric, comm


@dataclass(frozen=True)
class WeakValueReport:
    """Weak value of a projector together with its classification diagnostics.

    ``real_part_symmetric`` and ``commutator_part`` are the two halves of
    ``<pre|Psi A|pre>`` divided by the post-selection probability, so that
    they add up to ``value``.
    """
    value: complex
    pre_post_overlap: complex
    classification: Classification
    which_condition: frozenset
    commutator_norms: tuple  # (||[Psi, A]||, ||[Phi, A]||, ||[Psi, Phi]||)
    real_part_symmetric: complex
    commutator_part: complex
    post_selection_probability: float = field(default=None)

    @property
    def is_probability(self) -> bool:
        return self.classification is Classification.CONDITIONAL_PROBABILITY

    @property
    def anomalous(self) -> bool:
        """Value outside [0, 1] or with a nonzero imaginary part."""
        v = self.value
        return abs(v.imag) > COMPARISON_TOL or not (-COMPARISON_TOL <= v.real <= 1 + COMPARISON_TOL)


def classify(a_proj: Operator, pre: StateVector, post: StateVector,
             tol: float = COMPARISON_TOL) -> WeakValueReport:
    """Weak value of a projector with its probability classification."""
    if not a_proj.is_projector:
        raise NotProjector("classification is defined for projectors only")
    return classify_observable(a_proj, pre, post, tol)


def classify_observable(a: Operator, pre: StateVector, post: StateVector,
                        tol: float = COMPARISON_TOL) -> WeakValueReport:
    """Same commutator test for any Hermitian observable.

    For a non-projector ``a`` a positive verdict reads as "conditional
    expectation value" rather than probability, and no range guarantee
    applies.
    """
    if not a.is_hermitian:
        raise NotHermitian("classification needs a Hermitian observable")
    _check_dims(a, pre, post)
    overlap = _overlap(pre, post)
    prob = abs(overlap) ** 2
    psi_hat, phi_hat = projector(post), projector(pre)
    norms = (
        op_norm(commutator(psi_hat, a)),
        op_norm(commutator(phi_hat, a)),
        op_norm(commutator(psi_hat, phi_hat)),
    )
    which = frozenset(
        cond for cond, n in zip(Condition, norms) if n <= tol
    )
    symmetric = 0.5 * anticommutator(psi_hat, a).expectation(pre)
    comm = 0.5 * commutator(psi_hat, a).expectation(pre)
    return WeakValueReport(
        value=weak_value(a, pre, post),
        pre_post_overlap=overlap,
        classification=(Classification.CONDITIONAL_PROBABILITY if which
                        else Classification.NOT_PROBABILITY),
        which_condition=which,
        commutator_norms=norms,
        real_part_symmetric=symmetric / prob,
        commutator_part=comm / prob,
        post_selection_probability=prob,
    )


def _rank_one_vector(op: Operator) -> np.ndarray:
    if not op.is_projector or round(op.trace().real) != 1:
        raise NotProjector("expected a rank-1 projector")
    _, vecs = np.linalg.eigh(op.matrix)
    return vecs[:, -1]


def squared_weak_value_check(a_i: Operator, psi_j: StateVector, phi: StateVector) -> tuple:
    """Both sides of ``|<A_i>|^2 = Pr(a_i|psi_j) Pr(a_i|phi) / Pr(psi_j|phi)``.

    Each probability on the right is evaluated from its own inner product, so
    the two sides are independent routes to the same number.
    """
    a = _rank_one_vector(a_i)
    _check_dims(a_i, psi_j, phi)
    lhs = abs(weak_value(a_i, phi, psi_j)) ** 2
    pr_a_psi = abs(np.vdot(a, psi_j.amplitudes)) ** 2
    pr_a_phi = abs(np.vdot(a, phi.amplitudes)) ** 2
    pr_psi_phi = abs(inner(psi_j, phi)) ** 2
    return lhs, pr_a_psi * pr_a_phi / pr_psi_phi


def sandwich(a: Operator, psi_proj: Operator) -> Operator:
    """Hermitian operator ``A Psi A`` whose expectation gives ``|weak value|^2``."""
    if not a.is_hermitian:
        raise NotHermitian("sandwich needs a Hermitian operator")
    if not psi_proj.is_projector:
        raise NotProjector("sandwich needs a projector in the middle")
    _check_dims(a, psi_proj)
    m = a.matrix @ psi_proj.matrix @ a.matrix
    return Operator((m + m.conj().T) / 2, Kind.HERMITIAN, tol=1e-9)


def sandwich_check(a: Operator, psi_j: StateVector, phi: StateVector) -> tuple:
    """``(<phi|A Psi A|phi> / Pr(psi_j|phi), |<A>_{psi_j, phi}|^2)``."""
    h = sandwich(a, projector(psi_j))
    prob = abs(_overlap(phi, psi_j)) ** 2
    return h.expectation(phi).real / prob, abs(weak_value(a, phi, psi_j)) ** 2


def search_criterion_candidates(dim: int, trials: int, rng=None, tol: float = COMPARISON_TOL) -> list:
    """Random search over real rank-1 triples for instances the commutator criterion rejects but whose
    weak value still looks like a probability (real and in [0, 1]).

    Such instances are not counterexamples by themselves; they are the cases
    worth inspecting by hand.  Returns a list of ``(a_proj, pre, post, report)``.
    """
    rng = np.random.default_rng(rng)
    found = []
    for _ in range(trials):
        vecs = [rng.normal(size=dim) for _ in range(3)]
        a_proj = projector(StateVector(vecs[0]))
        pre, post = StateVector(vecs[1]), StateVector(vecs[2])
        try:
            rep = classify(a_proj, pre, post, tol)
        except OrthogonalSelection:
            continue
        if not rep.is_probability and not rep.anomalous:
            found.append((a_proj, pre, post, rep))
    return found
