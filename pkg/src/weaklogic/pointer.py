"""Weak measurement with a Gaussian pointer.

The system observable ``A`` is coupled to a one-dimensional pointer through
the impulsive unitary ``exp(-i g A (x) p)`` (hbar = 1).  In the eigenbasis of
``A`` this shifts the pointer wavepacket by ``g * lambda_k`` on each branch,
so after post-selecting ``|post>`` the pointer is left in

    psi(x) = sum_k <post|P_k|pre> phi0(x - g lambda_k)

with ``phi0`` a Gaussian of position width ``sigma``.  Every branch is
evaluated in closed form on the grid, so there is no interpolation or
sampling noise.  For small ``g``

    <x> / g  -> Re A_w
    <p> * 2 sigma^2 / g  -> Im A_w

and :func:`extract_weak_value` extrapolates both ratios to ``g = 0`` with a
fit linear in ``g**2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .core import Operator, StateVector, _check_dims, eig_hermitian
from .errors import FitUnstable, NotHermitian, PostSelectionVanished, ValidationError

POST_SELECTION_FLOOR = 1e-14
FIT_RELATIVE_TOL = 0.1
# absolute floor so a zero weak value does not make every fit "unstable"
FIT_ABSOLUTE_FLOOR = 1e-9


@dataclass(frozen=True)
class PointerGrid:
    """Uniform position grid on ``[-extent, extent]``."""
    num_points: int = 1024
    extent: float = 10.0
    sigma: float = 1.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValidationError("sigma must be positive")
        if self.num_points < 64:
            raise ValidationError(f"num_points must be >= 64, got {self.num_points}")
        if self.extent < 6 * self.sigma:
            raise ValidationError(
                f"extent {self.extent} must be at least 6 sigma = {6 * self.sigma} to hold the tails"
            )

    @classmethod
    def for_sigma(cls, sigma: float = 1.0, num_points: int = 1024, extent_sigmas: float = 10.0):
        return cls(num_points, extent_sigmas * sigma, sigma)

    @property
    def spacing(self) -> float:
        return 2 * self.extent / (self.num_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.num_points)

    def gaussian(self, center: float = 0.0) -> np.ndarray:
        s = self.sigma
        return (2 * np.pi * s**2) ** -0.25 * np.exp(-((self.x - center) ** 2) / (4 * s**2))

    def gaussian_derivative(self, center: float = 0.0) -> np.ndarray:
        return -(self.x - center) / (2 * self.sigma**2) * self.gaussian(center)

    def norm(self, amplitudes: np.ndarray) -> float:
        return float(np.sum(np.abs(amplitudes) ** 2) * self.spacing)


@dataclass(frozen=True)
class PointerStats:
    coupling: float
    post_selection_probability: float
    mean_position: float
    mean_momentum: float
    joint_norm: float = field(default=1.0, repr=False)


def _branches(a: Operator, pre: StateVector, post: StateVector):
    """``(lambda_k, <post|P_k|pre>, ||P_k pre||^2)`` for each eigenspace of ``a``."""
    out = []
    for lam, proj in eig_hermitian(a):
        amp = np.vdot(post.amplitudes, proj.matrix @ pre.amplitudes)
        weight = float(np.real(proj.expectation(pre)))
        out.append((lam, complex(amp), weight))
    return out


def simulate(a: Operator, pre: StateVector, post: StateVector, g: float,
             grid: PointerGrid = None, momentum: str = "analytic") -> PointerStats:
    """Couple, post-select and read out the pointer at coupling ``g``.

    ``g`` is in pointer-position units (multiply by ``grid.sigma`` to express
    it in units of the pointer width).  ``momentum`` selects how ``<p>`` is
    obtained: ``"analytic"`` differentiates the Gaussian branches exactly,
    ``"fft"`` uses the discrete Fourier transform of the pointer amplitudes.
    """
    if not a.is_hermitian:
        raise NotHermitian("the measured observable must be Hermitian")
    _check_dims(a, pre, post)
    grid = PointerGrid() if grid is None else grid
    branches = _branches(a, pre, post)

    psi = np.zeros(grid.num_points, dtype=complex)
    dpsi = np.zeros(grid.num_points, dtype=complex)
    joint_norm = 0.0
    for lam, amp, weight in branches:
        shift = g * lam
        psi += amp * grid.gaussian(shift)
        dpsi += amp * grid.gaussian_derivative(shift)
        joint_norm += weight * grid.norm(grid.gaussian(shift))

    dx = grid.spacing
    prob = grid.norm(psi)
    if prob < POST_SELECTION_FLOOR:
        raise PostSelectionVanished(f"post-selection probability {prob:.3g} below {POST_SELECTION_FLOOR}")
    density = np.abs(psi) ** 2
    mean_x = float(np.sum(grid.x * density) * dx / prob)
    if momentum == "analytic":
        mean_p = float(np.sum(np.imag(psi.conj() * dpsi)) * dx / prob)
    elif momentum == "fft":
        k = 2 * np.pi * np.fft.fftfreq(grid.num_points, d=dx)
        spectrum = np.abs(np.fft.fft(psi)) ** 2
        mean_p = float(np.sum(k * spectrum) / np.sum(spectrum))
    else:
        raise ValueError(f"unknown momentum method {momentum!r}")
    return PointerStats(g, prob, mean_x, mean_p, joint_norm)


def _extrapolate(gs: np.ndarray, ratios: np.ndarray) -> Tuple[float, float]:
    """Intercept of ``ratio = c0 + c1 g^2`` and the largest fit residual."""
    if len(gs) == 1:
        return float(ratios[0]), 0.0
    design = np.column_stack([np.ones_like(gs), gs**2])
    coef, *_ = np.linalg.lstsq(design, ratios, rcond=None)
    residual = float(np.max(np.abs(design @ coef - ratios)))
    return float(coef[0]), residual


def extract_weak_value(a: Operator, pre: StateVector, post: StateVector,
                       g_sweep: Sequence[float], grid: PointerGrid = None,
                       ) -> Tuple[complex, List[PointerStats]]:
    """Estimate the weak value of ``a`` from a sweep of decreasing couplings."""
    gs = np.asarray(list(g_sweep), dtype=float)
    if gs.size == 0:
        raise ValidationError("g_sweep must not be empty")
    if np.any(gs <= 0):
        raise ValidationError("coupling must be positive")
    if np.any(np.diff(gs) >= 0):
        raise ValidationError("g_sweep must be strictly decreasing")
    grid = PointerGrid() if grid is None else grid
    stats = [simulate(a, pre, post, g, grid) for g in gs]
    pos = np.array([s.mean_position for s in stats]) / gs
    mom = np.array([s.mean_momentum for s in stats]) * 2 * grid.sigma**2 / gs
    re, re_res = _extrapolate(gs, pos)
    im, im_res = _extrapolate(gs, mom)
    estimate = complex(re, im)
    residual = max(re_res, im_res)
    if residual > FIT_RELATIVE_TOL * abs(estimate) + FIT_ABSOLUTE_FLOOR:
        raise FitUnstable(
            f"extrapolation residual {residual:.3g} exceeds 10% of |estimate| = {abs(estimate):.3g}",
            residual,
        )
    return estimate, stats
