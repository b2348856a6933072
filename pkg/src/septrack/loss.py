"""Classification losses: values, derivatives, smoothness, exponential-tail checks.

A LossSpec bundles vectorized callables for ℓ and ℓ′ together with the
Lipschitz constant of ℓ′ and (optionally) the exponential-tail constants
used by the sandwich test in verify_tight_tail.  All callables must accept
and return numpy arrays (scalars work too).
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .linalg import spectral_norm

LOGISTIC = "logistic"
EXPONENTIAL = "exponential"
CUSTOM = "custom"


@dataclass(frozen=True)
class TailBounds:
    """Constants of the two-sided exponential-tail sandwich, valid for u > u_bar."""

    mu_plus: float
    mu_minus: float
    u_bar: float


@dataclass(frozen=True)
class LossSpec:
    kind: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    beta: float
    tail: Optional[TailBounds] = None


def _logistic_value(u):
    # log(1 + e^{-u}); logaddexp evaluates the stable branch on each side,
    # so margins of several hundred neither overflow nor flush to zero.
    return np.logaddexp(0.0, -np.asarray(u, dtype=float))


def _logistic_derivative(u):
    # -1/(1 + e^u), computed on the branch that never exponentiates a
    # positive argument; keeps the e^{-u} tail alive out to u ≈ 700.
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty_like(arr)
    pos = arr >= 0
    if pos.any():
        e = np.exp(-arr[pos])
        out[pos] = -(e / (1.0 + e))
    if not pos.all():
        e = np.exp(arr[~pos])
        out[~pos] = -1.0 / (1.0 + e)
    return out if np.ndim(u) else float(out[0])


def logistic_loss() -> LossSpec:
    """ℓ(u) = log(1 + e^{-u}) with β = 1/4 and tail constants (1, 1, 0)."""
    return LossSpec(
        kind=LOGISTIC,
        value=_logistic_value,
        derivative=_logistic_derivative,
        beta=0.25,
        tail=TailBounds(mu_plus=1.0, mu_minus=1.0, u_bar=0.0),
    )


def custom_loss(
    value: Callable,
    derivative: Callable,
    beta: float,
    tail: Optional[TailBounds] = None,
    check_grid: Optional[np.ndarray] = None,
) -> LossSpec:
    """Wrap a user loss after numerically cross-checking its declared contract.

    On the check grid the loss must be positive with negative derivative and
    monotonically decreasing, the derivative must match a central finite
    difference, and the empirical Lipschitz constant of ℓ′ must not exceed
    the declared beta by more than 1%.  Violations raise ValueError.
    """
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    grid = np.linspace(-20.0, 20.0, 2001) if check_grid is None else np.asarray(check_grid, float)
    vals = np.asarray(value(grid), dtype=float)
    ders = np.asarray(derivative(grid), dtype=float)
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(ders))):
        raise ValueError("loss or derivative non-finite on check grid")
    if not np.all(vals > 0):
        raise ValueError("loss must be positive")
    if not np.all(ders < 0):
        raise ValueError("loss derivative must be negative")
    if not np.all(np.diff(vals) < 0):
        raise ValueError("loss must be monotonically decreasing")
    h = 1e-6 * max(1.0, np.max(np.abs(grid)))
    fd = (np.asarray(value(grid + h), float) - np.asarray(value(grid - h), float)) / (2 * h)
    scale = np.maximum(np.abs(ders), 1e-8)
    if np.max(np.abs(fd - ders) / scale) > 1e-3:
        raise ValueError("derivative inconsistent with finite differences")
    emp_beta = float(np.max(np.abs(np.diff(ders) / np.diff(grid))))
    if emp_beta > 1.01 * beta:
        raise ValueError(
            f"declared beta={beta:g} violated by >1%: empirical Lipschitz {emp_beta:g}"
        )
    return LossSpec(kind=CUSTOM, value=value, derivative=derivative, beta=beta, tail=tail)


def verify_tight_tail(spec: LossSpec, grid) -> bool:
    """Check (1-e^{-μ₋u})e^{-u} ≤ -ℓ′(u) ≤ (1+e^{-μ₊u})e^{-u} on the grid."""
    if spec.tail is None:
        raise ValueError("no tail constants declared")
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(grid <= spec.tail.u_bar):
        raise ValueError(f"grid points must exceed u_bar={spec.tail.u_bar:g}")
    f = -np.asarray(spec.derivative(grid), dtype=float)
    base = np.exp(-grid)
    lower = (1.0 - np.exp(-spec.tail.mu_minus * grid)) * base
    upper = (1.0 + np.exp(-spec.tail.mu_plus * grid)) * base
    return bool(np.all(lower <= f) and np.all(f <= upper))


def empirical_smoothness(spec: LossSpec, X) -> float:
    """Smoothness constant β·σ_max² of the summed loss over the sample matrix X."""
    if spec.beta == 0:
        return 0.0
    return spec.beta * spectral_norm(X) ** 2


def sum_loss(spec: LossSpec, margins) -> float:
    """Compensated sum of per-sample losses (the summands span many decades)."""
    return math.fsum(np.atleast_1d(np.asarray(spec.value(margins), dtype=float)).tolist())
