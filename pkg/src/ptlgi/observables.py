"""l1-norm coherence, mixedness and the qubit complementarity diagnostics.

Coherence is always taken in the computational (sigma_z) basis, the basis
in which the gain/loss Hamiltonian is written.  For the maximally mixed
initial state the closed forms reduce to one scalar:

    A(alpha, tau) = 1 + 2 alpha^2 k1^2,
    C = 2 alpha k1^2 / A,   mu = 1 / A^2,   bloch_z = 2 alpha k0 k1 / A,

with (k0, k1) the propagator kernels.  These are algebraically identical to
the cosh-form expressions (the apparent poles cancel) and stay exact at the
exceptional point, where they become C = 2 tau^2/(1+2 tau^2) and
mu = 1/(1+2 tau^2)^2.

The exact qubit identity C^2 + mu = 1 - bloch_z^2 is strictly stronger than
the complementarity inequality C^2 + mu <= 1 and is what the tests assert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .propagator import Kernel, evolve_state, kernel, validate_density


def l1_coherence(rho) -> float:
    """Sum of off-diagonal magnitudes, 2|rho_01| for a qubit."""
    m = validate_density(rho)
    return 2.0 * abs(m[0, 1])


def purity(rho) -> float:
    m = validate_density(rho)
    return float((m @ m).trace().real)


def mixedness(rho) -> float:
    """Normalized linear entropy 2(1 - Tr rho^2), in [0, 1]."""
    return 2.0 * (1.0 - purity(rho))


def bloch_z(rho) -> float:
    m = validate_density(rho)
    return float((m[0, 0] - m[1, 1]).real)


@dataclass(frozen=True)
class CoherenceReport:
    coherence: float
    mixedness: float
    purity: float
    bloch_z: float
    complementarity_slack: float  # 1 - C^2 - mu, equals bloch_z^2 exactly


def coherence_report(rho) -> CoherenceReport:
    m = validate_density(rho)
    c = 2.0 * abs(m[0, 1])
    p = float((m @ m).trace().real)
    mu = 2.0 * (1.0 - p)
    z = float((m[0, 0] - m[1, 1]).real)
    return CoherenceReport(
        coherence=c,
        mixedness=mu,
        purity=p,
        bloch_z=z,
        complementarity_slack=1.0 - c * c - mu,
    )


def _mixed_state_scalars(alpha: float, k: Kernel) -> tuple[float, float]:
    """(2 alpha k1^2, A) with the exp(log_scale) factor divided out."""
    damp = math.exp(-2.0 * k.log_scale)  # 1 unless deep in the broken phase
    b = 2.0 * alpha * k.k1 * k.k1
    a_den = damp + 2.0 * alpha * alpha * k.k1 * k.k1
    return b, a_den


def coherence_closed_form(alpha: float, tau: float) -> float:
    """Coherence of the evolved maximally mixed state, without touching states."""
    k = kernel(alpha, tau)
    b, a_den = _mixed_state_scalars(float(alpha), k)
    return abs(b) / a_den


def mixedness_closed_form(alpha: float, tau: float) -> float:
    """Mixedness of the evolved maximally mixed state, closed form."""
    k = kernel(alpha, tau)
    _, a_den = _mixed_state_scalars(float(alpha), k)
    damp = math.exp(-2.0 * k.log_scale)
    return (damp / a_den) ** 2


def evolved_mixed_state(alpha: float, tau: float) -> np.ndarray:
    """The normalized evolution of I/2, the reference state for the closed forms."""
    return evolve_state(0.5 * np.eye(2, dtype=complex), alpha, tau)
