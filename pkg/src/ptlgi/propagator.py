"""Closed-form non-unitary propagator and an independent exponential oracle.

In dimensionless variables (alpha = gamma/J, tau = J*t) the generator is
M = sigma_x + i*alpha*sigma_z, which squares to (1 - alpha^2) * identity.
The exact exponential U(tau) = exp(-i*M*tau) therefore collapses to two
scalar kernel functions

    k0 = cosh(tau*s),  k1 = sinh(tau*s)/s,  s = sqrt(alpha^2 - 1),

analytically continued through s = 0: trigonometric for alpha < 1
(cos/sin with sqrt(1 - alpha^2)), a truncated Taylor series in the window
|tau^2 (alpha^2 - 1)| < 1e-6 (k1 -> tau at the exceptional point), and
hyperbolic above.  The propagator is

    U(tau) = k0*I + alpha*k1*sigma_z - i*k1*sigma_x
           = [[k0 + alpha*k1, -i*k1], [-i*k1, k0 - alpha*k1]],

with det U = 1 from the kernel identity k0^2 - (alpha^2-1)*k1^2 = 1.

``propagator_oracle`` recomputes U by scaling-and-squaring a plain Taylor
series of the matrix exponential and never touches the kernel functions;
it is the ground truth the closed form is tested against.

For tau*s > 350 the kernels are stored with the factor exp(theta) split
off (``Kernel.log_scale``), so ratios like U rho U^dag / Tr[...] stay
finite long after exp(2*theta) overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, NumericalError
from .ptcore import ID2, SIGMA_X, SIGMA_Z

SERIES_WINDOW = 1e-6  # on x = tau^2 (alpha^2 - 1); 4-term tail error < 1e-26
LOG_SCALE_THRESHOLD = 350.0  # beyond this theta, exp(2*theta) would overflow

DENSITY_TOL = 1e-12


class Regime(Enum):
    TRIG = "trig"
    SERIES = "series"
    HYPER = "hyper"


@dataclass(frozen=True)
class Kernel:
    """Scalar kernel (k0, k1) of the propagator at one (alpha, tau) point.

    The stored values are exp(-log_scale) times the mathematical ones;
    log_scale is zero except deep in the broken phase (tau*s > 350).
    """

    k0: float
    k1: float
    regime: Regime
    log_scale: float = 0.0


def _validate_alpha_tau(alpha: float, tau: float) -> tuple[float, float]:
    a, t = float(alpha), float(tau)
    if not (math.isfinite(a) and a >= 0.0):
        raise DomainError(f"alpha must be finite and nonnegative, got {alpha}")
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"tau must be finite and nonnegative, got {tau}")
    return a, t


def kernel(alpha: float, tau: float) -> Kernel:
    """Evaluate the kernel pair with branch selection on x = tau^2(alpha^2-1)."""
    a, t = _validate_alpha_tau(alpha, tau)
    x = t * t * (a * a - 1.0)
    if abs(x) < SERIES_WINDOW:
        k0 = 1.0 + x / 2.0 + x * x / 24.0 + x * x * x / 720.0
        k1 = t * (1.0 + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0)
        return Kernel(k0, k1, Regime.SERIES)
    if x < 0.0:
        om = math.sqrt(1.0 - a * a)
        return Kernel(math.cos(om * t), math.sin(om * t) / om, Regime.TRIG)
    s = math.sqrt(a * a - 1.0)
    theta = s * t
    if theta <= LOG_SCALE_THRESHOLD:
        return Kernel(math.cosh(theta), math.sinh(theta) / s, Regime.HYPER)
    # exp(theta) factored out: k0 = (1 + e^{-2 theta})/2, k1 = (1 - e^{-2 theta})/(2s)
    damp = math.exp(-2.0 * theta)
    return Kernel(0.5 * (1.0 + damp), 0.5 * (1.0 - damp) / s, Regime.HYPER, theta)


def _scaled_propagator(alpha: float, tau: float) -> tuple[np.ndarray, float]:
    """U(tau) * exp(-log_scale) and the log scale; finite for any theta."""
    k = kernel(alpha, tau)
    a = float(alpha)
    u = np.array(
        [
            [k.k0 + a * k.k1, -1j * k.k1],
            [-1j * k.k1, k.k0 - a * k.k1],
        ],
        dtype=complex,
    )
    return u, k.log_scale


def propagator(alpha: float, tau: float) -> np.ndarray:
    """Exact time-evolution operator exp(-i (sigma_x + i alpha sigma_z) tau).

    Non-unitary for alpha > 0 (det U = 1 but U U^dag != I); unitary at
    alpha = 0.  Entries overflow to inf only for tau*sqrt(alpha^2-1) > ~709;
    use evolve_state for normalized states in that regime.
    """
    u, log_scale = _scaled_propagator(alpha, tau)
    if log_scale != 0.0:
        u = u * math.exp(log_scale) if log_scale < 709.0 else u * math.inf
    return u


def propagator_oracle(alpha: float, tau: float) -> np.ndarray:
    """Ground-truth U(tau) by scaling-and-squaring a Taylor exponential.

    Scales the generator until its max-norm is <= 2^-5, sums 24 series terms
    by Horner's rule, then squares back.  Shares nothing with the kernel
    closed form.
    """
    a, t = _validate_alpha_tau(alpha, tau)
    m = -1j * t * (SIGMA_X + 1j * a * SIGMA_Z)
    norm = float(np.max(np.sum(np.abs(m), axis=1)))
    squarings = max(0, math.ceil(math.log2(norm / 0.03125))) if norm > 0.03125 else 0
    ms = m / (2.0**squarings)
    acc = ID2.copy()
    for n in range(24, 0, -1):
        acc = ID2 + (ms @ acc) / n
    for _ in range(squarings):
        acc = acc @ acc
    return acc


def validate_density(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return a complex copy."""
    m = np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise DomainError(f"density matrix must be 2x2, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise DomainError("density matrix entries must be finite")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise DomainError("density matrix is not Hermitian")
    if abs(m.trace().real - 1.0) > tol or abs(m.trace().imag) > tol:
        raise DomainError(f"density matrix trace must be 1, got {m.trace()}")
    if np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < -tol:
        raise DomainError("density matrix has a negative eigenvalue")
    return m.copy()


def evolve_state(rho, alpha: float, tau: float) -> np.ndarray:
    """Propagate and renormalize: U rho U^dag / Tr[U rho U^dag].

    The output is re-hermitized and trace-normalized, so it satisfies the
    density-matrix invariants to machine precision.  The computation uses
    the scaled propagator, so it remains finite arbitrarily deep in the
    broken phase.
    """
    m = validate_density(rho)
    u, _ = _scaled_propagator(alpha, tau)  # overall scale cancels in the ratio
    evolved = u @ m @ u.conj().T
    tr = float(evolved.trace().real)
    if tr < 1e-300:
        raise NumericalError(f"evolved-state norm underflow (trace {tr})")
    evolved /= tr
    return 0.5 * (evolved + evolved.conj().T)


def evolve_plus_coefficients(alpha: float, tau: float) -> tuple[complex, complex]:
    """Normalized components (c1, c2) of U(tau)|+> in the |+>, |-> basis.

    The unnormalized pair is c1 = k0 - i*k1, c2 = alpha*k1; at alpha = 0
    this reduces to (exp(-i*tau), 0), the stationary sigma_x eigenstate.
    """
    k = kernel(alpha, tau)
    c1 = complex(k.k0, -k.k1)
    c2 = complex(float(alpha) * k.k1)
    norm = math.hypot(abs(c1), abs(c2))
    return c1 / norm, c2 / norm
