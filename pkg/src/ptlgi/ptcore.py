"""Gain/loss two-level Hamiltonian, phase classification, dilation operators.

The model is the balanced gain/loss qubit

    H = [[i*gamma, J], [J, -i*gamma]],      J > 0, gamma >= 0,

which is sigma_x-pseudo-Hermitian (sigma_x H sigma_x = H^dagger).  Everything
downstream works in the dimensionless ratio alpha = gamma/J and dimensionless
time tau = J*t; J and gamma with units exist only at this API boundary.

Besides the Hamiltonian itself this module builds the dilation operators
(O, eta, xi) that embed the non-Hermitian qubit into a larger Hermitian
system, and checks the conserved metric bilinear of the unnormalized
evolution.  Note the metric convention: with the explicit matrices used here
it is <psi| eta^{-1} |psi> that is conserved, not <psi| eta |psi>; both can
be computed so the discrepancy stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BrokenPhaseError, DomainError, ExceptionalPointError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

EP_GUARD = 1e-12  # |alpha - 1| below this: dilation intertwiner is singular


def _as_mat2(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {a.shape}")
    return a


def is_hermitian(m, tol: float = 1e-12) -> bool:
    a = _as_mat2(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_positive_definite(m, tol: float = 1e-12) -> bool:
    """Hermitian with all eigenvalues strictly above ``tol``."""
    a = _as_mat2(m)
    if not is_hermitian(a, tol):
        return False
    return bool(np.min(np.linalg.eigvalsh(a)) > tol)


def is_unitary(m, tol: float = 1e-12) -> bool:
    a = _as_mat2(m)
    return bool(np.max(np.abs(a @ a.conj().T - ID2)) <= tol)


@dataclass(frozen=True)
class PTHamiltonian:
    """Balanced gain/loss two-level Hamiltonian, parameters J and gamma."""

    J: float
    gamma: float

    def __post_init__(self):
        if not (math.isfinite(self.J) and math.isfinite(self.gamma)):
            raise DomainError("J and gamma must be finite")
        if self.J <= 0.0:
            raise DomainError(f"coupling J must be positive, got {self.J}")
        if self.gamma < 0.0:
            raise DomainError(f"gain/loss rate must be nonnegative, got {self.gamma}")

    @property
    def alpha(self) -> float:
        """Dimensionless gain/loss ratio gamma/J."""
        return self.gamma / self.J

    def matrix(self) -> np.ndarray:
        return np.array(
            [[1j * self.gamma, self.J], [self.J, -1j * self.gamma]], dtype=complex
        )


def make_hamiltonian(J: float, gamma: float) -> PTHamiltonian:
    """Validate (J, gamma) and build the Hamiltonian value."""
    return PTHamiltonian(float(J), float(gamma))


def coupling_from_phase(phi: float) -> float:
    """Coupling strength |1 - exp(-i*phi)| = 2|sin(phi/2)| of the driving phase."""
    if not math.isfinite(phi):
        raise DomainError("phi must be finite")
    return 2.0 * abs(math.sin(0.5 * phi))


def spectrum(h: PTHamiltonian) -> tuple[complex, complex]:
    """Eigenvalue pair (E+, E-) = (+sqrt(J^2-gamma^2), -sqrt(J^2-gamma^2)).

    Real for alpha <= 1, a pure-imaginary conjugate pair for alpha > 1;
    the sum is exactly zero.
    """
    e = complex(np.sqrt(complex(h.J * h.J - h.gamma * h.gamma)))
    return e, -e


class PhaseKind(Enum):
    PT_SYMMETRIC = "pt-symmetric"
    EXCEPTIONAL = "exceptional"
    PT_BROKEN = "pt-broken"


@dataclass(frozen=True)
class Phase:
    kind: PhaseKind
    tol: float


def classify_phase(h: PTHamiltonian, tol: float = 1e-9) -> Phase:
    """Classify the symmetry phase from alpha with an exceptional-point band.

    Default tolerance 1e-9 on alpha: well above double-precision noise, far
    below any physically scanned grid step.
    """
    if not (tol > 0.0) or not math.isfinite(tol):
        raise DomainError(f"tolerance must be positive, got {tol}")
    a = h.alpha
    if abs(a - 1.0) <= tol:
        kind = PhaseKind.EXCEPTIONAL
    elif a < 1.0:
        kind = PhaseKind.PT_SYMMETRIC
    else:
        kind = PhaseKind.PT_BROKEN
    return Phase(kind, tol)


@dataclass(frozen=True)
class NaimarkSet:
    """Dilation operators: intertwiner O, metric eta, ancilla coupling xi.

    ``c`` is the sum of reciprocal eigenvalues of eta, equal to 1/(1-alpha^2).
    ``broken_phase`` is set when alpha > 1: the matrices are still well
    defined, but eta is indefinite and the dilation interpretation fails.
    """

    O: np.ndarray
    eta: np.ndarray
    xi: np.ndarray
    c: float
    broken_phase: bool


def naimark_operators(h: PTHamiltonian) -> NaimarkSet:
    """Construct O, eta = O O^dagger (for alpha < 1), c and xi = c*eta - 1.

    Raises ExceptionalPointError within 1e-12 of alpha = 1, where the columns
    of O coalesce and the intertwiner is singular.
    """
    a = h.alpha
    if abs(a - 1.0) <= EP_GUARD:
        raise ExceptionalPointError(
            f"dilation operators are singular at the exceptional point (alpha={a})"
        )
    J, g = h.J, h.gamma
    e = complex(np.sqrt(complex(J * J - g * g)))
    O = np.array([[1j * g - e, 1j * g + e], [J, J]], dtype=complex) / J
    eta = (2.0 / J) * np.array([[J, 1j * g], [-1j * g, J]], dtype=complex)
    c = 1.0 / (1.0 - a * a)
    xi = c * eta - ID2
    return NaimarkSet(O=O, eta=eta, xi=xi, c=c, broken_phase=a > 1.0)


def _eta_inverse(h: PTHamiltonian) -> np.ndarray:
    # analytic inverse of eta; valid for alpha != 1
    J, g = h.J, h.gamma
    det = J * J - g * g
    return (J / (2.0 * det)) * np.array([[J, -1j * g], [1j * g, J]], dtype=complex)


def conserved_bilinear(
    h: PTHamiltonian,
    psi0,
    tau_grid,
    metric: str = "eta_inv",
) -> list[float]:
    """Values of <psi(tau)| M |psi(tau)> along the unnormalized evolution.

    psi(tau) = U(tau) psi0 with U the raw (non-unitary) propagator.  With
    M = eta^{-1} (the default) the value is constant in tau; with
    ``metric="eta"`` it drifts, which documents the metric-convention
    mismatch between the two candidate bilinears.
    """
    from . import propagator as _prop  # local import to avoid a module cycle

    a = h.alpha
    if a >= 1.0:
        raise BrokenPhaseError(f"conserved bilinear requires alpha < 1, got {a}")
    psi = np.asarray(psi0, dtype=complex).reshape(2)
    if not (np.all(np.isfinite(psi.real)) and np.all(np.isfinite(psi.imag))):
        raise DomainError("psi0 must be a finite, nonzero 2-vector")
    if np.allclose(psi, 0.0):
        raise DomainError("psi0 must be a finite, nonzero 2-vector")
    if metric == "eta_inv":
        M = _eta_inverse(h)
    elif metric == "eta":
        M = naimark_operators(h).eta
    else:
        raise DomainError(f"unknown metric {metric!r}, expected 'eta_inv' or 'eta'")
    values = []
    for tau in tau_grid:
        t = float(tau)
        if not math.isfinite(t) or t < 0.0:
            raise DomainError(f"tau grid must be finite and nonnegative, got {t}")
        psi_t = _prop.propagator(a, t) @ psi
        values.append(float((psi_t.conj() @ M @ psi_t).real))
    return values
