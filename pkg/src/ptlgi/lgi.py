"""Sequential sigma_y statistics and Leggett-Garg quantities.

Measurement model.  The system starts in the maximally mixed state I/2 and
sigma_y is measured projectively at three times t1 < t2 < t3.  Because the
evolution between measurements is non-unitary, every segment is explicitly
renormalized: the state reaching the first measurement is the normalized
evolution of I/2, the post-measurement state is the projected state divided
by its outcome probability, and the conditional evolution over the pair's
span is renormalized again.  Joint probabilities are then

    p(a, b) = p(a at t_i) * p(b at t_j | a at t_i),

which is nonnegative, sums to one, and is marginally consistent by
construction.  This sequential chain is the ground truth for everything
else in the module.

Schedules.  The spacing tau = J(t2-t1) = J(t3-t2) is always equal; the
preparation-to-first-measurement time is a convention.  The default
(EQUAL) sets J*t1 = tau, which is the convention under which the closed
forms below hold; ZERO and EXPLICIT are provided for sensitivity checks.

Closed forms.  The two-time correlator of the chain collapses to a rational
function of the kernel pair (k0, k1).  With

    A = 1 + 2 a^2 k1^2,  B = 2 a k1^2,  G = 2 k0^2 - A      (a = alpha)

evaluated at the span and A_i, B_i at the first measurement time,

    C(t_i; span) = (A_i*(G*A + B^2) + B_i*B*(G + A)) / (A_i*(A^2 - B^2)).

k3_closed_form and wq_closed_form are assembled from these terms, so they
are polynomial ratios in (k0, k1): total functions with no poles, exact at
the exceptional point, and independent of the matrix chain apart from the
shared kernel evaluation.

k3_series_variant is a known-defective cosh-harmonic series for the same
quantity, kept only so the verification suite can quantify its failure (it
misses the unitary-limit reduction by more than an order of magnitude);
never use it for physics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple

import numpy as np

from .errors import DegenerateBranchError, DomainError, NumericalError
from .propagator import Kernel, evolve_state, kernel
from .ptcore import ID2, SIGMA_Y

DEGENERATE_BRANCH_EPS = 1e-14

PAIRS = ((1, 2), (2, 3), (1, 3))
WIGNER_FORMS = ("w1", "w2", "w3")

_MAXIMALLY_MIXED = 0.5 * ID2


class Tau0Mode(Enum):
    EQUAL = "equal"
    ZERO = "zero"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class MeasurementSchedule:
    """Three equally spaced measurement times J*t in {tau0, tau0+tau, tau0+2*tau}."""

    tau: float
    tau0: float
    mode: Tau0Mode

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise DomainError(f"spacing tau must be positive and finite, got {self.tau}")
        if not (math.isfinite(self.tau0) and self.tau0 >= 0.0):
            raise DomainError(f"tau0 must be nonnegative and finite, got {self.tau0}")
        if self.mode is Tau0Mode.EQUAL and self.tau0 != self.tau:
            raise DomainError("EQUAL mode requires tau0 == tau")
        if self.mode is Tau0Mode.ZERO and self.tau0 != 0.0:
            raise DomainError("ZERO mode requires tau0 == 0")

    @classmethod
    def equal_spacing(cls, tau: float) -> "MeasurementSchedule":
        return cls(float(tau), float(tau), Tau0Mode.EQUAL)

    @classmethod
    def zero(cls, tau: float) -> "MeasurementSchedule":
        return cls(float(tau), 0.0, Tau0Mode.ZERO)

    @classmethod
    def explicit(cls, tau: float, tau0: float) -> "MeasurementSchedule":
        return cls(float(tau), float(tau0), Tau0Mode.EXPLICIT)

    @property
    def times(self) -> tuple[float, float, float]:
        return (self.tau0, self.tau0 + self.tau, self.tau0 + 2.0 * self.tau)


def sigma_y_projectors() -> tuple[np.ndarray, np.ndarray]:
    """Projectors (Pi+, Pi-) = ((I +/- sigma_y)/2) onto the +/-1 outcomes."""
    return 0.5 * (ID2 + SIGMA_Y), 0.5 * (ID2 - SIGMA_Y)


@dataclass(frozen=True)
class JointProbTable:
    """Joint outcome probabilities p(a, b) for one time pair.

    ``degenerate`` marks first-measurement branches with probability below
    1e-14; their entries are set to zero instead of aborting a sweep.
    """

    pair: tuple[int, int]
    p: dict[tuple[int, int], float]
    degenerate: bool


def _validate_alpha(alpha: float) -> float:
    a = float(alpha)
    if not (math.isfinite(a) and a >= 0.0):
        raise DomainError(f"alpha must be finite and nonnegative, got {alpha}")
    return a


def _pair_times(sched: MeasurementSchedule, pair) -> tuple[float, float]:
    if tuple(pair) not in PAIRS:
        raise DomainError(f"pair must be one of {PAIRS}, got {pair}")
    times = sched.times
    i, j = tuple(pair)
    return times[i - 1], times[j - 1] - times[i - 1]


def _clip_probability(p: float) -> float:
    if p < -1e-10 or p > 1.0 + 1e-10:
        raise NumericalError(f"probability {p} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def joint_table(alpha: float, sched: MeasurementSchedule, pair) -> JointProbTable:
    """All four sequential joint probabilities for one measurement pair."""
    a_ratio = _validate_alpha(alpha)
    t_first, span = _pair_times(sched, pair)
    rho = evolve_state(_MAXIMALLY_MIXED, a_ratio, t_first)
    plus, minus = sigma_y_projectors()
    projectors = {+1: plus, -1: minus}
    table: dict[tuple[int, int], float] = {}
    degenerate = False
    for a in (+1, -1):
        pa = _clip_probability(float((projectors[a] @ rho).trace().real))
        if pa < DEGENERATE_BRANCH_EPS:
            degenerate = True
            table[(a, +1)] = 0.0
            table[(a, -1)] = 0.0
            continue
        post = projectors[a] @ rho @ projectors[a] / pa
        conditional = evolve_state(post, a_ratio, span)
        for b in (+1, -1):
            pb = _clip_probability(float((projectors[b] @ conditional).trace().real))
            table[(a, b)] = pa * pb
    return JointProbTable(pair=tuple(pair), p=table, degenerate=degenerate)


def joint_probability(
    alpha: float,
    sched: MeasurementSchedule,
    pair,
    a: int,
    b: int,
    strict: bool = False,
) -> float:
    """One entry p(a, b) of the sequential joint table.

    With ``strict=True`` a degenerate first branch raises
    DegenerateBranchError instead of contributing a flagged zero.
    """
    if a not in (+1, -1) or b not in (+1, -1):
        raise DomainError(f"outcomes must be +1 or -1, got {(a, b)}")
    table = joint_table(alpha, sched, pair)
    if strict and table.degenerate:
        raise DegenerateBranchError(
            f"first-measurement branch below {DEGENERATE_BRANCH_EPS} for pair {pair}"
        )
    return table.p[(a, b)]


def correlator(alpha: float, sched: MeasurementSchedule, pair) -> float:
    """Two-time correlator <sigma_y(t_i) sigma_y(t_j)> = sum_ab a*b*p(a,b)."""
    table = joint_table(alpha, sched, pair)
    return sum(a * b * p for (a, b), p in table.p.items())


def correlators(alpha: float, sched: MeasurementSchedule) -> tuple[float, float, float]:
    """(C12, C23, C13) in one call."""
    return tuple(correlator(alpha, sched, pair) for pair in PAIRS)  # type: ignore[return-value]


@dataclass(frozen=True)
class LGIResult:
    """Outcome of one Leggett-Garg evaluation.

    ``value_closed`` is filled when the closed form applies (EQUAL spacing;
    for Wigner results only the w1 inequality with signs (-1,-1,-1)).
    ``violation`` compares value_direct with the macrorealist bound:
    1 for the standard form, 0 for the Wigner family.
    """

    kind: str  # "k3" or "wigner"
    value_direct: float
    value_closed: float | None
    violation: bool
    degenerate: bool = False
    form: str | None = None
    signs: tuple[int, int, int] | None = None


# --- closed forms in kernel variables ---------------------------------------


def _abg(alpha: float, k: Kernel) -> tuple[float, float, float, float]:
    """(A, B, G, damp): state/conditional scalars, scaled by exp(-2 log_scale).

    damp is the scaled representation of the constant 1; all closed-form
    ratios below are homogeneous, so the scale cancels.
    """
    damp = math.exp(-2.0 * k.log_scale)
    b = 2.0 * alpha * k.k1 * k.k1
    a_den = damp + 2.0 * alpha * alpha * k.k1 * k.k1
    g = 2.0 * k.k0 * k.k0 - a_den
    return a_den, b, g, damp


def _double_time(k: Kernel) -> Kernel:
    """Kernel at 2*tau from the kernel at tau (double-angle identities)."""
    damp = math.exp(-2.0 * k.log_scale)
    return Kernel(
        k0=2.0 * k.k0 * k.k0 - damp,
        k1=2.0 * k.k0 * k.k1,
        regime=k.regime,
        log_scale=2.0 * k.log_scale,
    )


def k3_closed_form(alpha: float, tau: float) -> float:
    """Standard LG parameter K = C12 + C23 - C13 under EQUAL spacing.

    Rational in the kernel pair, hence defined for every alpha >= 0 and
    tau >= 0 including the exceptional point; agrees with k3_direct to
    rounding error.
    """
    a = _validate_alpha(alpha)
    k1t = kernel(a, tau)
    k2t = _double_time(k1t)
    A, B, G, _ = _abg(a, k1t)
    A2, B2, G2, _ = _abg(a, k2t)
    p_span = G * A + B * B
    s_span = 2.0 * k1t.k0 * k1t.k0
    q_span = A * A - B * B
    p2 = G2 * A2 + B2 * B2
    s2 = 2.0 * k2t.k0 * k2t.k0
    q2 = A2 * A2 - B2 * B2
    c12 = (A * p_span + B * B * s_span) / (A * q_span)
    c23 = (A2 * p_span + B2 * B * s_span) / (A2 * q_span)
    c13 = (A * p2 + B * B2 * s2) / (A * q2)
    return c12 + c23 - c13


def wq_closed_form(alpha: float, tau: float) -> float:
    """Closed form of the w1 Wigner quantity with signs (-1, -1, -1):

        W = p23(-1,-1) - p12(+1,-1) - p13(-1,-1),

    under EQUAL spacing.  Same pole-free kernel representation as
    k3_closed_form; the macrorealist bound is W <= 0.
    """
    a = _validate_alpha(alpha)
    k1t = kernel(a, tau)
    k2t = _double_time(k1t)
    A, B, _, _ = _abg(a, k1t)
    A2, B2, _, _ = _abg(a, k2t)
    s_span = 2.0 * k1t.k0 * k1t.k0
    s2 = 2.0 * k2t.k0 * k2t.k0
    p23 = (A2 + B2) * s_span / (4.0 * A2 * (A - B))
    p12 = (A - B) * 2.0 * (1.0 + a) ** 2 * k1t.k1 * k1t.k1 / (4.0 * A * (A + B))
    p13 = (A + B) * s2 / (4.0 * A * (A2 - B2))
    return p23 - p12 - p13


_SERIES_COEFFS = (
    lambda a2: 16 * a2 + 26 * a2**2 - 44 * a2**3 + 12 * a2**4,
    lambda a2: 64 - 104 * a2 + 20 * a2**2 + 28 * a2**3 - 14 * a2**4,
    lambda a2: 4 * (-8 - 8 * a2 + 23 * a2**2 - 15 * a2**3 + 6 * a2**4),
    lambda a2: 2 * (-16 + 24 * a2 + a2**2 - 5 * a2**3),
    lambda a2: 8 * (6 - 3 * a2 - 6 * a2**2 + 2 * a2**3),
    lambda a2: -24 + 16 * a2 + 14 * a2**2,
    lambda a2: 4 * a2 - 4 * a2**2 + 8 * a2**3,
    lambda a2: 12 * a2 - 13 * a2**2 - 2 * a2**3,
    lambda a2: -2 * a2 - 4 * a2**2 + 4 * a2**3,
    lambda a2: a2**2,
)


def k3_series_variant(alpha: float, tau: float) -> float:
    """Defective cosh-harmonic series for the standard LG parameter.

    Diagnostic only: the coefficient table does not reproduce the
    unitary-limit value (it gives 44 instead of 1.5 at alpha=0,
    tau=pi/6) and has a 0/0 at alpha=1.  Kept so the verification
    suite can report the defect; k3_closed_form is authoritative.
    """
    a = _validate_alpha(alpha)
    if abs(a - 1.0) <= 1e-9:
        raise DomainError("series variant is 0/0 at the exceptional point")
    a2 = a * a
    s2 = a2 - 1.0

    def ch(n: int) -> float:
        if s2 >= 0.0:
            return math.cosh(2.0 * n * tau * math.sqrt(s2))
        return math.cos(2.0 * n * tau * math.sqrt(-s2))

    x2, x4 = ch(1), ch(2)
    norm = (
        (-1.0 + a * x2)
        * (-1.0 + a * x4)
        * (-1.0 + a2 * x2)
        * (-1.0 + a2 * x4)
        * (1.0 + a * x2)
        * (1.0 + a * x4)
    )
    if abs(norm) < 1e-12:
        raise NumericalError(f"series normalization vanished (N={norm})")
    return sum(c(a2) * ch(n) for n, c in enumerate(_SERIES_COEFFS)) / norm


# --- direct (chain) evaluations ----------------------------------------------


def k3_direct(alpha: float, sched: MeasurementSchedule) -> LGIResult:
    """Standard LG parameter from the sequential chain."""
    tables = [joint_table(alpha, sched, pair) for pair in PAIRS]
    c12, c23, c13 = (sum(a * b * p for (a, b), p in t.p.items()) for t in tables)
    value = c12 + c23 - c13
    degenerate = any(t.degenerate for t in tables)
    closed = None
    if sched.mode is Tau0Mode.EQUAL and not degenerate:
        closed = k3_closed_form(alpha, sched.tau)
    return LGIResult(
        kind="k3",
        value_direct=value,
        value_closed=closed,
        violation=value > 1.0,
        degenerate=degenerate,
    )


_WIGNER_TERMS: dict[str, Callable] = {
    # (sign, pair, outcome picker) triples for each inequality family
    "w1": lambda m1, m2, m3: (
        (+1, (2, 3), (m2, m3)),
        (-1, (1, 2), (-m1, m2)),
        (-1, (1, 3), (m1, m3)),
    ),
    "w2": lambda m1, m2, m3: (
        (+1, (1, 3), (m1, m3)),
        (-1, (1, 2), (m1, -m2)),
        (-1, (2, 3), (m2, m3)),
    ),
    "w3": lambda m1, m2, m3: (
        (+1, (1, 2), (m1, m2)),
        (-1, (2, 3), (m2, -m3)),
        (-1, (1, 3), (m1, m3)),
    ),
}


def wigner_direct(
    alpha: float,
    sched: MeasurementSchedule,
    form: str,
    m1: int,
    m2: int,
    m3: int,
) -> LGIResult:
    """One of the 24 Wigner-family inequalities, evaluated from joint tables.

    The left-hand side lies in [-2, 1]; macrorealism requires it to be <= 0.
    """
    if form not in WIGNER_FORMS:
        raise DomainError(f"form must be one of {WIGNER_FORMS}, got {form!r}")
    if any(m not in (+1, -1) for m in (m1, m2, m3)):
        raise DomainError(f"outcome signs must be +1 or -1, got {(m1, m2, m3)}")
    value = 0.0
    degenerate = False
    for sign, pair, (a, b) in _WIGNER_TERMS[form](m1, m2, m3):
        table = joint_table(alpha, sched, pair)
        degenerate = degenerate or table.degenerate
        value += sign * table.p[(a, b)]
    closed = None
    if (
        sched.mode is Tau0Mode.EQUAL
        and not degenerate
        and form == "w1"
        and (m1, m2, m3) == (-1, -1, -1)
    ):
        closed = wq_closed_form(alpha, sched.tau)
    return LGIResult(
        kind="wigner",
        value_direct=value,
        value_closed=closed,
        violation=value > 0.0,
        degenerate=degenerate,
        form=form,
        signs=(m1, m2, m3),
    )


def wigner_all(alpha: float, sched: MeasurementSchedule) -> list[LGIResult]:
    """All 24 Wigner-family inequalities in deterministic order."""
    return [
        wigner_direct(alpha, sched, form, m1, m2, m3)
        for form in WIGNER_FORMS
        for m1, m2, m3 in itertools.product((+1, -1), repeat=3)
    ]


# --- scalar maximization ------------------------------------------------------


class TauMax(NamedTuple):
    tau: float
    value: float
    at_boundary: bool


def _golden_section(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > 1e-8:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
    mid = 0.5 * (a + b)
    return mid, f(mid)


def maximize_over_tau(
    f: Callable[[float], float], tau_max: float, grid_step: float
) -> TauMax:
    """Deterministic maximization: coarse scan plus golden-section refinement.

    Every local maximum of the scan is refined to |d tau| < 1e-8 and ties
    within 1e-9 of the best value resolve to the smallest tau, so symmetric
    objectives (e.g. the unitary-limit LG parameter with equal peaks at
    pi/6 and 5*pi/6) return the first peak.  ``at_boundary`` flags maxima
    sitting at tau = tau_max.
    """
    if not (math.isfinite(tau_max) and tau_max > 0.0):
        raise DomainError(f"tau_max must be positive and finite, got {tau_max}")
    if not (math.isfinite(grid_step) and 0.0 < grid_step <= tau_max):
        raise DomainError(f"grid_step must be in (0, tau_max], got {grid_step}")
    n = int(math.floor(tau_max / grid_step + 1e-12))
    grid = [i * grid_step for i in range(1, n + 1)]
    if grid[-1] < tau_max - 1e-12 * max(1.0, tau_max):
        grid.append(tau_max)
    values = [f(t) for t in grid]

    candidates: list[tuple[float, float]] = []
    for i, v in enumerate(values):
        left = values[i - 1] if i > 0 else -math.inf
        right = values[i + 1] if i + 1 < len(values) else -math.inf
        if v >= left and v >= right:
            lo = grid[i - 1] if i > 0 else max(grid[i] - grid_step, 1e-12)
            hi = grid[i + 1] if i + 1 < len(values) else grid[i]
            if hi > lo:
                candidates.append(_golden_section(f, lo, hi))
            else:
                candidates.append((grid[i], v))

    best_value = max(v for _, v in candidates)
    tie = 1e-9 * max(1.0, abs(best_value))
    tau_star, value = min((t, v) for t, v in candidates if v >= best_value - tie)
    at_boundary = f(tau_max) >= value - 1e-12 * max(1.0, abs(value))
    return TauMax(tau_star, value, at_boundary)
