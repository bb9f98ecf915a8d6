"""Independent numerical verification tools.

A Crank-Nicolson propagator for i hbar d_t psi = -(hbar^2 / 2 m(t)) d_x^2 psi,
spectral residual evaluators, and the quadrature helpers shared by the other
modules.  Everything here deliberately avoids the closed forms it is used to
check: derivatives are finite-difference or FFT-based and inner products are
grid quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainTooSmallError
from .invariant import InvariantParams, coefficients_at
from .profiles import MassProfile
from .states import WavePacket

__all__ = [
    "GridSpec",
    "PropagationReport",
    "PropagationResult",
    "propagate",
    "invariant_expectation_series",
    "invariant_expectation_on_grid",
    "tdse_residual",
    "quadrature_axis",
    "overlap",
    "packet_norm",
    "gauss_legendre",
    "spectral_derivative",
]

#: Span of the quadrature window in units of the widest Gaussian sigma.
QUADRATURE_SPAN = 12.0
DEFAULT_QUADRATURE_POINTS = 4001


# ---------------------------------------------------------------------------
# quadrature helpers
# ---------------------------------------------------------------------------

def quadrature_axis(packets, span: float = QUADRATURE_SPAN, n_points: int = DEFAULT_QUADRATURE_POINTS):
    """Uniform x-axis wide enough that every packet's Gaussian tail is < 1e-16.

    Half-width is span * max(1, 1/sqrt(2 k_r)) around the packet centers.
    """
    packets = list(packets)
    k_r_min = min(p.K.real for p in packets)
    half = span * max(1.0, 1.0 / math.sqrt(2.0 * k_r_min))
    lo = min(p.x_c for p in packets) - half
    hi = max(p.x_c for p in packets) + half
    return np.linspace(lo, hi, n_points)

def overlap(bra: WavePacket, ket: WavePacket, x=None) -> complex:
    """<bra|ket> by trapezoid quadrature on a shared axis."""
    if x is None:
        x = quadrature_axis((bra, ket))
    return complex(np.trapezoid(np.conjugate(bra(x)) * ket(x), x))

def packet_norm(packet: WavePacket, x=None) -> float:
    """L2 norm of the packet."""
    return math.sqrt(overlap(packet, packet, x=x).real)

def gauss_legendre(a: float, b: float, n: int):
    """Gauss-Legendre nodes and weights on [a, b]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * nodes, half * weights

def spectral_derivative(values, dx: float, order: int = 1):
    """FFT derivative on a uniform grid; safe only for states that decay well inside it."""
    n = len(values)
    k = 2.0 * math.pi * np.fft.fftfreq(n, d=dx)
    return np.fft.ifft((1j * k) ** order * np.fft.fft(values))


# ---------------------------------------------------------------------------
# Crank-Nicolson propagation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Uniform space-time grid for a propagation run.

    Crank-Nicolson is unconditionally stable; the advisory ratio
    dt * max|mu_dot| * hbar / dx^2 recorded in the diagnostics only flags
    accuracy, not stability.
    """

    x_min: float = -20.0
    x_max: float = 20.0
    n_points: int = 2048
    dt: float = 1e-3
    t_final: float = 2.0

    def __post_init__(self):
        if self.n_points < 64:
            raise ValueError(f"n_points must be >= 64, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise ValueError("need x_max > x_min")
        if self.dt <= 0 or self.t_final < 0:
            raise ValueError("need dt > 0 and t_final >= 0")

    @property
    def x_axis(self):
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)


@dataclass(frozen=True)
class PropagationReport:
    fidelity: float | None
    invariant_drift: float | None
    norm_drift: float
    steps: int
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PropagationResult:
    psi: np.ndarray
    report: PropagationReport
    snapshots: list  # (t, psi) pairs including the initial and final states


def _fidelity(a, b, dx: float) -> float:
    num = abs(np.sum(np.conjugate(a) * b) * dx)
    den = math.sqrt(float(np.sum(np.abs(a) ** 2) * dx) * float(np.sum(np.abs(b) ** 2) * dx))
    return num / den


def propagate(
    initial,
    profile: MassProfile,
    spec: GridSpec,
    hbar: float = 1.0,
    params: InvariantParams | None = None,
    reference=None,
    record_every: int = 0,
    boundary_tol: float = 1e-6,
) -> PropagationResult:
    """Crank-Nicolson evolution with the mass evaluated at each step midpoint.

    Dirichlet boundaries; one tridiagonal solve per step.  The initial state
    must have negligible boundary amplitude (< 1e-12), and the run aborts with
    ``DomainTooSmallError`` if the evolving state reaches ``boundary_tol`` at
    the edges.

    Parameters
    ----------
    initial:
        Complex samples of psi(x, 0) on ``spec.x_axis``.
    params:
        If given, the invariant expectation is tracked on snapshots and its
        maximum relative drift reported.
    reference:
        If given, samples of the expected final state; the report carries the
        normalized overlap fidelity against it.
    record_every:
        Snapshot stride in steps; 0 picks a stride that yields ~50 snapshots.
    """
    x = spec.x_axis
    dx = spec.dx
    psi = np.asarray(initial, dtype=complex).copy()
    if psi.shape != x.shape:
        raise ValueError("initial state must be sampled on spec.x_axis")
    if max(abs(psi[0]), abs(psi[-1])) > 1e-12:
        raise DomainTooSmallError("initial state has non-negligible boundary amplitude")

    n_steps = int(round(spec.t_final / spec.dt)) if spec.t_final > 0 else 0
    dt = spec.t_final / n_steps if n_steps else 0.0
    if record_every <= 0:
        record_every = max(1, n_steps // 50) if n_steps else 1

    mu_dot_max = max(1.0 / profile.mass_at(0.0), 1.0 / profile.mass_at(spec.t_final))
    norm0 = math.sqrt(float(np.sum(np.abs(psi) ** 2) * dx))
    norm_drift = 0.0
    snapshots = [(0.0, psi.copy())]

    n = spec.n_points
    ab = np.empty((3, n), dtype=complex)
    for step in range(n_steps):
        t_mid = (step + 0.5) * dt
        m_mid = profile.mass_at(t_mid)
        lam = dt * hbar / (4.0 * m_mid * dx * dx)
        # A psi_new = B psi with A = 1 + (i dt / 2 hbar) H, B its conjugate stencil
        rhs = (1.0 - 2j * lam) * psi
        rhs[1:] += 1j * lam * psi[:-1]
        rhs[:-1] += 1j * lam * psi[1:]
        ab[0, :] = -1j * lam
        ab[1, :] = 1.0 + 2j * lam
        ab[2, :] = -1j * lam
        psi = solve_banded((1, 1), ab, rhs)

        if max(abs(psi[0]), abs(psi[-1])) > boundary_tol:
            raise DomainTooSmallError(
                f"boundary amplitude exceeded {boundary_tol:g} at t = {(step + 1) * dt:.6g}"
            )
        norm = math.sqrt(float(np.sum(np.abs(psi) ** 2) * dx))
        norm_drift = max(norm_drift, abs(norm - norm0) / norm0)
        if (step + 1) % record_every == 0 or step + 1 == n_steps:
            snapshots.append(((step + 1) * dt, psi.copy()))

    fidelity = None
    if reference is not None:
        fidelity = _fidelity(psi, np.asarray(reference, dtype=complex), dx)

    invariant_drift = None
    if params is not None:
        series = invariant_expectation_series(snapshots, params, profile, x)
        values = np.array([v.real for _, v in series])
        invariant_drift = float(np.max(np.abs(values - values[0])) / abs(values[0]))

    report = PropagationReport(
        fidelity=fidelity,
        invariant_drift=invariant_drift,
        norm_drift=norm_drift,
        steps=n_steps,
        diagnostics={
            "stability_ratio": dt * mu_dot_max * hbar / (dx * dx) if n_steps else 0.0,
            "dt_effective": dt,
            "boundary_final": float(max(abs(psi[0]), abs(psi[-1]))),
        },
    )
    return PropagationResult(psi=psi, report=report, snapshots=snapshots)


# ---------------------------------------------------------------------------
# invariant expectation and residuals on the grid
# ---------------------------------------------------------------------------

def invariant_expectation_on_grid(
    psi, x, params: InvariantParams, profile: MassProfile, t: float
) -> complex:
    """<psi| I(t) |psi> with FFT derivatives; not normalized by ||psi||^2."""
    s = coefficients_at(params, profile, t)
    dx = x[1] - x[0]
    hbar = params.hbar
    dpsi = spectral_derivative(psi, dx, 1)
    d2psi = spectral_derivative(psi, dx, 2)
    p2_psi = -(hbar**2) * d2psi
    anticomm_psi = -1j * hbar * (2.0 * x * dpsi + psi)  # {x,p} psi = -i hbar (2 x psi' + psi)
    integrand = np.conjugate(psi) * (
        s.alpha * p2_psi + params.beta * x**2 * psi + s.gamma * anticomm_psi
    )
    return complex(np.trapezoid(integrand, x))


def invariant_expectation_series(
    snapshots, params: InvariantParams, profile: MassProfile, x
) -> list:
    """[(t, <I>)] over propagation snapshots sharing the grid ``x``."""
    return [
        (t, invariant_expectation_on_grid(psi, x, params, profile, t))
        for t, psi in snapshots
    ]


def tdse_residual(
    psi_of_t,
    profile: MassProfile,
    t: float,
    spec: GridSpec,
    hbar: float = 1.0,
    h_t: float = 1e-5,
) -> float:
    """Relative L2 residual of i hbar d_t psi - H psi at time t.

    ``psi_of_t`` maps a time to samples on ``spec.x_axis``; the time
    derivative is a central difference at step ``h_t`` and the second space
    derivative is spectral.
    """
    if t < h_t:
        raise ValueError(f"need t >= h_t, got t = {t}, h_t = {h_t}")
    x = spec.x_axis
    dx = spec.dx
    psi_plus = np.asarray(psi_of_t(t + h_t), dtype=complex)
    psi_minus = np.asarray(psi_of_t(t - h_t), dtype=complex)
    psi_0 = np.asarray(psi_of_t(t), dtype=complex)
    dpsi_dt = (psi_plus - psi_minus) / (2.0 * h_t)
    h_psi = -(hbar**2) / (2.0 * profile.mass_at(t)) * spectral_derivative(psi_0, dx, 2)
    num = math.sqrt(float(np.sum(np.abs(1j * hbar * dpsi_dt - h_psi) ** 2) * dx))
    den = math.sqrt(float(np.sum(np.abs(h_psi) ** 2) * dx))
    return num / den
