"""Eigenstates of the invariant, their phases, and full time-dependent solutions.

States are complex polynomials times a Gaussian ``exp(-K (x - x_c)^2)``.
The ladder operators act on this family in closed form, so every excited
state is available with machine-precision coefficients at any time; no
numerical differentiation enters the construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConsistencyError
from .invariant import (
    CoefficientState,
    InvariantParams,
    coefficient_rates,
    coefficients_at,
)
from .profiles import MassProfile

#: Ladder recursion cap; polynomial coefficient growth degrades double-precision
#: orthogonality well before triple digits.
DEFAULT_MAX_N = 64


@dataclass(frozen=True, eq=False)
class WavePacket:
    """A polynomial-times-Gaussian state: prefactor * P(x - x_c) * exp(-K (x - x_c)^2).

    ``poly`` holds complex coefficients in ascending degree, in the shifted
    variable y = x - x_c.  Re(K) > 0 is required for normalizability.
    """

    poly: np.ndarray
    K: complex
    x_c: float
    prefactor: complex
    t: float

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.poly, dtype=complex))
        object.__setattr__(self, "poly", coeffs)
        if not complex(self.K).real > 0:
            raise ValueError(f"Re(K) = {complex(self.K).real} must be > 0")

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def __call__(self, x):
        y = np.asarray(x, dtype=float) - self.x_c
        values = self.prefactor * npoly.polyval(y, self.poly) * np.exp(-self.K * y * y)
        return values if np.ndim(x) else complex(values)


@dataclass(frozen=True)
class PhaseTriple:
    """Dynamical, geometric, and total phase of mode n at one time."""

    n: int
    theta_d: float
    theta_g: complex
    theta_total: complex


def vacuum(params: InvariantParams, profile: MassProfile, t: float) -> WavePacket:
    """Ground state phi_0: unit-norm Gaussian with prefactor (kappa/(pi hbar sigma))^(1/4)."""
    s = coefficients_at(params, profile, t)
    zeta = (s.kappa / (math.pi * params.hbar * s.sigma)) ** 0.25
    return WavePacket(poly=[1.0 + 0.0j], K=s.K, x_c=0.0, prefactor=zeta, t=t)


def raising_map(poly, sigma: float, kappa0: float, hbar: float):
    """Polynomial action of the creation operator on P(y) exp(-K y^2).

    The Gaussian-derivative terms combine exactly (using
    K = (kappa0 + i gamma) / (2 hbar sigma^2)), leaving

        P  ->  (1/sqrt(2 hbar kappa0)) * (-i hbar sigma P' + (2 i kappa0/sigma) y P)

    with the Gaussian factor untouched.
    """
    c = 1.0 / math.sqrt(2.0 * hbar * kappa0)
    term_deriv = -1j * hbar * sigma * npoly.polyder(poly)
    term_mult = (2j * kappa0 / sigma) * npoly.polymulx(poly)
    return c * npoly.polyadd(term_deriv, term_mult)


def lowering_map(poly, sigma: float, kappa0: float, hbar: float):
    """Polynomial action of the annihilation operator: P -> -i hbar sigma P' / sqrt(2 hbar kappa0).

    On the vacuum (constant P) this is the zero polynomial exactly; the
    cancellation of the y-proportional terms is algebraic, not numerical.
    """
    c = 1.0 / math.sqrt(2.0 * hbar * kappa0)
    poly = np.atleast_1d(np.asarray(poly, dtype=complex))
    deriv = npoly.polyder(poly) if len(poly) > 1 else np.zeros(1, dtype=complex)
    return c * (-1j * hbar * sigma) * np.atleast_1d(deriv)


def raise_state(
    packet: WavePacket, n_current: int, params: InvariantParams, state: CoefficientState
) -> WavePacket:
    """phi_{n+1} = a^dagger phi_n / sqrt(n + 1), as an exact polynomial map."""
    if packet.t != state.t:
        raise ConsistencyError(
            f"packet at t = {packet.t} but coefficients at t = {state.t}"
        )
    new_poly = raising_map(packet.poly, state.sigma, params.kappa0, params.hbar)
    new_poly = new_poly / math.sqrt(n_current + 1.0)
    return WavePacket(poly=new_poly, K=packet.K, x_c=packet.x_c, prefactor=packet.prefactor, t=packet.t)


def lower_state(
    packet: WavePacket, n_current: int, params: InvariantParams, state: CoefficientState
) -> WavePacket:
    """phi_{n-1} = a phi_n / sqrt(n) for n >= 1."""
    if n_current < 1:
        raise ValueError("cannot lower below the vacuum")
    if packet.t != state.t:
        raise ConsistencyError(
            f"packet at t = {packet.t} but coefficients at t = {state.t}"
        )
    new_poly = lowering_map(packet.poly, state.sigma, params.kappa0, params.hbar)
    new_poly = new_poly / math.sqrt(n_current)
    return WavePacket(poly=new_poly, K=packet.K, x_c=packet.x_c, prefactor=packet.prefactor, t=packet.t)


def eigenstate(
    params: InvariantParams,
    profile: MassProfile,
    t: float,
    n: int,
    max_n: int = DEFAULT_MAX_N,
) -> WavePacket:
    """phi_n built by n exact applications of the raising map to the vacuum."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > max_n:
        raise ValueError(
            f"n = {n} exceeds the conditioning cap max_n = {max_n}; "
            "raise max_n explicitly if you accept the coefficient growth"
        )
    state = coefficients_at(params, profile, t)
    packet = vacuum(params, profile, t)
    for k in range(n):
        packet = raise_state(packet, k, params, state)
    return packet


def energy_expectation(params: InvariantParams, profile: MassProfile, t: float, n: int) -> float:
    """Diagonal matrix element of the Hamiltonian: (hbar beta / 2 kappa0) (n + 1/2) mu_dot."""
    mu_dot = 1.0 / profile.mass_at(t)
    return params.hbar * params.beta / (2.0 * params.kappa0) * (n + 0.5) * mu_dot


def dynamical_phase(params: InvariantParams, profile: MassProfile, t: float, n: int) -> float:
    """theta_n^d = -(beta / 2 kappa0) (n + 1/2) mu(t); zero at t = 0."""
    mu = profile.mu_at(t)
    return -params.beta / (2.0 * params.kappa0) * (n + 0.5) * mu


def geometric_phase(
    params: InvariantParams,
    profile: MassProfile,
    t: float,
    n: int,
    unitary: bool = False,
) -> complex:
    """Geometric phase of mode n, in one of two conventions.

    Default (``unitary=False``) is the ladder-recursion closed form

        -(n + 1/2) gamma / (2 kappa0) + (i/4) ln(2 sigma^(2n) / pi)
        + ((n + 1) / 2) arctan(gamma / kappa0),

    whose imaginary part grows like (n/2) ln sigma and therefore changes the
    amplitude of psi_n over time for n >= 1.

    ``unitary=True`` replaces the n-dependent pieces by

        -(n + 1/2) gamma / (2 kappa0) + (i/4) ln(2/pi)
        + (n + 1/2) arctan(gamma / kappa0),

    which keeps ||psi_n|| constant and makes phi_n exp(i theta_n) an exact
    solution of the equation of motion for every n.  The two conventions
    coincide for n = 0.

    Since kappa0 > 0 and gamma(t) is continuous, the principal arctan branch
    is continuous here; see ``unwrap_angle_series`` for time-series use.
    """
    s = coefficients_at(params, profile, t)
    k0 = params.kappa0
    angle = math.atan(s.gamma / k0)
    if unitary:
        real = -(n + 0.5) * s.gamma / (2.0 * k0) + (n + 0.5) * angle
        imag = 0.25 * math.log(2.0 / math.pi)
    else:
        real = -(n + 0.5) * s.gamma / (2.0 * k0) + 0.5 * (n + 1.0) * angle
        imag = 0.25 * math.log(2.0 * s.sigma ** (2 * n) / math.pi)
    return complex(real, imag)


def berry_connection(
    params: InvariantParams,
    profile: MassProfile,
    t: float,
    n: int,
    unitary: bool = False,
) -> complex:
    """Closed form of <n| d/dt |n>.

    Default (``unitary=False``) evaluates the ladder-recursion form

        zeta_dot/zeta - Lambda_r_dot/(4 Lambda_r) + n sigma_dot/(2 sigma)
        - (i / 2 kappa0) (n + 1) m sigma_dot^2
        + (i / 4 kappa0) d(m sigma sigma_dot)/dt,

    the time derivative of the default ``geometric_phase`` (up to the factor
    i).  ``unitary=True`` evaluates

        zeta_dot/zeta - Lambda_dot/(4 Lambda_r) + n Lambda2,

    which is purely imaginary and agrees with the quadrature oracle
    ``int phi_n^* d_t phi_n dx`` for every n; the default form does so only
    for n = 0.  All derivatives come from the closed-form chain rule.
    """
    s, r = coefficient_rates(params, profile, t)
    k0 = params.kappa0
    zeta_rate = -0.5 * r.sigma_dot / s.sigma  # d/dt ln zeta
    if unitary:
        vacuum_term = zeta_rate - r.K_dot / (4.0 * s.k_r)
        lambda2 = 1j * r.mu_dot * (k0**2 - s.gamma**2) / (2.0 * k0 * s.alpha)
        return vacuum_term + n * lambda2
    real = zeta_rate - r.K_dot.real / (4.0 * s.k_r) + n * r.sigma_dot / (2.0 * s.sigma)
    imag = (
        -(n + 1.0) * r.m_sigma_dot_sq / (2.0 * k0)
        + r.d_m_sigma_sigma_dot / (4.0 * k0)
    )
    return complex(real, imag)


def phase_triple(
    params: InvariantParams,
    profile: MassProfile,
    t: float,
    n: int,
    unitary: bool = False,
) -> PhaseTriple:
    """Dynamical + geometric phases with theta_total = theta_d + theta_g by construction."""
    theta_d = dynamical_phase(params, profile, t, n)
    theta_g = geometric_phase(params, profile, t, n, unitary=unitary)
    return PhaseTriple(n=n, theta_d=theta_d, theta_g=theta_g, theta_total=theta_d + theta_g)


def full_solution(
    params: InvariantParams,
    profile: MassProfile,
    t: float,
    n: int,
    normalize: bool = False,
) -> WavePacket:
    """psi_n = phi_n exp(i theta_n), an exact solution of the equation of motion.

    The unitary phase convention is used, so the result solves
    i hbar d_t psi = -(hbar^2 / 2 m) d_x^2 psi for every n (for n = 0 the two
    phase conventions are identical).  Under the default amplitude convention
    the squared norm is sqrt(pi/2) rather than 1, e.g. the ground-state
    prefactor reduces to (kappa0 / (2 hbar sigma^2))^(1/4); pass
    ``normalize=True`` for a unit-norm state.
    """
    phi = eigenstate(params, profile, t, n)
    triple = phase_triple(params, profile, t, n, unitary=True)
    prefactor = phi.prefactor * cmath.exp(1j * triple.theta_total)
    if normalize:
        prefactor /= (math.pi / 2.0) ** 0.25
    return WavePacket(poly=phi.poly, K=phi.K, x_c=phi.x_c, prefactor=prefactor, t=t)


def apply_momentum(packet: WavePacket, hbar: float) -> WavePacket:
    """-i hbar d/dx applied in closed form; the Gaussian factor is unchanged."""
    poly = packet.poly
    deriv = npoly.polyder(poly) if len(poly) > 1 else np.zeros(1, dtype=complex)
    new_poly = -1j * hbar * npoly.polyadd(np.atleast_1d(deriv), -2.0 * packet.K * npoly.polymulx(poly))
    return WavePacket(poly=new_poly, K=packet.K, x_c=packet.x_c, prefactor=packet.prefactor, t=packet.t)


def apply_position(packet: WavePacket) -> WavePacket:
    """Multiply by x = y + x_c."""
    new_poly = npoly.polyadd(npoly.polymulx(packet.poly), packet.x_c * packet.poly)
    return WavePacket(poly=new_poly, K=packet.K, x_c=packet.x_c, prefactor=packet.prefactor, t=packet.t)


def unwrap_angle_series(angles: np.ndarray) -> np.ndarray:
    """Continuity pass for arctan(gamma/kappa0) samples along a time series.

    The principal branch is already continuous when kappa0 > 0, so this is a
    no-op there; it guards parameter regimes where the ratio sweeps widely.
    """
    return np.unwrap(np.asarray(angles, dtype=float), period=math.pi)


def phase_series(
    params: InvariantParams,
    profile: MassProfile,
    ts,
    n: int,
    unitary: bool = False,
):
    """PhaseTriple samples over the times ``ts`` with branch continuity enforced.

    The arctan(gamma/kappa0) component is unwrapped against the previous
    sample before the phases are assembled.
    """
    ts = np.asarray(ts, dtype=float)
    states = [coefficients_at(params, profile, t) for t in ts]
    angles = unwrap_angle_series([math.atan(s.gamma / params.kappa0) for s in states])
    k0 = params.kappa0
    triples = []
    for t, s, angle in zip(ts, states, angles):
        theta_d = dynamical_phase(params, profile, t, n)
        if unitary:
            real = -(n + 0.5) * s.gamma / (2.0 * k0) + (n + 0.5) * angle
            imag = 0.25 * math.log(2.0 / math.pi)
        else:
            real = -(n + 0.5) * s.gamma / (2.0 * k0) + 0.5 * (n + 1.0) * angle
            imag = 0.25 * math.log(2.0 * s.sigma ** (2 * n) / math.pi)
        theta_g = complex(real, imag)
        triples.append(PhaseTriple(n=n, theta_d=theta_d, theta_g=theta_g, theta_total=theta_d + theta_g))
    return triples
