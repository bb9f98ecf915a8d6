"""Parameters of the quadratic invariant and its time-dependent coefficients.

The invariant is ``I(t) = alpha(t) p^2 + beta x^2 + gamma(t) {x, p}`` with

    gamma(t) = gamma0 - beta mu(t)
    alpha(t) = alpha0 - 2 gamma0 mu(t) + beta mu(t)^2

and the conserved combination ``gamma^2 - beta alpha = -kappa0^2``.  The
auxiliary width ``sigma = sqrt(alpha)`` and the complex Gaussian coefficient
``K = (kappa - i m sigma_dot) / (2 hbar sigma)`` drive everything downstream.
All time derivatives are available in closed form through ``mu_dot = 1/m``,
so nothing here is differentiated numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonDiagonalizableError, SingularCoefficientError
from .profiles import MassProfile


@dataclass(frozen=True)
class InvariantParams:
    """Constants defining one invariant; ``kappa0`` and ``omega`` are derived.

    The quadratic form is diagonalizable only for
    ``beta * alpha0 - gamma0**2 > 0``; in particular the degenerate point
    ``alpha0 = gamma0 = 0`` is unrepresentable.  ``kappa0`` is stored as the
    positive root so it cannot drift out of sync with the other constants.
    """

    alpha0: float
    beta: float
    gamma0: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("alpha0", "beta", "gamma0", "hbar"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonDiagonalizableError(f"{name} must be finite, got {value!r}")
        if self.hbar <= 0:
            raise NonDiagonalizableError(f"hbar must be > 0, got {self.hbar}")
        disc = self.beta * self.alpha0 - self.gamma0**2
        if disc <= 0:
            raise NonDiagonalizableError(
                f"beta*alpha0 - gamma0**2 = {disc!r} violates the "
                "diagonalizability condition beta*alpha0 - gamma0**2 > 0"
            )

    @property
    def kappa0(self) -> float:
        return math.sqrt(self.beta * self.alpha0 - self.gamma0**2)

    @property
    def omega(self) -> float:
        return 2.0 * self.kappa0


def validate_params(alpha0: float, beta: float, gamma0: float, hbar: float = 1.0) -> InvariantParams:
    """Validate the diagonalizability constraint and build the parameter set."""
    return InvariantParams(alpha0=alpha0, beta=beta, gamma0=gamma0, hbar=hbar)


@dataclass(frozen=True)
class CoefficientState:
    """All time-dependent scalars of the invariant at one instant."""

    t: float
    mu: float
    gamma: float
    alpha: float
    sigma: float
    kappa: float
    m_sigma_dot: float
    K: complex
    omega: float

    @property
    def k_r(self) -> float:
        return self.K.real

    @property
    def k_i(self) -> float:
        return self.K.imag


def coefficients_at(params: InvariantParams, profile: MassProfile, t: float) -> CoefficientState:
    """Evaluate mu, gamma, alpha, sigma, kappa, m*sigma_dot and K at time t.

    Raises
    ------
    SingularCoefficientError
        If alpha(t) <= 0 (sigma would not be real).
    """
    mu = profile.mu_at(t)
    gamma = params.gamma0 - params.beta * mu
    alpha = params.alpha0 - 2.0 * params.gamma0 * mu + params.beta * mu * mu
    if alpha <= 0:
        raise SingularCoefficientError(f"alpha(t) = {alpha!r} <= 0 at t = {t!r}")
    sigma = math.sqrt(alpha)
    kappa = params.kappa0 / sigma
    m_sigma_dot = -gamma / sigma  # m sigma_dot = -gamma/sigma, exact
    K = (kappa - 1j * m_sigma_dot) / (2.0 * params.hbar * sigma)
    return CoefficientState(
        t=t,
        mu=mu,
        gamma=gamma,
        alpha=alpha,
        sigma=sigma,
        kappa=kappa,
        m_sigma_dot=m_sigma_dot,
        K=K,
        omega=params.omega,
    )


def constraint_residual(state: CoefficientState, params: InvariantParams) -> float:
    """gamma^2 - beta*alpha + kappa0^2; zero to machine precision on valid states."""
    return state.gamma**2 - params.beta * state.alpha + params.kappa0**2


def auxiliary_residual(params: InvariantParams, profile: MassProfile, t: float, h: float) -> float:
    """Residual of the width equation sigma_dot^2 = mu_dot^2 (beta - kappa0^2/sigma^2).

    ``sigma_dot`` is taken from a central finite difference at step ``h`` so
    the check is independent of the closed-form derivative chain; for smooth
    profiles the residual is O(h^2).
    """
    if not (t >= h > 0):
        raise ValueError(f"need t >= h > 0, got t = {t}, h = {h}")
    s_plus = coefficients_at(params, profile, t + h).sigma
    s_minus = coefficients_at(params, profile, t - h).sigma
    sigma_dot_fd = (s_plus - s_minus) / (2.0 * h)
    state = coefficients_at(params, profile, t)
    mu_dot = 1.0 / profile.mass_at(t)
    return sigma_dot_fd**2 - mu_dot**2 * (params.beta - params.kappa0**2 / state.alpha)


@dataclass(frozen=True)
class CoefficientRates:
    """Closed-form time derivatives of the coefficient functions at one instant."""

    mu_dot: float
    gamma_dot: float
    alpha_dot: float
    sigma_dot: float
    kappa_dot: float
    K_dot: complex
    m_sigma_dot_sq: float  # m * sigma_dot^2
    d_m_sigma_dot: float  # d/dt (m sigma_dot)
    d_m_sigma_sigma_dot: float  # d/dt (m sigma sigma_dot)


def coefficient_rates(
    params: InvariantParams, profile: MassProfile, t: float
) -> tuple[CoefficientState, CoefficientRates]:
    """State plus its exact derivatives, chained through mu_dot = 1/m(t)."""
    s = coefficients_at(params, profile, t)
    k0 = params.kappa0
    hbar = params.hbar
    mu_dot = 1.0 / profile.mass_at(t)
    gamma_dot = -params.beta * mu_dot
    alpha_dot = -2.0 * s.gamma * mu_dot
    sigma_dot = -s.gamma * mu_dot / s.sigma
    kappa_dot = k0 * s.gamma * mu_dot / s.sigma**3
    k_r_dot = k0 * s.gamma * mu_dot / (hbar * s.alpha**2)
    k_i_dot = mu_dot * (2.0 * s.gamma**2 - params.beta * s.alpha) / (2.0 * hbar * s.alpha**2)
    rates = CoefficientRates(
        mu_dot=mu_dot,
        gamma_dot=gamma_dot,
        alpha_dot=alpha_dot,
        sigma_dot=sigma_dot,
        kappa_dot=kappa_dot,
        K_dot=complex(k_r_dot, k_i_dot),
        m_sigma_dot_sq=s.gamma**2 * mu_dot / s.alpha,
        d_m_sigma_dot=k0**2 * mu_dot / s.sigma**3,
        d_m_sigma_sigma_dot=params.beta * mu_dot,
    )
    return s, rates


@dataclass(frozen=True)
class DerivationTerms:
    """Ladder-operator drift coefficients and the vacuum bookkeeping terms.

    ``Lambda`` duplicates the Gaussian coefficient K by construction and
    ``Lambda_r`` its real part; both are kept so the identity can be checked
    rather than assumed.
    """

    lambda1: complex
    lambda2: complex
    k_alpha: complex
    zeta: float
    Lambda: complex
    Lambda_r: float


def derivation_terms_at(
    params: InvariantParams, profile: MassProfile, t: float
) -> DerivationTerms:
    """Evaluate Lambda1, Lambda2, k_alpha, zeta and Lambda at time t.

    Lambda1 = -(1/2 kappa^2) d(kappa k_alpha)/dt and
    Lambda2 = kappa_dot/kappa - (1/2 kappa^2) d(kappa k_alpha*)/dt, with every
    derivative expanded through the closed-form chain rule.  In terms of the
    coefficients this gives

        Lambda1 = -(mu_dot / (2 kappa0 alpha)) (2 kappa0 gamma + i (kappa0^2 - gamma^2))
        Lambda2 =  (i mu_dot / (2 kappa0 alpha)) (kappa0^2 - gamma^2)

    so Lambda2 is purely imaginary.
    """
    s, r = coefficient_rates(params, profile, t)
    k0 = params.kappa0
    lambda1 = -(r.mu_dot / (2.0 * k0 * s.alpha)) * complex(
        2.0 * k0 * s.gamma, k0**2 - s.gamma**2
    )
    lambda2 = 1j * r.mu_dot * (k0**2 - s.gamma**2) / (2.0 * k0 * s.alpha)
    k_alpha = complex(s.kappa, s.m_sigma_dot)
    zeta = (s.kappa / (math.pi * params.hbar * s.sigma)) ** 0.25
    return DerivationTerms(
        lambda1=lambda1,
        lambda2=lambda2,
        k_alpha=k_alpha,
        zeta=zeta,
        Lambda=s.K,
        Lambda_r=s.K.real,
    )
