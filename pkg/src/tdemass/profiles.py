"""Time-dependent mass profiles and the inverse-mass reparameterization.

Every profile supplies two things: the mass ``m(t) > 0`` and its
antiderivative-of-inverse ``mu(t) = int_0^t dtau / m(tau)`` with
``mu(0) = 0``.  All time-dependent coefficients of the invariant evolve
through ``mu`` alone, so ``mu`` is evaluated analytically whenever the
profile allows it and by adaptive quadrature otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, interpolate

from .errors import ProfileDomainError, QuadratureError

# Absolute floor for the adaptive quadrature; mu enters phases linearly so
# its error budget propagates directly downstream.
_QUAD_EPSABS = 1e-14
_QUAD_EPSREL = 1e-10


class MassProfile:
    """Common interface: ``mass_at(t)`` and ``mu_at(t)`` for t >= 0."""

    def mass_at(self, t):
        raise NotImplementedError

    def mu_at(self, t):
        raise NotImplementedError

    @staticmethod
    def _check_time(t) -> None:
        if np.any(np.asarray(t) < 0):
            raise ProfileDomainError(f"profiles are defined for t >= 0, got t = {t}")


@dataclass(frozen=True)
class QuadraticMass(MassProfile):
    """m(t) = m0 (1 + b t)^2, with the closed form mu(t) = t / (m0 (1 + b t)).

    For b > 0 the mass grows without bound while mu saturates at 1/(m0 b).
    b < 0 is rejected: the mass would vanish at t = -1/b.
    """

    m0: float
    b: float

    def __post_init__(self):
        if not (self.m0 > 0):
            raise ProfileDomainError(f"m0 must be > 0, got {self.m0}")
        if self.b < 0:
            raise ProfileDomainError(
                f"b must be >= 0 (mass would vanish at t = {-1.0 / self.b}), got {self.b}"
            )

    def mass_at(self, t):
        self._check_time(t)
        return self.m0 * (1.0 + self.b * t) ** 2

    def mu_at(self, t):
        self._check_time(t)
        return t / (self.m0 * (1.0 + self.b * t))


@dataclass(frozen=True)
class ConstantMass(MassProfile):
    """m(t) = m0, mu(t) = t / m0."""

    m0: float

    def __post_init__(self):
        if not (self.m0 > 0):
            raise ProfileDomainError(f"m0 must be > 0, got {self.m0}")

    def mass_at(self, t):
        self._check_time(t)
        return self.m0 * np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else self.m0

    def mu_at(self, t):
        self._check_time(t)
        return t / self.m0


@dataclass(frozen=True, eq=False)
class TabulatedMass(MassProfile):
    """Mass profile given by (t, m) samples.

    Samples are interpolated with a monotone cubic (PCHIP), which cannot
    overshoot and therefore stays positive between positive samples.
    ``mu`` is computed by adaptive quadrature of 1/m at relative tolerance
    1e-10.  Queries outside the sampled range raise ``ProfileDomainError``.
    """

    times: np.ndarray
    masses: np.ndarray
    _interp: interpolate.PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if times.ndim != 1 or times.shape != masses.shape or len(times) < 2:
            raise ProfileDomainError("need matched 1-d arrays with at least 2 samples")
        if np.any(np.diff(times) <= 0):
            raise ProfileDomainError("sample times must be strictly increasing")
        if abs(times[0]) > 1e-12:
            raise ProfileDomainError("the first sample must be at t = 0 (mu(0) = 0)")
        if np.any(masses <= 0):
            raise ProfileDomainError("all mass samples must be > 0")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "_interp", interpolate.PchipInterpolator(times, masses))

    @classmethod
    def from_samples(cls, samples) -> "TabulatedMass":
        arr = np.asarray(list(samples), dtype=float)
        return cls(arr[:, 0], arr[:, 1])

    def _check_range(self, t) -> None:
        self._check_time(t)
        if np.any(np.asarray(t) > self.times[-1] + 1e-12):
            raise ProfileDomainError(
                f"t = {t} outside the tabulated range [0, {self.times[-1]}]"
            )

    def mass_at(self, t):
        self._check_range(t)
        val = self._interp(t)
        return float(val) if np.ndim(t) == 0 else val

    def mu_at(self, t):
        self._check_range(t)
        if np.ndim(t) != 0:
            return np.array([self.mu_at(ti) for ti in np.asarray(t, dtype=float)])
        t = float(t)
        if t == 0.0:
            return 0.0
        val, abserr, info = integrate.quad(
            lambda tau: 1.0 / self._interp(tau),
            0.0,
            t,
            epsabs=_QUAD_EPSABS,
            epsrel=_QUAD_EPSREL,
            limit=200,
            full_output=True,
        )[:3]
        if abserr > max(_QUAD_EPSABS, _QUAD_EPSREL * abs(val)) * 50:
            raise QuadratureError(
                f"mu({t}) quadrature reached |err| = {abserr:.3e}, "
                f"requested rel {_QUAD_EPSREL:.1e}"
            )
        return val
