"""Variances, the uncertainty ellipse, and expectation values on wave packets."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .invariant import InvariantParams, coefficients_at
from .oracle import quadrature_axis
from .profiles import MassProfile
from .states import WavePacket, apply_momentum, apply_position


@dataclass(frozen=True)
class UncertaintyRecord:
    """Position/momentum spreads of the vacuum at one time.

    ``s1_sq = hbar alpha / kappa0`` and ``s2_sq = hbar beta / kappa0`` are the
    squared ellipse axes: (dx^2 / s1_sq) + (dp^2 / s2_sq) = 1, with s2_sq
    time-independent.
    """

    t: float
    dx: float
    dp: float
    product: float
    s1_sq: float
    s2_sq: float


def uncertainty_at(params: InvariantParams, profile: MassProfile, t: float) -> UncertaintyRecord:
    """Vacuum uncertainties at time t, all in closed form.

    dx = sqrt(1 / (4 k_r)) and dp = hbar |K| / sqrt(k_r) for the Gaussian
    ground state, so dx * dp = (hbar/2) sqrt(1 + (gamma/kappa0)^2) >= hbar/2
    exactly.
    """
    s = coefficients_at(params, profile, t)
    hbar = params.hbar
    dx = math.sqrt(1.0 / (4.0 * s.k_r))
    dp = hbar * abs(s.K) / math.sqrt(s.k_r)
    product = 0.5 * hbar * math.sqrt(1.0 + (s.gamma / params.kappa0) ** 2)
    return UncertaintyRecord(
        t=t,
        dx=dx,
        dp=dp,
        product=product,
        s1_sq=hbar * s.alpha / params.kappa0,
        s2_sq=hbar * params.beta / params.kappa0,
    )


def is_instantaneously_coherent(
    params: InvariantParams, profile: MassProfile, t: float, tol: float = 1e-9
) -> bool:
    """True when sigma^2 = beta within tol: the uncertainty ellipse is a circle."""
    s = coefficients_at(params, profile, t)
    return abs(s.alpha - params.beta) < tol


_OBSERVABLES = ("X", "P", "X2", "P2", "XPsym", "H", "I")


def expectation(
    packet: WavePacket,
    which: str,
    params: InvariantParams | None = None,
    profile: MassProfile | None = None,
) -> float:
    """Normalized quadrature expectation <O> on the packet.

    Operators act on the polynomial-Gaussian form analytically (momentum is a
    closed-form polynomial map, never a finite difference); only the final
    integral is numerical.  ``H`` needs ``profile`` for m(t) and ``I`` needs
    ``params`` and ``profile`` for the coefficients at ``packet.t``.
    """
    if which not in _OBSERVABLES:
        raise ValueError(f"which must be one of {_OBSERVABLES}, got {which!r}")
    if which in ("H", "I", "P", "P2", "XPsym") and params is None:
        raise ValueError(f"{which} requires params (for hbar)")
    hbar = params.hbar if params is not None else None

    if which == "X":
        op_packets = [(1.0, apply_position(packet))]
    elif which == "X2":
        op_packets = [(1.0, apply_position(apply_position(packet)))]
    elif which == "P":
        op_packets = [(1.0, apply_momentum(packet, hbar))]
    elif which == "P2":
        op_packets = [(1.0, apply_momentum(apply_momentum(packet, hbar), hbar))]
    elif which == "XPsym":
        op_packets = [
            (1.0, apply_position(apply_momentum(packet, hbar))),
            (1.0, apply_momentum(apply_position(packet), hbar)),
        ]
    elif which == "H":
        if profile is None:
            raise ValueError("H requires the mass profile")
        mass = profile.mass_at(packet.t)
        p2 = apply_momentum(apply_momentum(packet, hbar), hbar)
        op_packets = [(1.0 / (2.0 * mass), p2)]
    else:  # I
        if profile is None:
            raise ValueError("I requires the mass profile")
        s = coefficients_at(params, profile, packet.t)
        p2 = apply_momentum(apply_momentum(packet, hbar), hbar)
        x2 = apply_position(apply_position(packet))
        xp = apply_position(apply_momentum(packet, hbar))
        px = apply_momentum(apply_position(packet), hbar)
        op_packets = [(s.alpha, p2), (params.beta, x2), (s.gamma, xp), (s.gamma, px)]

    x = quadrature_axis([packet] + [p for _, p in op_packets])
    bra = np.conjugate(packet(x))
    numerator = sum(
        coeff * np.trapezoid(bra * op_pkt(x), x) for coeff, op_pkt in op_packets
    )
    denominator = np.trapezoid(np.abs(packet(x)) ** 2, x)
    value = numerator / denominator
    return float(value.real)
