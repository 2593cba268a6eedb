"""Reservoir kernels for a qubit in a leaky cavity.

Everything here is expressed in units of ``gamma0``: times are ``gamma0 * t``
and rates are multiples of ``gamma0``. ``gamma0`` is kept as an explicit field
(always 1 in practice) so every formula shows where the rate enters.

Basis convention used throughout the package: the one-excitation dressed
states ``|E1+>``, ``|E1->`` followed by the joint ground state ``|E0>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

ArrayLike = float | np.ndarray

__all__ = [
    "PhysParams",
    "KernelIntegrals",
    "PropagatorCoeffs",
    "spectral_density",
    "gamma_minus",
    "gamma_plus",
    "kernel_integrals",
    "quadrature_oracle",
    "propagator_coeffs",
]


@dataclass(frozen=True)
class PhysParams:
    """Physical constants of the atom-cavity-reservoir model.

    Attributes
    ----------
    lam : float
        Spectral width of the Lorentzian reservoir (lambda).
    omega : float
        Atom-cavity coupling constant (capital Omega).
    omega0 : float
        Atomic Bohr frequency. Drops out of every QFI curve, hence the default.
    gamma0 : float
        Reference rate; every other quantity is measured against it.
    """

    lam: float
    omega: float
    omega0: float = 50.0
    gamma0: float = 1.0

    def __post_init__(self):
        for name in ("lam", "omega", "omega0", "gamma0"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.gamma0 <= 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if self.lam <= 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.omega < 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")

    @property
    def omega1(self) -> float:
        """Peak of the reservoir spectrum, pinned to the |E1-> transition."""
        return self.omega0 - self.omega

    @property
    def is_markovian(self) -> bool:
        return self.lam > 2 * self.gamma0

    @property
    def is_strong_coupling(self) -> bool:
        return self.omega > 2 * self.gamma0

    @property
    def tau_r(self) -> float:
        """Reservoir correlation time."""
        return 1.0 / self.lam

    @property
    def tau_s(self) -> float:
        """Relaxation time scale."""
        return 1.0 / self.gamma0

    @property
    def gamma_plus_limit(self) -> float:
        """Stationary value of the |E1+> decay rate."""
        return self.gamma0 * self.lam**2 / (4 * self.omega**2 + self.lam**2)


def _check_time(t: ArrayLike) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(~np.isfinite(t)):
        raise ValueError("time must be finite and non-negative")
    return t


def _unwrap(x: np.ndarray):
    return x.item() if np.ndim(x) == 0 else x


def spectral_density(w: ArrayLike, p: PhysParams) -> ArrayLike:
    """Lorentzian reservoir spectrum ``J(w)`` peaked at ``p.omega1``."""
    w = np.asarray(w, dtype=float)
    j = p.gamma0 * p.lam**2 / ((p.omega1 - w) ** 2 + p.lam**2) / (2 * math.pi)
    return _unwrap(j)


def gamma_minus(t: ArrayLike, p: PhysParams) -> ArrayLike:
    """Decay rate of ``|E1->``: ``gamma0 * (1 - exp(-lam t))``."""
    t = _check_time(t)
    return _unwrap(p.gamma0 * -np.expm1(-p.lam * t))


def gamma_plus(t: ArrayLike, p: PhysParams) -> ArrayLike:
    """Decay rate of ``|E1+>``.

    Can dip below zero in the non-Markovian regime; that is left as is since
    its integral is what enters the propagator.
    """
    t = _check_time(t)
    w2 = 2 * p.omega
    bracket = (w2 / p.lam) * np.sin(w2 * t) - np.cos(w2 * t)
    return _unwrap(p.gamma_plus_limit * (1 + bracket * np.exp(-p.lam * t)))


@dataclass(frozen=True)
class KernelIntegrals:
    """Time integrals of the two decay rates over ``[0, t]``."""

    t: ArrayLike
    i_minus: ArrayLike
    i_plus: ArrayLike


def _integrals(t: np.ndarray, p: PhysParams) -> tuple[np.ndarray, np.ndarray]:
    lam, w = p.lam, p.omega
    decay = np.exp(-lam * t)
    i_minus = p.gamma0 * t + (p.gamma0 / lam) * np.expm1(-lam * t)
    denom = 4 * w**2 + lam**2
    i_plus = p.gamma_plus_limit * (
        t
        - 4 * w * decay * np.sin(2 * w * t) / denom
        + (lam**2 - 4 * w**2) * (decay * np.cos(2 * w * t) - 1) / (lam * denom)
    )
    return i_minus, i_plus


def kernel_integrals(t: ArrayLike, p: PhysParams) -> KernelIntegrals:
    """Closed-form ``I-`` and ``I+`` at time(s) ``t``."""
    t = _check_time(t)
    i_minus, i_plus = _integrals(t, p)
    return KernelIntegrals(_unwrap(t), _unwrap(i_minus), _unwrap(i_plus))


def quadrature_oracle(
    t: ArrayLike,
    which: Literal["minus", "plus"],
    p: PhysParams,
    panels: int = 10_000,
) -> ArrayLike:
    """Composite Simpson integral of a decay rate over ``[0, t]``.

    Independent cross-check of :func:`kernel_integrals`; it only ever calls
    the pointwise rate functions.
    """
    if panels < 2 or panels % 2:
        raise ValueError(f"panels must be even and >= 2, got {panels}")
    rates = {"minus": gamma_minus, "plus": gamma_plus}
    if which not in rates:
        raise ValueError(f"which must be 'minus' or 'plus', got {which!r}")
    rate = rates[which]
    t = _check_time(t)
    flat = np.atleast_1d(t).ravel()

    weights = np.ones(panels + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    unit = np.linspace(0.0, 1.0, panels + 1)

    out = np.empty_like(flat)
    # chunk to keep the node matrix around 4M entries
    chunk = max(1, 4_000_000 // (panels + 1))
    for start in range(0, flat.size, chunk):
        tt = flat[start:start + chunk]
        nodes = tt[:, None] * unit[None, :]
        h = tt / panels
        out[start:start + chunk] = h / 3.0 * (rate(nodes, p) @ weights)
    return _unwrap(out.reshape(t.shape))


@dataclass(frozen=True)
class PropagatorCoeffs:
    """Coefficients of the analytic map ``R(0) -> R(t)`` in the dressed basis.

    Only the independent entries are stored; ``a21``, ``a31`` and ``a32`` are
    the complex conjugates of ``a12``, ``a13`` and ``a23``.
    """

    t: ArrayLike
    a11: ArrayLike
    a22: ArrayLike
    a12: ArrayLike
    a13: ArrayLike
    a23: ArrayLike
    a33_11: ArrayLike
    a33_22: ArrayLike

    @property
    def a21(self):
        return np.conj(self.a12)

    @property
    def a31(self):
        return np.conj(self.a13)

    @property
    def a32(self):
        return np.conj(self.a23)


def propagator_coeffs(t: ArrayLike, p: PhysParams) -> PropagatorCoeffs:
    t = _check_time(t)
    i_minus, i_plus = _integrals(t, p)
    a11 = np.exp(-0.5 * i_plus)
    a22 = np.exp(-0.5 * i_minus)
    a12 = np.exp(-2j * p.omega * t) * np.exp(-0.25 * (i_plus + i_minus))
    a13 = np.exp(-1j * (p.omega0 + p.omega) * t) * np.exp(-0.25 * i_plus)
    a23 = np.exp(-1j * (p.omega0 - p.omega) * t) * np.exp(-0.25 * i_minus)
    return PropagatorCoeffs(
        t=_unwrap(t),
        a11=_unwrap(a11),
        a22=_unwrap(a22),
        a12=_unwrap(a12),
        a13=_unwrap(a13),
        a23=_unwrap(a23),
        a33_11=_unwrap(1 - a11),
        a33_22=_unwrap(1 - a22),
    )
