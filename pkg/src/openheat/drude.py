"""Drude-damped free particle and harmonic oscillator.

Closed forms use the roots of the characteristic polynomial and the
trigamma function; :func:`log_partition_matsubara` evaluates the truncated
Matsubara product directly and serves as an independent check of them.

Units: hbar = k_B = 1, ``theta = 1 / beta``; frequencies in any common unit.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import zeta

from .errors import NumericalError
from .minimal import HeatCurve, HeatCurvePoint, _positive_theta
from .specfun import solve_cubic, solve_quadratic, trigamma

TWO_PI = 2.0 * math.pi


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DrudeParams:
    """Drude kernel ``gamma * omega_d / (z + omega_d)`` acting on a system of
    frequency ``omega_0`` (``omega_0 == 0`` is the free particle)."""

    gamma: float
    omega_d: float
    omega_0: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be > 0")
        if not self.omega_d > 0:
            raise ValueError("omega_d must be > 0")
        if not self.omega_0 >= 0:
            raise ValueError("omega_0 must be >= 0")

    @property
    def is_free(self) -> bool:
        return self.omega_0 == 0

    def root_scale(self) -> float:
        """Upper bound on the modulus of every characteristic root (Fujiwara)."""
        c2 = self.omega_d
        c1 = self.gamma * self.omega_d + self.omega_0 ** 2
        c0 = self.omega_d * self.omega_0 ** 2
        return 2.0 * max(c2, math.sqrt(c1), (0.5 * c0) ** (1.0 / 3.0))


@dataclass(frozen=True)
class MatsubaraConfig:
    """Truncation of the Matsubara product.

    ``n_terms`` factors are multiplied explicitly; the remainder is summed
    from the large-frequency expansion of each factor through order
    ``tail_orders + 1`` in ``1/nu`` using Hurwitz zeta values.
    """

    n_terms: int = 10_000
    tail_orders: int = 6

    def __post_init__(self):
        if self.n_terms < 10:
            raise ValueError("n_terms must be >= 10")
        if not 0 <= self.tail_orders <= 12:
            raise ValueError("tail_orders must lie in 0..12")

    @classmethod
    def for_temperature(cls, params: DrudeParams, theta: float, n_min: int = 10_000,
                        ratio: float = 50.0, tail_orders: int = 6) -> "MatsubaraConfig":
        """Enough terms that the tail expansion converges geometrically."""
        lam_max = params.root_scale() / (TWO_PI * theta)
        return cls(max(n_min, int(math.ceil(ratio * lam_max))), tail_orders)


def kernel(params: DrudeParams, z):
    """Laplace transform of the Drude damping kernel."""
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("kernel is evaluated at z >= 0")
    out = params.gamma * params.omega_d / (z + params.omega_d)
    return float(out) if out.ndim == 0 else out


def negativity_criterion(params: DrudeParams) -> bool:
    """True when the kernel slope at zero is below -1, i.e. gamma > omega_d.

    Only meaningful for the free particle.
    """
    if not params.is_free:
        raise ValueError("the criterion applies to the free particle (omega_0 == 0)")
    return -params.gamma / params.omega_d < -1.0


def characteristic_roots(params: DrudeParams) -> tuple[complex, ...]:
    """Nonzero roots of ``x^3 + w_D x^2 + (gamma w_D + Omega^2) x + w_D Omega^2``.

    Three roots for the oscillator; for the free particle the cubic has the
    factor ``x`` and the two roots of ``x^2 + w_D x + gamma w_D`` are returned.
    """
    wd, g, w0 = params.omega_d, params.gamma, params.omega_0
    if params.is_free:
        return solve_quadratic(wd, g * wd)
    return solve_cubic(wd, g * wd + w0 * w0, wd * w0 * w0).roots


def _closed_form(params: DrudeParams, thetas: np.ndarray) -> np.ndarray:
    roots = characteristic_roots(params)
    scale = 1.0 / (TWO_PI * thetas)
    total = np.full(thetas.shape, 0.5 if params.is_free else 1.0, dtype=complex)
    # Conjugate partners are added to each other first so the sum is symmetric.
    pair = [r for r in roots if r.imag != 0]
    real = [r for r in roots if r.imag == 0]
    if pair:
        parts = []
        for r in pair:
            lam = r * scale
            parts.append(lam * lam * trigamma(1.0 - lam))
        total += parts[0] + parts[1]
    for r in real:
        lam = r.real * scale
        total += lam * lam * trigamma(1.0 - lam)
    lam_d = params.omega_d * scale
    total -= lam_d * lam_d * trigamma(1.0 + lam_d)
    resid = np.max(np.abs(total.imag), initial=0.0)
    if resid > 1e-9:
        raise NumericalError(f"imaginary residue {resid:.3g} in closed-form specific heat")
    return total.real


def drude_curve(params: DrudeParams, thetas) -> HeatCurve:
    """Closed-form specific heat on a temperature grid (either model)."""
    t = _positive_theta(thetas)
    return HeatCurve(t, _closed_form(params, np.atleast_1d(t)).reshape(t.shape))


def specific_heat_osc_drude(params: DrudeParams, theta: float) -> HeatCurvePoint:
    """Damped oscillator: ``1 + sum_i L_i^2 psi'(1 - L_i) - L_D^2 psi'(1 + L_D)``.

    ``L_i = lambda_i / (2 pi theta)`` runs over the characteristic roots and
    ``L_D = omega_d / (2 pi theta)``.  Only the total is available; the
    coupled/bath split is left as ``None``.
    """
    if params.is_free:
        raise ValueError("specific_heat_osc_drude needs omega_0 > 0")
    return next(drude_curve(params, [theta]).points())


def specific_heat_free_drude(params: DrudeParams, theta: float) -> HeatCurvePoint:
    """Damped free particle: the oscillator formula with base 1/2 and two roots."""
    if not params.is_free:
        raise ValueError("specific_heat_free_drude needs omega_0 == 0")
    return next(drude_curve(params, [theta]).points())


def _tail_coefficients(params: DrudeParams, order: int) -> np.ndarray:
    """Coefficients a_k of ``-log(1 + u)`` as a power series in ``s = 1/nu``.

    ``u = gamma w_D s^2 / (1 + w_D s) + Omega^2 s^2``.  Index k of the result
    multiplies ``s**k``.
    """
    u = np.zeros(order + 1)
    gw = params.gamma * params.omega_d
    for k in range(2, order + 1):
        u[k] = gw * (-params.omega_d) ** (k - 2)
    if order >= 2:
        u[2] += params.omega_0 ** 2
    log1p = np.zeros(order + 1)
    power = np.zeros(order + 1)
    power[0] = 1.0
    for m in range(1, order // 2 + 1):
        power = np.convolve(power, u)[: order + 1]
        log1p += (-1) ** (m + 1) * power / m
    return -log1p


def log_partition_matsubara(params: DrudeParams, theta: float,
                            cfg: MatsubaraConfig | None = None) -> float:
    """``ln Z`` from the Matsubara product, without using the closed form.

    Oscillator: ``Z = (1/(beta Omega)) prod nu_n^2 / (nu_n^2 + nu_n k(nu_n) + Omega^2)``.
    Free particle: ``Z ~ beta^(-1/2) prod nu_n / (nu_n + k(nu_n))``; the
    temperature-independent prefactor (box length, mass) is dropped.
    """
    if not theta > 0:
        raise ValueError("theta must be > 0")
    cfg = cfg or MatsubaraConfig()
    beta = 1.0 / theta
    n = np.arange(1, cfg.n_terms + 1, dtype=float)
    nu = (TWO_PI / beta) * n
    u = params.gamma * params.omega_d / (nu * (nu + params.omega_d))
    if not params.is_free:
        u = u + (params.omega_0 / nu) ** 2
    total = -np.sum(np.log1p(u))
    if cfg.tail_orders:
        coeffs = _tail_coefficients(params, cfg.tail_orders + 1)
        x = beta / TWO_PI
        for k in range(2, cfg.tail_orders + 2):
            total += coeffs[k] * x ** k * zeta(k, cfg.n_terms + 1)
    if params.is_free:
        return total - 0.5 * math.log(beta)
    return total - math.log(beta * params.omega_0)


def specific_heat_numeric(log_partition: Callable[[float], float], theta: float,
                          rel_step: float = 1e-2, check: bool = False) -> float:
    """``beta^2 d^2 ln Z / d beta^2`` by a five-point central difference in beta.

    ``log_partition`` takes a temperature.  The step is ``rel_step * beta``.
    With ``check=True`` the estimate is repeated at half the step and a
    :class:`ConvergenceWarning` is emitted if the two disagree by more
    than ``1e-7``.
    """
    beta = 1.0 / theta

    def f(b):
        return log_partition(1.0 / b)

    def second(h):
        return (-f(beta + 2 * h) + 16 * f(beta + h) - 30 * f(beta)
                + 16 * f(beta - h) - f(beta - 2 * h)) / (12 * h * h)

    h = max(rel_step * beta, 1e-12)
    c = beta * beta * second(h)
    if check:
        c_half = beta * beta * second(0.5 * h)
        if abs(c - c_half) > 1e-7:
            warnings.warn(f"finite-difference estimates differ by {abs(c - c_half):.2g}",
                          ConvergenceWarning, stacklevel=2)
    return c


def specific_heat_matsubara(params: DrudeParams, theta: float,
                            cfg: MatsubaraConfig | None = None,
                            check_convergence: bool = False) -> float:
    """Specific heat from the Matsubara product and a numerical second derivative.

    The number of Matsubara terms is fixed at the central temperature so all
    stencil points share one truncation.  ``check_convergence`` doubles
    ``n_terms`` and warns if the result moves by more than 1e-8.
    """
    cfg = cfg or MatsubaraConfig.for_temperature(params, theta)
    c = specific_heat_numeric(lambda t: log_partition_matsubara(params, t, cfg), theta)
    if check_convergence:
        wide = MatsubaraConfig(2 * cfg.n_terms, cfg.tail_orders)
        c2 = specific_heat_numeric(lambda t: log_partition_matsubara(params, t, wide), theta)
        if abs(c - c2) > 1e-8:
            warnings.warn(f"doubling n_terms changed C by {abs(c - c2):.2g}",
                          ConvergenceWarning, stacklevel=2)
    return c
