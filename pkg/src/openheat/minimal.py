"""Single-oscillator "bath" models: a free mass or an oscillator tied to one spring.

Units: hbar = k_B = 1, frequencies in units of the bath frequency omega
unless the caller picks otherwise; ``theta = k_B T / (hbar omega_ref)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .specfun import boson_heat


@dataclass(frozen=True)
class MinimalModelParams:
    """Two-mass toy model.

    ``mass_ratio`` is m/M (bath mass over system mass), ``bath_freq`` the bare
    bath frequency omega and ``system_freq`` the bare system frequency Omega;
    ``system_freq == 0`` selects the free particle.
    """

    mass_ratio: float
    bath_freq: float = 1.0
    system_freq: float = 0.0

    def __post_init__(self):
        if not self.mass_ratio >= 0:
            raise ValueError("mass_ratio must be >= 0")
        if not self.bath_freq > 0:
            raise ValueError("bath_freq must be > 0")
        if not self.system_freq >= 0:
            raise ValueError("system_freq must be >= 0")

    @property
    def is_free(self) -> bool:
        return self.system_freq == 0


@dataclass(frozen=True)
class HeatCurvePoint:
    """Specific heat at one temperature, in units of k_B.

    ``c_total = c_coupled - c_bath``.  The two parts are ``None`` when a
    model only provides the difference.
    """

    theta: float
    c_total: float
    c_coupled: float | None = None
    c_bath: float | None = None


@dataclass(frozen=True)
class HeatCurve:
    """A sampled specific-heat curve; array counterpart of HeatCurvePoint."""

    theta: np.ndarray
    c_total: np.ndarray
    c_coupled: np.ndarray | None = None
    c_bath: np.ndarray | None = None

    def __len__(self):
        return len(self.theta)

    def points(self) -> Iterator[HeatCurvePoint]:
        for i, t in enumerate(self.theta):
            yield HeatCurvePoint(
                float(t),
                float(self.c_total[i]),
                None if self.c_coupled is None else float(self.c_coupled[i]),
                None if self.c_bath is None else float(self.c_bath[i]),
            )


def _positive_theta(theta):
    arr = np.asarray(theta, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("theta must be > 0")
    return arr


def coupled_frequency_free(params: MinimalModelParams) -> float:
    """Relative-motion frequency of the free mass attached to the bath oscillator."""
    if not params.is_free:
        raise ValueError("coupled_frequency_free needs system_freq == 0")
    return math.sqrt(1.0 + params.mass_ratio) * params.bath_freq


def normal_modes_osc(params: MinimalModelParams) -> tuple[float, float]:
    """Return ``(omega_plus, omega_minus)`` of the coupled two-oscillator system.

    omega_minus is taken from the determinant identity
    ``omega_plus * omega_minus = omega * Omega`` to avoid cancellation.
    """
    if params.is_free:
        raise ValueError("normal_modes_osc needs system_freq > 0")
    w, big_w, r = params.bath_freq, params.system_freq, params.mass_ratio
    half_s = 0.5 * ((1.0 + r) * w * w + big_w * big_w)
    prod = w * big_w
    root = math.sqrt((half_s - prod) * (half_s + prod))
    w_plus = math.sqrt(half_s + root)
    return w_plus, prod / w_plus


def free_minimal_curve(params: MinimalModelParams, thetas) -> HeatCurve:
    """Vectorized version of :func:`specific_heat_free_minimal`."""
    t = _positive_theta(thetas)
    w_bar = coupled_frequency_free(params)
    c_coupled = 0.5 + boson_heat(w_bar / (2.0 * t))
    c_bath = boson_heat(params.bath_freq / (2.0 * t))
    return HeatCurve(t, c_coupled - c_bath, c_coupled, c_bath)


def specific_heat_free_minimal(params: MinimalModelParams, theta: float) -> HeatCurvePoint:
    """Free particle plus one bath oscillator: ``1/2 + g(w_bar/2T) - g(w/2T)``.

    The confining box length drops out; it is assumed large enough that the
    level spacing is negligible against k_B T.
    """
    return next(free_minimal_curve(params, [theta]).points())


def osc_minimal_curve(params: MinimalModelParams, thetas) -> HeatCurve:
    """Vectorized version of :func:`specific_heat_osc_minimal`."""
    t = _positive_theta(thetas)
    w_plus, w_minus = normal_modes_osc(params)
    c_coupled = boson_heat(w_plus / (2.0 * t)) + boson_heat(w_minus / (2.0 * t))
    c_bath = boson_heat(params.bath_freq / (2.0 * t))
    return HeatCurve(t, c_coupled - c_bath, c_coupled, c_bath)


def specific_heat_osc_minimal(params: MinimalModelParams, theta: float) -> HeatCurvePoint:
    return next(osc_minimal_curve(params, [theta]).points())


def log_theta_grid(theta_min: float, theta_max: float, points: int) -> np.ndarray:
    if not 0 < theta_min < theta_max:
        raise ValueError("need 0 < theta_min < theta_max")
    if points < 2:
        raise ValueError("need at least two points")
    return np.logspace(math.log10(theta_min), math.log10(theta_max), points)


def min_free_specific_heat(
    mass_ratio: float,
    theta_bounds: tuple[float, float] = (1e-3, 1e2),
    scan_points: int = 241,
) -> tuple[float, float]:
    """Minimum over temperature of the free minimal-model specific heat.

    Returns ``(theta_at_min, c_min)`` with omega = 1.  A coarse log scan
    brackets the dip, then bounded Brent (golden section with parabolic
    steps) refines it in log theta.
    """
    params = MinimalModelParams(mass_ratio, 1.0, 0.0)
    lo, hi = math.log(theta_bounds[0]), math.log(theta_bounds[1])
    grid = np.linspace(lo, hi, scan_points)
    values = free_minimal_curve(params, np.exp(grid)).c_total
    i = int(np.argmin(values))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, scan_points - 1)]

    def objective(s):
        return float(free_minimal_curve(params, [math.exp(s)]).c_total[0])

    res = minimize_scalar(objective, bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    if res.fun <= values[i]:
        return math.exp(res.x), float(res.fun)
    return math.exp(grid[i]), float(values[i])


def free_threshold_mass_ratio(bracket: tuple[float, float] = (4.0, 5.0), xtol: float = 1e-10) -> float:
    """Mass ratio m/M above which the free minimal model goes negative somewhere."""
    return brentq(lambda r: min_free_specific_heat(r)[1], *bracket, xtol=xtol)
