"""Finite harmonic baths coupled to one system coordinate.

Each bath mode i (mass m_i in units of the system mass, frequency w_i)
couples through ``(m_i w_i^2 / 2) (q_i - Q)^2``, which keeps the free
particle translation invariant.  Specific heats come from the exact normal
modes of the whole network, so a single mode reproduces the two-mass toy
models and many modes approach the continuum Drude result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .drude import DrudeParams, drude_curve
from .errors import ConvergenceError
from .minimal import HeatCurve, HeatCurvePoint, MinimalModelParams, _positive_theta
from .specfun import boson_heat

ZERO_MODE_RTOL = 1e-10


@dataclass(frozen=True)
class BathSpec:
    mode_freqs: np.ndarray
    mode_masses: np.ndarray
    system_freq: float = 0.0

    def __post_init__(self):
        freqs = np.atleast_1d(np.asarray(self.mode_freqs, dtype=float))
        masses = np.atleast_1d(np.asarray(self.mode_masses, dtype=float))
        if freqs.ndim != 1 or freqs.shape != masses.shape or freqs.size == 0:
            raise ValueError("mode_freqs and mode_masses must be equal-length 1-d sequences")
        if np.any(~(freqs > 0)) or np.any(~(masses >= 0)):
            raise ValueError("mode frequencies must be > 0 and masses >= 0")
        if not self.system_freq >= 0:
            raise ValueError("system_freq must be >= 0")
        object.__setattr__(self, "mode_freqs", freqs)
        object.__setattr__(self, "mode_masses", masses)

    @property
    def n_modes(self) -> int:
        return self.mode_freqs.size

    @property
    def is_free(self) -> bool:
        return self.system_freq == 0


@dataclass(frozen=True)
class ModeSpectrum:
    """Bare bath frequencies and normal-mode frequencies of system plus bath.

    For a free particle the translational zero mode is left out of
    ``coupled``; ``free_particle`` records that.
    """

    bare: np.ndarray
    coupled: np.ndarray
    free_particle: bool = False


def minimal_bath(params: MinimalModelParams) -> BathSpec:
    """The one-mode bath equivalent to a two-mass toy model."""
    return BathSpec([params.bath_freq], [params.mass_ratio], params.system_freq)


def discretize_drude(params: DrudeParams, n_modes: int, omega_max: float | None = None) -> BathSpec:
    """Equally spaced modes whose damping kernel tends to the Drude kernel.

    Mode i sits at ``(i - 1/2) * dw`` with ``dw = omega_max / n_modes`` and
    carries ``m_i w_i^2 = (2/pi) gamma w_D^2 dw / (w_i^2 + w_D^2)``, a
    midpoint-rule discretization of the Drude spectral density.  The
    default ``omega_max`` is ``100 * omega_d``.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    if omega_max is None:
        omega_max = 100.0 * params.omega_d
    if not omega_max > 0:
        raise ValueError("omega_max must be > 0")
    dw = omega_max / n_modes
    w = (np.arange(1, n_modes + 1) - 0.5) * dw
    stiffness = (2.0 / math.pi) * params.gamma * params.omega_d ** 2 * dw / (w * w + params.omega_d ** 2)
    return BathSpec(w, stiffness / (w * w), params.omega_0)


def dynamical_matrix(spec: BathSpec) -> np.ndarray:
    """Mass-weighted stiffness matrix; its eigenvalues are squared normal-mode frequencies.

    Index 0 is the system coordinate.  The matrix is an arrowhead: the bare
    bath frequencies squared on the diagonal plus one coupling row/column.
    """
    w2 = spec.mode_freqs ** 2
    n = spec.n_modes
    d = np.zeros((n + 1, n + 1))
    d[0, 0] = spec.system_freq ** 2 + np.sum(spec.mode_masses * w2)
    border = -np.sqrt(spec.mode_masses) * w2
    d[0, 1:] = border
    d[1:, 0] = border
    d[np.arange(1, n + 1), np.arange(1, n + 1)] = w2
    return d


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings such that every index pair meets once per cycle of rounds."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Rotations are applied in round-robin order, so each round annihilates
    a set of disjoint off-diagonal pairs at once.  Sweeps stop when the
    off-diagonal Frobenius norm drops below ``tol`` times the matrix norm.
    Returns the eigenvalues in ascending order.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=1e-14 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix must be symmetric")
    if n == 1:
        return a.diagonal().copy()
    norm = np.linalg.norm(a)
    threshold = tol * norm
    rounds = _round_robin(n)
    upper = np.triu_indices(n, 1)

    def off_norm():
        return math.sqrt(2.0 * np.sum(a[upper] ** 2))

    for _ in range(max_sweeps):
        if off_norm() <= threshold:
            return np.sort(a.diagonal())
        for p, q in rounds:
            apq = a[p, q]
            # Pivots below rounding level of their diagonal are dropped outright.
            negligible = np.abs(apq) <= 1e-18 * (np.abs(a[p, p]) + np.abs(a[q, q]))
            a[p[negligible], q[negligible]] = 0.0
            a[q[negligible], p[negligible]] = 0.0
            live = ~negligible & (apq != 0)
            if not np.any(live):
                continue
            p, q, apq = p[live], q[live], apq[live]
            tau = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cols_p, cols_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * cols_p - s * cols_q
            a[:, q] = s * cols_p + c * cols_q
            rows_p, rows_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            a[p, q] = 0.0
            a[q, p] = 0.0
    if off_norm() <= threshold:
        return np.sort(a.diagonal())
    raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def normal_modes(spec: BathSpec) -> ModeSpectrum:
    """Normal-mode frequencies of the system coupled to the finite bath."""
    eig = jacobi_eigenvalues(dynamical_matrix(spec))
    top = eig[-1]
    if spec.is_free:
        zero = np.abs(eig) < ZERO_MODE_RTOL * top
        if np.count_nonzero(zero) != 1:
            raise ConvergenceError("expected exactly one translational zero mode")
        eig = eig[~zero]
    coupled = np.sqrt(np.clip(eig, 0.0, None))
    return ModeSpectrum(np.sort(spec.mode_freqs), coupled, spec.is_free)


def difference_curve(spectrum: ModeSpectrum, thetas, free_particle: bool | None = None) -> HeatCurve:
    """``sum g(coupled) [+ 1/2] - sum g(bare)`` on a temperature grid."""
    if free_particle is None:
        free_particle = spectrum.free_particle
    t = _positive_theta(thetas)
    t1 = np.atleast_1d(t)
    c_coupled = boson_heat(spectrum.coupled[:, None] / (2.0 * t1[None, :])).sum(axis=0)
    if free_particle:
        c_coupled = c_coupled + 0.5
    c_bath = boson_heat(spectrum.bare[:, None] / (2.0 * t1[None, :])).sum(axis=0)
    shape = t.shape
    return HeatCurve(t, (c_coupled - c_bath).reshape(shape), c_coupled.reshape(shape), c_bath.reshape(shape))


def specific_heat_difference(spectrum: ModeSpectrum, theta: float,
                             free_particle: bool | None = None) -> HeatCurvePoint:
    """Specific heat of system plus bath minus that of the bath alone."""
    return next(difference_curve(spectrum, [theta], free_particle).points())


def convergence_study(params: DrudeParams, n_list=(16, 32, 64, 128, 256), thetas=None,
                      omega_max: float | None = None) -> list[tuple[int, float]]:
    """Max-norm distance of discretized-bath curves to the continuum closed form."""
    if thetas is None:
        thetas = np.logspace(-1, 2, 121)
    reference = drude_curve(params, thetas).c_total
    out = []
    for n in n_list:
        spectrum = normal_modes(discretize_drude(params, n, omega_max))
        curve = difference_curve(spectrum, thetas)
        out.append((int(n), float(np.max(np.abs(curve.c_total - reference)))))
    return out
