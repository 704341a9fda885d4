"""Effective density of states, the inverse Laplace transform of Z(beta).

Two routes:

* exact expansions of Z into exponentials for the two-mass toy models
  (signed delta combs for the oscillator, inverse-square-root branches for
  the free particle);
* numerical Bromwich inversion by FFT for the Drude-damped oscillator, with
  the weight-one delta at the ground-state energy subtracted analytically.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .drude import TWO_PI, DrudeParams, characteristic_roots
from .minimal import MinimalModelParams, coupled_frequency_free, normal_modes_osc
from .specfun import log_gamma

MERGE_TOL = 1e-9


class WindowSensitivityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class DeltaComb:
    """Signed integer weights at discrete energies, sorted by energy."""

    energies: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.energies)

    def laplace(self, beta: float) -> float:
        """``sum_k w_k exp(-beta E_k)``, summed exactly rounded."""
        return math.fsum((self.weights * np.exp(-beta * self.energies)).tolist())

    def cumulative_weight(self) -> np.ndarray:
        return np.cumsum(self.weights)

    @property
    def has_negative_weight(self) -> bool:
        return bool(np.any(self.weights < 0))


@dataclass(frozen=True)
class DosCurve:
    """Density of states sampled on a uniform energy grid.

    ``sigma`` is the Bromwich abscissa (``nan`` for analytic curves) and
    ``ground_energy`` the position of the weight-one delta that is not part
    of ``values``.
    """

    energies: np.ndarray
    values: np.ndarray
    sigma: float
    ground_energy: float


def _merge(energies, weights) -> DeltaComb:
    order = np.argsort(energies, kind="stable")
    e = np.asarray(energies, dtype=float)[order]
    w = np.asarray(weights, dtype=np.int64)[order]
    out_e, out_w = [], []
    for ek, wk in zip(e, w):
        if out_e and ek - out_e[-1] <= MERGE_TOL:
            out_w[-1] += int(wk)
        else:
            out_e.append(float(ek))
            out_w.append(int(wk))
    keep = [i for i, wk in enumerate(out_w) if wk != 0]
    return DeltaComb(np.array([out_e[i] for i in keep]), np.array([out_w[i] for i in keep], dtype=np.int64))


def _split_comb(levels: np.ndarray, shift: float, e_max: float) -> DeltaComb:
    """Expand ``2 sinh(beta shift) * sum_n exp(-beta E_n)`` into signed deltas."""
    plus = levels - shift
    minus = levels + shift
    energies = np.concatenate([plus[plus <= e_max], minus[minus <= e_max]])
    weights = np.concatenate([np.ones(np.count_nonzero(plus <= e_max), dtype=np.int64),
                              -np.ones(np.count_nonzero(minus <= e_max), dtype=np.int64)])
    return _merge(energies, weights)


def delta_comb_osc_minimal(params: MinimalModelParams, e_max: float) -> DeltaComb:
    """Signed delta comb of the oscillator toy model up to energy ``e_max``.

    ``Z = 2 sinh(beta w/2) sum exp(-beta [w+ (n+ + 1/2) + w- (n- + 1/2)])``,
    so every two-mode level contributes ``+1`` at ``E - w/2`` and ``-1`` at
    ``E + w/2``.  Coincident energies are merged and cancelled entries dropped.
    """
    w_plus, w_minus = normal_modes_osc(params)
    if not e_max > 0.5 * (w_plus + w_minus):
        raise ValueError("e_max must exceed the zero-point energy (w+ + w-)/2")
    reach = e_max + params.bath_freq
    n_plus = np.arange(int(reach / w_plus) + 1)
    n_minus = np.arange(int(reach / w_minus) + 1)
    levels = (w_plus * (n_plus[:, None] + 0.5) + w_minus * (n_minus[None, :] + 0.5)).ravel()
    levels = levels[levels - 0.5 * params.bath_freq <= e_max]
    return _split_comb(levels, 0.5 * params.bath_freq, e_max)


def free_minimal_branches(params: MinimalModelParams, e_max: float) -> DeltaComb:
    """Thresholds and signs of the inverse-square-root branches of the free toy model.

    ``sinh(beta w/2) / sinh(beta w_bar/2)`` expands into ``+1`` at
    ``w_bar (n + 1/2) - w/2`` and ``-1`` at ``w_bar (n + 1/2) + w/2``.
    """
    w_bar = coupled_frequency_free(params)
    n = np.arange(int((e_max + params.bath_freq) / w_bar) + 1)
    return _split_comb(w_bar * (n + 0.5), 0.5 * params.bath_freq, e_max)


def free_minimal_density(branches: DeltaComb, energies) -> np.ndarray:
    """``sum_n w_n (pi (E - E_n))^(-1/2)`` over branches with ``E_n < E``.

    Normalized so the prefactor collecting box length and total mass is one.
    """
    e = np.atleast_1d(np.asarray(energies, dtype=float))
    gap = e[:, None] - branches.energies[None, :]
    active = gap > 0
    terms = np.zeros_like(gap)
    terms[active] = 1.0 / np.sqrt(math.pi * gap[active])
    return terms @ branches.weights.astype(float)


def dos_free_minimal(params: MinimalModelParams, e_grid) -> DosCurve:
    """Density of states of the free toy model on ``e_grid`` (prefactor set to 1)."""
    e = np.asarray(e_grid, dtype=float)
    branches = free_minimal_branches(params, float(e.max()))
    return DosCurve(e, free_minimal_density(branches, e), math.nan, float(branches.energies[0]))


def free_minimal_partition(params: MinimalModelParams, beta: float) -> float:
    """``beta^(-1/2) sinh(beta w/2) / sinh(beta w_bar/2)``: the normalized Z."""
    w_bar = coupled_frequency_free(params)
    w = params.bath_freq
    # sinh ratio written with decaying exponentials only.
    ratio = math.exp(-0.5 * beta * (w_bar - w)) * -math.expm1(-beta * w) / -math.expm1(-beta * w_bar)
    return ratio / math.sqrt(beta)


def log_partition_complex(params: DrudeParams, beta):
    """``ln Z`` of the Drude oscillator for complex ``beta`` from Gamma functions.

    ``Z = Gamma(1-L1) Gamma(1-L2) Gamma(1-L3) / (beta Omega Gamma(1+L_D))`` with
    ``L_i = beta lambda_i / 2 pi`` and ``L_D = beta omega_d / 2 pi``.
    """
    if params.is_free:
        raise ValueError("partition_complex needs omega_0 > 0")
    b = np.asarray(beta, dtype=complex)
    if np.any(b.real <= 0):
        raise ValueError("Re(beta) must be > 0")
    roots = characteristic_roots(params)
    scale = b / TWO_PI
    pair = [r for r in roots if r.imag != 0]
    real = [r for r in roots if r.imag == 0]
    total = -np.log(b * params.omega_0) - log_gamma(1.0 + scale * params.omega_d)
    if pair:
        total = total + (log_gamma(1.0 - scale * pair[0]) + log_gamma(1.0 - scale * pair[1]))
    for r in real:
        total = total + log_gamma(1.0 - scale * r.real)
    if total.ndim == 0:
        return complex(total)
    return total


def partition_complex(params: DrudeParams, beta):
    """Drude-oscillator partition function continued to ``Re(beta) > 0``."""
    return np.exp(log_partition_complex(params, beta))


def _mean_energy(params: DrudeParams, beta: float) -> float:
    h = 1e-3 * beta
    up = log_partition_complex(params, beta + h).real
    down = log_partition_complex(params, beta - h).real
    return -(up - down) / (2.0 * h)


def ground_state_energy(params: DrudeParams, beta: float | None = None) -> float:
    """Energy of the weight-one delta: ``-d ln Z / d beta`` extrapolated to beta -> oo.

    The mean energy approaches ``E_0`` as ``1/beta^2``; one Richardson step
    between ``beta`` and ``2 beta`` (default ``beta = 1e3 / Omega``) removes
    that term.
    """
    if beta is None:
        beta = 1e3 / params.omega_0
    e1 = _mean_energy(params, beta)
    e2 = _mean_energy(params, 2.0 * beta)
    return (4.0 * e2 - e1) / 3.0


@dataclass(frozen=True)
class BromwichConfig:
    """FFT inversion settings.

    ``tau_max`` is tied to the energy spacing by ``d_eps * tau_max = pi``;
    leave it ``None`` to derive it from the grid.  ``window`` is ``"gauss"``
    (standard deviation ``tau_max / 3``) or ``"cosine"``.
    """

    sigma: float = 0.5
    samples: int = 16384
    tau_max: float | None = None
    window: str = "gauss"
    check_window: bool = True

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if self.samples < 2 or self.samples & (self.samples - 1):
            raise ValueError("samples must be a power of two")
        if self.window not in ("gauss", "cosine"):
            raise ValueError("window must be 'gauss' or 'cosine'")


def default_energy_grid(params: DrudeParams, spacing: float = 0.0025,
                        below: float = 0.5, above: float = 5.0) -> np.ndarray:
    """Uniform grid from ``E_0 - below`` to ``E_0 + above`` (units of the frequencies)."""
    e0 = ground_state_energy(params)
    n = int(round((below + above) / spacing)) + 1
    return e0 - below + spacing * np.arange(n)


def _window(kind: str, tau: np.ndarray, tau_max: float) -> np.ndarray:
    if kind == "gauss":
        w = np.exp(-0.5 * (3.0 * tau / tau_max) ** 2)
    else:
        w = np.cos(0.5 * math.pi * tau / tau_max)
    # The unpaired -tau_max sample would break the tau -> -tau symmetry.
    w[0] = 0.0
    return w


def _check_grid(e_grid: np.ndarray, cfg: BromwichConfig) -> tuple[float, float]:
    if e_grid.ndim != 1 or e_grid.size < 2:
        raise ValueError("energy grid needs at least two points")
    steps = np.diff(e_grid)
    spacing = float(steps.mean())
    if not spacing > 0 or np.max(np.abs(steps - spacing)) > 1e-9 * max(1.0, abs(e_grid).max()):
        raise ValueError("energy grid must be uniform and increasing")
    if e_grid.size > cfg.samples:
        raise ValueError("energy grid has more points than FFT samples")
    tau_max = math.pi / spacing
    if cfg.tau_max is not None and abs(cfg.tau_max - tau_max) > 1e-9 * tau_max:
        raise ValueError(
            f"reciprocity violated: spacing * tau_max must equal pi "
            f"(spacing={spacing:g}, tau_max={cfg.tau_max:g})")
    return spacing, tau_max


def bromwich_dos(params: DrudeParams, e_grid, cfg: BromwichConfig | None = None) -> DosCurve:
    """Continuous part of the Drude-oscillator density of states by FFT.

    ``rho(E) = (1/2 pi) int dtau [Z(s + i tau) - exp(-(s + i tau) E_0)] exp((s + i tau) E)``
    with ``s = cfg.sigma``.  The tau grid has ``cfg.samples`` points on
    ``[-tau_max, tau_max)`` and is tapered by the chosen window.  With
    ``cfg.check_window`` the other window is evaluated too and a
    :class:`WindowSensitivityWarning` is issued if they differ by more than
    2% of the peak.
    """
    cfg = cfg or BromwichConfig()
    e = np.asarray(e_grid, dtype=float)
    spacing, tau_max = _check_grid(e, cfg)
    n = cfg.samples
    d_tau = 2.0 * tau_max / n
    tau = (np.arange(n) - n // 2) * d_tau
    beta = cfg.sigma + 1j * tau
    e0 = ground_state_energy(params)
    transform = partition_complex(params, beta) - np.exp(-beta * e0)
    e_start = e[0]
    phase = np.exp(-1j * (n // 2) * d_tau * spacing * np.arange(e.size))
    damping = (d_tau / TWO_PI) * np.exp(cfg.sigma * e)

    def invert(kind):
        vals = np.fft.ifft(transform * _window(kind, tau, tau_max) * np.exp(1j * tau * e_start)) * n
        return vals[: e.size] * phase * damping

    rho = invert(cfg.window)
    peak = float(np.max(rho.real))
    resid = float(np.max(np.abs(rho.imag)))
    if resid > 1e-8 * abs(peak):
        warnings.warn(f"Bromwich inversion left an imaginary residue {resid:.2g}", RuntimeWarning,
                      stacklevel=2)
    if cfg.check_window:
        other = invert("cosine" if cfg.window == "gauss" else "gauss").real
        diff = float(np.max(np.abs(other - rho.real)))
        if diff > 0.02 * abs(peak):
            warnings.warn(f"window choice changes the density by {diff / peak:.1%} of its peak",
                          WindowSensitivityWarning, stacklevel=2)
    return DosCurve(e, rho.real, cfg.sigma, e0)


def window_difference(params: DrudeParams, e_grid, cfg: BromwichConfig | None = None) -> float:
    """Largest Gaussian-vs-cosine difference relative to the peak."""
    cfg = cfg or BromwichConfig()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WindowSensitivityWarning)
        g = bromwich_dos(params, e_grid, BromwichConfig(cfg.sigma, cfg.samples, cfg.tau_max, "gauss", False))
        c = bromwich_dos(params, e_grid, BromwichConfig(cfg.sigma, cfg.samples, cfg.tau_max, "cosine", False))
    return float(np.max(np.abs(g.values - c.values)) / np.max(g.values))
