"""Special functions and low-degree polynomial roots.

Everything here works on plain Python/numpy numbers; ``log_gamma`` and
``trigamma`` accept complex scalars or arrays and are vectorized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError

# Bernoulli numbers B_2, B_4, ..., B_16.
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
)

# Arguments are shifted upward until Re(z) >= this before the asymptotic tail.
_ASYMPTOTIC_RE = 10.0

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def boson_heat(x):
    """Specific heat of one harmonic mode in units of k_B, ``(x / sinh x)**2``.

    ``x = hbar * beta * omega / 2``.  Uses ``(2x e^{-x} / (1 - e^{-2x}))**2``
    above ``x = 1e-2`` so nothing overflows, and the Taylor series
    ``1 - x^2/3 + x^4/15 - 2x^6/189`` below it.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("boson_heat requires x >= 0")
    out = np.empty_like(arr)
    small = arr <= 1e-2
    xs = arr[small]
    x2 = xs * xs
    out[small] = 1.0 + x2 * (-1.0 / 3.0 + x2 * (1.0 / 15.0 - x2 * 2.0 / 189.0))
    xl = arr[~small]
    out[~small] = (2.0 * xl * np.exp(-xl) / -np.expm1(-2.0 * xl)) ** 2
    if out.ndim == 0:
        return float(out)
    return out


def _prepare(z):
    """Return ``(complex array, scalar?, real-output?)`` and reject poles."""
    real_input = np.isrealobj(z)
    arr = np.asarray(z, dtype=complex)
    on_axis = arr.imag == 0
    re = arr.real
    if np.any(on_axis & (re <= 0) & (re == np.round(re))):
        raise PoleError("argument is a non-positive integer")
    if not np.all(np.isfinite(arr)):
        raise ValueError("argument must be finite")
    real_out = real_input and bool(np.all(re > 0))
    return arr, arr.ndim == 0, real_out


def _finish(val, scalar, real_out):
    if real_out:
        val = val.real
    if scalar:
        return val.item()
    return val


def _shift_counts(re):
    return np.maximum(0, np.ceil(_ASYMPTOTIC_RE - re)).astype(np.int64)


def log_gamma(z):
    """Logarithm of the Gamma function for complex ``z``.

    The branch is the analytic continuation of the real log-gamma from the
    positive axis, cut along the negative real axis (the same branch as
    ``scipy.special.loggamma``).  Stirling series applied after the upward
    recurrence ``log Gamma(z) = log Gamma(z + n) - sum_k log(z + k)``.
    """
    arr, scalar, real_out = _prepare(z)
    flat = arr.ravel()
    shifts = _shift_counts(flat.real)
    w = flat + shifts
    acc = np.zeros_like(flat)
    for k in range(int(shifts.max(initial=0))):
        active = shifts > k
        acc[active] += np.log(flat[active] + k)
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(flat)
    power = inv
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k * (2 * k - 1)) * power
        power = power * inv2
    val = (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + series - acc
    return _finish(val.reshape(arr.shape), scalar, real_out)


def trigamma(z):
    """Trigamma function ``psi'(z)`` for complex ``z``.

    ``psi'(z) = psi'(z + 1) + 1/z**2`` shifts the argument to ``Re >= 10``,
    where the asymptotic series ``1/w + 1/(2w^2) + sum B_2k / w^(2k+1)`` is
    summed with eight Bernoulli terms.
    """
    arr, scalar, real_out = _prepare(z)
    flat = arr.ravel()
    shifts = _shift_counts(flat.real)
    w = flat + shifts
    acc = np.zeros_like(flat)
    for k in range(int(shifts.max(initial=0))):
        active = shifts > k
        t = flat[active] + k
        acc[active] += 1.0 / (t * t)
    inv = 1.0 / w
    inv2 = inv * inv
    tail = np.zeros_like(flat)
    power = inv * inv2
    for b in _BERNOULLI:
        tail += b * power
        power = power * inv2
    val = acc + inv + 0.5 * inv2 + tail
    return _finish(val.reshape(arr.shape), scalar, real_out)


@dataclass(frozen=True)
class CubicRoots:
    """Roots of a real monic cubic, sorted by ``(re, im)``.

    Real roots carry an imaginary part of exactly zero; a complex pair is
    stored as exact conjugates.
    """

    roots: tuple[complex, complex, complex]

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    def __len__(self):
        return 3


def _sorted_roots(roots):
    return tuple(sorted((complex(r) for r in roots), key=lambda r: (r.real, r.imag)))


def solve_quadratic(b: float, c: float) -> tuple[complex, complex]:
    """Roots of the real monic quadratic ``x**2 + b x + c``.

    A negative discriminant yields an exact conjugate pair; otherwise the
    cancellation-free pair ``q, c/q`` is returned.  Sorted by ``(re, im)``.
    """
    disc = b * b - 4.0 * c
    if disc < 0:
        re = -0.5 * b
        im = 0.5 * math.sqrt(-disc)
        return (complex(re, -im), complex(re, im))
    if b == 0 and c == 0:
        return (0j, 0j)
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1 = q
    r2 = c / q if q != 0 else 0.0
    return tuple(sorted((complex(r1, 0.0), complex(r2, 0.0)), key=lambda r: r.real))


def _cubic(x, c2, c1, c0):
    return ((x + c2) * x + c1) * x + c0


def _cubic_prime(x, c2, c1):
    return (3.0 * x + 2.0 * c2) * x + c1


def _polish(x, c2, c1, c0):
    """One Newton step, kept only if it reduces the residual."""
    dp = _cubic_prime(x, c2, c1)
    if dp == 0:
        return x
    y = x - _cubic(x, c2, c1, c0) / dp
    if abs(_cubic(y, c2, c1, c0)) < abs(_cubic(x, c2, c1, c0)):
        return y
    return x


def _real_root(c2, c1, c0):
    """One real root by Newton iteration safeguarded with bisection."""
    if c0 == 0:
        return 0.0
    bound = 1.0 + max(abs(c2), abs(c1), abs(c0))
    lo, hi = -bound, bound
    x = -c2 / 3.0
    for _ in range(200):
        fx = _cubic(x, c2, c1, c0)
        if fx == 0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        dfx = _cubic_prime(x, c2, c1)
        step_ok = False
        if dfx != 0:
            y = x - fx / dfx
            if lo < y < hi:
                step_ok = True
        if not step_ok:
            y = 0.5 * (lo + hi)
        if abs(y - x) <= 4e-16 * max(1.0, abs(x)) or hi - lo <= 4e-16 * max(1.0, abs(x)):
            return y
        x = y
    return x


def solve_cubic(c2: float, c1: float, c0: float) -> CubicRoots:
    """All roots of the real monic cubic ``x**3 + c2 x**2 + c1 x + c0``.

    A bracketed real root is found first, the cubic is deflated to a
    quadratic, and each root gets one residual-reducing Newton polish.  A
    complex pair is polished once and re-conjugated so the pair stays exact.
    """
    c2, c1, c0 = float(c2), float(c1), float(c0)
    if not all(math.isfinite(c) for c in (c2, c1, c0)):
        raise ValueError("cubic coefficients must be finite")
    r = _real_root(c2, c1, c0)
    b = c2 + r
    # Deflate with whichever back-substitution is better conditioned.
    if abs(r) > 1.0 and r != 0:
        c = -c0 / r
    else:
        c = c1 + r * b
    q1, q2 = solve_quadratic(b, c)
    roots = [complex(r, 0.0)]
    if q1.imag != 0:
        z = _polish(q2, c2, c1, c0)
        z = complex(z.real, abs(z.imag))
        roots += [z, z.conjugate()]
    else:
        roots += [complex(_polish(q.real, c2, c1, c0), 0.0) for q in (q1, q2)]
    roots[0] = complex(_polish(r, c2, c1, c0), 0.0)
    return CubicRoots(_sorted_roots(roots))
