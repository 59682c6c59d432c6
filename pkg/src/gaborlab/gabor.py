"""Gabor and Bargmann transforms of Gaussian sums.

The Gabor transform used throughout is
    G f(x, w) = 2^{1/4} int f(t) exp(-pi (t-x)^2) exp(-2 pi i t w) dt,
and for the window itself G phi(x, w) = exp(-pi i x w) exp(-pi (x^2+w^2)/2).
Combining that closed form with the shift/modulation covariance of the
transform gives the single-atom closed form

    G (c M_b T_u phi)(x, w)
        = c exp(-2 pi i u (w-b)) G phi(x-u, w-b)
        = c exp(-2 pi i u (w-b)) exp(-pi i (x-u)(w-b))
            exp(-pi ((x-u)^2 + (w-b)^2) / 2),

which is validated against a quadrature oracle rather than trusted.
"""

from __future__ import annotations

import math

import numpy as np

from .grid import ComplexField, MagnitudeField, TFGrid
from .signals import GAUSSIAN_PEAK, GaussianSum

QUADRATURE_NODE_LIMIT = 10**7
_LOG_HUGE = math.log(np.finfo(float).max)


def gabor_eval(f: GaussianSum, x, w):
    """Closed-form G f at (x, w); x and w may be arrays (broadcast)."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    out = np.zeros(np.broadcast(x, w).shape, dtype=complex)
    for a in f.atoms:
        xs = x - a.shift
        ws = w - a.modulation
        out += a.coeff * np.exp(
            -2j * np.pi * a.shift * ws
            - 1j * np.pi * xs * ws
            - np.pi * (xs * xs + ws * ws) / 2.0
        )
    return out if out.shape else complex(out)


def gabor_quadrature_oracle(f: GaussianSum, x, w, step=1e-3, half_width=8.0):
    """Trapezoid approximation of the defining integral.

    Parameters
    ----------
    f : GaussianSum
    x, w : float
        Evaluation point in the time-frequency plane.
    step : float
        Uniform trapezoid step, > 0.
    half_width : float
        The integration interval covers the window center x and every atom
        center, extended by half_width on each side.

    Independent of the closed-form code path on purpose: this is the oracle
    the closed form is tested against.
    """
    if step <= 0 or half_width <= 0:
        raise ValueError("step and half_width must be positive")
    if f.is_zero:
        return 0j
    lo = min(float(np.min(f.shifts)), x) - half_width
    hi = max(float(np.max(f.shifts)), x) + half_width
    t = np.arange(lo, hi + step, step)
    ft = f.evaluate(t)
    integrand = (
        GAUSSIAN_PEAK * ft * np.exp(-np.pi * (t - x) ** 2) * np.exp(-2j * np.pi * t * w)
    )
    return complex(np.trapezoid(integrand, dx=step))


def gabor_field(f: GaussianSum, grid: TFGrid, mode="closed") -> ComplexField:
    """G f sampled on every grid node, row-major with omega fastest."""
    if mode not in ("closed", "quadrature"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "quadrature":
        if grid.n_nodes > QUADRATURE_NODE_LIMIT:
            raise ValueError("quadrature mode refused for > 1e7 nodes")
        xs = grid.x_nodes()
        ws = grid.w_nodes()
        vals = np.empty(grid.shape, dtype=complex)
        for i, xv in enumerate(xs):
            for j, wv in enumerate(ws):
                vals[i, j] = gabor_quadrature_oracle(f, xv, wv)
        return ComplexField(grid, vals)
    X, W = grid.mesh()
    return ComplexField(grid, gabor_eval(f, X, W))


def gabor_magnitude_field(f: GaussianSum, grid: TFGrid) -> MagnitudeField:
    return gabor_field(f, grid).magnitude()


# ---------------------------------------------------------------------------
# Bargmann transform: B f(z) relates to the Gabor transform through
# |B f(x + i w)| = |G f(x, -w)| exp(pi (x^2 + w^2) / 2).  For an atom the
# entire-function closed form is
#     B (c M_b T_u phi)(z) = c exp(pi z (u + i b) - pi u^2 + (pi/2)(u + i b)^2).
# ---------------------------------------------------------------------------


def _bargmann_exponents(f: GaussianSum, z):
    """Per-atom exponents g_j(z) with B f(z) = sum_j c_j exp(g_j(z))."""
    z = np.asarray(z, dtype=complex)
    gs = []
    for a in f.atoms:
        ub = a.shift + 1j * a.modulation
        q = -np.pi * a.shift**2 + (np.pi / 2.0) * ub * ub
        gs.append(np.pi * z * ub + q)
    return gs


def bargmann_eval(f: GaussianSum, z):
    """B f(z) for complex z (scalar or array); stable via max-exponent factoring."""
    if f.is_zero:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        return out if out.shape else 0j
    gs = _bargmann_exponents(f, z)
    m = np.max([np.real(g) for g in gs], axis=0)
    acc = sum(c * np.exp(g - m) for c, g in zip(f.coeffs, gs))
    return np.exp(m) * acc


def bargmann_derivative(f: GaussianSum, z):
    """Analytic derivative (B f)'(z) from the closed form."""
    if f.is_zero:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        return out if out.shape else 0j
    gs = _bargmann_exponents(f, z)
    m = np.max([np.real(g) for g in gs], axis=0)
    acc = 0j
    for a, g in zip(f.atoms, gs):
        ub = a.shift + 1j * a.modulation
        acc = acc + a.coeff * (np.pi * ub) * np.exp(g - m)
    return np.exp(m) * acc


def _bargmann_conj_eval(f: GaussianSum, zbar):
    """Evaluate conj-coefficient companion F~ with F~(conj z) = conj(F(z))."""
    conj_f = GaussianSum(
        (np.conj(a.coeff), a.shift, -a.modulation) for a in f.atoms
    )
    return bargmann_eval(conj_f, zbar)


def bargmann_cs_derivative(f: GaussianSum, z, h=1e-6):
    """(B f)'(z) by complex-step differentiation of the closed form.

    The real and imaginary parts of F along the real direction are continued
    analytically through the companion function F~(w) = conj(F(conj w)), so
    Re F' and Im F' are read off imaginary parts of F(z + ih) and F~(z* + ih)
    with no subtractive step in h.
    """
    z = complex(z)
    A = bargmann_eval(f, z + 1j * h)
    B = _bargmann_conj_eval(f, np.conj(z) + 1j * h)
    re = (np.imag(A) + np.imag(B)) / (2.0 * h)
    im = (np.real(B) - np.real(A)) / (2.0 * h)
    return complex(re, im)


def bargmann_modulus(f: GaussianSum, x, w):
    """|B f| at z = x + i w, i.e. |G f(x, -w)| exp(pi (x^2 + w^2)/2).

    Computed in log space; returns +inf when the result exceeds the double
    range (overflow flag per contract).
    """
    if f.is_zero:
        return 0.0
    gs = _bargmann_exponents(f, complex(x, w))
    m = max(float(np.real(g)) for g in gs)
    acc = sum(c * np.exp(g - m) for c, g in zip(f.coeffs, gs))
    mag = abs(acc)
    if mag == 0.0:
        return 0.0
    log_total = m + math.log(mag)
    if log_total > _LOG_HUGE:
        return math.inf
    return math.exp(log_total)
