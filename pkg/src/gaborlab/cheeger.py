"""Candidate-cut upper bounds for the Cheeger constant of weighted domains.

A cut splits the domain into D and its complement; its ratio is the
1D-quadrature weight mass along the cut boundary inside the domain divided
by the cell-quadrature mass of the lighter side (which automatically obeys
the half-mass constraint).  The minimum over a cut family upper-bounds the
Cheeger constant; the cut family is restricted to vertical lines and
origin-centered circles, which separate every geometry treated here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import TFGrid
from .spectral import (
    SpectralDecomposition,
    WeightedDomain,
    poincare_estimate,
    solve_spectrum,
    weighted_domain_from_values,
)

CUT_KINDS = ("vertical_line", "circle")


class InadmissibleCutError(ValueError):
    """Cut misses the domain or fails to separate any mass."""


@dataclass(frozen=True)
class Cut:
    kind: str
    parameter: float  # x-position for vertical_line, radius for circle

    def __post_init__(self):
        if self.kind not in CUT_KINDS:
            raise ValueError(f"unknown cut kind {self.kind!r}")
        if self.kind == "circle" and self.parameter <= 0:
            raise ValueError("circle radius must be positive")


@dataclass(frozen=True)
class CheegerReport:
    best_cut: Cut
    h_upper: float
    lambda1: float
    inverse_h: float
    poincare: float
    chain_ok: bool
    chain_slack: float


def _vertical_side_masses(domain: WeightedDomain, c):
    """(mass of {x < c}, mass of {x > c}) with boundary cells split by
    coverage.  Both sides are summed directly: subtracting from the total
    cancels catastrophically when one side carries almost all the mass."""
    grid = domain.grid
    xs = grid.x_nodes()
    frac = np.clip((c - (xs - grid.dx / 2.0)) / grid.dx, 0.0, 1.0)
    w = np.where(domain.mask, domain.weight, 0.0)
    col_mass = w.sum(axis=1) * grid.cell_area
    return float((col_mass * frac).sum()), float((col_mass * (1.0 - frac)).sum())


def _vertical_side_mass(domain: WeightedDomain, c):
    return _vertical_side_masses(domain, c)[0]


def _vertical_boundary_integral(domain: WeightedDomain, c):
    """Trapezoid of the bilinearly interpolated weight along x = c in Omega."""
    grid = domain.grid
    xs = grid.x_nodes()
    if not (xs[0] <= c <= xs[-1]):
        return 0.0
    i = min(int((c - xs[0]) / grid.dx), grid.nx - 2)
    t = (c - xs[i]) / grid.dx
    line_ok = domain.mask[i, :] & domain.mask[i + 1, :]
    line_w = (1.0 - t) * domain.weight[i, :] + t * domain.weight[i + 1, :]
    total = 0.0
    for j in range(grid.nw - 1):
        if line_ok[j] and line_ok[j + 1]:
            total += 0.5 * (line_w[j] + line_w[j + 1]) * grid.dw
    return total


def _bilinear(domain: WeightedDomain, x, w):
    """(weight, in_mask) at arbitrary points by bilinear interpolation."""
    grid = domain.grid
    gx, gw = grid.x_nodes(), grid.w_nodes()
    ix = np.clip(((x - gx[0]) / grid.dx).astype(int), 0, grid.nx - 2)
    iw = np.clip(((w - gw[0]) / grid.dw).astype(int), 0, grid.nw - 2)
    tx = (x - gx[ix]) / grid.dx
    tw = (w - gw[iw]) / grid.dw
    inside = (x >= gx[0]) & (x <= gx[-1]) & (w >= gw[0]) & (w <= gw[-1])
    m = domain.mask
    ok = m[ix, iw] & m[ix + 1, iw] & m[ix, iw + 1] & m[ix + 1, iw + 1]
    wt = domain.weight
    val = (
        wt[ix, iw] * (1 - tx) * (1 - tw)
        + wt[ix + 1, iw] * tx * (1 - tw)
        + wt[ix, iw + 1] * (1 - tx) * tw
        + wt[ix + 1, iw + 1] * tx * tw
    )
    return val, inside & ok


def _circle_side_masses(domain: WeightedDomain, r):
    X, W = domain.grid.mesh()
    inside = (X**2 + W**2 <= r**2) & domain.mask
    outside = domain.mask & ~inside
    area = domain.grid.cell_area
    return (float(domain.weight[inside].sum()) * area,
            float(domain.weight[outside].sum()) * area)


def _circle_boundary_integral(domain: WeightedDomain, r):
    grid = domain.grid
    n_theta = max(512, int(8.0 * 2.0 * math.pi * r / min(grid.dx, grid.dw)))
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    x = r * np.cos(theta)
    w = r * np.sin(theta)
    val, ok = _bilinear(domain, x, w)
    return float(val[ok].sum()) * r * (2.0 * math.pi / n_theta)


def cut_ratio(domain: WeightedDomain, cut: Cut, p=None) -> float:
    """Boundary-to-bulk weighted mass ratio of the admissible side of a cut.

    The domain weight is already the p-th power measure density, so p is
    accepted only for interface symmetry.
    """
    del p
    if cut.kind == "vertical_line":
        lo, hi = _vertical_side_masses(domain, cut.parameter)
        boundary = _vertical_boundary_integral(domain, cut.parameter)
    else:
        lo, hi = _circle_side_masses(domain, cut.parameter)
        boundary = _circle_boundary_integral(domain, cut.parameter)
    side = min(lo, hi)
    if side <= 0.0 or boundary <= 0.0:
        raise InadmissibleCutError(f"{cut} does not separate the domain")
    return boundary / side


def cheeger_upper_bound(
    domain: WeightedDomain,
    family,
    p=None,
    chain_slack=10.0,
    decomposition: SpectralDecomposition | None = None,
) -> CheegerReport:
    """Best (smallest) cut ratio over the family, plus the spectral chain.

    chain_ok records whether the Poincare estimate is at most
    chain_slack / h_upper; the hidden constants of the chain are not
    claimed, only recorded against the configured slack.
    """
    family = list(family)
    if not family:
        raise InadmissibleCutError("empty cut family")
    best = None
    for cut in family:
        try:
            ratio = cut_ratio(domain, cut)
        except InadmissibleCutError:
            continue
        if best is None or ratio < best[1]:
            best = (cut, ratio)
    if best is None:
        raise InadmissibleCutError("no admissible cut in the family")
    dec = decomposition or solve_spectrum(domain, 2)
    lam1 = float(dec.eigenvalues[1])
    poinc = poincare_estimate(dec)
    inverse_h = 1.0 / best[1]
    return CheegerReport(
        best_cut=best[0],
        h_upper=best[1],
        lambda1=lam1,
        inverse_h=inverse_h,
        poincare=poinc,
        chain_ok=bool(poinc <= chain_slack * inverse_h),
        chain_slack=chain_slack,
    )


def vertical_cut_family(x_lo, x_hi, count):
    return [Cut("vertical_line", c) for c in np.linspace(x_lo, x_hi, count)]


def circle_cut_family(r_lo, r_hi, count):
    return [Cut("circle", r) for r in np.linspace(r_lo, r_hi, count)]


def dumbbell_weight(
    separation,
    bridge_height,
    bump_sigma,
    grid: TFGrid,
    corridor_sigma=None,
    floor_rel=1e-14,
) -> WeightedDomain:
    """Two Gaussian bumps joined by a thin corridor along the x-axis.

    weight = bump(-separation/2) + bump(+separation/2)
           + bridge_height * exp(-w^2 / (2 corridor_sigma^2)) on |x| <= separation/2.

    The corridor is kept narrow by default (bump_sigma / 4) so its mass stays
    small against the bumps; pass corridor_sigma explicitly to widen it.
    """
    if separation <= 4.0 * bump_sigma:
        raise ValueError("separation must exceed 4 * bump_sigma")
    if not (0.0 < bridge_height <= 1.0):
        raise ValueError("bridge_height must lie in (0, 1]")
    if corridor_sigma is None:
        corridor_sigma = bump_sigma / 4.0
    X, W = grid.mesh()
    s2 = 2.0 * bump_sigma**2
    vals = np.exp(-((X + separation / 2.0) ** 2 + W**2) / s2)
    vals += np.exp(-((X - separation / 2.0) ** 2 + W**2) / s2)
    corridor = bridge_height * np.exp(-(W**2) / (2.0 * corridor_sigma**2))
    vals += np.where(np.abs(X) <= separation / 2.0, corridor, 0.0)
    return weighted_domain_from_values(grid, vals, floor_rel=floor_rel)
