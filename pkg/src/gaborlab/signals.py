"""Gaussian-sum signal model.

Every signal handled by this package is a finite complex combination of
time-frequency shifted copies of the unit-norm Gaussian window
phi(t) = 2**(1/4) * exp(-pi t^2).  Staying inside this family keeps the
Gabor and Bargmann transforms, L2 inner products, and global-phase
distances exactly computable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GAUSSIAN_PEAK = 2.0 ** 0.25


@dataclass(frozen=True)
class GaussianAtom:
    """One term coeff * M_b T_u phi (translate by u, then modulate by b)."""

    coeff: complex
    shift: float
    modulation: float

    def __post_init__(self):
        if not (math.isfinite(self.shift) and math.isfinite(self.modulation)):
            raise ValueError("atom shift/modulation must be finite")
        if self.coeff == 0:
            raise ValueError("zero-coefficient atoms are not representable")


class GaussianSum:
    """Finite ordered sum of GaussianAtoms; duplicates on (u, b) are merged.

    The empty sum is the zero signal.  Instances are immutable; algebraic
    operations return new sums.
    """

    __slots__ = ("atoms", "_coeffs", "_shifts", "_modulations")

    def __init__(self, atoms=()):
        merged: dict[tuple[float, float], complex] = {}
        order: list[tuple[float, float]] = []
        for atom in atoms:
            if isinstance(atom, GaussianAtom):
                c, u, b = atom.coeff, atom.shift, atom.modulation
            else:
                c, u, b = atom
            key = (float(u), float(b))
            if key not in merged:
                merged[key] = 0j
                order.append(key)
            merged[key] += complex(c)
        kept = [(merged[k], k[0], k[1]) for k in order if merged[k] != 0]
        self.atoms = tuple(GaussianAtom(c, u, b) for c, u, b in kept)
        self._coeffs = np.array([a.coeff for a in self.atoms], dtype=complex)
        self._shifts = np.array([a.shift for a in self.atoms], dtype=float)
        self._modulations = np.array([a.modulation for a in self.atoms], dtype=float)

    # -- array views used by the transform code ---------------------------
    @property
    def coeffs(self):
        return self._coeffs

    @property
    def shifts(self):
        return self._shifts

    @property
    def modulations(self):
        return self._modulations

    def __len__(self):
        return len(self.atoms)

    @property
    def is_zero(self):
        return len(self.atoms) == 0

    def __repr__(self):
        body = ", ".join(
            f"({a.coeff!r}, u={a.shift!r}, b={a.modulation!r})" for a in self.atoms
        )
        return f"GaussianSum([{body}])"

    # -- algebra -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianSum):
            return NotImplemented
        return GaussianSum(self.atoms + other.atoms)

    def __sub__(self, other):
        if not isinstance(other, GaussianSum):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if isinstance(scalar, GaussianSum):
            return NotImplemented
        if scalar == 0:
            return GaussianSum()
        return GaussianSum(
            (a.coeff * scalar, a.shift, a.modulation) for a in self.atoms
        )

    __rmul__ = __mul__

    def scaled(self, scalar):
        return self * scalar

    def translated(self, u):
        """T_u f; commuting T_u past each modulation costs a phase e^{-2 pi i b u}."""
        return GaussianSum(
            (a.coeff * np.exp(-2j * np.pi * a.modulation * u), a.shift + u,
             a.modulation)
            for a in self.atoms
        )

    # -- pointwise evaluation ----------------------------------------------
    def evaluate(self, t):
        """Time-domain values sum_j c_j e^{2 pi i b_j t} phi(t - u_j)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for a in self.atoms:
            out += (
                a.coeff
                * np.exp(2j * np.pi * a.modulation * t)
                * GAUSSIAN_PEAK
                * np.exp(-np.pi * (t - a.shift) ** 2)
            )
        return out if out.shape else complex(out)


def gaussian(coeff=1.0, shift=0.0, modulation=0.0):
    """Single-atom signal coeff * M_b T_u phi; default is phi itself."""
    return GaussianSum([(coeff, shift, modulation)])


def atom_inner(u1, b1, u2, b2):
    """<M_{b1}T_{u1}phi, M_{b2}T_{u2}phi>, conjugate-linear in the first slot.

    Closed form from the Gaussian product rule:
    exp(-pi((u1-u2)^2 + (b1-b2)^2)/2) * exp(pi i (b2-b1)(u1+u2)).
    """
    du, db = u1 - u2, b1 - b2
    return np.exp(-np.pi * (du * du + db * db) / 2.0) * np.exp(
        1j * np.pi * (b2 - b1) * (u1 + u2)
    )


def signal_inner(f: GaussianSum, g: GaussianSum) -> complex:
    """L2 inner product <f, g>, conjugate-linear in f, exact via atom overlaps."""
    if f.is_zero or g.is_zero:
        return 0j
    total = 0j
    for af in f.atoms:
        for ag in g.atoms:
            total += (
                np.conj(af.coeff)
                * ag.coeff
                * atom_inner(af.shift, af.modulation, ag.shift, ag.modulation)
            )
    return complex(total)


def signal_norm(f: GaussianSum) -> float:
    """Exact L2 norm of a Gaussian sum."""
    return math.sqrt(max(signal_inner(f, f).real, 0.0))


def signal_phase_distance(f: GaussianSum, g: GaussianSum) -> float:
    """Global-phase metric min_alpha ||f - e^{i alpha} g||_2, exact.

    Equals sqrt(||f||^2 + ||g||^2 - 2 |<f, g>|), but is evaluated as
    ||f - e^{i alpha*} g|| with the subtraction done at the atom-coefficient
    level: the textbook form cancels catastrophically when f and g are
    within ~1e-8 of each other.
    """
    ip = signal_inner(f, g)
    alpha = math.atan2(ip.imag, ip.real) if ip != 0 else 0.0
    # alpha maximizes Re(e^{i alpha} <f, g>), so the aligned copy is e^{-i alpha} g
    residual = f - g * complex(math.cos(alpha), -math.sin(alpha))
    return signal_norm(residual)


def phase_equivalent(f: GaussianSum, g: GaussianSum, tol=1e-12) -> bool:
    """True iff f = e^{i alpha} g for some real alpha, decided algebraically.

    Gaussian atoms on distinct (u, b) are linearly independent, so the
    signals are equivalent exactly when the atom sets coincide and the
    coefficient ratio is one unimodular constant.  No cancellation issues
    for nearly-equal signals, unlike a numeric distance threshold.
    """
    if f.is_zero or g.is_zero:
        return f.is_zero and g.is_zero
    kf = {(a.shift, a.modulation): a.coeff for a in f.atoms}
    kg = {(a.shift, a.modulation): a.coeff for a in g.atoms}
    if kf.keys() != kg.keys():
        return False
    ratios = np.array([kf[k] / kg[k] for k in kf])
    if abs(abs(ratios[0]) - 1.0) > tol:
        return False
    return bool(np.all(np.abs(ratios - ratios[0]) <= tol))
