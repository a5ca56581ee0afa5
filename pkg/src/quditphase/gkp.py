"""Exact lattice-coefficient form of ideal grid-code states.

An ideal encoded qudit state is a comb of delta peaks; everything about
it is carried by countably many coefficients attached to lattice points
with spacing sqrt(pi/2d) per quadrature. Restricted to one unit cell the
labels live on Z_{2d}^{2n}, so the whole continuous-variable object is a
finite table:

* Wigner-cell coefficients equal the doubled-domain x distribution,
  with prefactor (d/8pi)^{n/2} per delta peak.
* Characteristic-cell coefficients are
  gamma(u) = d^n e^{-i pi l.m/d} w_d^{-l.m/2} chi(u)^*,
  prefactor (2pi/d)^{n/2}, so |gamma| = d^n |chi|.

Cell l_p norms are therefore plain coefficient sums. For every pure
stabilizer input they collapse to closed forms, and the quotient against
that baseline reproduces d^{n(1-1/p)} ||x||_p (resp. ||chi||_p) exactly;
``verify_theorem1`` / ``verify_theorem2`` return those residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Mapping

import numpy as np

from .core import DensityState, QuditSystem, ValidationError
from .basis import Domain, PhasePoint
from .measures import characteristic_fn, lp_norm, x_distribution

__all__ = [
    "GkpKind",
    "GkpLatticeCoefficients",
    "gkp_wigner_coefficients",
    "gkp_char_coefficients",
    "cell_lp_norm",
    "stabilizer_cell_norm",
    "verify_theorem1",
    "verify_theorem2",
    "renyi_from_cell_norms",
]


class GkpKind(str, Enum):
    WIGNER = "WIGNER"
    CHARACTERISTIC = "CHARACTERISTIC"


def _cell_points(system: QuditSystem):
    mod = 2 * system.d
    n = system.n
    for vec in product(range(mod), repeat=2 * n):
        yield PhasePoint(vec[:n], vec[n:], mod)


@dataclass(frozen=True)
class GkpLatticeCoefficients:
    """One unit cell worth of delta-peak weights for an encoded state."""

    system: QuditSystem
    kind: GkpKind
    values: Mapping[PhasePoint, complex]
    prefactor: float

    def __post_init__(self):
        if self.kind == GkpKind.WIGNER:
            worst = max((abs(complex(v).imag) for v in self.values.values()), default=0.0)
            if worst > 1e-10:
                raise ValidationError(f"Wigner cell values must be real (dev {worst:.3e})")

    def value(self, point: PhasePoint) -> complex:
        return self.values.get(point, 0.0)

    def as_array(self) -> np.ndarray:
        mod = 2 * self.system.d
        out = np.zeros((mod,) * (2 * self.system.n), dtype=complex)
        for pt, v in self.values.items():
            out[tuple(pt.vector())] = v
        return out


def gkp_wigner_coefficients(rho: DensityState) -> GkpLatticeCoefficients:
    """Wigner-cell weights: exactly the doubled-domain x distribution."""
    system = rho.system
    dist = x_distribution(rho, Domain.FULL)
    vals = {pt: complex(dist.value(pt)) for pt in _cell_points(system)}
    pref = (system.d / (8 * math.pi)) ** (system.n / 2)
    return GkpLatticeCoefficients(system, GkpKind.WIGNER, vals, pref)


def gkp_char_coefficients(rho: DensityState) -> GkpLatticeCoefficients:
    """Characteristic-cell weights gamma from the doubled-domain chi."""
    system = rho.system
    d, n = system.d, system.n
    chi = characteristic_fn(rho, Domain.FULL)
    vals: dict[PhasePoint, complex] = {}
    for pt in _cell_points(system):
        lm = sum(int(l) * int(m) for l, m in zip(pt.l, pt.m))
        phase = np.exp(-1j * math.pi * lm / d)
        if d % 2:
            h = pow(2, -1, d)
            phase *= np.exp(-2j * math.pi * ((h * lm) % d) / d)
        else:
            phase *= np.exp(-1j * math.pi * lm / d)
        vals[pt] = d**n * phase * np.conj(chi.value(pt))
    pref = (2 * math.pi / d) ** (n / 2)
    return GkpLatticeCoefficients(system, GkpKind.CHARACTERISTIC, vals, pref)


def cell_lp_norm(coeffs: GkpLatticeCoefficients, p: float) -> float:
    """(sum over the cell of (prefactor |value|)^p)^{1/p}."""
    if p <= 0:
        raise ValidationError("p must be positive")
    total = sum(
        (coeffs.prefactor * abs(v)) ** p for v in coeffs.values.values() if abs(v) > 1e-14
    )
    return float(total ** (1.0 / p))


def stabilizer_cell_norm(system: QuditSystem, kind: GkpKind, p: float) -> float:
    """Closed-form cell norm shared by every pure stabilizer input."""
    if p <= 0:
        raise ValidationError("p must be positive")
    d, n = system.d, system.n
    if kind == GkpKind.WIGNER:
        return (4 * d) ** (n / p) / (8 * math.pi * d) ** (n / 2)
    return (2 * math.pi / d) ** (n / 2) * (4 * d) ** (n / p)


def verify_theorem1(rho: DensityState, p: float) -> float:
    """|d^{n(1-1/p)} ||x||_p  -  Wigner cell norm / stabilizer baseline|."""
    system = rho.system
    lhs = system.d ** (system.n * (1 - 1 / p)) * lp_norm(
        x_distribution(rho, Domain.RESTRICTED), p
    )
    cell = cell_lp_norm(gkp_wigner_coefficients(rho), p)
    rhs = cell / stabilizer_cell_norm(system, GkpKind.WIGNER, p)
    return abs(lhs - rhs)


def verify_theorem2(rho: DensityState, p: float) -> float:
    """Characteristic-side analogue of ``verify_theorem1``."""
    system = rho.system
    lhs = system.d ** (system.n * (1 - 1 / p)) * lp_norm(
        characteristic_fn(rho, Domain.RESTRICTED), p
    )
    cell = cell_lp_norm(gkp_char_coefficients(rho), p)
    rhs = cell / stabilizer_cell_norm(system, GkpKind.CHARACTERISTIC, p)
    return abs(lhs - rhs)


def renyi_from_cell_norms(rho: DensityState, alpha: float) -> float:
    """Order-alpha stabilizer Renyi entropy recovered from cell norms.

    Uses p = 2 alpha: M_alpha = (2 alpha / (1 - alpha)) log(cell ratio).
    """
    if alpha <= 0 or alpha == 1:
        raise ValidationError("alpha must be positive and != 1")
    p = 2.0 * alpha
    system = rho.system
    ratio = cell_lp_norm(gkp_char_coefficients(rho), p) / stabilizer_cell_norm(
        system, GkpKind.CHARACTERISTIC, p
    )
    return float(2 * alpha / (1 - alpha) * math.log(ratio))
