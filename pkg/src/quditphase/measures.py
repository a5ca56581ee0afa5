"""Quasiprobability distributions over qudit phase space and magic measures.

The central object is the coefficient distribution

    x_rho(l, m) = d^{-n} Tr(O_{l,m} rho)

on the restricted torus Z_d^{2n} or the doubled torus Z_{2d}^{2n}. From it
(and from its relatives, the discrete Wigner function W for odd d and the
characteristic function chi) the module computes l_p norms, the negativity
measure ||x||_1, the stabilizer Renyi entropy M_alpha, and the
hyperpolyhedral test ||x||_1 <= 1.

Reference values kept by the test suite:

* pure stabilizer states: ||x||_1 = 1 exactly (the minimum over pure states);
* the maximally mixed state: ||x||_1 = 1/2 for every even d and 1 for every
  odd d, while ||x||_2 = 1/d for all d (a purity identity);
* the qubit T state: ||x||_1 = (1 + sqrt2)/2 and M_2 = ln(4/3).
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import (
    DenseOperator,
    DensityState,
    GateKind,
    InvariantError,
    QuditSystem,
    ValidationError,
    conjugate_by,
    embed_generator,
    pure_density,
)
from .basis import (
    Domain,
    EvenDimensionError,
    PhasePoint,
    SymplecticAffineMap,
    a_stack,
    clifford_coordinate_action,
    o_stack,
    p_stack,
)

__all__ = [
    "QuasiDistribution",
    "x_distribution",
    "discrete_wigner",
    "characteristic_fn",
    "lp_norm",
    "magic_negativity",
    "stabilizer_renyi",
    "is_hyperpolyhedral",
    "normalization_residual",
    "haar_random_state",
    "random_clifford_word",
    "word_unitary",
    "word_coordinate_map",
    "apply_word",
    "NORM_CUTOFF",
]

# coefficients below this magnitude are treated as exact zeros before any
# norm accumulation (guards p < 1 norms against roundoff dust)
NORM_CUTOFF = 1e-12


@dataclass(frozen=True)
class QuasiDistribution:
    """Coefficients indexed by phase-space labels.

    ``values`` has 2n axes ordered (l_1..l_n, m_1..m_n), each of length d
    (RESTRICTED) or 2d (FULL).
    """

    system: QuditSystem
    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        mod = self.modulus
        arr = np.asarray(self.values)
        if arr.shape != (mod,) * (2 * self.system.n):
            raise ValidationError(
                f"values shape {arr.shape} does not match domain {self.domain}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def modulus(self) -> int:
        return self.system.d if self.domain is Domain.RESTRICTED else 2 * self.system.d

    def value(self, point: PhasePoint) -> complex:
        if point.modulus != self.modulus or point.n != self.system.n:
            raise ValidationError("point does not live on this domain")
        return self.values[point.l + point.m]

    def items(self) -> Iterator[tuple[PhasePoint, complex]]:
        n, mod = self.system.n, self.modulus
        for idx in np.ndindex(*self.values.shape):
            yield PhasePoint(idx[:n], idx[n:], mod), self.values[idx]

    def restricted_view(self) -> np.ndarray:
        """The values at labels in [0, d) along every axis."""
        d = self.system.d
        return self.values[(slice(0, d),) * (2 * self.system.n)]


def _contract_stack(system: QuditSystem, stack: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """sum over matrix entries of per-factor stacks: out[u] = Tr(Stack_u M).

    ``stack`` has shape (mod, mod, d, d); the result has 2n axes ordered
    (l-block, m-block).
    """
    d, n = system.d, system.n
    letters = string.ascii_letters
    subs, out_l, out_m, rows, cols = [], [], [], [], []
    k = 0
    for _ in range(n):
        li, mi, ri, ci = letters[k : k + 4]
        k += 4
        subs.append(li + mi + ri + ci)
        out_l.append(li)
        out_m.append(mi)
        rows.append(ri)
        cols.append(ci)
    rho_sub = "".join(cols) + "".join(rows)
    out_sub = "".join(out_l) + "".join(out_m)
    spec = ",".join(subs + [rho_sub]) + "->" + out_sub
    operands = [stack] * n + [matrix.reshape((d,) * (2 * n))]
    return np.einsum(spec, *operands, optimize=True)


def _coeff_array(system: QuditSystem, matrix: np.ndarray, domain: Domain) -> np.ndarray:
    mod = system.d if domain is Domain.RESTRICTED else 2 * system.d
    stack = o_stack(system.d, mod)
    return _contract_stack(system, stack, matrix) / system.dim


def normalization_residual(dist: QuasiDistribution) -> float:
    """|trace identity - 1| for an x distribution.

    Odd d: sum (-1)^{l.m} x = 1. Even d: 2^n * sum over all-even labels = 1.
    """
    d, n = dist.system.d, dist.system.n
    sub = dist.restricted_view() if dist.domain is Domain.FULL else dist.values
    idx = np.arange(d)
    if d % 2:
        sign1 = (-1.0) ** np.outer(idx, idx)  # (-1)^{l m} per factor
        total = sub
        for i in range(n):
            total = total * sign1.reshape(
                (1,) * i + (d,) + (1,) * (n - 1 - i) + (1,) * i + (d,) + (1,) * (n - 1 - i)
            )
        return abs(float(np.real(np.sum(total))) - 1.0)
    even = (idx % 2 == 0).astype(float)
    total = sub
    for i in range(2 * n):
        total = total * even.reshape((1,) * i + (d,) + (1,) * (2 * n - 1 - i))
    return abs(2.0**n * float(np.real(np.sum(total))) - 1.0)


def x_distribution(rho: DensityState, domain: Domain | str = Domain.RESTRICTED) -> QuasiDistribution:
    """Coefficients x(u) = d^{-n} Tr(O_u rho) on the requested domain."""
    domain = Domain(domain)
    raw = _coeff_array(rho.system, rho.matrix, domain)
    if np.max(np.abs(raw.imag)) > 1e-10:
        raise InvariantError("x of a Hermitian state must be real")
    vals = raw.real
    bound = 1.0 / rho.system.dim + 1e-9
    if np.max(np.abs(vals)) > bound:
        raise InvariantError("coefficient bound |x| <= d^-n violated")
    dist = QuasiDistribution(rho.system, domain, vals)
    res = normalization_residual(dist)
    if res > 1e-9:
        raise InvariantError(f"x normalization residual {res:.3e}")
    return dist


def discrete_wigner(rho: DensityState) -> QuasiDistribution:
    """W(u) = d^{-n} Tr[A(u) rho] on Z_d^{2n}; odd d only."""
    system = rho.system
    if system.d % 2 == 0:
        raise EvenDimensionError("the discrete Wigner function requires odd d")
    raw = _contract_stack(system, a_stack(system.d), rho.matrix) / system.dim
    if np.max(np.abs(raw.imag)) > 1e-10:
        raise InvariantError("Wigner values must be real")
    total = float(np.sum(raw.real))
    if abs(total - 1.0) > 1e-9:
        raise InvariantError(f"Wigner normalization sum {total} != 1")
    return QuasiDistribution(system, Domain.RESTRICTED, raw.real)


def characteristic_fn(rho: DensityState, domain: Domain | str = Domain.RESTRICTED) -> QuasiDistribution:
    """chi(u) = d^{-n} Tr[rho P(u)^dagger], complex-valued.

    On the FULL domain the doubled labels use the literal half-integer
    phases of ``hw_matrix`` (so values at u + d differ from canonical ones
    only by the doubled-domain sign pattern).
    """
    domain = Domain(domain)
    system = rho.system
    mod = system.d if domain is Domain.RESTRICTED else 2 * system.d
    stack = p_stack(system.d, mod)
    dag = stack.conj().transpose(0, 1, 3, 2)
    raw = _contract_stack(system, dag, rho.matrix) / system.dim
    return QuasiDistribution(system, domain, raw)


def lp_norm(dist: QuasiDistribution | np.ndarray, p: float) -> float:
    """(sum |f(u)|^p)^{1/p} with the near-zero cutoff applied first."""
    if p <= 0:
        raise ValidationError(f"p must be positive, got {p}")
    arr = dist.values if isinstance(dist, QuasiDistribution) else np.asarray(dist)
    mags = np.abs(arr).ravel()
    mags = mags[mags > NORM_CUTOFF]
    if mags.size == 0:
        return 0.0
    return float(np.sum(mags**p) ** (1.0 / p))


def magic_negativity(rho: DensityState) -> float:
    """||x_rho||_1 over the restricted domain; 1 exactly on stabilizer states."""
    return lp_norm(x_distribution(rho, Domain.RESTRICTED), 1.0)


def stabilizer_renyi(rho: DensityState, alpha: float) -> float:
    """Stabilizer Renyi entropy M_alpha (natural log).

    Uses the probability vector Xi_P = d^n |chi(P)|^2 (which sums to the
    purity): M_alpha = (1-alpha)^{-1} log sum_P Xi_P^alpha - n log d.
    The alpha = 1 limit is not implemented.
    """
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    if abs(alpha - 1.0) < 1e-12:
        raise ValidationError("alpha = 1 (the entropy limit) is not implemented")
    system = rho.system
    chi = characteristic_fn(rho, Domain.RESTRICTED).values
    mags = np.abs(chi).ravel()
    mags = mags[mags > NORM_CUTOFF]
    xi = system.dim * mags**2
    total = float(np.sum(xi**alpha))
    return float(np.log(total) / (1.0 - alpha) - system.n * np.log(system.d))


def is_hyperpolyhedral(rho: DensityState) -> tuple[bool, float]:
    """(||x||_1 <= 1 + 1e-12, the norm itself)."""
    norm = magic_negativity(rho)
    return norm <= 1.0 + 1e-12, norm


def haar_random_state(system: QuditSystem, rng: np.random.Generator) -> DensityState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    vec = rng.standard_normal(system.dim) + 1j * rng.standard_normal(system.dim)
    return pure_density(system, vec)


def random_clifford_word(
    system: QuditSystem, rng: np.random.Generator, length: int = 10
) -> list[tuple[GateKind, tuple[int, ...]]]:
    """Uniform word over the generator set; SUM appears only when n >= 2."""
    single = [GateKind.FOURIER, GateKind.PHASE, GateKind.SHIFT, GateKind.CLOCK]
    kinds = single + ([GateKind.SUM] if system.n >= 2 else [])
    word = []
    for _ in range(length):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind is GateKind.SUM:
            c, t = rng.choice(system.n, size=2, replace=False)
            word.append((kind, (int(c), int(t))))
        else:
            word.append((kind, (int(rng.integers(system.n)),)))
    return word


def word_unitary(system: QuditSystem, word) -> DenseOperator:
    """Dense product of a generator word (first entry acts first)."""
    mat = np.eye(system.dim, dtype=complex)
    for kind, targets in word:
        mat = embed_generator(system, kind, targets).entries @ mat
    return DenseOperator(system, mat, unitary=True)


def word_coordinate_map(system: QuditSystem, word) -> SymplecticAffineMap:
    """Composed Z_{2d} label map of a generator word (first entry innermost)."""
    acc = SymplecticAffineMap.identity(system.n, 2 * system.d)
    for kind, targets in word:
        acc = clifford_coordinate_action(system, kind, targets).compose(acc)
    return acc


def apply_word(rho: DensityState, word) -> DensityState:
    u = word_unitary(rho.system, word)
    return DensityState(rho.system, conjugate_by(u, DenseOperator(rho.system, rho.matrix)).entries)
