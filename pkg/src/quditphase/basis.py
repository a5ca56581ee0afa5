"""Hermitian operator basis O_{l,m} and its phase-space bookkeeping.

The single-qudit operators are

    O_{l,m} = e^{-i pi m l / d} M_l Z^m,   M_l = sum_{u+v = l mod d} |u><v|,

indexed by points of the doubled torus Z_{2d} x Z_{2d} (they are exactly
2d-periodic in both labels). Each O is Hermitian, unitary and involutory;
the restricted index set Z_d x Z_d is an orthogonal basis with
Tr[O_u O_v] = d delta_{uv}. Multi-qudit operators are tensor products of
factors.

This module also provides:

* closed-form traces (``o_trace``) and the doubled-domain sign rules
  (``phase_shift_rule``, ``reduce_full_point``),
* the Clifford action on labels as exact affine maps over Z_{2d}
  (``clifford_coordinate_action``); conjugation by a generator maps
  O_u -> O_{Mu + s} with NO sign, signs appearing only when reducing a
  doubled label back to the restricted domain,
* odd-d phase-space point operators A(u) (``phase_point_operator``) and the
  numerically matched relabeling ``sigma_permutation`` linking them to O.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import (
    DenseOperator,
    QuditError,
    QuditSystem,
    ValidationError,
    hw_matrix,
)

__all__ = [
    "EvenDimensionError",
    "Domain",
    "PhasePoint",
    "ShiftKind",
    "SymplecticAffineMap",
    "omega_block",
    "m_operator",
    "o_operator",
    "o_matrix",
    "o_stack",
    "p_stack",
    "o_trace",
    "phase_shift_rule",
    "lift_sign",
    "reduce_full_point",
    "clifford_coordinate_action",
    "phase_point_operator",
    "a_matrix",
    "sigma_permutation",
]


class EvenDimensionError(ValidationError):
    """Raised by odd-d-only constructions; use O_{l,m} directly instead."""


class Domain(str, Enum):
    RESTRICTED = "RESTRICTED"  # labels in Z_d
    FULL = "FULL"              # labels in Z_{2d}


@dataclass(frozen=True)
class PhasePoint:
    """A label vector (l, m) with every component reduced mod ``modulus``."""

    l: tuple[int, ...]
    m: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValidationError("modulus must be >= 2")
        as_tuple = lambda v: (int(v),) if isinstance(v, (int, np.integer)) else tuple(int(c) for c in v)
        l, m = as_tuple(self.l), as_tuple(self.m)
        if len(l) != len(m):
            raise ValidationError("l and m must have the same length")
        object.__setattr__(self, "l", tuple(c % self.modulus for c in l))
        object.__setattr__(self, "m", tuple(c % self.modulus for c in m))

    @property
    def n(self) -> int:
        return len(self.l)

    def vector(self) -> np.ndarray:
        """Coordinates as (l_1..l_n, m_1..m_n)."""
        return np.array(self.l + self.m, dtype=int)

    @staticmethod
    def from_vector(vec: Sequence[int], modulus: int) -> "PhasePoint":
        vec = [int(v) for v in vec]
        n = len(vec) // 2
        return PhasePoint(tuple(vec[:n]), tuple(vec[n:]), modulus)


def restricted_point(system: QuditSystem, l, m) -> PhasePoint:
    return PhasePoint(l, m, system.d)


def full_point(system: QuditSystem, l, m) -> PhasePoint:
    return PhasePoint(l, m, 2 * system.d)


def m_operator(system: QuditSystem, l: int) -> DenseOperator:
    """The anti-shift M_l = sum_{u+v = l mod d} |u><v| (single qudit)."""
    d = system.d
    mat = np.zeros((d, d), dtype=complex)
    v = np.arange(d)
    mat[(l - v) % d, v] = 1.0
    return DenseOperator(system.single(), mat, unitary=True, hermitian=True)


@lru_cache(maxsize=32)
def o_stack(d: int, modulus: int) -> np.ndarray:
    """Array of all single-qudit O_{l,m}, shape (modulus, modulus, d, d).

    modulus is d (restricted) or 2d (full). Cached read-only.
    """
    if modulus not in (d, 2 * d):
        raise ValidationError("modulus must be d or 2d")
    v = np.arange(d)
    stack = np.zeros((modulus, modulus, d, d), dtype=complex)
    for l in range(modulus):
        rows = (l - v) % d
        for m in range(modulus):
            phase = np.exp(-1j * np.pi * m * l / d)
            stack[l, m, rows, v] = phase * np.exp(2j * np.pi * (m % d) * v / d)
    stack.flags.writeable = False
    return stack


def o_matrix(d: int, l: int, m: int) -> np.ndarray:
    """Single-qudit O_{l,m} for any integer labels (2d-periodic)."""
    return o_stack(d, 2 * d)[l % (2 * d), m % (2 * d)]


@lru_cache(maxsize=32)
def p_stack(d: int, modulus: int) -> np.ndarray:
    """All single-qudit P(a, b) for labels in [0, modulus), cached.

    Entries at labels >= d carry the literal doubled-domain phases of
    ``hw_matrix`` (plain-integer products), not canonicalized ones.
    """
    if modulus not in (d, 2 * d):
        raise ValidationError("modulus must be d or 2d")
    stack = np.zeros((modulus, modulus, d, d), dtype=complex)
    for a in range(modulus):
        for b in range(modulus):
            stack[a, b] = hw_matrix(d, a, b)
    stack.flags.writeable = False
    return stack


def o_operator(system: QuditSystem, point: PhasePoint) -> DenseOperator:
    """Dense O_{l,m}; multi-qudit via tensor product of factors."""
    if point.n != system.n:
        raise ValidationError(f"point has {point.n} factors, system has {system.n}")
    mat = np.ones((1, 1), dtype=complex)
    for li, mi in zip(point.l, point.m):
        mat = np.kron(mat, o_matrix(system.d, li, mi))
    return DenseOperator(system, mat, unitary=True, hermitian=True)


def _o_trace_factor(d: int, l: int, m: int) -> float:
    if d % 2 == 0:
        if l % 2:
            return 0.0
        return 1.0 + (-1.0) ** (m % 2)
    return (-1.0) ** ((m * l) % 2)


def o_trace(system: QuditSystem, point: PhasePoint) -> complex:
    """Closed-form Tr O_{l,m}; valid verbatim on both Z_d and Z_{2d} labels."""
    out = 1.0
    for li, mi in zip(point.l, point.m):
        out *= _o_trace_factor(system.d, li, mi)
    return complex(out)


class ShiftKind(str, Enum):
    L_PLUS_D = "L+d"
    M_PLUS_D = "M+d"
    BOTH = "BOTH"


def phase_shift_rule(point: PhasePoint, which: ShiftKind | str, d: int | None = None) -> int:
    """Sign s with O at the d-shifted label equal to s * O at ``point``.

    Single-factor points only. ``d`` defaults to the point's own local
    dimension inferred from its modulus when the point is restricted; pass
    it explicitly for full-domain points.
    """
    which = ShiftKind(which)
    if point.n != 1:
        raise ValidationError("phase_shift_rule is a per-factor rule")
    if d is None:
        d = point.modulus
    l, m = point.l[0], point.m[0]
    if which is ShiftKind.L_PLUS_D:
        return -1 if m % 2 else 1
    if which is ShiftKind.M_PLUS_D:
        return -1 if l % 2 else 1
    return -1 if (l + m + d) % 2 else 1


def lift_sign(d: int, l: int, m: int, eps_l: int, eps_m: int) -> int:
    """Sign of O_{l + d eps_l, m + d eps_m} relative to O_{l,m} (one factor)."""
    e = (m * eps_l + l * eps_m + d * eps_l * eps_m) % 2
    return -1 if e else 1


def reduce_full_point(system: QuditSystem, point: PhasePoint) -> tuple[PhasePoint, int]:
    """Reduce a Z_{2d} label to the restricted domain with its sign."""
    d = system.d
    sign = 1
    ls, ms = [], []
    for li, mi in zip(point.l, point.m):
        el, em = li // d, mi // d
        lc, mc = li % d, mi % d
        sign *= lift_sign(d, lc, mc, el, em)
        ls.append(lc)
        ms.append(mc)
    return PhasePoint(tuple(ls), tuple(ms), d), sign


def omega_block(n: int) -> np.ndarray:
    """Symplectic form [[0, -I], [I, 0]] for (l-block, m-block) coordinates."""
    eye = np.eye(n, dtype=int)
    zero = np.zeros((n, n), dtype=int)
    return np.block([[zero, -eye], [eye, zero]])


@dataclass(frozen=True)
class SymplecticAffineMap:
    """Affine label map u -> (matrix @ u + shift) mod 2d.

    Coordinates are ordered (l_1..l_n, m_1..m_n). The matrix must satisfy
    M^T Omega M = Omega over Z_{2d}.
    """

    matrix: np.ndarray
    shift: np.ndarray
    modulus: int

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=int) % self.modulus
        sh = np.asarray(self.shift, dtype=int) % self.modulus
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
            raise ValidationError("matrix must be square and even-sided")
        if sh.shape != (mat.shape[0],):
            raise ValidationError("shift length must match the matrix side")
        n = mat.shape[0] // 2
        om = omega_block(n)
        if np.any((mat.T @ om @ mat - om) % self.modulus):
            raise ValidationError("matrix is not symplectic over Z_{2d}")
        mat.flags.writeable = False
        sh.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "shift", sh)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    def apply(self, point: PhasePoint) -> PhasePoint:
        """Image of a label; accepts restricted or full points, returns full."""
        vec = (self.matrix @ point.vector() + self.shift) % self.modulus
        return PhasePoint.from_vector(vec, self.modulus)

    def apply_vector(self, vec: np.ndarray) -> np.ndarray:
        return (self.matrix @ np.asarray(vec, dtype=int) + self.shift) % self.modulus

    def compose(self, inner: "SymplecticAffineMap") -> "SymplecticAffineMap":
        """The map 'self after inner'."""
        if self.modulus != inner.modulus:
            raise ValidationError("moduli differ")
        return SymplecticAffineMap(
            self.matrix @ inner.matrix,
            self.matrix @ inner.shift + self.shift,
            self.modulus,
        )

    @staticmethod
    def identity(n: int, modulus: int) -> "SymplecticAffineMap":
        return SymplecticAffineMap(np.eye(2 * n, dtype=int), np.zeros(2 * n, dtype=int), modulus)


def clifford_coordinate_action(
    system: QuditSystem,
    kind,
    targets: tuple[int, ...] | None = None,
) -> SymplecticAffineMap:
    """Exact Z_{2d} label map of a Clifford generator.

    Conjugation acts as U O_u U^dagger = O_{map(u)} with no extra sign;
    restricted-domain signs come from ``reduce_full_point`` afterwards.
    ``targets`` selects the acted-on qudit(s); SUM takes (control, target).
    """
    from .core import GateKind  # local import to keep module load order flat

    kind = GateKind(kind)
    d, n = system.d, system.n
    mod = 2 * d
    mat = np.eye(2 * n, dtype=int)
    shift = np.zeros(2 * n, dtype=int)
    if kind is GateKind.SUM:
        c, t = targets if targets is not None else (0, 1)
        if c == t or not (0 <= c < n and 0 <= t < n):
            raise ValidationError("SUM needs two distinct targets")
        mat[t, c] = 1            # l_t += l_c
        mat[n + c, n + t] = -1   # m_c -= m_t
        return SymplecticAffineMap(mat, shift, mod)
    (t,) = targets if targets is not None else (0,)
    if not 0 <= t < n:
        raise ValidationError("target out of range")
    if kind is GateKind.FOURIER:
        mat[t, t] = 0
        mat[t, n + t] = 1        # l -> m
        mat[n + t, n + t] = 0
        mat[n + t, t] = -1       # m -> -l
    elif kind is GateKind.PHASE:
        mat[n + t, t] = -1       # m -> m - l
        if d % 2:
            shift[n + t] = 1     # odd d adds the affine +1
    elif kind is GateKind.SHIFT:
        shift[t] = 2
    else:  # CLOCK
        shift[n + t] = -2
    return SymplecticAffineMap(mat, shift, mod)


@lru_cache(maxsize=16)
def a_stack(d: int) -> np.ndarray:
    """All single-qudit phase-point operators A(a1, a2), odd d, cached."""
    if d % 2 == 0:
        raise EvenDimensionError("phase-space point operators require odd d")
    stack = np.zeros((d, d, d, d), dtype=complex)
    omega = np.exp(2j * np.pi / d)
    hw_dags = [[hw_matrix(d, b1, b2).conj().T for b2 in range(d)] for b1 in range(d)]
    for a1 in range(d):
        for a2 in range(d):
            acc = np.zeros((d, d), dtype=complex)
            for b1 in range(d):
                for b2 in range(d):
                    # u^T Omega v with per-factor Omega = [[0,-1],[1,0]]
                    expo = (-(a1 * (-b2) + a2 * b1)) % d
                    acc += omega**expo * hw_dags[b1][b2]
            stack[a1, a2] = acc / d
    stack.flags.writeable = False
    return stack


def a_matrix(d: int, a1: int, a2: int) -> np.ndarray:
    return a_stack(d)[a1 % d, a2 % d]


def phase_point_operator(system: QuditSystem, u: PhasePoint) -> DenseOperator:
    """A(u) = d^{-n} sum_v w^{-u^T Omega v} P(v)^dagger; odd d only."""
    if system.d % 2 == 0:
        raise EvenDimensionError("phase-space point operators require odd d")
    if u.n != system.n:
        raise ValidationError("point size mismatch")
    mat = np.ones((1, 1), dtype=complex)
    for a1, a2 in zip(u.l, u.m):
        mat = np.kron(mat, a_matrix(system.d, a1, a2))
    return DenseOperator(system, mat, hermitian=True)


@lru_cache(maxsize=16)
def sigma_permutation(d: int) -> dict[tuple[int, int], tuple[int, int]]:
    """Point relabeling sigma with (-1)^{a1 a2} O_{a1,a2} = A(sigma(a)).

    Found by numerically matching operators (odd d). The matched closed
    form is sigma(a1, a2) = (inv2 * a1, -inv2 * a2) mod d, which tests
    assert against this table.
    """
    if d % 2 == 0:
        raise EvenDimensionError("sigma relates A and O for odd d only")
    ast = a_stack(d)
    ost = o_stack(d, d)
    table: dict[tuple[int, int], tuple[int, int]] = {}
    for a1 in range(d):
        for a2 in range(d):
            target = (-1.0) ** (a1 * a2) * ost[a1, a2]
            hits = [
                (b1, b2)
                for b1 in range(d)
                for b2 in range(d)
                if np.max(np.abs(ast[b1, b2] - target)) < 1e-10
            ]
            if len(hits) != 1:
                raise QuditError(f"sigma matching failed at {(a1, a2)}: {hits}")
            table[(a1, a2)] = hits[0]
    return table
