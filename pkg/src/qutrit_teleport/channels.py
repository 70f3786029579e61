"""Amplitude damping (AD), fully correlated AD (FCAD) and correlated AD (CAD) channels.

The CAD map is the convex mixture

    E_CAD(rho) = (1 - mu) * (E_AD x E_AD)(rho) + mu * E_FCAD(rho)

and is carried around as two weighted :class:`KrausSet` branches rather than
one flattened set, so the no-jump operators ``E_0 x E_0`` and ``A_00`` stay
individually addressable.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import KrausSet, apply_kraus, check_square
from .validation import check_unit_interval


@dataclass(frozen=True)
class DampingParams:
    """Decay strengths of levels |1> and |2> toward |0>."""

    d1: float
    d2: float

    def __post_init__(self):
        object.__setattr__(self, "d1", check_unit_interval("d1", self.d1))
        object.__setattr__(self, "d2", check_unit_interval("d2", self.d2))

    @classmethod
    def symmetric(cls, d):
        return cls(d, d)

    @property
    def is_symmetric(self):
        return self.d1 == self.d2


@dataclass(frozen=True)
class ChannelSpec:
    damping: DampingParams
    mu: float

    def __post_init__(self):
        if not isinstance(self.damping, DampingParams):
            raise TypeError("damping must be a DampingParams instance")
        object.__setattr__(self, "mu", check_unit_interval("mu", self.mu))

    @classmethod
    def symmetric(cls, d, mu):
        return cls(DampingParams(d, d), mu)


def _as_damping(d):
    if isinstance(d, DampingParams):
        return d
    if np.ndim(d) == 0:
        return DampingParams(d, d)
    return DampingParams(*d)


def ad_kraus(d):
    """Single-qutrit AD Kraus operators ``(E_0, E_1, E_2)``."""
    d = _as_damping(d)
    e0 = np.diag([1.0, math.sqrt(1.0 - d.d1), math.sqrt(1.0 - d.d2)]).astype(complex)
    e1 = np.zeros((3, 3), dtype=complex)
    e1[0, 1] = math.sqrt(d.d1)
    e2 = np.zeros((3, 3), dtype=complex)
    e2[0, 2] = math.sqrt(d.d2)
    return KrausSet((e0, e1, e2), label="AD-single")


def ad_pair_kraus(d, weight=1.0):
    """Uncorrelated two-qutrit set ``E_ij = E_i x E_j`` ordered as (i, j) row-major."""
    single = ad_kraus(d).operators
    ops = tuple(np.kron(a, b) for a in single for b in single)
    return KrausSet(ops, label="AD-pair", weight=weight)


def fcad_kraus(d, weight=1.0):
    """Fully correlated two-qutrit set ``(A_00, A_11, A_22)``."""
    d = _as_damping(d)
    a00 = np.eye(9, dtype=complex)
    a00[4, 4] = math.sqrt(1.0 - d.d1)
    a00[8, 8] = math.sqrt(1.0 - d.d2)
    a11 = np.zeros((9, 9), dtype=complex)
    a11[0, 4] = math.sqrt(d.d1)
    a22 = np.zeros((9, 9), dtype=complex)
    a22[0, 8] = math.sqrt(d.d2)
    return KrausSet((a00, a11, a22), label="FCAD", weight=weight)


def cad_branches(spec, *, ad_pair=ad_pair_kraus, fcad=fcad_kraus):
    """Return the two weighted branches ``[(1-mu) AD-pair, mu FCAD]``.

    The builders are injectable so verification code can feed a corrupted
    set through the same checks.
    """
    return [
        ad_pair(spec.damping, weight=1.0 - spec.mu),
        fcad(spec.damping, weight=spec.mu),
    ]


def weighted_completeness_residual(branches):
    dim = branches[0].dim
    total = sum(b.weight * b.gram() for b in branches)
    return float(np.max(np.abs(total - np.eye(dim))))


def cad_apply(rho, spec):
    rho = check_square("rho", rho, dim=9)
    return apply_kraus(rho, cad_branches(spec))


def no_jump_operators(d):
    """The reversible k = 0 operators ``(E_0 x E_0, A_00)``."""
    e0 = ad_kraus(d).operators[0]
    return np.kron(e0, e0), fcad_kraus(d).operators[0]


def damping_from_rates(gamma10, gamma20, t):
    """Map spontaneous-emission rates and elapsed time to ``d_i = 1 - exp(-gamma_i0 t)``."""
    for name, v in (("gamma10", gamma10), ("gamma20", gamma20), ("t", t)):
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"{name} must be a finite non-negative number, got {v!r}")
    return DampingParams(-math.expm1(-gamma10 * t), -math.expm1(-gamma20 * t))
