"""Weak measurement (WM), measurement reversal (QMR) and environment-assisted measurement (EAM).

Strength arguments accept either a scalar (same strength on both excited
levels) or a pair ``(x1, x2)``. Protected shared states are returned
unnormalized; their trace is the post-selection success probability.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSpec, DampingParams, cad_apply, no_jump_operators
from .linalg import projector
from .teleport import resource_state
from .validation import check_pair, check_unit_interval

OPTIMAL = "optimal"


class Scheme(str, enum.Enum):
    NONE = "none"
    WM = "wm"
    EAM = "eam"


class EamVariant(str, enum.Enum):
    CANONICAL = "canonical"
    PRINTED = "printed"


@dataclass(frozen=True)
class ProtectionSpec:
    """Which scheme to run and with what strengths.

    ``q`` is either a strength (scalar or pair) or :data:`OPTIMAL`.
    """

    scheme: Scheme = Scheme.NONE
    p: object = 0.0
    q: object = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        p = check_pair("p", self.p, open_right=True)
        q = self.q if self.q == OPTIMAL else check_pair("q", self.q, open_right=True)
        if self.scheme is Scheme.NONE and (p != (0.0, 0.0) or q != (0.0, 0.0)):
            raise ValueError("scheme 'none' takes no WM/QMR strengths")
        if self.scheme is Scheme.EAM and p != (0.0, 0.0):
            raise ValueError("scheme 'eam' has no weak measurement strength")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)


def wm_povm_elements(p):
    """Return ``(M, M_1, M_2)``; only ``M`` is reversible and kept."""
    p1, p2 = check_pair("p", p, open_right=True)
    m = np.diag([1.0, math.sqrt(1.0 - p1), math.sqrt(1.0 - p2)]).astype(complex)
    m1 = np.diag([0.0, math.sqrt(p1), 0.0]).astype(complex)
    m2 = np.diag([0.0, 0.0, math.sqrt(p2)]).astype(complex)
    return m, m1, m2


def wm_operator(p):
    return wm_povm_elements(p)[0]


def qmr_operator(q):
    q1, q2 = check_pair("q", q, open_right=True)
    qb1, qb2 = 1.0 - q1, 1.0 - q2
    return np.diag([math.sqrt(qb1 * qb2), math.sqrt(qb2), math.sqrt(qb1)]).astype(complex)


def trit_flip():
    """Cyclic shift ``|0><2| + |1><0| + |2><1|``."""
    f = np.zeros((3, 3), dtype=complex)
    f[0, 2] = f[1, 0] = f[2, 1] = 1.0
    return f


def qmr_factorized(q):
    """QMR built as the five-step sequence flip, WM, flip, WM, flip."""
    f = trit_flip()
    m = wm_operator(q)
    return f @ m @ f @ m @ f


def _local(op):
    return np.kron(op, op)


def wm_protected_resource(spec, p, q, phi=None):
    """``(R x R) E_CAD[(M x M) |phi><phi| (M x M)^dag] (R x R)^dag``."""
    phi = resource_state() if phi is None else np.asarray(phi, dtype=complex)
    mm = _local(wm_operator(p))
    rr = _local(qmr_operator(q))
    rho = mm @ projector(phi) @ mm.conj().T
    rho = cad_apply(rho, spec)
    return rr @ rho @ rr.conj().T


def eam_protected_resource(spec, q, phi=None, variant=EamVariant.CANONICAL):
    """Shared state after CAD, k = 0 environment post-selection and QMR.

    The canonical state applies the no-jump operators of both CAD branches,
    weighted by ``1 - mu`` and ``mu``. ``variant="printed"`` instead returns
    the element table with the extra trace scalars (see
    :func:`eam_shared_elements`); it is only defined for the default resource.
    """
    variant = EamVariant(variant)
    if variant is EamVariant.PRINTED:
        if phi is not None:
            raise ValueError("the printed element table is only defined for the standard resource")
        d = spec.damping
        return eam_shared_elements(spec.mu, (d.d1, d.d2), q, variant=variant)
    phi = resource_state() if phi is None else np.asarray(phi, dtype=complex)
    e00, a00 = no_jump_operators(spec.damping)
    rr = _local(qmr_operator(q))
    target = projector(phi)
    rho = (1.0 - spec.mu) * e00 @ target @ e00.conj().T + spec.mu * a00 @ target @ a00.conj().T
    return rr @ rho @ rr.conj().T


def wm_shared_elements(mu, d, p, q):
    """Closed-form 9x9 WM-protected shared state (unnormalized).

    Built directly from the element formulas, independently of the operator
    pipeline in :func:`wm_protected_resource`.
    """
    mu = check_unit_interval("mu", mu)
    d1, d2 = check_pair("d", d)
    p1, p2 = check_pair("p", p, open_right=True)
    q1, q2 = check_pair("q", q)
    mb = 1.0 - mu
    db1, db2 = 1.0 - d1, 1.0 - d2
    pb1, pb2 = 1.0 - p1, 1.0 - p2
    qb1, qb2 = 1.0 - q1, 1.0 - q2
    r = np.zeros((9, 9))
    r[0, 0] = qb1**2 * qb2**2 * (1.0 + (mb * d1**2 + mu * d1) * pb1**2 + (mb * d2**2 + mu * d2) * pb2**2)
    r[1, 1] = r[3, 3] = mb * d1 * db1 * pb1**2 * qb1 * qb2**2
    r[2, 2] = r[6, 6] = mb * d2 * db2 * pb2**2 * qb1**2 * qb2
    r[4, 4] = (mb * db1**2 + mu * db1) * pb1**2 * qb2**2
    r[8, 8] = (mb * db2**2 + mu * db2) * pb2**2 * qb1**2
    r[0, 4] = r[4, 0] = (mb * db1 + mu * math.sqrt(db1)) * pb1 * qb1 * qb2**2
    r[0, 8] = r[8, 0] = (mb * db2 + mu * math.sqrt(db2)) * pb2 * qb1**2 * qb2
    r[4, 8] = r[8, 4] = (mb * db1 * db2 + mu * math.sqrt(db1 * db2)) * pb1 * pb2 * qb1 * qb2
    return r / 3.0


def eam_shared_elements(mu, d, q, variant=EamVariant.CANONICAL):
    """Closed-form 9x9 EAM-protected shared state (unnormalized).

    ``canonical`` is the direct expansion of the k = 0 branch pair. ``printed``
    reproduces the reference element table, whose correlated and uncorrelated weights
    carry the extra factors ``T1 = (1 + db1^2 + db2^2) / 3`` and
    ``T2 = (1 + db1 + db2) / 3`` respectively.
    """
    variant = EamVariant(variant)
    mu = check_unit_interval("mu", mu)
    d1, d2 = check_pair("d", d)
    q1, q2 = check_pair("q", q)
    mb = 1.0 - mu
    db1, db2 = 1.0 - d1, 1.0 - d2
    qb1, qb2 = 1.0 - q1, 1.0 - q2
    if variant is EamVariant.PRINTED:
        wc = mu * (1.0 + db1**2 + db2**2) / 3.0
        wu = mb * (1.0 + db1 + db2) / 3.0
    else:
        wc, wu = mu, mb
    r = np.zeros((9, 9))
    r[0, 0] = qb1**2 * qb2**2 * (wc + wu)
    r[4, 4] = (wc * db1 + wu * db1**2) * qb2**2
    r[8, 8] = (wc * db2 + wu * db2**2) * qb1**2
    r[0, 4] = r[4, 0] = (wc * math.sqrt(db1) + wu * db1) * qb1 * qb2**2
    r[0, 8] = r[8, 0] = (wc * math.sqrt(db2) + wu * db2) * qb1**2 * qb2
    r[4, 8] = r[8, 4] = (wc * math.sqrt(db1 * db2) + wu * db1 * db2) * qb1 * qb2
    return r / 3.0


def eam_variant_discrepancy(mu, d, q):
    """Max-norm gap between the canonical and the printed EAM element tables."""
    gap = eam_shared_elements(mu, d, q, "canonical") - eam_shared_elements(mu, d, q, "printed")
    return float(np.max(np.abs(gap)))


def _reversal_complement(d, mu):
    return (1.0 - mu) * (1.0 - d) + mu * math.sqrt(1.0 - d)


def optimal_q_wm(p, d, mu):
    """Symmetric QMR strength ``1 - pb (mub db + mu sqrt(db))``."""
    p = check_unit_interval("p", p, open_right=True)
    d = check_unit_interval("d", d)
    mu = check_unit_interval("mu", mu)
    return 1.0 - (1.0 - p) * _reversal_complement(d, mu)


def optimal_q_wm_pair(p, d, mu):
    """Per-level strengths ``qb_i = pb_i (mub db_i + mu sqrt(db_i))``."""
    p1, p2 = check_pair("p", p, open_right=True)
    d1, d2 = check_pair("d", d)
    mu = check_unit_interval("mu", mu)
    return (
        1.0 - (1.0 - p1) * _reversal_complement(d1, mu),
        1.0 - (1.0 - p2) * _reversal_complement(d2, mu),
    )


def optimal_q_eam(d, mu):
    d = check_unit_interval("d", d)
    mu = check_unit_interval("mu", mu)
    return 1.0 - _reversal_complement(d, mu)


def channel_spec(mu, d):
    """Convenience constructor accepting a scalar or pair ``d``."""
    d1, d2 = check_pair("d", d)
    return ChannelSpec(DampingParams(d1, d2), mu)
