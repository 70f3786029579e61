"""Exhaustive jump/no-jump unraveling of the protected resource states.

Every Kraus path through WM, CAD and QMR is written out as an explicit
amplitude vector over ``|00>, |01>, ..., |22>`` together with the number of
excitations it leaves in the environment. Paths end in mutually orthogonal
environment states, so the shared density matrix is the incoherent sum of
``|s><s|`` over branches.

The two CAD components (uncorrelated, weight ``1 - mu``; fully correlated,
weight ``mu``) are never added coherently: each branch carries
``sqrt(1 - mu)`` or ``sqrt(mu)`` in its amplitude.
"""

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_pair, check_unit_interval


@dataclass(frozen=True)
class Branch:
    state: np.ndarray  # unnormalized amplitudes over the 3j+k basis
    env_excitations: int
    tag: str

    @property
    def weight(self):
        return float(np.vdot(self.state, self.state).real)


def _ket(**amps):
    v = np.zeros(9, dtype=complex)
    for label, a in amps.items():
        j, k = int(label[1]), int(label[2])
        v[3 * j + k] = a
    return v


def _check_amplitudes(a, b, c):
    norm = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"resource amplitudes must be normalized, got |a|^2+|b|^2+|c|^2 = {norm!r}")


def unravel_wm(a, b, c, mu, d, p, q):
    """Branches of ``(a|00> + b|11> + c|22>)`` through WM, CAD and QMR."""
    _check_amplitudes(a, b, c)
    mu = check_unit_interval("mu", mu)
    d1, d2 = check_pair("d", d)
    p1, p2 = check_pair("p", p, open_right=True)
    q1, q2 = check_pair("q", q)
    pb1, pb2 = 1.0 - p1, 1.0 - p2
    qb1, qb2 = 1.0 - q1, 1.0 - q2
    db1, db2 = 1.0 - d1, 1.0 - d2
    # after the weak measurement on both qutrits
    b_, c_ = b * pb1, c * pb2
    # QMR factors on |00>, |11>, |22>, |01>=|10>, |02>=|20>
    r00, r11, r22 = qb1 * qb2, qb2, qb1
    r01, r02 = qb2 * math.sqrt(qb1), qb1 * math.sqrt(qb2)
    su, sc = math.sqrt(1.0 - mu), math.sqrt(mu)

    single1 = b_ * math.sqrt(d1 * db1) * r01
    single2 = c_ * math.sqrt(d2 * db2) * r02
    branches = [
        Branch(su * _ket(k00=a * r00, k11=b_ * db1 * r11, k22=c_ * db2 * r22), 0, "uncorrelated/no-jump"),
        Branch(su * _ket(k01=single1), 1, "uncorrelated/second decays 1->0"),
        Branch(su * _ket(k10=single1), 1, "uncorrelated/first decays 1->0"),
        Branch(su * _ket(k02=single2), 1, "uncorrelated/second decays 2->0"),
        Branch(su * _ket(k20=single2), 1, "uncorrelated/first decays 2->0"),
        Branch(su * _ket(k00=b_ * d1 * r00), 2, "uncorrelated/both decay 1->0"),
        Branch(su * _ket(k00=c_ * d2 * r00), 2, "uncorrelated/both decay 2->0"),
        Branch(
            sc * _ket(k00=a * r00, k11=b_ * math.sqrt(db1) * r11, k22=c_ * math.sqrt(db2) * r22),
            0,
            "correlated/no-jump",
        ),
        Branch(sc * _ket(k00=b_ * math.sqrt(d1) * r00), 2, "correlated/joint decay 1->0"),
        Branch(sc * _ket(k00=c_ * math.sqrt(d2) * r00), 2, "correlated/joint decay 2->0"),
    ]
    return branches


def unravel_eam(a, b, c, mu, d, q):
    """Branches surviving CAD, the k = 0 environment outcome and QMR."""
    branches = unravel_wm(a, b, c, mu, d, 0.0, q)
    return [br for br in branches if br.env_excitations == 0]


def reconstruct(branches):
    """Incoherent sum ``sum |s><s|`` over branches."""
    return sum(np.outer(br.state, br.state.conj()) for br in branches)


def no_jump_superposition(a, b, c, mu, d, p, q):
    """The vacuum-sector amplitudes with the two CAD components added coherently.

    This is the linear ``(1 - mu) * uncorrelated + mu * correlated`` combination
    used to motivate the optimal reversal strength; with that strength it is
    proportional to ``(a, b, c)``. It is not a physical branch of the mixture.
    """
    _check_amplitudes(a, b, c)
    mu = check_unit_interval("mu", mu)
    d1, d2 = check_pair("d", d)
    p1, p2 = check_pair("p", p, open_right=True)
    q1, q2 = check_pair("q", q)
    pb1, pb2 = 1.0 - p1, 1.0 - p2
    qb1, qb2 = 1.0 - q1, 1.0 - q2
    db1, db2 = 1.0 - d1, 1.0 - d2
    mb = 1.0 - mu
    return np.array(
        [
            a * qb1 * qb2,
            b * pb1 * qb2 * (mb * db1 + mu * math.sqrt(db1)),
            c * pb2 * qb1 * (mb * db2 + mu * math.sqrt(db2)),
        ],
        dtype=complex,
    )
