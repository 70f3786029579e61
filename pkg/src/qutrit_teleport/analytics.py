"""Scalar figures of merit for the protected teleportation schemes.

Everything here assumes symmetric damping ``d1 = d2 = d`` and symmetric
strengths. Two families of closed forms are exposed for the optimal-QMR
quantities:

``form="printed"``
    the reference closed forms, evaluated literally as written;
``form="derived"``
    the same quantities obtained from the shared-state elements at the
    optimal strength, which is what the operator pipeline produces.

For the WM scheme the two differ by a single factor ``pb`` on the
``4 mub d (mub db + mu sqrt(db))`` term of the common bracket. For the EAM
scheme the printed expressions follow the printed element table (see
:func:`~qutrit_teleport.protection.eam_shared_elements`).
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .protection import (
    EamVariant,
    eam_shared_elements,
    eam_variant_discrepancy,
    optimal_q_eam,
    optimal_q_wm,
    wm_shared_elements,
)
from .teleport import amplitudes
from .validation import check_unit_interval

FORMS = ("printed", "derived")
Q_SEARCH_UPPER = 1.0 - 1e-6


@dataclass(frozen=True)
class FidelityTerms:
    A1: float = float("nan")
    A2: float = float("nan")
    A3: float = float("nan")
    B1: float = float("nan")


def _check(mu, d, p=0.0):
    return (
        check_unit_interval("mu", mu),
        check_unit_interval("d", d),
        check_unit_interval("p", p, open_right=True),
    )


def _check_q(q):
    return check_unit_interval("q", q, open_right=True)


def _check_form(form):
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}, got {form!r}")
    return form


def wm_terms(elements):
    r = np.asarray(elements).real
    norm = r[0, 0] + r[1, 1] + r[2, 2] + r[3, 3] + r[4, 4] + r[6, 6] + r[8, 8]
    a1 = (r[0, 0] + r[4, 4] + r[8, 8]) / norm
    a2 = (r[1, 1] + r[2, 2] + r[3, 3] + r[6, 6]) / norm
    a3 = (r[0, 4] + r[4, 0] + r[0, 8] + r[8, 0] + r[4, 8] + r[8, 4]) / norm
    return FidelityTerms(A1=a1, A2=a2, A3=a3)


def eam_terms(elements):
    r = np.asarray(elements).real
    norm = r[0, 0] + r[4, 4] + r[8, 8]
    b1 = (r[0, 4] + r[0, 8] + r[4, 8] + r[4, 0] + r[8, 0] + r[8, 4]) / norm
    return FidelityTerms(B1=b1)


def _pair_products(psi):
    """``|a|^2 |b|^2 + |a|^2 |c|^2 + |b|^2 |c|^2`` over the last axis."""
    w = np.abs(psi) ** 2
    return w[..., 0] * w[..., 1] + w[..., 0] * w[..., 2] + w[..., 1] * w[..., 2]


def _as_psi(state):
    if np.ndim(state) == 1 and len(state) == 4:
        return amplitudes(*state)
    return np.asarray(state, dtype=complex)


def fidelity_wm(state, mu, d, p, q):
    """Pointwise WM fidelity ``A1 + X (A2 + A3 - 2 A1)``.

    ``state`` is a 3-amplitude vector (or batch) or an angle 4-tuple.
    """
    mu, d, p = _check(mu, d, p)
    t = wm_terms(wm_shared_elements(mu, d, p, _check_q(q)))
    return t.A1 + _pair_products(_as_psi(state)) * (t.A2 + t.A3 - 2 * t.A1)


def fidelity_eam(state, mu, d, q, variant=EamVariant.CANONICAL):
    mu, d, _ = _check(mu, d)
    t = eam_terms(eam_shared_elements(mu, d, _check_q(q), variant))
    x = _pair_products(_as_psi(state))
    return 1.0 - 2.0 * x + x * t.B1


def avg_fidelity_wm(mu, d, p, q):
    mu, d, p = _check(mu, d, p)
    t = wm_terms(wm_shared_elements(mu, d, p, _check_q(q)))
    return (1.0 + t.A1 + t.A3) / 4.0


def success_prob_wm(mu, d, p, q):
    mu, d, p = _check(mu, d, p)
    return float(np.trace(wm_shared_elements(mu, d, p, _check_q(q))))


def avg_fidelity_eam(mu, d, q, variant=EamVariant.CANONICAL):
    mu, d, _ = _check(mu, d)
    t = eam_terms(eam_shared_elements(mu, d, _check_q(q), variant))
    return (2.0 + t.B1) / 4.0


def success_prob_eam(mu, d, q, variant=EamVariant.CANONICAL):
    mu, d, _ = _check(mu, d)
    return float(np.trace(eam_shared_elements(mu, d, _check_q(q), variant)))


def cad_baseline(mu, d):
    """Unprotected average fidelity (no WM, no QMR)."""
    return avg_fidelity_wm(mu, d, 0.0, 0.0)


# -- optimal-QMR closed forms -------------------------------------------------
#
# With t = mub sqrt(db) + mu, v = mub db + mu and w = mub db + mu sqrt(db),
# every term of the WM bracket carries a factor db when mu = 0, so the corner
# (mu, d) = (0, 1), where the optimal strength is q = 1 and the success
# probability vanishes, is evaluated after cancelling it.


def _wm_bracket(mu, d, p, pb_on_last):
    mb, db, pb = 1.0 - mu, 1.0 - d, 1.0 - p
    if mu == 0.0:
        t2 = v = w = 1.0
    else:
        t2 = (mb * math.sqrt(db) + mu) ** 2
        v = mb * db + mu
        w = mb * db + mu * math.sqrt(db)
    g = 2.0 * (mb * d + mu) * d * pb**2
    last = 4.0 * mb * d * w * (pb if pb_on_last else 1.0)
    numer = (g + 5.0) * t2 + 4.0 * v
    bracket = (g + 1.0) * t2 + 2.0 * v + last
    return numer, bracket


def avg_fidelity_wm_opt(mu, d, p, form="printed"):
    mu, d, p = _check(mu, d, p)
    numer, bracket = _wm_bracket(mu, d, p, _check_form(form) == "derived")
    return 0.25 + numer / (4.0 * bracket)


def success_prob_wm_opt(mu, d, p, form="printed"):
    mu, d, p = _check(mu, d, p)
    _, bracket = _wm_bracket(mu, d, p, _check_form(form) == "derived")
    mb, db, pb = 1.0 - mu, 1.0 - d, 1.0 - p
    t2 = (mb * math.sqrt(db) + mu) ** 2
    if mu == 0.0:
        bracket *= db  # undo the cancelled factor
    return pb**4 * db**2 * t2 * bracket / 3.0


def _eam_printed_bracket(mu, d):
    mb, db = 1.0 - mu, 1.0 - d
    t = mb * math.sqrt(db) + mu
    return (2.0 * (mu * db + mb) * db + 1.0) * t**2 + 2.0 * (mb * db + mu) + 4.0 * db**2


def avg_fidelity_eam_opt(mu, d, form="printed"):
    mu, d, _ = _check(mu, d)
    form = _check_form(form)
    if mu == 0.0 and d == 1.0:
        # both forms reduce to exactly 1 for every d < 1; this is the limit
        return 1.0
    mb, db = 1.0 - mu, 1.0 - d
    t = mb * math.sqrt(db) + mu
    v = mb * db + mu
    if form == "printed":
        numer = 2.0 * (mb * math.sqrt(db) * (1.0 + 2.0 * db) + mu * (1.0 + 2.0 * db**2)) * t + v + 2.0 * db**2
        return 0.5 + numer / (2.0 * _eam_printed_bracket(mu, d))
    return 0.5 + (2.0 * t**2 + v) / (2.0 * (t**2 + 2.0 * v))


def success_prob_eam_opt(mu, d, form="printed"):
    mu, d, _ = _check(mu, d)
    form = _check_form(form)
    mb, db = 1.0 - mu, 1.0 - d
    t = mb * math.sqrt(db) + mu
    if form == "printed":
        return db**2 * t**2 * _eam_printed_bracket(mu, d) / 9.0
    return db**2 * t**2 * (t**2 + 2.0 * (mb * db + mu)) / 3.0


def balanced_improvement(mu, d, p, form="printed"):
    """``F_eam * P_eam - F_wm * P_wm`` at the optimal reversal strengths."""
    return avg_fidelity_eam_opt(mu, d, form) * success_prob_eam_opt(mu, d, form) - avg_fidelity_wm_opt(
        mu, d, p, form
    ) * success_prob_wm_opt(mu, d, p, form)


# -- quadrature over input states ---------------------------------------------


def gauss_legendre(n, a, b):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def input_measure_nodes(n_theta=64, n_phi=None):
    """Nodes and weights for the average over input states.

    The density is ``(2/pi^2) sin^3(t1) cos(t1) sin(t2) cos(t2)`` over
    ``t1, t2 in [0, pi/2]`` and ``phi1, phi2 in [0, 2 pi)``. Theta axes use
    Gauss-Legendre; phi axes use the periodic trapezoid rule, or are
    integrated analytically (a single node at 0 carrying ``(2 pi)^2``) when
    ``n_phi`` is None.

    Returns ``(psi, weights)`` with ``psi`` of shape ``(k, 3)``.
    """
    t, wt = gauss_legendre(n_theta, 0.0, math.pi / 2)
    if n_phi is None:
        ph, wph = np.array([0.0]), np.array([2.0 * math.pi])
    else:
        ph = 2.0 * math.pi * np.arange(n_phi) / n_phi
        wph = np.full(n_phi, 2.0 * math.pi / n_phi)
    t1, t2, p1, p2 = np.meshgrid(t, t, ph, ph, indexing="ij")
    w1, w2, v1, v2 = np.meshgrid(wt, wt, wph, wph, indexing="ij")
    density = (2.0 / math.pi**2) * np.sin(t1) ** 3 * np.cos(t1) * np.sin(t2) * np.cos(t2)
    weights = (density * w1 * w2 * v1 * v2).ravel()
    psi = amplitudes(t1.ravel(), t2.ravel(), p1.ravel(), p2.ravel())
    return psi, weights


def quadrature_average(fidelity_of_psi, n_theta=64, n_phi=None):
    """Average a batched fidelity function over the input measure."""
    psi, weights = input_measure_nodes(n_theta, n_phi)
    return float(np.dot(weights, np.asarray(fidelity_of_psi(psi), dtype=float)))


def measure_normalization(n_theta=64, n_phi=None):
    return float(input_measure_nodes(n_theta, n_phi)[1].sum())


# -- optimum search ------------------------------------------------------------


def golden_section_max(f, lo, hi, tol=1e-8):
    """Maximize a unimodal ``f`` on ``[lo, hi]`` to an interval width of ``tol``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def scheme_objective(scheme, mu, d, p=0.0, variant=EamVariant.CANONICAL):
    """Average fidelity as a function of the reversal strength."""
    if scheme == "wm":
        return lambda q: avg_fidelity_wm(mu, d, p, q)
    if scheme == "eam":
        return lambda q: avg_fidelity_eam(mu, d, q, variant)
    raise ValueError(f"scheme must be 'wm' or 'eam', got {scheme!r}")


def numeric_optimal_q(scheme, mu, d, p=0.0, *, tol=1e-8, variant=EamVariant.CANONICAL):
    """Golden-section argmax over ``q in [0, 1 - 1e-6]`` of the average fidelity.

    The objective is unimodal on this range (see :func:`unimodality_violations`);
    when no strength beats ``q = 0`` (e.g. zero noise without WM) the tie is
    broken toward ``q = 0``. The maximum may sit at the upper end of the range:
    as ``q -> 1`` the fidelity tends to 3/4, which can exceed every interior value.
    """
    mu, d, p = _check(mu, d, p)
    f = scheme_objective(scheme, mu, d, p, variant)
    q_star = golden_section_max(f, 0.0, Q_SEARCH_UPPER, tol)
    if f(0.0) >= f(q_star) - 1e-14:
        return 0.0
    return float(q_star)


def unimodality_violations(n_tuples=20, scan_points=1001, rng=None, variant=EamVariant.CANONICAL):
    """Scan the objective at random ``(mu, d, p)`` tuples and count interior local minima.

    Returns ``(violations, worst_dip)`` where ``worst_dip`` is the largest
    rise after a strict interior local minimum (0 when none is found).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    grid = np.linspace(0.0, Q_SEARCH_UPPER, scan_points)
    violations, worst = 0, 0.0
    for i in range(n_tuples):
        scheme = ("wm", "eam")[i % 2]
        mu, d, p = rng.uniform(size=3)
        f = scheme_objective(scheme, mu, d, p if scheme == "wm" else 0.0, variant)
        v = np.array([f(q) for q in grid])
        lmin = np.flatnonzero((v[1:-1] < v[:-2] - 1e-15) & (v[1:-1] < v[2:] - 1e-15)) + 1
        if len(lmin):
            violations += 1
            worst = max(worst, float(max(v[k:].max() - v[k] for k in lmin)))
    return violations, worst


# -- merit points -----------------------------------------------------------------


@dataclass(frozen=True)
class MeritPoint:
    mu: float
    d: float
    p: float
    q_wm: float
    q_eam: float
    F_cad: float
    F_wm: float
    F_eam: float
    P_wm: float
    P_eam: float
    F_imp: float
    eq21_discrepancy: float

    def as_dict(self):
        return asdict(self)


def merit_point(mu, d, p=0.0, q="optimal", *, form="derived", variant=EamVariant.CANONICAL):
    """Evaluate every figure of merit at one parameter point.

    With ``q="optimal"`` each scheme uses its own optimal strength and the
    optimal-QMR closed forms in ``form``; an explicit ``q`` is shared by both
    schemes and evaluated through the element tables. ``F_imp`` always
    compares the two schemes at their optimal strengths.
    """
    mu, d, p = _check(mu, d, p)
    form = _check_form(form)
    variant = EamVariant(variant)
    # the printed element table at the optimal strength reproduces the printed closed forms
    eam_form = "printed" if variant is EamVariant.PRINTED else form
    opt_wm = avg_fidelity_wm_opt(mu, d, p, form), success_prob_wm_opt(mu, d, p, form)
    opt_eam = avg_fidelity_eam_opt(mu, d, eam_form), success_prob_eam_opt(mu, d, eam_form)
    if q == "optimal":
        q_wm, q_eam = optimal_q_wm(p, d, mu), optimal_q_eam(d, mu)
        (f_wm, p_wm), (f_eam, p_eam) = opt_wm, opt_eam
    else:
        q_wm = q_eam = _check_q(q)
        f_wm, p_wm = avg_fidelity_wm(mu, d, p, q_wm), success_prob_wm(mu, d, p, q_wm)
        f_eam, p_eam = avg_fidelity_eam(mu, d, q_eam, variant), success_prob_eam(mu, d, q_eam, variant)
    return MeritPoint(
        mu=mu,
        d=d,
        p=p,
        q_wm=q_wm,
        q_eam=q_eam,
        F_cad=cad_baseline(mu, d),
        F_wm=f_wm,
        F_eam=f_eam,
        P_wm=p_wm,
        P_eam=p_eam,
        F_imp=opt_eam[0] * opt_eam[1] - opt_wm[0] * opt_wm[1],
        eq21_discrepancy=eam_variant_discrepancy(mu, d, q_eam),
    )
