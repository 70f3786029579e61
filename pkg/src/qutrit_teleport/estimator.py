"""scikit-learn style front end: fit a protected teleportation channel, transform input states."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .channels import ChannelSpec, DampingParams
from .linalg import normalize
from .protection import (
    OPTIMAL,
    EamVariant,
    ProtectionSpec,
    Scheme,
    eam_protected_resource,
    optimal_q_eam,
    optimal_q_wm,
    wm_protected_resource,
)
from .teleport import amplitudes, apply_superoperator, teleport_superoperator
from .validation import check_states, check_unit_interval


class TeleportationSimulator(TransformerMixin, BaseEstimator):
    """Teleport qutrit states through a (possibly protected) CAD-noisy resource.

    Parameters
    ----------
    scheme : {"none", "wm", "eam"}
    mu : float
        Correlation parameter of the channel.
    d : float
        Symmetric damping strength.
    p : float
        Weak-measurement strength (``wm`` only).
    q : float or "optimal"
        Reversal strength; ``"optimal"`` picks the scheme's closed-form optimum.
    eq21_variant : {"canonical", "printed"}
        EAM shared-state evaluator.

    Attributes
    ----------
    q_ : float
        Reversal strength actually used.
    shared_state_ : ndarray of shape (9, 9)
        Post-selected (unnormalized) resource shared by Alice and Bob.
    success_probability_ : float
        Trace of ``shared_state_``.
    superoperator_ : ndarray of shape (9, 9)
        Averaged teleportation map acting on row-major vectorized inputs.

    Examples
    --------
    >>> import numpy as np
    >>> sim = TeleportationSimulator(scheme="eam", mu=0.0, d=0.5).fit()
    >>> psi = np.array([[1, 1, 1]]) / np.sqrt(3)
    >>> round(float(sim.score(psi)), 12)
    1.0
    """

    def __init__(self, scheme="wm", mu=0.0, d=0.0, p=0.0, q=OPTIMAL, eq21_variant="canonical"):
        self.scheme = scheme
        self.mu = mu
        self.d = d
        self.p = p
        self.q = q
        self.eq21_variant = eq21_variant

    def _resolve_q(self, scheme):
        if self.q != OPTIMAL:
            return check_unit_interval("q", self.q, open_right=True)
        if scheme is Scheme.WM:
            return optimal_q_wm(self.p, self.d, self.mu)
        if scheme is Scheme.EAM:
            return optimal_q_eam(self.d, self.mu)
        return 0.0

    def fit(self, X=None, y=None):
        scheme = Scheme(self.scheme)
        channel = ChannelSpec(DampingParams.symmetric(self.d), self.mu)
        q = self._resolve_q(scheme)
        if q >= 1.0:
            raise ValueError("the optimal reversal strength is 1: the scheme never succeeds here")
        if scheme is Scheme.NONE:
            spec = ProtectionSpec(scheme, 0.0, 0.0)
            shared = wm_protected_resource(channel, 0.0, 0.0)
        elif scheme is Scheme.WM:
            spec = ProtectionSpec(scheme, self.p, q)
            shared = wm_protected_resource(channel, spec.p, spec.q)
        else:
            spec = ProtectionSpec(scheme, 0.0, q)
            shared = eam_protected_resource(channel, spec.q, variant=EamVariant(self.eq21_variant))
        self.protection_ = spec
        self.q_ = q
        self.shared_state_ = shared
        self.success_probability_ = float(np.trace(shared).real)
        self.superoperator_ = teleport_superoperator(normalize(shared))
        return self

    def transform(self, X):
        """Return Bob's averaged output states, shape ``(n_samples, 3, 3)``."""
        check_is_fitted(self, "superoperator_")
        return apply_superoperator(self.superoperator_, check_states(X))

    def fidelities(self, X):
        check_is_fitted(self, "superoperator_")
        psi = check_states(X)
        out = apply_superoperator(self.superoperator_, psi)
        return np.einsum("ki,kij,kj->k", psi.conj(), out, psi).real

    def score(self, X, y=None):
        """Mean teleportation fidelity over the rows of ``X``."""
        return float(np.mean(self.fidelities(X)))


def states_from_angles(angles):
    """Convert rows of ``(theta1, theta2, phi1, phi2)`` to amplitude rows."""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    if angles.shape[1] != 4:
        raise ValueError(f"expected rows of 4 angles, got shape {angles.shape}")
    return amplitudes(*angles.T)
