"""Dense complex linear algebra on qutrit (3) and two-qutrit (9) spaces.

Two-qutrit basis convention: ``|j, k>`` is flat index ``3*j + k`` (0-based).
A matrix element written 1-based as ``rho_ab`` in the usual 9x9 listing sits
at ``rho[a - 1, b - 1]`` here.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .validation import check_square, check_state_vector

HERMITIAN_ATOL = 1e-12
PSD_ATOL = 1e-10
TRACE_ATOL = 1e-12


@dataclass(frozen=True)
class KrausSet:
    """An ordered set of Kraus operators forming one weighted channel branch.

    ``weight`` multiplies the whole branch, so a convex mixture of channels is
    a list of ``KrausSet`` objects whose weights sum to one. ``complete`` marks
    sets expected to satisfy ``sum K^dag K = I``.
    """

    operators: tuple
    label: str = ""
    weight: float = 1.0
    complete: bool = True

    def __post_init__(self):
        ops = tuple(check_square(f"{self.label or 'Kraus'} operator", op) for op in self.operators)
        if not ops:
            raise ValueError("a KrausSet needs at least one operator")
        dims = {op.shape[0] for op in ops}
        if len(dims) != 1:
            raise ValueError(f"operators of mixed dimension {sorted(dims)}")
        for op in ops:
            op.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def gram(self):
        """Return ``sum_j K_j^dag K_j`` (unweighted)."""
        return sum(op.conj().T @ op for op in self.operators)

    def completeness_residual(self):
        return float(np.max(np.abs(self.gram() - np.eye(self.dim))))


def dagger(a):
    return np.asarray(a).conj().T


def tensor(a, b):
    """Kronecker product with ``a``'s index as the slow (major) one."""
    a = check_square("a", a)
    b = check_square("b", b)
    return np.kron(a, b)


def apply_kraus(rho, branches):
    """Apply ``sum_b w_b sum_j K_bj rho K_bj^dag``.

    ``branches`` may be a single :class:`KrausSet`, a sequence of them, or a
    plain sequence of matrices (one unit-weight branch). The result is not
    renormalized: incomplete sets leave their success weight in the trace.
    """
    rho = check_square("rho", rho)
    if isinstance(branches, KrausSet):
        branches = [branches]
    elif len(branches) and not isinstance(branches[0], KrausSet):
        branches = [KrausSet(tuple(branches), complete=False)]
    out = np.zeros_like(rho)
    for branch in branches:
        if branch.dim != rho.shape[0]:
            raise ValueError(
                f"Kraus dimension {branch.dim} does not match state dimension {rho.shape[0]}"
            )
        acc = np.zeros_like(rho)
        for op in branch.operators:
            acc += op @ rho @ op.conj().T
        out += branch.weight * acc
    return out


def partial_trace(rho, keep):
    """Reduce a 9x9 two-qutrit operator to subsystem ``keep`` (1 or 2)."""
    rho = check_square("rho", rho, dim=9)
    r = rho.reshape(3, 3, 3, 3)
    if keep == 1:
        return np.einsum("ijkj->ik", r)
    if keep == 2:
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def normalize(rho):
    """Divide out the trace; raises if the state carries zero weight."""
    rho = check_square("rho", rho)
    tr = np.trace(rho).real
    if tr <= 0.0:
        raise ValueError(f"cannot normalize a state with trace {tr!r}")
    return rho / tr


def fidelity_pure(psi, rho, *, imag_atol=1e-12):
    """Return ``<psi|rho|psi>`` for a pure reference state."""
    psi = check_state_vector("psi", psi)
    rho = check_square("rho", rho, dim=psi.shape[0])
    value = np.vdot(psi, rho @ psi)
    if abs(value.imag) > imag_atol:
        raise ValueError(f"fidelity has imaginary residue {value.imag!r}")
    return float(value.real)


def density_matrix_violations(rho, *, normalized=True):
    """Return (hermiticity gap, min eigenvalue, trace gap) for a candidate state."""
    rho = check_square("rho", rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    tr_gap = abs(np.trace(rho).real - 1.0) if normalized else 0.0
    return herm, min_eig, tr_gap


def is_density_matrix(rho, *, normalized=True):
    herm, min_eig, tr_gap = density_matrix_violations(rho, normalized=normalized)
    return herm <= HERMITIAN_ATOL and min_eig >= -PSD_ATOL and tr_gap <= TRACE_ATOL


def random_density_matrix(dim, rng, rank=None):
    """Draw a random state from the induced (Ginibre) ensemble."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state_vector(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def kron_all(mats: Sequence[np.ndarray]):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out
