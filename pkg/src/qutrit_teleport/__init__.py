"""Qutrit teleportation through correlated amplitude damping, with weak-measurement
and environment-assisted-measurement protection."""

from .analytics import (
    MeritPoint,
    avg_fidelity_eam,
    avg_fidelity_eam_opt,
    avg_fidelity_wm,
    avg_fidelity_wm_opt,
    balanced_improvement,
    cad_baseline,
    merit_point,
    numeric_optimal_q,
    success_prob_eam_opt,
    success_prob_wm_opt,
)
from .channels import ChannelSpec, DampingParams, cad_apply, damping_from_rates
from .estimator import TeleportationSimulator
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
from .teleport import input_state, resource_state, teleport_circuit

__version__ = "0.1.0"
