"""Low-energy assignment search for QUSO/QUBO/MaxCut models."""

import numpy as np

from ..errors import ConfigError
from ..mappings import quso_to_maxcut, recover_state
from ..models import MaxCutInstance, QuboModel, QusoModel, bits_to_spins
from .anneal import simulated_annealing
from .base import SolverBudget, SolverResult, as_spin_model
from .brute import brute_force
from .gw import gw_maxcut
from ._backend import HAVE_COMPILED
from .tabu import tabu_search

METHODS = ("brute", "anneal", "tabu", "gw")


def solve(model, method, budget=None, sector=None):
    """Uniform dispatch; every method returns the raw model value at a
    model-native assignment.

    ``gw`` converts QUSO/QUBO models through the MaxCut mapping, recovers
    the Fock-sector assignment from the rounded cut, and reports the SDP
    bound alongside the model value.
    """
    budget = budget if budget is not None else SolverBudget()
    if method == "brute":
        return brute_force(model, sector=sector)
    if method == "anneal":
        return simulated_annealing(model, budget)
    if method == "tabu":
        return tabu_search(model, budget)
    if method == "gw":
        if isinstance(model, MaxCutInstance):
            return gw_maxcut(model, budget)
        spin_model, to_native = as_spin_model(model)
        instance = quso_to_maxcut(spin_model)
        cut_result = gw_maxcut(instance, budget)
        state = recover_state(cut_result.assignment, ancilla=instance.ancilla)
        assignment = to_native(bits_to_spins(state.bits))
        return SolverResult(
            assignment=assignment,
            value=model.value(assignment),
            evaluations=cut_result.evaluations,
            sdp_bound=cut_result.sdp_bound,
            ratio_certificate=cut_result.ratio_certificate,
            converged=cut_result.converged,
            extra={"cut_value": cut_result.value, "value_offset": instance.value_offset},
        )
    raise ConfigError(f"unknown solver method {method!r}; expected one of {METHODS}")


__all__ = [
    "HAVE_COMPILED",
    "METHODS",
    "SolverBudget",
    "SolverResult",
    "brute_force",
    "gw_maxcut",
    "simulated_annealing",
    "solve",
    "tabu_search",
]
