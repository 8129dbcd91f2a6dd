"""Budgets, results, and seed handling shared by all solvers."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..models import QuboModel, QusoModel


@dataclass
class SolverBudget:
    """Knobs for the stochastic and SDP solvers.

    Restart randomness is pre-split from the master seed with a counter so
    results do not depend on scheduling.  ``time_limit`` (seconds, checked
    between restarts) trades determinism for a wall-clock cap and is off by
    default.
    """

    seed: int = 0
    restarts: int = 64
    sweeps: int = 5000
    iterations: int | None = None
    time_limit: float | None = None
    t_initial: float | None = None
    t_final: float | None = None
    tabu_tenure: int | None = None
    sdp_rank: int | None = None
    sdp_max_iter: int = 5000
    sdp_tol: float = 2e-5
    hyperplanes: int = 200

    def __post_init__(self):
        for name in ("restarts", "sweeps", "sdp_max_iter", "hyperplanes"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.iterations is not None and self.iterations < 1:
            raise ConfigError("iterations must be positive")
        if self.t_initial is not None and self.t_initial <= 0:
            raise ConfigError("t_initial must be > 0")
        if self.t_final is not None and self.t_final <= 0:
            raise ConfigError("t_final must be > 0")
        if (
            self.t_initial is not None
            and self.t_final is not None
            and self.t_initial < self.t_final
        ):
            raise ConfigError("t_initial must be >= t_final")

    def restart_seeds(self, extra_key=()):
        """Deterministic child seed sequences, one per restart."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=tuple(extra_key))
        return ss.spawn(self.restarts)

    def with_seed(self, seed):
        out = SolverBudget(**{k: getattr(self, k) for k in self.__dataclass_fields__})
        out.seed = seed
        return out


@dataclass
class SolverResult:
    assignment: np.ndarray
    value: float
    evaluations: int
    history: list | None = None
    sdp_bound: float | None = None
    ratio_certificate: float | None = None
    converged: bool = True
    extra: dict = field(default_factory=dict)


def model_arrays(model):
    """(linear, dense symmetric coupling) for kernel consumption."""
    return model.linear.copy(), model.dense_coupling()


def as_spin_model(model):
    """Return (QusoModel, to_native) where to_native maps a spin assignment
    back to the input model's variable type."""
    from ..mappings import qubo_to_quso
    from ..models import spins_to_bits

    if isinstance(model, QusoModel):
        return model, lambda z: np.asarray(z, dtype=np.int64)
    if isinstance(model, QuboModel):
        return qubo_to_quso(model), lambda z: spins_to_bits(z)
    raise ConfigError(f"expected a QUSO or QUBO model, got {type(model).__name__}")
