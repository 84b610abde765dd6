from dataclasses import dataclass, fields

from ..errors import InvalidArgumentError


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances, step sizes and iteration caps for every iterative procedure.

    Relative tolerances are relative to the quantity being iterated (total
    power, EE, ...); ``power_tol`` is relative to the cell's power budget.
    """

    sca_tol: float = 1e-6
    wf_tol: float = 1e-6
    search_step: float = 0.1  # first P_T move, as a fraction of P_max
    power_tol: float = 1e-7
    outer_step: float = 1.5
    outer_tol: float = 1e-4
    rotation_tol: float = 1e-3
    alpha_tol: float = 1e-2
    ascent_step: float = 1.0  # gradient-ascent step of the undecomposed rate update; kept for completeness, unused
    fd_rel_step: float = 1e-3
    max_sca_iters: int = 200
    max_alternations: int = 20
    max_search_iters: int = 60
    max_rotations: int = 40
    max_gradient_iters: int = 20000
    max_newton_iters: int = 100
    barrier_t0: float = 1.0
    barrier_decrease: float = 0.2
    barrier_tol: float = 1e-6  # relative duality-gap target of each barrier solve
    barrier_warm_gap: float = 1e-1  # expected relative improvement of the first warm SCA step

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.startswith("max_"):
                if int(v) < 1:
                    raise InvalidArgumentError(f"{f.name} must be >= 1")
            elif f.name == "outer_step":
                if not v > 1:
                    raise InvalidArgumentError("outer_step must exceed 1")
            elif f.name == "barrier_decrease":
                if not 0 < v < 1:
                    raise InvalidArgumentError("barrier_decrease must lie in (0, 1)")
            elif not v > 0:
                raise InvalidArgumentError(f"{f.name} must be positive")
