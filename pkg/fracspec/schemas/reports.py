# fracspec/schemas/reports.py

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class SimplicityReport(BaseModel):
    """
    Multi-start comparison of first eigenpairs.

    Attributes:
        max_distance (float): Largest pairwise L^p distance between eigenfunctions.
        lambda_spread (float): max λ - min λ over the starts.
        status (str): "pass", "fail" or "inconclusive" (some start unconverged).
        oracle_distance (float | None): For p = 2, the largest L^2 distance of a start's
            eigenfunction from the dense eigensolve.
    """
    n_starts: int
    seeds: list[int]
    lambdas: list[float]
    max_distance: float
    lambda_spread: float
    all_converged: bool
    passed: bool
    status: str
    oracle_distance: Optional[float] = None


class BoundednessReport(BaseModel):
    N: int
    max_u: float
    refined_N: int
    refined_max_u: float
    growth_ratio: float
    finite: bool
    diverging: bool
    refined_converged: bool


class PositivityReport(BaseModel):
    """
    Sign check of an eigenfunction.

    Attributes:
        min_value (float): Smallest cell value.
        argmin (int): Cell (0-based) holding it.
    """
    min_value: float
    argmin: int
    passed: bool


class PiconeReport(BaseModel):
    """
    Sweep of the Picone expression over random pairs and all index pairs.

    Attributes:
        min_value (float): Smallest L(u, v)(x_i, x_j) seen.
        argmin_pair (tuple[int, int]): Index pair (0-based) attaining it.
        argmin_sample (int): Random sample attaining it.
        equality_max (float): Largest |L| over the injected proportional pairs u = k v.
    """
    n_random: int
    N: int
    p: float
    min_value: float
    argmin_pair: tuple[int, int]
    argmin_sample: int
    equality_max: float
    passed: bool


class ConcavityReport(BaseModel):
    n_pairs: int
    tolerance: float
    violations: int
    worst_gap: float
    passed: bool


class ContinuityReport(BaseModel):
    """
    |λ(V + t D) - λ(V)| for decreasing t.

    Attributes:
        steps (list[float]): The t values, largest first.
        differences (list[float]): The matching differences.
        monotone (bool): Differences shrink with t up to the noise allowance.
    """
    lambda_base: float
    steps: list[float]
    differences: list[float]
    noise: float
    monotone: bool
    passed: bool


class CoercivityReport(BaseModel):
    """
    Sampled estimate |Σ V |u|^p h| <= eps E(u) + C_eps ||V||_q ||u||_p^p.

    Attributes:
        c_eps (float): Constant under test, by default the smallest one valid for every field.
        sample_c_eps (float): Smallest constant the verification samples alone would need.
        fit_converged (bool): Whether the eigensolves behind the fitted constant converged.
        uniform (bool): Whether V was also sampled over its q-ball.
    """
    eps: float
    c_eps: float
    sample_c_eps: float
    n_samples: int
    violations: int
    uniform: bool
    fit_converged: bool = True
    passed: bool


class OptimizationReport(BaseModel):
    """Diagnostics of an optimized potential."""
    direction: str
    set_kind: str
    iterations: int
    converged: bool
    optimality_residual: float
    q_norm: float
    support_fraction: float
    comonotonicity_violations: Optional[int] = None


class RunSummary(BaseModel):
    """
    Summary JSON written by every command.

    Attributes:
        lambda_ (float): λ of the final eigenpair, written under the key "lambda".
        config_echo (dict): Fully resolved run configuration.
    """
    model_config = ConfigDict(populate_by_name=True)

    command: str
    lambda_: Optional[float] = Field(default=None, serialization_alias="lambda", alias="lambda")
    iterations: int = 0
    residual: Optional[float] = None
    converged: bool
    optimality_residual: Optional[float] = None
    wall_time_ms: float
    optimization: Optional[OptimizationReport] = None
    checks: Optional[dict[str, Any]] = None
    config_echo: dict[str, Any]
