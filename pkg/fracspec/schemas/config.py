# fracspec/schemas/config.py

from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DomainSpec(StrictModel):
    """
    Interval (a, b) of the problem.

    Attributes:
        a (float): Left endpoint.
        b (float): Right endpoint, b > a.
    """
    a: float = 0.0
    b: float = 1.0

    @model_validator(mode="after")
    def check_order(self):
        if not self.b > self.a:
            raise ValueError("domain needs b > a")
        return self


class ZeroPotential(StrictModel):
    kind: Literal["zero"] = "zero"


class ConstantPotential(StrictModel):
    kind: Literal["constant"] = "constant"
    value: float


class SinePotential(StrictModel):
    """amplitude · sin(frequency · π · (x - a) / (b - a))."""
    kind: Literal["sine"] = "sine"
    amplitude: float = 1.0
    frequency: float = 1.0


class FilePotential(StrictModel):
    """
    Cell values read from a CSV column.

    Attributes:
        path (str): CSV file, relative paths resolve against the config file's directory.
        column (int | str): Column index or header name. By default the "V" column
            of a file with a header, or the first column of a headerless file.
    """
    kind: Literal["file"] = "file"
    path: str
    column: Optional[Union[int, str]] = None

    @field_validator("path")
    @classmethod
    def resolve_path(cls, value: str, info: ValidationInfo) -> str:
        path = Path(value)
        base = (info.context or {}).get("base_dir")
        if not path.is_absolute() and base is not None:
            path = Path(base) / path
        if not path.is_file():
            raise ValueError(f"potential file not found: {value}")
        return str(path)


class RandomPotential(StrictModel):
    """Seeded uniform values in [-amplitude, amplitude]."""
    kind: Literal["random"] = "random"
    seed: int = 0
    amplitude: float = 1.0


PotentialSpec = Annotated[
    Union[ZeroPotential, ConstantPotential, SinePotential, FilePotential, RandomPotential],
    Field(discriminator="kind"),
]


def expand_potential(value: Any) -> Any:
    """
    Accept the short forms "zero", {"constant": c}, {"sine": {...}}, {"file": path}
    and {"random": {...}} next to the explicit {"kind": ...} form.
    """
    if isinstance(value, str):
        return {"kind": value}
    if isinstance(value, dict) and "kind" not in value and len(value) == 1:
        (kind, body), = value.items()
        if kind == "constant":
            return {"kind": kind, "value": body}
        if kind == "file" and isinstance(body, str):
            return {"kind": kind, "path": body}
        if isinstance(body, dict):
            return {"kind": kind, **body}
        return {"kind": kind}
    return value


class BallSpec(StrictModel):
    M: float = Field(gt=0)


class SolverSettings(StrictModel):
    tol_res: float = Field(default=1e-8, gt=0)
    tol_lambda: float = Field(default=1e-10, gt=0)
    max_iters: int = Field(default=50000, ge=1)
    step0: float = Field(default=1.0, gt=0)
    armijo_c: float = Field(default=1e-4, gt=0, lt=1)
    backtrack: float = Field(default=0.5, gt=0, lt=1)
    seed: int = 0


class OuterSettings(StrictModel):
    tol_lambda: float = Field(default=1e-13, gt=0)
    tol_V: float = Field(default=1e-7, gt=0)
    tol_fp: float = Field(default=1e-5, gt=0)
    tol_mono: float = Field(default=1e-9, ge=0)
    max_iters: int = Field(default=500, ge=1)
    step0: Optional[float] = Field(default=None, gt=0)
    accelerate: bool = False


class CheckSettings(StrictModel):
    """Sample sizes of the `check` command."""
    picone_samples: int = Field(default=100, ge=1)
    concavity_pairs: int = Field(default=10, ge=1)
    simplicity_starts: int = Field(default=5, ge=2)
    coercivity_samples: int = Field(default=1000, ge=1)
    coercivity_eps: float = Field(default=0.25, gt=0)
    seed: int = 0


class OutputSpec(StrictModel):
    summary_path: str = "summary.json"
    fields_path: Optional[str] = None
    history_path: Optional[str] = None
    dump_kernel: bool = False


class RunConfig(StrictModel):
    """
    One run of the command-line tool.

    Attributes:
        command (str): eig | opt-max-ball | opt-min-ball | opt-min-rearr | check.
        N (int): Number of cells, at least 2.
        s, p, q (float): Exponents, 0 < s < 1 < p and q > max(1, 1/(s p)).
        potential: Potential of `eig` and `check`, starting point of the optimizers.
        ball (BallSpec): Radius for the ball commands.
        v0: Generator of the rearrangement class for `opt-min-rearr`.
    """
    command: Literal["eig", "opt-max-ball", "opt-min-ball", "opt-min-rearr", "check"]
    domain: DomainSpec = DomainSpec()
    N: int = Field(ge=2)
    s: float = Field(gt=0, lt=1)
    p: float = Field(gt=1)
    q: float = Field(default=2.0, gt=1)
    potential: PotentialSpec = ZeroPotential()
    ball: Optional[BallSpec] = None
    v0: Optional[PotentialSpec] = None
    solver: SolverSettings = SolverSettings()
    outer: OuterSettings = OuterSettings()
    check: CheckSettings = CheckSettings()
    kernel_mode: Literal["midpoint", "exact-cellpair"] = "midpoint"
    outputs: OutputSpec = OutputSpec()

    @field_validator("potential", "v0", mode="before")
    @classmethod
    def expand_short_forms(cls, value: Any) -> Any:
        return expand_potential(value)

    @field_validator("q")
    @classmethod
    def check_q(cls, value: float, info: ValidationInfo) -> float:
        s, p = info.data.get("s"), info.data.get("p")
        if s is not None and p is not None and not value > 1.0 / (s * p):
            raise ValueError(f"q must exceed 1/(s*p) = {1.0 / (s * p):g}")
        return value

    @model_validator(mode="after")
    def check_command_inputs(self):
        if self.command in ("opt-max-ball", "opt-min-ball") and self.ball is None:
            raise ValueError(f"command '{self.command}' needs 'ball'")
        if self.command == "opt-min-rearr" and self.v0 is None:
            raise ValueError("command 'opt-min-rearr' needs 'v0'")
        if self.kernel_mode == "exact-cellpair" and self.s * self.p >= 1.0:
            raise ValueError("kernel_mode 'exact-cellpair' needs s*p < 1")
        return self
