from .base import CommandResult, Problem, build_problem, load_potential
from .eig import run_eig
from .optimize import run_max_ball, run_min_ball, run_min_rearrangement
from .check import run_check

COMMANDS = {
    "eig": run_eig,
    "opt-max-ball": run_max_ball,
    "opt-min-ball": run_min_ball,
    "opt-min-rearr": run_min_rearrangement,
    "check": run_check,
}
