# fracspec/main.py

import argparse
import json
import sys
import time
from pathlib import Path

from pydantic import ValidationError

from fracspec.commands import COMMANDS, CommandResult, Problem, build_problem
from fracspec.optimizers.potential import OptimizationAbortedError
from fracspec.schemas.config import RunConfig
from fracspec.schemas.reports import RunSummary
from fracspec.utils import FracSpecError, logger, settings
from fracspec.utils.io import write_csv, write_fields, write_json, write_matrix

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNCONVERGED = 2


def _fail(message: str) -> int:
    logger.error(message)
    print(f"fracspec: error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _describe(exc: ValidationError) -> str:
    # "N: Input should be greater than or equal to 2; ..."
    parts = []
    for error in exc.errors():
        key = ".".join(str(part) for part in error["loc"]) or "config"
        parts.append(f"{key}: {error['msg']}")
    return "; ".join(parts)


def load_config(config_path: str | Path) -> RunConfig:
    """
    Read and validate a JSON run configuration.

    Relative file paths inside the config resolve against its directory.

    Raises:
        OSError: If the file cannot be read.
        json.JSONDecodeError: If it is not JSON.
        ValidationError: If a key is missing, unknown or out of range.
    """
    path = Path(config_path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    return RunConfig.model_validate(raw, context={"base_dir": path.resolve().parent})


def _resolve(base: Path, target: str) -> Path:
    path = Path(target)
    return path if path.is_absolute() else base / path


def _write_outputs(config: RunConfig, base: Path, result: CommandResult, problem: Problem, dump_kernel: bool,
                   wall_time_ms: float) -> None:
    outputs = config.outputs
    summary = RunSummary(
        command=config.command,
        lambda_=result.lam,
        iterations=result.iterations,
        residual=result.residual,
        converged=result.converged,
        optimality_residual=result.optimality_residual,
        wall_time_ms=wall_time_ms,
        optimization=result.optimization,
        checks=result.checks,
        config_echo=config.model_dump(mode="json"),
    )
    write_json(_resolve(base, outputs.summary_path), summary.model_dump(mode="json", by_alias=True))

    if outputs.fields_path and result.u is not None:
        write_fields(_resolve(base, outputs.fields_path), problem.grid.midpoints, result.u, result.V)
    if outputs.history_path and result.history_header:
        write_csv(_resolve(base, outputs.history_path), result.history_header, result.history_rows)
    if dump_kernel or outputs.dump_kernel:
        anchor = outputs.fields_path or outputs.summary_path
        directory = _resolve(base, anchor).parent
        write_matrix(directory / "kernel_K.csv", problem.kernel.K)
        write_matrix(directory / "kernel_rho.csv", problem.kernel.rho[:, None])
        logger.info(f"Kernel dumped to {directory}.")


def run(config_path: str | Path, dump_kernel: bool = False) -> int:
    """
    Execute one configured command and write its results.

    Args:
        config_path (str | Path): JSON run configuration.
        dump_kernel (bool): Also write kernel_K.csv and kernel_rho.csv.

    Returns:
        int: 0 when the run converged (and every check passed), 2 when it finished
            unconverged or with a failed check, 1 on any error.
    """
    started = time.perf_counter()
    try:
        config = load_config(config_path)
    except OSError as exc:
        return _fail(f"cannot read config {config_path}: {exc}")
    except json.JSONDecodeError as exc:
        return _fail(f"config {config_path} is not valid JSON: {exc}")
    except ValidationError as exc:
        return _fail(f"invalid config: {_describe(exc)}")

    base = Path(config_path).resolve().parent
    logger.info(f"Running '{config.command}' with N={config.N}, s={config.s}, p={config.p}, q={config.q}.")
    try:
        problem = build_problem(config)
        result = COMMANDS[config.command](problem)
    except OptimizationAbortedError as exc:
        if config.outputs.history_path:
            rows = [(k, lam, float("nan")) for k, lam in exc.history]
            write_csv(_resolve(base, config.outputs.history_path), ("k", "lambda", "opt_residual"), rows)
        return _fail(f"optimization aborted: {exc.detail}")
    except FracSpecError as exc:
        return _fail(exc.detail)

    wall_time_ms = (time.perf_counter() - started) * 1000.0
    try:
        _write_outputs(config, base, result, problem, dump_kernel, wall_time_ms)
    except OSError as exc:
        return _fail(f"cannot write outputs: {exc}")

    if result.passed:
        return EXIT_OK
    logger.warning(f"'{config.command}' finished without convergence or with failed checks.")
    return EXIT_UNCONVERGED


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="fracspec", description=settings.APP_DESCRIPTION)
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--dump-kernel", action="store_true", help="also write the dense K and rho as CSV")
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    args = parser.parse_args(argv)
    return run(args.config, dump_kernel=args.dump_kernel)


if __name__ == "__main__":
    sys.exit(main())
