"""Command-line front end: ``hyperbethe <command> FILE [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import FiberPoint, as_fiber, classify_fiber
from .config import Command, ConfigRepository, OutputFormat, RunConfig, SuiteName
from .critical import eigenvalue_table, solve_critical_points
from .errors import DegenerateFormError, FiberError, InputError, NotACircuitError, SolverError, VerificationError
from .events import CheckEvent, ErrorEvent, Event, StateChangeEvent, WarningEvent
from .exact import format_rational
from .flags import degenerate_subspaces
from .gaudin.data import preset_from_dict
from .hamiltonians import HamiltonianFamily, hamiltonian_at, operator_to_dict, regularized_hamiltonians
from .interfaces import Suite
from .output import FilesystemReportWriter, build_report, render_json, render_table
from .pipeline import VerificationPipeline
from .serialization import ArrangementInput, arrangement_from_dict, parse_point, read_json
from .session import VerificationSession
from .suites import BadFiberSuite, GaudinSuite, GoodFiberSuite, RandomSuite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed of the random suites (default 0).")
    common.add_argument("--tol-newton", type=float, default=None, help="Newton residual tolerance (default 1e-12).")
    common.add_argument("--tol-verify", type=float, default=None, help="Verification tolerance (default 1e-8).")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None, help="Report format.")
    common.add_argument("--output", type=Path, default=None, help="Directory for <stem>.<command>.json reports.")
    common.add_argument("--profile", default=None, help="Load defaults from a saved profile.")
    common.add_argument("--save-profile", default=None, help="Store the effective settings under this name.")
    common.add_argument("--config", type=Path, default=None, help="Profile file (default ~/.config/hyperbethe/config.json).")
    common.add_argument("-v", "--verbose", action="count", default=0, help="Repeat for more log output on stderr.")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="hyperbethe",
        description="Circuits, singular vectors, Hamiltonians and Bethe vectors of weighted hyperplane arrangements.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        (Command.CIRCUITS, "List circuits and classify the fiber."),
        (Command.SING, "Basis of Sing V, or of the degenerate-fiber subspaces at a bad fiber."),
        (Command.CRITICAL, "Critical points of the master function, one per bounded region."),
    ):
        sub = commands.add_parser(name.value, parents=[common], help=text)
        sub.add_argument("file", type=Path)
        sub.add_argument("--at", default=None, help="Fiber point z as comma separated scalars.")
    sub = commands.add_parser(Command.HAMILTONIANS.value, parents=[common], help="Matrices K_j(z) on V.")
    sub.add_argument("file", type=Path)
    sub.add_argument("--at", default=None, help="Fiber point z as comma separated scalars.")
    sub.add_argument("--j", type=int, default=None, help="Hyperplane index, 1-based (default: all).")
    sub = commands.add_parser(Command.VERIFY.value, parents=[common], help="Run verification suites.")
    sub.add_argument("file", type=Path, nargs="?", default=None)
    sub.add_argument("--suite", choices=[s.value for s in SuiteName], default=None)
    sub.add_argument("--good-draws", type=int, default=None, help="Random good-fiber families (default 20).")
    sub.add_argument("--census-draws", type=int, default=None, help="Random census families (default 10).")
    sub = commands.add_parser(Command.GAUDIN.value, parents=[common], help="Full Gaudin pipeline for a preset.")
    sub.add_argument("file", type=Path)
    return parser


def configure_logging(verbosity: int) -> None:
    level = LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)]
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def resolve_config(args: argparse.Namespace, repository: ConfigRepository) -> RunConfig:
    base = repository.load_profile(args.profile) if args.profile else RunConfig()
    data = base.to_dict()
    data["command"] = args.command
    data["input_path"] = str(args.file) if getattr(args, "file", None) else None
    overrides = {
        "seed": args.seed,
        "tol_newton": args.tol_newton,
        "tol_verify": args.tol_verify,
        "output_format": args.format,
        "output_dir": str(args.output) if args.output else None,
        "suite": getattr(args, "suite", None),
        "good_draws": getattr(args, "good_draws", None),
        "census_draws": getattr(args, "census_draws", None),
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value
    config = RunConfig.from_dict(data)
    if args.save_profile:
        repository.save_profile(args.save_profile, config)
    return config


def _is_preset(data: Dict[str, object]) -> bool:
    return "algebra" in data or "alpha_gram" in data


def _arrangement(config: RunConfig, at: Optional[str]) -> ArrangementInput:
    if config.input_path is None:
        raise InputError("an arrangement file is required")
    loaded = arrangement_from_dict(read_json(config.input_path), source=config.input_path)
    if at is None:
        return loaded
    z = as_fiber(FiberPoint.of(parse_point(at)), loaded.family)
    return ArrangementInput(loaded.family, z, loaded.source)


def _require_z(source: ArrangementInput) -> FiberPoint:
    if source.z is None:
        raise InputError("no fiber point: give z in the file or --at")
    return source.z


def cmd_circuits(source: ArrangementInput) -> Dict[str, object]:
    hf = HamiltonianFamily.build(source.family)
    results: Dict[str, object] = {
        "circuits": [
            {"support": circuit.display(), "lambda": [format_rational(v) for v in circuit.syzygy]}
            for circuit in hf.circuits
        ]
    }
    if source.z is not None and source.z.exact:
        classification = classify_fiber(source.family, hf.circuits, source.z)
        results["fiber"] = classification.kind.value
        results["vanishing"] = [circuit.display() for circuit in classification.vanishing_circuits]
    return results


def cmd_sing(source: ArrangementInput) -> Dict[str, object]:
    hf = HamiltonianFamily.build(source.family)
    results: Dict[str, object] = {"dim_V": hf.space.dim, "sing": hf.singular.to_dict()}
    if source.z is not None and source.z.exact and not classify_fiber(source.family, hf.circuits, source.z).good:
        spaces = degenerate_subspaces(source.family, hf.circuits, source.z)
        results["degenerate"] = {"flag": spaces.flag.dim, "sing": spaces.singular.to_dict()}
    return results


def cmd_hamiltonians(source: ArrangementInput, j: Optional[int]) -> Dict[str, object]:
    z = _require_z(source)
    family = source.family
    if j is not None and not 1 <= j <= family.n:
        raise InputError(f"--j must lie in 1..{family.n}", path="j")
    indices = [j - 1] if j is not None else list(range(family.n))
    hf = HamiltonianFamily.build(family)
    if classify_fiber(family, hf.circuits, z).good:
        return {
            "fiber": "good",
            "operators": {str(i + 1): operator_to_dict(hamiltonian_at(hf, z, i), hf.space.basis) for i in indices},
        }
    spaces = degenerate_subspaces(family, hf.circuits, z)
    regularized = regularized_hamiltonians(hf, z, spaces.singular)
    regularized.require()
    return {
        "fiber": "bad",
        "commuting": regularized.commuting,
        "symmetric": regularized.symmetric,
        "regularized": {
            str(i + 1): [[format_rational(v) for v in row] for row in regularized.operators[i].tolist()]
            for i in indices
        },
    }


def cmd_critical(source: ArrangementInput, config: RunConfig) -> Dict[str, object]:
    z = _require_z(source)
    points = solve_critical_points(
        source.family, z, tol=config.tol_newton, max_steps=config.max_newton_steps
    )
    return {
        "count": len(points),
        "critical": [point.to_dict(eigenvalue_table(source.family, z, point)) for point in points],
    }


def select_suites(config: RunConfig) -> Tuple[List[Suite], Optional[str]]:
    if config.input_path is None:
        if config.suite in (SuiteName.ALL, SuiteName.RANDOM):
            return [RandomSuite()], None
        raise InputError(f"suite {config.suite.value} needs an input file")
    data = read_json(config.input_path)
    stem = config.input_path.stem
    if _is_preset(data):
        if config.suite not in (SuiteName.ALL, SuiteName.GAUDIN):
            raise InputError(f"{config.input_path.name} is a Gaudin preset; use --suite gaudin")
        return [GaudinSuite(preset_from_dict(data, source=config.input_path))], stem
    if config.suite is SuiteName.GAUDIN:
        raise InputError("--suite gaudin needs a Gaudin preset file")
    source = arrangement_from_dict(data, source=config.input_path)
    suites: List[Suite] = []
    if config.suite in (SuiteName.ALL, SuiteName.GOOD, SuiteName.BAD):
        z = _require_z(source)
        hf_good = classify_fiber(source.family, HamiltonianFamily.build(source.family).circuits, z).good
        if config.suite is SuiteName.GOOD and not hf_good:
            raise FiberError("z is a bad fiber; use --suite bad")
        if config.suite is SuiteName.BAD and hf_good:
            raise FiberError("z is a good fiber; use --suite good")
        suites.append(GoodFiberSuite(source) if hf_good else BadFiberSuite(source))
    if config.suite in (SuiteName.ALL, SuiteName.RANDOM):
        suites.append(RandomSuite())
    return suites, stem


def _log_event(event: Event) -> None:
    if isinstance(event, CheckEvent) and not event.passed:
        logger.info("check failed: %s [%s] %s", event.name, event.tag, event.detail)
    elif isinstance(event, WarningEvent):
        logger.warning(event.message)
    elif isinstance(event, ErrorEvent):
        logger.error("%s failed with %s: %s", event.suite_name, event.error_type, event.message)
    elif isinstance(event, StateChangeEvent):
        logger.debug("session %s", event.state)


def run_session(config: RunConfig, suites: Sequence[Suite]) -> VerificationSession:
    session = VerificationSession(config, VerificationPipeline(), suites, _log_event, source=config.input_path)
    session.run()
    return session


def run_command(config: RunConfig, args: argparse.Namespace) -> Dict[str, object]:
    command = config.command
    source_name = str(config.input_path) if config.input_path is not None else None
    if command in (Command.VERIFY, Command.GAUDIN):
        if command is Command.GAUDIN:
            if config.input_path is None:
                raise InputError("a Gaudin preset file is required")
            suites: List[Suite] = [GaudinSuite(preset_from_dict(read_json(config.input_path), source=config.input_path))]
        else:
            suites, _ = select_suites(config)
        session = run_session(config, suites)
        results = {outcome.name: outcome.results for outcome in session.outcomes}
        return build_report(command.value, source_name, config.seed, results, session.outcomes)
    source = _arrangement(config, getattr(args, "at", None))
    if command is Command.CIRCUITS:
        results = cmd_circuits(source)
    elif command is Command.SING:
        results = cmd_sing(source)
    elif command is Command.HAMILTONIANS:
        results = cmd_hamiltonians(source, args.j)
    else:
        results = cmd_critical(source, config)
    return build_report(command.value, source_name, config.seed, results)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    repository = ConfigRepository(args.config)
    try:
        config = resolve_config(args, repository)
        report = run_command(config, args)
    except (InputError, FiberError, NotACircuitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationError as exc:
        print(f"failed: {exc.tag}: {exc.detail}", file=sys.stderr)
        return EXIT_FAILED
    except (SolverError, DegenerateFormError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if config.output_format is OutputFormat.JSON:
        sys.stdout.write(render_json(report))
    else:
        sys.stdout.write(render_table(report))
    if config.output_dir is not None:
        stem = config.input_path.stem if config.input_path is not None else "random"
        path = FilesystemReportWriter(config.output_dir).write_report(report, stem, config.command.value)
        logger.info("report written to %s", path)
    return EXIT_OK if report["passed"] else EXIT_FAILED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
