"""Command-line entry point: subcommand dispatch, exit codes, run manifest."""
from __future__ import annotations

import argparse
import datetime
import json
import logging
import platform
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .commands import cmd_fatigue_curve, cmd_pareto, cmd_predict, cmd_sweep, cmd_work_rest
from .config import config_hash, load_scenario
from .errors import ConfigurationError, ErgoposeError, InvalidParameterError, NoSolutionError
from .optimizer import Weights

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_INFEASIBLE = 3
EXIT_IO_ERROR = 4

logger = logging.getLogger(__name__)


@dataclass
class RunRecord:
    """Provenance for one invocation; written as run_manifest.json."""

    command: str
    scenario_hash: str
    versions: dict
    timestamp_utc: str
    seed: int | None
    outputs: list[str] = field(default_factory=list)


def _parse_weights(text: str) -> Weights:
    try:
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError("expected two comma-separated values")
        return Weights.from_pair(parts[0], parts[1])
    except (ValueError, InvalidParameterError) as exc:
        raise argparse.ArgumentTypeError(f"bad weights {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergopose",
        description=(
            "Fatigue-aware posture analysis for manual work: capacity decay "
            "curves, work-rest schedules, distance sweeps, Pareto fronts, and "
            "optimal-posture prediction, emitted as CSV plus PNG figures."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="scenario configuration JSON")
        p.add_argument("--out", default="out", help="output directory (default: ./out)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed recorded in the run manifest")
        p.add_argument("--no-figures", action="store_true",
                       help="skip PNG rendering, write CSV only")

    p = sub.add_parser("fatigue-curve", help="capacity decay for a band of joint maxima")
    add_common(p)
    p.add_argument("--duration", type=float, default=None, help="curve length in seconds")

    p = sub.add_parser("work-rest", help="capacity over the work-rest duty cycle")
    add_common(p)

    p = sub.add_parser("sweep", help="objective measures along the work distance")
    add_common(p)
    p.add_argument("--fatigued", action="store_true",
                   help="also sweep with capacity after one work phase")
    p.add_argument("--steps", type=int, default=None, help="number of grid distances")

    p = sub.add_parser("pareto", help="Pareto front and weight-line selections")
    add_common(p)
    p.add_argument("--steps", type=int, default=None)

    p = sub.add_parser("predict", help="single optimal-posture prediction")
    add_common(p)
    p.add_argument("--weights", type=_parse_weights, default=None,
                   help="discomfort,fatigue weights, e.g. 0.5,0.5")
    p.add_argument("--fatigued", action="store_true",
                   help="predict with capacity after one work phase")
    p.add_argument("--steps", type=int, default=None)

    return parser


def _dispatch(args: argparse.Namespace) -> list[Path]:
    scenario, raw = load_scenario(args.config)
    out_dir = Path(args.out)
    figures = not args.no_figures

    if args.command == "fatigue-curve":
        outputs = cmd_fatigue_curve(scenario, out_dir, duration_s=args.duration,
                                    figures=figures)
    elif args.command == "work-rest":
        outputs = cmd_work_rest(scenario, out_dir, figures=figures)
    elif args.command == "sweep":
        outputs = cmd_sweep(scenario, out_dir, fatigued=args.fatigued,
                            steps=args.steps, figures=figures)
    elif args.command == "pareto":
        outputs = cmd_pareto(scenario, out_dir, steps=args.steps, figures=figures)
    elif args.command == "predict":
        outputs = cmd_predict(scenario, out_dir, weights=args.weights,
                              fatigued=args.fatigued, steps=args.steps,
                              figures=figures)
    else:  # pragma: no cover - argparse enforces the choices
        raise ConfigurationError(f"unknown command {args.command!r}")

    record = RunRecord(
        command=args.command,
        scenario_hash=config_hash(raw),
        versions={
            "ergopose": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        timestamp_utc=datetime.datetime.now(datetime.timezone.utc).isoformat(),
        seed=args.seed,
        outputs=[str(p) for p in outputs],
    )
    manifest = out_dir / "run_manifest.json"
    manifest.write_text(json.dumps(asdict(record), indent=2) + "\n", encoding="utf-8")
    outputs.append(manifest)
    return outputs


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        outputs = _dispatch(args)
    except (ConfigurationError, InvalidParameterError) as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG_ERROR
    except NoSolutionError as exc:
        logger.error("infeasible scenario: %s", exc)
        return EXIT_INFEASIBLE
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        return EXIT_IO_ERROR
    except ErgoposeError as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG_ERROR
    for path in outputs:
        logger.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
