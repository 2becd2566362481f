"""Command-line entry point: ``qbattery <experiment> [options]``.

Exit codes: 0 success, 1 invalid input, 2 a verification or row contract failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .sweep.emit import emit
from .sweep.engine import RowError, columns, run_sweep
from .sweep.spec import (
    Experiment,
    OutputFormat,
    SpecError,
    build_spec,
    parse_bool,
    parse_float,
    parse_format,
    parse_int,
    parse_noise,
    read_config,
)
from .sweep.verify import run_verification

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2

SUBCOMMANDS = ("single", "two", "regions", "map", "diag", "verify")

# flag dest -> grid parameter name
PARAM_FLAGS = {
    "p": "p", "n": "n", "d": "d", "j": "j", "jz": "jz", "gamma": "gamma",
    "omega_t": "omega_t", "omega": "omega", "t": "t",
}


class _Parser(argparse.ArgumentParser):
    """Argument errors are input errors: usage goes to stderr and the exit code is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qbattery", description="Quantum battery ergotropy sweeps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="INI file with [sweep] [params] [noise] [output] [brute] [verify]")
        if name == "verify":
            cmd.add_argument("--draws", type=int)
            cmd.add_argument("--seed", type=int)
            continue
        cmd.add_argument("--noise", help="pf, bf or ad")
        for flag in ("p", "n", "d", "j", "jz", "gamma", "omega", "t"):
            cmd.add_argument(f"--{flag}", metavar="VALUES", help="x, a,b,c or start:stop:count")
        cmd.add_argument("--omega-t", dest="omega_t", metavar="VALUES")
        cmd.add_argument("--out", help="output path (default: stdout)")
        cmd.add_argument("--format", help="csv or jsonl")
        cmd.add_argument("--workers", type=int)
        cmd.add_argument("--brute", action="store_true", default=None,
                         help="map only: cross-check each point by iterating the channel")
        cmd.add_argument("--brute-n", type=int)
        cmd.add_argument("--brute-t", type=float)
        cmd.add_argument("--brute-p", type=float)
        cmd.add_argument("--brute-tol", type=float)
    return parser


def _experiment(command: str, noisy: bool) -> Experiment:
    if command == "two":
        return Experiment.TWO_QUBIT_NOISE if noisy else Experiment.TWO_QUBIT_NOISELESS
    return {
        "single": Experiment.SINGLE_QUBIT_NOISE, "regions": Experiment.REGION_MAP,
        "map": Experiment.ASYMPTOTIC_MAP, "diag": Experiment.DIAGONAL_DISTRIBUTION,
        "verify": Experiment.VERIFY,
    }[command]


def _collect(args) -> tuple[Experiment, dict, dict]:
    """Merge config file values with flag overrides."""
    cfg = read_config(args.config) if args.config else {}
    sweep_cfg = cfg.get("sweep", {})
    noise_cfg = dict(cfg.get("noise", {}))
    output_cfg = cfg.get("output", {})
    brute_cfg = cfg.get("brute", {})
    verify_cfg = cfg.get("verify", {})

    raw_params = dict(cfg.get("params", {}))
    noise_text = noise_cfg.pop("kind", None)
    # p and n are channel settings but also grid axes
    for key in ("p", "n"):
        if key in noise_cfg:
            raw_params[key] = noise_cfg.pop(key)
    for key in noise_cfg:
        raise SpecError(f"noise.{key}", "unknown key")

    options: dict = {}
    if args.command == "verify":
        if "draws" in verify_cfg:
            options["draws"] = parse_int(verify_cfg["draws"], "verify.draws")
        if "seed" in verify_cfg:
            options["seed"] = parse_int(verify_cfg["seed"], "verify.seed")
        if args.draws is not None:
            options["draws"] = args.draws
        if args.seed is not None:
            options["seed"] = args.seed
        experiment = Experiment.VERIFY
    else:
        for dest, key in PARAM_FLAGS.items():
            value = getattr(args, dest)
            if value is not None:
                raw_params[key] = value
        if args.noise is not None:
            noise_text = args.noise
        noise = parse_noise(noise_text) if noise_text is not None else None
        experiment = _experiment(args.command, noise is not None)
        if experiment in (Experiment.TWO_QUBIT_NOISELESS, Experiment.REGION_MAP) and noise is not None:
            raise SpecError("noise.kind", f"the {experiment.value} experiment takes no noise")
        options["noise"] = noise

        if "workers" in sweep_cfg:
            options["workers"] = parse_int(sweep_cfg["workers"], "sweep.workers")
        if args.workers is not None:
            options["workers"] = args.workers
        if "path" in output_cfg:
            options["output"] = output_cfg["path"]
        if args.out is not None:
            options["output"] = args.out
        fmt = args.format if args.format is not None else output_cfg.get("format")
        if fmt is not None:
            options["format"] = parse_format(fmt)

        if "enabled" in brute_cfg:
            options["brute"] = parse_bool(brute_cfg["enabled"], "brute.enabled")
        for key, conv in (("n", parse_int), ("t", parse_float), ("p", parse_float), ("tol", parse_float)):
            if key in brute_cfg:
                options[f"brute_{key}"] = conv(brute_cfg[key], f"brute.{key}")
            flag = getattr(args, f"brute_{key}")
            if flag is not None:
                options[f"brute_{key}"] = flag
        if args.brute:
            options["brute"] = True
        if options.get("brute") and experiment is not Experiment.ASYMPTOTIC_MAP:
            raise SpecError("brute.enabled", "only the map experiment supports --brute")

    declared = sweep_cfg.get("experiment")
    if declared is not None and declared.strip() not in (experiment.value, args.command):
        raise SpecError("sweep.experiment", f"config is for {declared!r}, not {args.command!r}")
    return experiment, raw_params, options


def _verify(draws: int, seed: int) -> int:
    results = run_verification(draws=draws, seed=seed)
    failed = 0
    for r in results:
        status = "ok" if r.ok else "FAIL"
        print(f"{r.name}: {r.passed}/{r.checks} passed, max error {r.max_error:.3e} "
              f"(tol {r.tolerance:.0e}) {status}")
        failed += r.failures
    print(f"{'all suites passed' if failed == 0 else f'{failed} failures'} (draws={draws}, seed={seed})")
    return EXIT_OK if failed == 0 else EXIT_FAILED


def _brute_mismatches(rows, tol: float, log: list):
    for row in rows:
        if abs(row["xi_brute"] - row["xi"]) > tol:
            log.append(row)
        yield row


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        experiment, raw_params, options = _collect(args)
        if experiment is Experiment.VERIFY:
            if options.get("draws", 500) < 1:
                raise SpecError("verify.draws", "must be >= 1")
            return _verify(options.get("draws", 500), options.get("seed", 0))
        spec = build_spec(experiment, raw_params, **options)
    except SpecError as exc:
        print(f"qbattery: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    errors: list[RowError] = []
    mismatches: list[dict] = []
    rows = run_sweep(spec, errors=errors)
    if spec.brute:
        rows = _brute_mismatches(rows, spec.brute_tol, mismatches)
    try:
        if spec.output:
            with open(spec.output, "w", encoding="utf-8", newline="") as sink:
                emit(rows, sink, spec.format, columns(spec))
        else:
            emit(rows, sys.stdout, spec.format, columns(spec))
            sys.stdout.flush()
    except OSError as exc:
        print(f"qbattery: cannot write {spec.output}: {exc.strerror}", file=sys.stderr)
        return EXIT_INVALID

    for err in errors:
        print(f"qbattery: {err}", file=sys.stderr)
    for row in mismatches:
        print(f"qbattery: brute-force mismatch at d={row['d']} jz={row['jz']}: "
              f"closed {row['xi']!r} vs iterated {row['xi_brute']!r}", file=sys.stderr)
    return EXIT_FAILED if errors or mismatches else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
