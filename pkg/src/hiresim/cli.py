"""Headless front door: generate synthetic cohorts, run simulations, and
launch the HTTP service.

Machine-readable output goes to files and standard output only; progress
and diagnostics go to standard error. Every flag has a config-file
equivalent (flat KEY=VALUE); flags override file values. Exit codes are
documented in the README (0 ok, 2 usage, 3 invalid weights, 4 cohort file
error, 5 invalid spec/policy, 6 I/O, 7 port in use, 10 internal).
"""

import argparse
import json
import logging
import os
import socket
import sys

from .cohort import (
    SyntheticCohortSpec,
    default_synthetic_spec,
    generate_synthetic_cohort,
    load_cohort,
    write_cohort_csv,
)
from .engine import SessionConfig, render_document, result_document, run_simulation
from .errors import (
    CohortError,
    DomainError,
    HireSimError,
    InvalidSpec,
    PipelineError,
    PortInUse,
    ZeroWeightVector,
)
from .service import BUILTIN_COHORT, create_app
from .svm import TrainConfig
from .targets import LabelingPolicy, WeightVector

log = logging.getLogger("hiresim.cli")

EXIT_OK = 0
EXIT_INVALID_WEIGHTS = 3
EXIT_COHORT_ERROR = 4
EXIT_INVALID_SPEC = 5
EXIT_IO_ERROR = 6
EXIT_PORT_IN_USE = 7
EXIT_INTERNAL = 10

LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging():
    level_name = os.environ.get("HIRESIM_LOG_LEVEL", "warn").lower()
    level = LOG_LEVELS.get(level_name, logging.WARNING)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _read_kv_file(path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InvalidSpec(f"{path}:{lineno}: expected KEY=VALUE, got {line!r}")
            values[key.strip()] = value.strip()
    return values


_POLICY_FIELDS = {"percentile_cut": float, "positive_count": int,
                  "weight_high": float, "weight_low": float}
_TRAIN_FIELDS = {"c": float, "class_balance": None, "tolerance": float,
                 "max_iterations": int, "split_fraction": float}


def _coerce(fields: dict, raw: dict, what: str) -> dict:
    values = {}
    for key, text in raw.items():
        if key not in fields:
            raise InvalidSpec(f"unknown {what} key {key!r} (known: {sorted(fields)})")
        caster = fields[key]
        if caster is None:  # boolean
            if text.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise InvalidSpec(f"{what} key {key!r} must be a boolean, got {text!r}")
            values[key] = text.lower() in ("true", "1", "yes")
        else:
            try:
                values[key] = caster(text)
            except ValueError:
                raise InvalidSpec(f"{what} key {key!r}: cannot parse {text!r}") from None
    return values


def _load_policy(path) -> LabelingPolicy:
    return LabelingPolicy(**_coerce(_POLICY_FIELDS, _read_kv_file(path), "policy"))


def _load_train(path) -> TrainConfig:
    return TrainConfig(**_coerce(_TRAIN_FIELDS, _read_kv_file(path), "train"))


def _resolve_cohort(name: str):
    if name == BUILTIN_COHORT:
        return generate_synthetic_cohort(default_synthetic_spec(2000), 7)
    return load_cohort(name)


def _merge_config_file(args, parser):
    """Fill unset flags from --config KEY=VALUE entries."""
    if not getattr(args, "config", None):
        return
    file_values = _read_kv_file(args.config)
    known = {"cohort", "weights_a", "weights_b", "seed", "out",
             "policy_file", "train_file", "port", "host"}
    for key, value in file_values.items():
        if key not in known:
            raise InvalidSpec(f"unknown config key {key!r} (known: {sorted(known)})")
        if getattr(args, key, None) is None:
            setattr(args, key, int(value) if key in ("seed", "port") else value)


def _format_rate(value) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def _print_summary(document):
    models = document["models"]
    deltas = document["deltas"]
    print(f"accuracy (test split): A={_format_rate(models['a']['evaluation']['accuracy'])} "
          f"B={_format_rate(models['b']['evaluation']['accuracy'])} "
          f"delta={_format_rate(deltas['accuracy'])}")
    print(f"selection rate (full cohort): A={_format_rate(models['a']['selection']['overall']['rate'])} "
          f"B={_format_rate(models['b']['selection']['overall']['rate'])} "
          f"delta={_format_rate(deltas['selection_rate_overall'])}")
    for attribute, rows in models["a"]["selection"]["by_attribute"].items():
        print(attribute)
        rows_b = {r["group"]: r for r in models["b"]["selection"]["by_attribute"][attribute]}
        delta_rows = {r["group"]: r for r in deltas["selection_rates"][attribute]}
        print(f"  {'group':<16}{'count':>7}{'A':>8}{'B':>8}{'delta':>8}")
        for row in rows:
            group = row["group"]
            print(f"  {group:<16}{row['count']:>7}"
                  f"{_format_rate(row['rate']):>8}"
                  f"{_format_rate(rows_b[group]['rate']):>8}"
                  f"{_format_rate(delta_rows[group]['delta']):>8}")


def cmd_generate(args) -> int:
    if args.spec_file:
        data = json.loads(open(args.spec_file, encoding="utf-8").read())
        spec = SyntheticCohortSpec(
            size=args.size if args.size is not None else data.get("size", 2000),
            group_fractions=data.get("group_fractions",
                                     default_synthetic_spec(10).group_fractions),
            trait_shifts=data.get("trait_shifts", {}),
            noise_scale=data.get("noise_scale", 1.0),
        )
    else:
        spec = default_synthetic_spec(args.size if args.size is not None else 2000)
    cohort = generate_synthetic_cohort(spec, args.seed)
    write_cohort_csv(cohort, args.out)
    log.info("wrote %d candidates to %s", len(cohort), args.out)
    return EXIT_OK


def cmd_run(args, parser) -> int:
    _merge_config_file(args, parser)
    missing = [flag for flag in ("cohort", "weights_a", "weights_b", "out")
               if getattr(args, flag) is None]
    if missing:
        parser.error(f"missing required value(s): {', '.join('--' + m.replace('_', '-') for m in missing)}")

    cohort = _resolve_cohort(args.cohort)
    config = SessionConfig(
        cohort=cohort,
        weights_a=WeightVector.from_csv(args.weights_a),
        weights_b=WeightVector.from_csv(args.weights_b),
        policy=_load_policy(args.policy_file) if args.policy_file else LabelingPolicy(),
        train=_load_train(args.train_file) if args.train_file else TrainConfig(),
        master_seed=args.seed if args.seed is not None else 0,
    )
    result = run_simulation(config, progress=lambda stage: log.info("stage: %s", stage))
    document = result_document(result)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(render_document(document))
    log.info("report written to %s in %.2fs", args.out, result.timing["total_seconds"])
    _print_summary(document)
    return EXIT_OK


def cmd_serve(args, parser) -> int:
    import uvicorn

    _merge_config_file(args, parser)
    host = args.host or "127.0.0.1"
    port = args.port if args.port is not None else 8080

    # fail fast on an occupied port before loading anything heavy
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise PortInUse(f"cannot bind {host}:{port}: {exc}") from exc
    finally:
        probe.close()

    cohorts = {BUILTIN_COHORT: generate_synthetic_cohort(default_synthetic_spec(2000), 7)}
    for path in args.cohort or []:
        if path == BUILTIN_COHORT:
            continue
        name = os.path.splitext(os.path.basename(path))[0]
        cohorts[name] = load_cohort(path)

    ui_dir = args.ui_dir
    if ui_dir is None and os.path.isdir("frontend/dist"):
        ui_dir = "frontend/dist"

    app = create_app(cohorts=cohorts, ui_dir=ui_dir)
    log.info("serving on http://%s:%d (cohorts: %s)", host, port, ", ".join(sorted(cohorts)))
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiresim",
        description="Simulate how the definition of a 'good employee' changes "
                    "who a hiring model selects across demographic groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    generate = sub.add_parser("generate", help="write a synthetic cohort CSV")
    generate.add_argument("--size", type=int, default=None, help="number of candidates (>= 10)")
    generate.add_argument("--seed", type=int, required=True)
    generate.add_argument("--out", required=True)
    generate.add_argument("--spec-file", default=None,
                          help="JSON with group_fractions / trait_shifts / noise_scale")

    run = sub.add_parser("run", help="run a two-model simulation and write the report")
    run.add_argument("--cohort", default=None,
                     help=f"cohort CSV path or the built-in '{BUILTIN_COHORT}'")
    run.add_argument("--weights-a", dest="weights_a", default=None,
                     help="five comma-separated reals in canonical trait order")
    run.add_argument("--weights-b", dest="weights_b", default=None)
    run.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    run.add_argument("--out", default=None, help="report JSON path")
    run.add_argument("--policy-file", dest="policy_file", default=None)
    run.add_argument("--train-file", dest="train_file", default=None)
    run.add_argument("--config", default=None, help="flat KEY=VALUE config file")

    serve = sub.add_parser("serve", help="launch the HTTP service")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--host", default=None)
    serve.add_argument("--cohort", action="append", default=None,
                       help="cohort CSV to preload (repeatable)")
    serve.add_argument("--ui-dir", dest="ui_dir", default=None,
                       help="static UI bundle directory (default: frontend/dist if present)")
    serve.add_argument("--config", default=None)

    return parser


def _exit_code_for(exc: HireSimError) -> int:
    if isinstance(exc, PipelineError):
        return _exit_code_for(exc.cause) if isinstance(exc.cause, HireSimError) else EXIT_INTERNAL
    if isinstance(exc, ZeroWeightVector):
        return EXIT_INVALID_WEIGHTS
    if isinstance(exc, CohortError):
        return EXIT_COHORT_ERROR
    if isinstance(exc, (InvalidSpec, DomainError)):
        return EXIT_INVALID_SPEC
    if isinstance(exc, PortInUse):
        return EXIT_PORT_IN_USE
    return EXIT_INTERNAL


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "run":
            return cmd_run(args, parser)
        if args.command == "serve":
            return cmd_serve(args, parser)
        parser.error(f"unknown command {args.command!r}")
    except HireSimError as exc:
        print(json.dumps({"error": exc.payload()}), file=sys.stderr)
        return _exit_code_for(exc)
    except OSError as exc:
        print(json.dumps({"error": {"code": "io_error", "message": str(exc)}}), file=sys.stderr)
        return EXIT_IO_ERROR
    return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
