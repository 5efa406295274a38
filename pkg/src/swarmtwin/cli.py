"""Command line: ``swarmtwin run|scenarios|validate``.

Exit codes: 0 success, 2 configuration error, 3 runtime error. Errors are
printed to stderr as one line, ``swarmtwin: error[config]: <message>``.
"""

from __future__ import annotations

import argparse
import logging
import sys

from swarmtwin import config as cfg
from swarmtwin import results
from swarmtwin.engine import ConfigError
from swarmtwin.montecarlo import WORKERS_ENV, run_batch

log = logging.getLogger("swarmtwin")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _fail(kind: str, msg: str, code: int) -> int:
    msg = " ".join(str(msg).split())
    print(f"swarmtwin: error[{kind}]: {msg}", file=sys.stderr)
    return code


def cmd_run(args) -> int:
    try:
        batch = cfg.load_batch(args.config, args.override)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    try:
        log.info("running %d spec(s) x %d run(s)", len(batch.specs()), batch.num_runs)
        result = run_batch(batch, workers=args.workers)
        results.write(result, args.output)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except Exception as exc:  # noqa: BLE001
        return _fail("runtime", exc, EXIT_RUNTIME)
    for s in result.specs:
        log.info("%s: mean final distance %.2f m (se %.2f), mean rounds %.1f",
                 s.spec.label, s.mean_final, s.se_final, s.mean_rounds)
    return EXIT_OK


def cmd_scenarios(args) -> int:
    try:
        doc = cfg.scenario_document(args.name)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    text = cfg.dump(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        batch = cfg.load_batch(args.config, args.override)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    print(f"ok: {len(batch.specs())} spec(s) x {batch.num_runs} run(s)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swarmtwin", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a batch and write a results file")
    r.add_argument("config")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--override", "-O", action="append", default=[], metavar="KEY=VALUE",
                   help="dotted key override, e.g. scenario.scheme.radius_r=200 (repeatable)")
    r.add_argument("--workers", type=int, default=None,
                   help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("scenarios", help="emit a ready-to-run scenario config")
    s.add_argument("name", help=f"one of: {', '.join(cfg.SCENARIOS)}")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_scenarios)

    v = sub.add_parser("validate", help="parse and check a config without running it")
    v.add_argument("config")
    v.add_argument("--override", "-O", action="append", default=[], metavar="KEY=VALUE")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
