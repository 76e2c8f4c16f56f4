"""Command-line driver: ``arrmono build|verify|check|report|oracle``.

Exit codes: 0 every certificate Proved, 1 something Refuted, 2 Inconclusive,
3 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .cache import CACHE_ENV, default_cache_dir, entry_dir
from .gradlin import Certificate, Verdict
from .koszul import general_wedge_kernel
from .pipeline import (
    CASE_CERTS,
    JOBS,
    STEP_GROUPS,
    ConfigError,
    RunConfig,
    acquire,
    dumps,
    prepare,
    rejudge,
    run_jobs,
    run_pipeline,
    tsv_lines,
    validate,
)

log = logging.getLogger("arrmono")

EXIT_PROVED, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3
CHECK_KS = (10, 20, 30, 40, 50)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _primes(text: str) -> list[int]:
    try:
        return [int(p) for p in text.replace(" ", "").split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None


def _threads(text: str) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("threads must be an integer or 'auto'") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=None,
                        help=f"arrangement data cache (default ${CACHE_ENV} or ~/.cache/arrmono)")
    common.add_argument("--primes", type=_primes, default=None, help="comma-separated primes to use")
    common.add_argument("--prime-bits", type=int, default=62, help="size of generated primes (31..62)")
    common.add_argument("--prime-count", type=int, default=2, help="number of generated primes")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_threads, default=1, help="worker processes, or 'auto'")
    common.add_argument("--format", dest="output_format", choices=("text", "json"), default="text")
    common.add_argument("--heavy-oracles", action="store_true", help="also run the optional expensive checks")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="arrmono", description="Exact verification of the G31 Milnor monodromy computation.")
    parser.add_argument("--version", action="version", version=f"arrmono {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("build", parents=[common], help="construct and cache f, the invariants and E")
    p = sub.add_parser("verify", parents=[common], help="run one group of certificates")
    p.add_argument("step", choices=sorted(STEP_GROUPS))
    p = sub.add_parser("check", parents=[common], help="certify the second-page term of one degree k")
    p.add_argument("--k", type=int, required=True)
    p = sub.add_parser("report", parents=[common], help="full pipeline and monodromy verdict")
    p.add_argument("--out-dir", type=Path, default=None, help="write report.json, certificates.tsv and figures here")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--from-report", type=Path, default=None,
                   help="re-judge the certificates of an existing report.json instead of recomputing")
    p.add_argument("--inject-fault", default=None, help=argparse.SUPPRESS)
    p = sub.add_parser("oracle", parents=[common], help="independent cross-checks")
    p.add_argument("which", choices=("wedge-kernel",))
    p.add_argument("--k", type=int, required=True)
    return parser


def config_from_args(args) -> RunConfig:
    cache = args.cache_dir if args.cache_dir is not None else str(default_cache_dir())
    return RunConfig(cache_dir=cache, primes=list(args.primes or []), prime_count=args.prime_count,
                     prime_bits=args.prime_bits, seed=args.seed, threads=args.threads,
                     heavy_oracles=args.heavy_oracles, output_format=args.output_format)


def exit_code(certs) -> int:
    verdicts = [c.verdict for c in certs]
    if all(v is Verdict.PROVED for v in verdicts):
        return EXIT_PROVED
    return EXIT_REFUTED if Verdict.REFUTED in verdicts else EXIT_INCONCLUSIVE


def emit_certs(certs: list[Certificate], config: RunConfig, extra: dict | None = None, out=None) -> None:
    out = out or sys.stdout
    if config.output_format == "json":
        payload = {"tool_version": __version__, "config": config.to_dict(),
                   "certificates": [c.to_dict() for c in certs], **(extra or {})}
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return
    out.write("name\tverdict\tclaim\n")
    for c in certs:
        out.write(f"{c.name}\t{c.verdict.value}\t{c.claim}\n")
    for key, value in (extra or {}).items():
        out.write(f"{key}\t{value}\n")


def cmd_build(args, config: RunConfig) -> int:
    data, status = acquire(config)
    info = {"cache": status, "entry": str(entry_dir(Path(config.cache_dir))), "deg_f": data.f.degree,
            "f_terms": len(data.f), "column_degrees": list(data.E.column_degrees)}
    if config.output_format == "json":
        print(json.dumps(info, indent=2, sort_keys=True))
    else:
        for k, v in info.items():
            print(f"{k}\t{v}")
    return EXIT_PROVED


def _run_named(config: RunConfig, names: list[str]) -> list[Certificate]:
    data, status = acquire(config)
    log.info("arrangement data: %s", status)
    ctx = prepare(data, config)
    if "construction" in names and data.invariants is None:
        # construction identities need the full recipe, not just its cached output
        data, _ = acquire(config, fresh=True)
        ctx = prepare(data, config)
    res = run_jobs(ctx, names, JOBS, config.threads)
    return [res[n] for n in names]


def cmd_verify(args, config: RunConfig) -> int:
    certs = _run_named(config, STEP_GROUPS[args.step])
    emit_certs(certs, config)
    return exit_code(certs)


def cmd_check(args, config: RunConfig) -> int:
    if args.k not in CHECK_KS:
        raise UsageError(f"k must be one of {CHECK_KS}, got {args.k}")
    certs = _run_named(config, CASE_CERTS[args.k])
    code = exit_code(certs)
    e2 = 0 if code == EXIT_PROVED else "undetermined"
    emit_certs(certs, config, {"k": args.k, "e2_dim": e2})
    return code


def cmd_oracle(args, config: RunConfig) -> int:
    if not 2 <= args.k <= 59:
        raise UsageError("k must lie in [2, 59]")
    data, _ = acquire(config)
    dim, cert = general_wedge_kernel(args.k, data.E, config.primes, expected=None)
    emit_certs([cert], config, {"kernel_dim_upper_bound": dim})
    return EXIT_PROVED if dim == 0 else EXIT_INCONCLUSIVE


def cmd_report(args, config: RunConfig) -> int:
    if args.from_report is not None:
        try:
            stored = json.loads(args.from_report.read_text())
        except ValueError as exc:
            raise UsageError(f"{args.from_report}: not a JSON report ({exc})") from None
        try:
            validate(stored)
        except Exception as exc:  # jsonschema.ValidationError
            raise UsageError(f"{args.from_report}: does not match the report schema") from exc
        report, code = rejudge(stored, fault=args.inject_fault)
    else:
        report, code = run_pipeline(config, fault=args.inject_fault,
                                    progress=lambda s: log.info(s))
    text = dumps(report)
    if args.out_dir is not None:
        out = args.out_dir
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text)
        (out / "certificates.tsv").write_text("\n".join(tsv_lines(report)) + "\n")
        if not args.no_figures:
            from .plotting import render_all

            for path in render_all(report, out):
                log.info("wrote %s", path)
    if config.output_format == "json":
        sys.stdout.write(text)
    else:
        sys.stdout.write("\n".join(tsv_lines(report)) + "\n")
        v = report["verdict"]
        if v["failing"]:
            sys.stdout.write("failing:\n" + "".join(f"  {s}\n" for s in v["failing"]))
    return code


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "check": cmd_check, "report": cmd_report,
            "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        return COMMANDS[args.command](args, config)
    except (ConfigError, UsageError) as exc:
        print(f"arrmono: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"arrmono: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
