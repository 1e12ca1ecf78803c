# Command-line front end
# contributors: smlee

# History
# 2026-10-17 | v1.0 - first commit

# Module import
import argparse
import sys
from typing import List, Sequence
from pycoarse import __version__
from pycoarse.conf import ResourceLimitError
from pycoarse.main import Runner
from pycoarse.main.runner import CHECK_KINDS, ROE_COMMANDS, SOURCES

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# Main
def _floats(text:str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text:str) -> List[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _labels(text:str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="relative tolerance of the classification checks")
    common.add_argument("--seed", type=int, default=None, help="64-bit seed of every random choice (default 20240517)")
    common.add_argument("--out", default=None, help="artifact directory; nothing is written without it")
    common.add_argument("--margin", type=int, default=None, help="enumeration margin W of group balls")
    common.add_argument("--max-elements", type=int, default=None, help="element cap of group ball enumeration")
    common.add_argument("--config", default="", help="YAML configuration file")
    common.add_argument("--verbose", action="store_true", help="debug logging to stderr")

    parser = argparse.ArgumentParser(prog="pycoarse", description="Finite coarse geometry toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="classify kernels")
    p.add_argument("kind", choices=CHECK_KINDS)
    p.add_argument("inputs", nargs="+")
    p.add_argument("--bases", type=int, default=None, help="number of sampled base points for groupoid checks")

    p = sub.add_parser("pipeline", parents=[common], help="proper kernel to uniform embedding")
    p.add_argument("space")
    p.add_argument("--source", choices=SOURCES, default=None)
    p.add_argument("--terms", type=int, default=None)

    p = sub.add_parser("roe", parents=[common], help="uniform Roe algebra checks")
    p.add_argument("subcommand", choices=ROE_COMMANDS)
    p.add_argument("spec")
    p.add_argument("--radii", type=_floats, default=[1.0, 2.0, 3.0])
    p.add_argument("--sample", type=_labels, default=None, help="comma separated element labels")
    p.add_argument("--sample-size", type=int, default=5)

    p = sub.add_parser("expander", parents=[common], help="Poincare certificates for random regular graphs")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--family", type=_ints, default=None, help="comma separated vertex counts")
    p.add_argument("--source", choices=SOURCES, default="rows")
    return parser


def main(argv:Sequence[str]=None) -> int:
    """Run the command line

    Returns:
        0 on pass, 1 on a failed check or stage, 2 on parse, schema or parameter errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code == 0 else EXIT_USAGE

    overrides = {"tol":args.tol, "seed":args.seed, "margin":args.margin, "max_elements":args.max_elements,
                 "verbose":10 if args.verbose else None}
    if getattr(args, "terms", None) is not None:
        overrides["terms"] = args.terms
    try:
        runner = Runner(path=args.config, out=args.out, echo=args.verbose, **overrides)
        if args.command == "check":
            report = runner.cmd_check(args.kind, args.inputs, bases=args.bases)
        elif args.command == "pipeline":
            report = runner.cmd_pipeline(args.space, source=args.source)
        elif args.command == "roe":
            report = runner.cmd_roe(args.subcommand, args.spec, radii=args.radii, sample=args.sample,
                                    sample_size=args.sample_size)
        else:
            report = runner.cmd_expander(args.n, args.degree, trials=args.trials, family=args.family,
                                         source=args.source)
    except (ValueError, KeyError, TypeError, OSError, AssertionError, ResourceLimitError) as e:
        sys.stderr.write(f"pycoarse: error: {type(e).__name__}: {e}\n")
        return EXIT_USAGE
    except Exception as e:
        sys.stderr.write(f"pycoarse: failed: {type(e).__name__}: {e}\n")
        return EXIT_FAIL

    sys.stdout.write(report.to_json() + "\n")
    return EXIT_PASS if report.passed else EXIT_FAIL
