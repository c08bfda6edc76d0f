"""
Special reductive groups - command line.

    python cli.py classify fixtures/gl1_quaternion.json --explain
    python cli.py snf "[[2,4],[6,8]]"
    python cli.py h1 lattice.json "[[1,0]]"
"""
import argparse
import logging
import os
import sys

import commands
import laurent_forms
from report import EXIT_ERROR

LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING").upper()

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="special", description="Decide whether a reductive group is special.")
    parser.add_argument("--seed", type=int, default=laurent_forms.SEED,
                        help="seed for randomized searches")
    parser.add_argument("--max-group-order", type=int, default=None,
                        help="largest splitting group accepted")
    parser.add_argument("--max-rank", type=int, default=None,
                        help="largest lattice rank accepted")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a descriptor file or a directory of them")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--explain", action="store_true", help="state the criterion in words")
    p.add_argument("--png", metavar="FILE", help="also render a report card")
    p.set_defaults(handler=commands.run_classify)

    p = sub.add_parser("snf", help="Smith normal form of an integer matrix")
    p.add_argument("matrix", help="JSON matrix or a file holding one")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=commands.run_snf)

    p = sub.add_parser("h1", help="first cohomology of a lattice")
    p.add_argument("lattice", help="JSON lattice {galois, rank, action} or a file")
    p.add_argument("subgroup", nargs="?", help="JSON list of generator permutations (default: whole group)")
    p.add_argument("--subgroup", dest="subgroup_flag", metavar="SUBGROUP", help="same as the positional form")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=commands.run_h1)

    p = sub.add_parser("invertible", help="is the lattice a summand of a permutation lattice")
    p.add_argument("lattice")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=commands.run_invertible)

    forms = sub.add_parser("forms", help="diagonal forms over Laurent polynomials")
    forms_sub = forms.add_subparsers(dest="forms_command", required=True)
    p = forms_sub.add_parser("check", help="parity criterion and isotropy search")
    p.add_argument("spec", help='JSON {"p", "exponents", "coefficients"} or a file')
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=commands.run_forms_check)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=getattr(logging, LOG_LEVEL, logging.WARNING),
    )
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
