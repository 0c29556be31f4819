"""Command line: ``python -m repdiff {su,psu3,snf} ...``.

Exit codes: 0 when every non-exploratory check passes, 1 when one fails,
2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import sys

from .lattice import IntMatrix, cokernel_invariants, smith_normal_form
from .suites import PSU3_SUITES, SU_SUITES, Bounds, SuiteReport


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 already; keep the message short
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--jobs", type=_positive, default=1)

    p = _Parser(prog="repdiff", description="Run verification suites.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    su = sub.add_parser("su", parents=[common], help="SU(n) suites")
    su.add_argument("suite", choices=sorted(SU_SUITES))
    su.add_argument("--rank", type=int, choices=[1, 2, 3], default=2)
    su.add_argument("--max-degree", type=_nonneg, default=None)
    su.add_argument("--box", type=_positive, default=Bounds.box)

    ps = sub.add_parser("psu3", parents=[common], help="PSU(3) suites")
    ps.add_argument("suite", choices=list(PSU3_SUITES))
    ps.add_argument("--max-degree", type=_nonneg, default=Bounds.max_degree)
    ps.add_argument("--box", type=_positive, default=Bounds.box)

    sn = sub.add_parser("snf", parents=[common], help="Smith normal form of a matrix fixture")
    sn.add_argument("path")
    return p


def cmd_su(rank: int, suite: str, bounds: Bounds = Bounds()) -> SuiteReport:
    if rank not in (1, 2, 3):
        raise ValueError(f"unsupported rank {rank}; expected 1, 2 or 3")
    return SU_SUITES[suite](rank, bounds)


def cmd_psu3(suite: str, bounds: Bounds = Bounds()) -> SuiteReport:
    return PSU3_SUITES[suite](bounds)


def cmd_snf(path: str) -> SuiteReport:
    with open(path) as fh:
        A = IntMatrix.parse_text(fh.read())
    U, S, V = smith_normal_form(A)
    report = SuiteReport("snf", {"path": path, "rows": A.rows, "cols": A.cols})
    report.add("snf", (U @ A) @ V == S, {"U": U.tolist(), "S": S.tolist(), "V": V.tolist()})
    report.add("cokernel", None, str(cokernel_invariants(A)))
    return report


def run(args: argparse.Namespace) -> SuiteReport:
    if args.command == "snf":
        return cmd_snf(args.path)
    if args.command == "su":
        default_degree = 6 if args.suite == "tor" else Bounds.max_degree
        degree = default_degree if args.max_degree is None else args.max_degree
        bounds = Bounds(box=args.box, max_degree=degree, jobs=args.jobs)
        return cmd_su(args.rank, args.suite, bounds)
    bounds = Bounds(box=args.box, max_degree=args.max_degree, jobs=args.jobs)
    return cmd_psu3(args.suite, bounds)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(args)
    except (OSError, ValueError) as exc:
        print(f"repdiff: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.to_json() if args.format == "json" else report.to_text())
    return 0 if report.verdict == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
