"""``divcurl`` command line: run, scan, check-identities.

Exit status: 0 success, 1 usage error, 2 identity (or hypothesis) violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .commutators import (IdentityViolation, SymbolFunction, check_decomposition_1p,
                          check_decomposition_2p, check_pairing_identity)
from .fileio import collect_matrix, collect_vector, load_fields
from .harness import ExperimentConfig, report_json, run_experiment, scaling_scan
from .leray import HypothesisError

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

_CONFIG_FLAGS = ("experiment", "n", "m", "nx", "ny", "p", "trials", "seed", "alpha",
                 "degree", "family_size", "workers")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with ExperimentConfig fields")
    p.add_argument("--experiment", help="E1..E6 (or the long names, e.g. E2_product_matrix)")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--degree", type=int, help="form degree k for E4")
    p.add_argument("--bidegree", help="r,s for E5")
    p.add_argument("--family-size", dest="family_size", type=int)
    p.add_argument("--workers", type=int)


def _config_from_args(args) -> ExperimentConfig:
    values = {}
    if args.config:
        with open(args.config) as fh:
            values.update(json.load(fh))
    for name in _CONFIG_FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    if getattr(args, "bidegree", None):
        values["bidegree"] = tuple(int(t) for t in args.bidegree.split(","))
    if getattr(args, "out", None):
        values["out"] = args.out
    return ExperimentConfig.from_json(values)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="divcurl", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run one experiment and write a JSON report")
    _add_config_args(run)
    run.add_argument("--out", help="report path (stdout if omitted)")

    scan = sub.add_parser("scan", help="max ratio across grid extents")
    _add_config_args(scan)
    scan.add_argument("--extents", required=True, help="comma-separated, ascending")
    scan.add_argument("--out")

    chk = sub.add_parser("check-identities", help="run the identity checkers on a field file")
    chk.add_argument("--fields", required=True)
    chk.add_argument("--out")
    return parser


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def check_identities_file(path) -> dict:
    """Identity residuals for the fields stored in ``path``.

    Recognized labels: ``E_j``/``B_j`` (one parameter) or ``E_jk``/``B_jk``
    (matrix fields), ``phi`` and optionally ``b``.
    """
    grid, comps = load_fields(path)
    phi = comps.get("phi")
    b = comps.get("b")
    if phi is None:
        raise ValueError("field file needs a 'phi' component")
    result: dict = {"grid": grid.to_json()}
    if grid.two_parameter:
        E, B = collect_matrix(comps, "E"), collect_matrix(comps, "B")
        if E is None or B is None:
            raise ValueError("two-parameter files need E_jk and B_jk components")
        result["decomposition"] = check_decomposition_2p(E, B, phi)
    else:
        E, B = collect_vector(comps, "E"), collect_vector(comps, "B")
        if E is None or B is None:
            raise ValueError("one-parameter files need E_j and B_j components")
        result["decomposition"] = {"main": check_decomposition_1p(E, B, phi)}
    if b is not None:
        result["pairing"] = check_pairing_identity(E, B, phi, SymbolFunction.normalized(b))
    worst = max(list(result["decomposition"].values()) + [result.get("pairing", 0.0)])
    result["max_residual"] = worst
    return result


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "check-identities":
            result = check_identities_file(args.fields)
            _emit(json.dumps(result, indent=2), args.out)
            if result["max_residual"] > 1e-8:
                print(f"identity violated: max residual {result['max_residual']:.3e}",
                      file=sys.stderr)
                return EXIT_VIOLATION
            return EXIT_OK
        config = _config_from_args(args)
        if args.command == "run":
            report = run_experiment(config)
            if not config.out:
                print(report_json(report))
            return EXIT_OK
        extents = [int(t) for t in args.extents.split(",")]
        table = scaling_scan(config, extents)
        _emit(json.dumps(table, indent=2), args.out)
        return EXIT_OK
    except (IdentityViolation, HypothesisError) as exc:
        print(f"divcurl: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValueError, TypeError, OSError, KeyError) as exc:
        print(f"divcurl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
