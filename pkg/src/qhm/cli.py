"""Command-line front end.

    qhm verify [FILE] [--oracle N] [--seed S]
    qhm normal-form [FILE]
    qhm classify [FILE]
    qhm generate hopf N | clifford N | phi-t LAMBDA T | lift FILE  [--out PATH]

FILE defaults to stdin, so commands compose: ``qhm generate hopf 2 | qhm verify``.
Exit codes: 0 success, 1 the map fails the mathematical check (or has the
wrong shape), 2 usage or parse errors.  ``--json`` prints a single-line JSON
object instead of ``key: value`` text.  The default float tolerance can be
overridden with ``--tol`` or the QHM_TOL environment variable.
"""

from __future__ import annotations

import argparse
import sys

from . import classify43, clifford, constructions, spectral, verify
from .core import ParseError, QuadraticMap, to_scalar, tolerance
from .mapfile import format_mapfile, parse_mapfile, report_json, report_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _read_map(path: str) -> QuadraticMap:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_mapfile(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _emit(report: dict, args) -> None:
    print(report_json(report) if args.json else report_text(report))


def _hm_fields(report: verify.HMReport) -> dict:
    return {
        "is_harmonic": report.is_harmonic,
        "is_hwc": report.is_hwc,
        "is_harmonic_morphism": report.is_harmonic_morphism,
        "is_constant": report.is_constant,
        "trace_violations": [list(v) for v in report.trace_violations],
        "anticommute_violations": [list(v) for v in report.anticommute_violations],
        "square_violations": [list(v) for v in report.square_violations],
    }


def cmd_verify(args) -> int:
    qmap = _read_map(args.file)
    hm = verify.check_harmonic_morphism(qmap)
    report = {"command": "verify", "m": qmap.m, "n": qmap.n, "exact": qmap.exact}
    report.update(_hm_fields(hm))
    if args.oracle is not None:
        if args.oracle < 1:
            raise UsageError("--oracle needs a positive sample count")
        report["oracle_samples"] = args.oracle
        report["oracle_seed"] = args.seed
        report["oracle_conformal"] = verify.conformality_oracle(qmap, args.oracle, args.seed)
    _emit(report, args)
    return EXIT_OK if hm.is_harmonic_morphism else EXIT_FAIL


def _failure(command: str, qmap: QuadraticMap, message: str, args) -> int:
    _emit({"command": command, "m": qmap.m, "n": qmap.n, "error": message}, args)
    return EXIT_FAIL


def cmd_normal_form(args) -> int:
    qmap = _read_map(args.file)
    hm = verify.check_harmonic_morphism(qmap)
    if not hm.is_harmonic_morphism:
        return _failure("normal-form", qmap, verify.describe_failure(hm), args)
    nf = spectral.normal_form(qmap)
    spectrum = spectral.spectrum_report(qmap)
    umbilical, positives = spectral.is_umbilical(qmap)
    _emit(
        {
            "command": "normal-form",
            "m": qmap.m,
            "n": qmap.n,
            "exact": nf.exact,
            "q_rank": spectral.q_rank(qmap),
            "k": nf.k,
            "r": nf.r,
            "D": list(nf.D),
            "blocks": [b for b in nf.blocks],
            "P": nf.P,
            "spectra": spectrum.spectra,
            "ranks": spectrum.ranks,
            "rank_is_even": spectrum.rank_is_even,
            "spectra_equal": spectrum.spectra_equal,
            "plus_minus_paired": spectrum.plus_minus_paired,
            "umbilical": umbilical,
            "positive_eigenvalues": list(positives),
            "lambda": positives[0] if umbilical else None,
        },
        args,
    )
    return EXIT_OK


def cmd_classify(args) -> int:
    qmap = _read_map(args.file)
    if (qmap.m, qmap.n) != (4, 3):
        return _failure("classify", qmap, f"expected a map R^4 -> R^3, got R^{qmap.m} -> R^{qmap.n}", args)
    hm = verify.check_harmonic_morphism(qmap)
    if not hm.is_harmonic_morphism:
        return _failure("classify", qmap, verify.describe_failure(hm), args)
    result = classify43.classify(qmap)
    _emit(
        {
            "command": "classify",
            "m": 4,
            "n": 3,
            "lambda": result.lam,
            "t": result.t,
            "P": result.P,
            "G": result.G,
            "orientation_flipped": result.orientation_flipped,
            "residual": result.residual,
        },
        args,
    )
    return EXIT_OK


def _int_param(raw: str, name: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from exc


def _generate(args) -> QuadraticMap:
    params = args.params
    kind = args.kind
    if kind == "hopf":
        if len(params) != 1:
            raise UsageError("usage: generate hopf N")
        try:
            return constructions.hopf_construction(_int_param(params[0], "N"))
        except constructions.UnsupportedDimension as exc:
            raise UsageError(str(exc)) from exc
    if kind == "clifford":
        if len(params) != 1:
            raise UsageError("usage: generate clifford N")
        n = _int_param(params[0], "N")
        if n < 1:
            raise UsageError("clifford N needs N >= 1")
        return clifford.qhm_from_clifford(clifford.irreducible(n))
    if kind == "phi-t":
        if len(params) != 2:
            raise UsageError("usage: generate phi-t LAMBDA T")
        try:
            lam, t = to_scalar(params[0]), to_scalar(params[1])
            return classify43.phi_t(lam, t)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if kind == "lift":
        if len(params) != 1:
            raise UsageError("usage: generate lift FILE")
        qmap = _read_map(params[0])
        return constructions.complete_lift(qmap)
    raise UsageError(f"unknown generator {kind!r}")


def cmd_generate(args) -> int:
    try:
        qmap = _generate(args)
    except verify.NotAHarmonicMorphism as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = format_mapfile(qmap, comment=f"generate {args.kind} {' '.join(args.params)}".rstrip())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="relative float tolerance (default 1e-9 or $QHM_TOL)")
    common.add_argument("--json", action="store_true", help="print a one-line JSON report")

    parser = argparse.ArgumentParser(prog="qhm", description="Quadratic harmonic morphism toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the harmonic-morphism equations")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--oracle", type=int, metavar="N", help="also run the sampling oracle on N points")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("normal-form", parents=[common], help="spectra, Q-rank and block normal form")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("classify", parents=[common], help="classify a map R^4 -> R^3")
    p.add_argument("file", nargs="?", default="-")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", parents=[common], help="write a generated map file")
    p.add_argument("kind", choices=["hopf", "clifford", "phi-t", "lift"])
    p.add_argument("params", nargs="*")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is not None:
            if not args.tol > 0:
                raise UsageError("--tol must be positive")
            with tolerance(args.tol):
                return args.func(args)
        return args.func(args)
    except UsageError as exc:
        print(f"qhm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
