"""Command-line front door: spectra, solving, evolution, disorder, service.

Subcommands emit JSON/CSV that the other subcommands accept unchanged, so
designs can be piped:

    chainforge spectrum --family linear --n 31 --a 7 --shift 6 |
        chainforge solve | chainforge evolve --tmax 3.1416 --points 1000

Exit codes: 0 success, 1 validation error, 2 numerical failure, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .disorder import DisorderConfig, default_workers, run_experiment
from .dynamics import effective_model, eigendecompose, overlap_trace
from .errors import EigensolverError, InvalidSpectrumError, SolverOverflowError
from .solver import ChainCouplings, forward_eigenvalues, solve
from .spectra import (
    Spectrum,
    generate_cosine,
    generate_inverted_quadratic,
    generate_linear,
    shift_spectrum,
    verify_pst,
)

__all__ = ["main"]

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    """argparse that exits 64 on usage problems (unknown flags, bad counts)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit_json(payload: dict, path: str | None, no_meta: bool) -> None:
    if not no_meta:
        payload = {**payload, "meta": {"generated_at": datetime.now(timezone.utc).isoformat()}}
    _write_text(json.dumps(payload, indent=2) + "\n", path)


def _load_chain(path: str) -> ChainCouplings:
    return ChainCouplings.from_dict(json.loads(_read_text(path)))


def _cmd_spectrum(args) -> int:
    if args.family == "linear":
        if args.a is None:
            raise InvalidSpectrumError("linear family needs --a (odd positive integer)")
        s = generate_linear(args.n, args.a)
    elif args.family == "inverted_quadratic":
        s = generate_inverted_quadratic(args.n)
    else:
        s = generate_cosine(args.n)
    if args.shift is not None:
        s = shift_spectrum(s, args.shift)
    _emit_json(s.to_dict(), args.output, args.no_meta)
    return 0


def _cmd_solve(args) -> int:
    s = Spectrum.from_dict(json.loads(_read_text(args.spectrum)))
    c = solve(s)
    _emit_json(c.to_dict(), args.output, args.no_meta)
    if args.csv:
        _write_text(c.to_csv(), args.csv)
    return 0


def _cmd_evolve(args) -> int:
    c = _load_chain(args.chain)
    es = eigendecompose(c)
    grid = np.linspace(args.tmin, args.tmax, args.points)
    trace = overlap_trace(es, grid)
    lines = ["t,f"] + [f"{float(t)!r},{float(f)!r}" for t, f in zip(grid, trace)]
    _write_text("\n".join(lines) + "\n", args.output)
    return 0


def _default_tau(c: ChainCouplings) -> float:
    s = forward_eigenvalues(c)
    if verify_pst(s, math.pi).is_pst:
        return math.pi
    raise ValueError(
        "chain spectrum is not PST at tau = pi; pass --tau explicitly "
        "(use the design time of the unperturbed chain)"
    )


def _cmd_disorder(args) -> int:
    c = _load_chain(args.chain)
    tau = args.tau if args.tau is not None else _default_tau(c)
    cfg = DisorderConfig(r=args.r, samples=args.samples, seed=args.seed, tau=tau)
    report = run_experiment(c, cfg, bins=args.bins, workers=default_workers())
    payload = {"config": cfg.to_dict(), **report.to_dict()}
    if args.output and args.output != "-":
        _emit_json(payload, args.output, args.no_meta)
        # one-line fit summary on stdout for scripting
        summary = {
            "mean": report.mean,
            "fit": report.fit.to_dict() if report.fit else None,
            "samples": cfg.samples,
        }
        sys.stdout.write(json.dumps(summary) + "\n")
    else:
        _emit_json(payload, None, args.no_meta)
    if args.hist_csv:
        _write_text(report.histogram.to_csv(), args.hist_csv)
    if args.overlaps_csv:
        _write_text(report.overlaps_csv(), args.overlaps_csv)
    return 0


def _cmd_effective(args) -> int:
    c = _load_chain(args.chain)
    model = effective_model(c)
    _emit_json(model.to_dict(), args.output, args.no_meta)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="chainforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
        p.add_argument("--no-meta", action="store_true", help="omit the timestamp meta block")

    p = sub.add_parser("spectrum", help="generate a named-family spectrum, optionally shifted")
    p.add_argument("--family", required=True, choices=["linear", "inverted_quadratic", "cosine"])
    p.add_argument("--n", type=int, required=True, help="chain length N")
    p.add_argument("--a", type=int, default=None, help="linear-spectrum slope A (odd)")
    p.add_argument("--shift", type=float, default=None, help="boundary-state shift C")
    add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("solve", help="couplings from a spectrum JSON")
    p.add_argument("--spectrum", default="-", help="spectrum JSON path or - for stdin")
    p.add_argument("--csv", default=None, help="also write couplings as CSV (index,a,b)")
    add_common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("evolve", help="transfer-overlap trace f(t) as CSV")
    p.add_argument("--chain", default="-", help="couplings JSON path or - for stdin")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_evolve, no_meta=True)

    p = sub.add_parser("disorder", help="Monte Carlo disorder experiment")
    p.add_argument("--chain", default="-", help="couplings JSON path or - for stdin")
    p.add_argument("--r", type=float, required=True, help="disorder level, couplings scaled by U[1-r, 1+r]")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tau", type=float, default=None, help="transfer time (default pi when the chain is PST at pi)")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--hist-csv", default=None)
    p.add_argument("--overlaps-csv", default=None)
    add_common(p)
    p.set_defaults(func=_cmd_disorder)

    p = sub.add_parser("effective", help="weak-coupling effective model of a chain")
    p.add_argument("--chain", default="-", help="couplings JSON path or - for stdin")
    add_common(p)
    p.set_defaults(func=_cmd_effective)

    p = sub.add_parser("serve", help="run the local HTTP service for the designer UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8756)
    p.add_argument("--static", default=None, help="directory with the designer UI bundle")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SolverOverflowError, EigensolverError) as exc:
        print(f"chainforge: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"chainforge: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
