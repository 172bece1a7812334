"""Command-line front end: ``python3 -m fadingcap <command> [options]``.

Exit codes: 0 success, 1 validation failure, 2 argument or domain error.
Output goes to ``--out``, else to ``$FADINGCAP_OUTPUT_DIR/<command>.<format>``,
else to stdout. Every file starts with the fully resolved configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import tables
from .capacity import OPRA, ORA, capacity_report
from .corrections import format_corrections, parse_corrections
from .entropy import cross_entropy_report, entropy_report, matched_reference
from .errors import FadingError
from .models import AlphaEtaMuParams, AlphaLambdaMuParams, cdf_snr, db_to_linear, pdf_snr, sample, to_eta_model
from .numeric import DEFAULT_REL_TOL
from .tables import FIELDS, Record, _cell, _record

OUTPUT_DIR_ENV = "FADINGCAP_OUTPUT_DIR"
EXIT_OK, EXIT_VALIDATION, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")
    parser.add_argument("--out", help="output file; defaults to $%s/<command>.<format> or stdout" % OUTPUT_DIR_ENV)
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def _corrections(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corrections", default="none",
                        help="'none' (formulas as printed), 'all', or a comma list of correction names")


def _model(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, required=True, help="non-linearity parameter alpha > 0")
    shape = parser.add_mutually_exclusive_group(required=True)
    shape.add_argument("--eta", type=float, help="alpha-eta-mu power ratio eta > 0")
    shape.add_argument("--lambda", dest="lam", type=float, help="alpha-lambda-mu correlation, |lambda| < 1")
    parser.add_argument("--mu", type=float, required=True, help="clustering parameter mu > 0")
    parser.add_argument("--snr-db", type=float, required=True, help="mean SNR in dB")
    parser.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL, help="quadrature relative tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fadingcap",
                     description="Entropy and capacity of alpha-eta-mu and alpha-lambda-mu fading channels.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pdf", help="SNR density and CDF at given points")
    _model(p)
    p.add_argument("--gamma", type=float, nargs="+", required=True, help="linear SNR points (> 0)")
    _common(p)

    p = sub.add_parser("entropy", help="Shannon, cross and relative entropy in bits")
    _model(p)
    p.add_argument("--ref-eta", type=float, help="eta of the eta-mu reference (default: same shape as the model)")
    p.add_argument("--ref-snr-db", type=float, help="mean SNR of the reference in dB (default: the model's)")
    _corrections(p)
    _common(p)

    p = sub.add_parser("capacity", help="ORA or OPRA capacity per unit bandwidth")
    _model(p)
    p.add_argument("--policy", choices=("ora", "opra"), default="ora")
    p.add_argument("--gamma0", type=float, help="OPRA cutoff SNR (default: solve the power constraint)")
    _corrections(p)
    _common(p)

    p = sub.add_parser("sample", help="draw SNR variates from the physical model")
    _model(p)
    p.add_argument("--n", type=int, default=1000, help="number of draws")
    _common(p)

    for name, text in (("table1", "entropy table at 15 dB"), ("table2", "ORA capacity table")):
        p = sub.add_parser(name, help=f"reproduce the {text}")
        _corrections(p)
        _common(p)

    p = sub.add_parser("fig1", help="OPRA capacity curves (CSV/JSON data and a PNG)")
    p.add_argument("--no-plot", action="store_true", help="skip the PNG")
    _common(p)

    p = sub.add_parser("validate", help="run the invariant grid; exit 1 on any failure")
    p.add_argument("--tolerance", type=float,
                   help="override for the relative-tolerance checks (distribution, special functions, capacity)")
    p.add_argument("--quick", action="store_true", help="smaller capacity grid and 2e4 KS samples")
    _common(p)
    return parser


def _model_from(args):
    gb = db_to_linear(args.snr_db)
    if args.lam is not None:
        return AlphaLambdaMuParams(args.alpha, args.lam, args.mu, gb)
    return AlphaEtaMuParams(args.alpha, args.eta, args.mu, gb)


def _config(args) -> dict:
    cfg = {"command": args.command, "version": _version()}
    if hasattr(args, "alpha"):
        cfg["model"] = "alpha-lambda-mu" if args.lam is not None else "alpha-eta-mu"
        cfg["alpha"] = args.alpha
        cfg["lambda" if args.lam is not None else "eta"] = args.lam if args.lam is not None else args.eta
        cfg["mu"] = args.mu
        cfg["snr_db"] = args.snr_db
        cfg["mean_snr"] = db_to_linear(args.snr_db)
        cfg["rel_tol"] = args.rel_tol
    for key in ("gamma", "policy", "gamma0", "ref_eta", "ref_snr_db", "n", "no_plot", "tolerance", "quick"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    if hasattr(args, "corrections"):
        cfg["corrections"] = format_corrections(parse_corrections(args.corrections))
    cfg["format"] = args.format
    cfg["seed"] = args.seed
    return cfg


def render(records: Sequence[Record], config: dict, fmt: str) -> str:
    if fmt == "json":
        payload = {"config": config, "records": [r.as_dict() for r in records]}
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    for key, value in config.items():
        buf.write(f"# {key}={json.dumps(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in records:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in
                         (getattr(r, f) for f in FIELDS)])
    return buf.getvalue()


def _destination(args) -> Optional[Path]:
    if args.out:
        return Path(args.out)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / f"{args.command}.{args.format}"
    return None


def _emit(text: str, dest: Optional[Path]) -> None:
    if dest is None:
        sys.stdout.write(text)
        return
    dest.parent.mkdir(parents=True, exist_ok=True)
    with open(dest, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _cmd_pdf(args) -> list[Record]:
    model = _model_from(args)
    g = np.asarray(args.gamma, dtype=float)
    dens = np.atleast_1d(pdf_snr(model, g))
    cdf = [cdf_snr(model, float(x), args.rel_tol) for x in g]
    out = []
    for x, d, c in zip(g.tolist(), dens, cdf):
        out.append(_record(model, args.snr_db, f"pdf(gamma={x!r})", "closed", d))
        out.append(_record(model, args.snr_db, f"cdf(gamma={x!r})", "oracle", c, None, args.rel_tol))
    return out


def _cmd_entropy(args) -> list[Record]:
    model = _model_from(args)
    corrections = parse_corrections(args.corrections)
    reference = matched_reference(model)
    if args.ref_eta is not None or args.ref_snr_db is not None:
        ref_eta = args.ref_eta if args.ref_eta is not None else to_eta_model(model).eta
        ref_gb = db_to_linear(args.ref_snr_db) if args.ref_snr_db is not None else model.mean_snr
        reference = AlphaEtaMuParams(2.0, ref_eta, 1.0, ref_gb)
    h = entropy_report(model, corrections, args.rel_tol)
    hx = cross_entropy_report(model, reference, corrections, args.rel_tol)
    hx_closed = hx.closed_form if hx.closed_method == "closed" else None
    d_closed = None if h.closed_form is None or hx_closed is None else hx_closed - h.closed_form
    tol = tables.ENTROPY_ORACLE_TOL
    out = _cell(model, args.snr_db, "H(p)", h.closed_form, h.oracle, None, None, tol)
    out += _cell(model, args.snr_db, "H(p,q)", hx_closed, hx.oracle, None, None, tol)
    out += _cell(model, args.snr_db, "D(p||q)", d_closed, hx.oracle - h.oracle, None, None, tol)
    if hx.closed_method == "oracle-rerouted":
        print("note: the uncorrected cross-entropy closed form is singular at alpha = 2; oracle only",
              file=sys.stderr)
    return out


def _cmd_capacity(args) -> list[Record]:
    model = _model_from(args)
    policy = ORA if args.policy == "ora" else OPRA
    rep = capacity_report(model, policy, parse_corrections(args.corrections), args.rel_tol, args.gamma0)
    quantity = f"C_{policy}/B"
    out = []
    if rep.gamma0 is not None:
        out.append(_record(model, args.snr_db, "gamma0", "oracle", rep.gamma0))
    if rep.closed_form is not None:
        out.append(_record(model, args.snr_db, quantity, "closed", rep.closed_form, None, tables.CAPACITY_REL_TOL))
    out.append(_record(model, args.snr_db, quantity, "oracle", rep.oracle, None, args.rel_tol))
    if rep.closed_form is not None:
        out.append(_record(model, args.snr_db, quantity, "discrepancy", rep.discrepancy, None,
                           tables.CAPACITY_REL_TOL))
    if rep.note:
        print(f"note: closed form unavailable: {rep.note}", file=sys.stderr)
    return out


def _cmd_sample(args) -> list[Record]:
    model = _model_from(args)
    draws = sample(model, args.n, args.seed)
    return [_record(model, args.snr_db, "gamma", "mc", x) for x in draws]


def _cmd_validate(args) -> tuple[list[Record], bool]:
    from .validate import run_validation

    checks = run_validation(args.tolerance, args.quick, args.seed)
    out = []
    for c in checks:
        m = c.model
        snr_db = 10 * math.log10(m.mean_snr) if m is not None else None
        name = tables.model_name(m) if m is not None else ""
        out.append(Record(name, None if m is None else float(m.alpha),
                          None if m is None else float(tables.shape_of(m)), None if m is None else float(m.mu),
                          snr_db, f"{c.group}: {c.name}", "pass" if c.passed else "fail",
                          None if math.isnan(c.metric) else c.metric, None,
                          None if math.isnan(c.tol) else c.tol))
    passed = sum(c.passed for c in checks)
    print(f"validate: {passed}/{len(checks)} checks passed", file=sys.stderr)
    for c in checks:
        if not c.passed:
            tag = c.model.tag if c.model is not None else "-"
            print(f"FAIL {c.group}: {c.name} metric={c.metric!r} tol={c.tol!r} {tag}", file=sys.stderr)
    return out, passed == len(checks)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        ok = True
        if args.command == "pdf":
            records = _cmd_pdf(args)
        elif args.command == "entropy":
            records = _cmd_entropy(args)
        elif args.command == "capacity":
            records = _cmd_capacity(args)
        elif args.command == "sample":
            records = _cmd_sample(args)
        elif args.command == "table1":
            records = tables.table1_records(parse_corrections(args.corrections))
        elif args.command == "table2":
            records = tables.table2_records(parse_corrections(args.corrections))
        elif args.command == "fig1":
            records = tables.fig1_records()
        else:
            records, ok = _cmd_validate(args)
    except FadingError as exc:
        print(f"fadingcap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    dest = _destination(args)
    _emit(render(records, config, args.format), dest)
    if args.command == "fig1" and not args.no_plot:
        if dest is None:
            print("note: no PNG written when output goes to stdout; use --out", file=sys.stderr)
        else:
            from .plotting import plot_opra_curves

            plot_opra_curves(records, dest.with_suffix(".png"))
    return EXIT_OK if ok else EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
