"""``etfkit`` command-line front end.

Every run prints exactly one JSON document on stdout; short human summaries
go to stderr.  Exit codes: 0 pass, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import serialization as ser
from .designs.steiner import plane
from .errors import (
    EtfkitError,
    GerzonSaturated,
    GerzonViolation,
    NotEtf,
    NotUntf,
)
from .frames import Frame, gram, naimark_complement, simplex_etf, steiner_etf, verify_frame
from .hadamard import hadamard
from .pert import etf_gap, overlap_inequality_check, sos_witness, verify_e4_membership
from .sparsity import FAMILIES, bound_report, table1

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# errors that mean "the input does not satisfy a required inequality/structure"
FAILURE_ERRORS = (GerzonSaturated, GerzonViolation, NotEtf, NotUntf)

# schema (see etfkit/schemas) that each subcommand's stdout document follows
OUTPUT_SCHEMAS = {
    "construct": "construct",
    "verify": "frame_report",
    "pert": "pert_check",
    "witness": "witness",
    "witness verify": "membership_report",
    "spark": "bound_report",
    "table1": "table1",
}

TABLE1_COLUMNS = [
    "family", "q", "N", "r", "gershgorin", "nerf", "ours",
    "table_gershgorin", "table_nerf", "table_ours",
    "match_gershgorin", "match_nerf", "match_ours",
]


@dataclass
class RunConfig:
    command: str
    args: dict = field(default_factory=dict)
    seed: int = 0
    tol: float | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="etfkit", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    p.add_argument("--tol", type=float, default=None, help="entrywise tolerance (overrides ETFKIT_TOL)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    con = sub.add_parser("construct", help="build a frame")
    csub = con.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    st = csub.add_parser("steiner")
    st.add_argument("--plane", choices=["affine", "projective"], required=True)
    st.add_argument("--q", type=int, required=True)
    st.add_argument("--hadamard", choices=["real", "dft"], default="dft")
    st.add_argument("--out")
    sx = csub.add_parser("simplex")
    sx.add_argument("--r", type=int, required=True)
    sx.add_argument("--out")
    nm = csub.add_parser("naimark")
    nm.add_argument("--in", dest="infile", required=True)
    nm.add_argument("--out")

    ver = sub.add_parser("verify", help="UNTF/ETF report for a frame")
    ver.add_argument("--in", dest="infile", required=True)

    pert = sub.add_parser("pert", help="perturbation-space inequalities")
    psub = pert.add_subparsers(dest="action", required=True, parser_class=_Parser)
    pc = psub.add_parser("check")
    pc.add_argument("--in", dest="infile", required=True)

    wit = sub.add_parser("witness", help="build or verify a degree-4 moment witness")
    wit.add_argument("action", nargs="?", choices=["verify"])
    wit.add_argument("--in", dest="infile")
    wit.add_argument("--out")
    wit.add_argument("--y", dest="yfile")
    wit.add_argument("--frame")

    sp = sub.add_parser("spark", help="spark bounds and exact spark")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--cap", type=int)

    tb = sub.add_parser("table1", help="spark-bound comparison for four ETF families")
    tb.add_argument("--q", default="2,3,5,11", help="comma-separated prime powers")
    tb.add_argument("--out")
    return p


def _emit(doc) -> None:
    sys.stdout.write(ser.dumps(ser.to_jsonable(doc)))


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write_frame_or_emit(f: Frame, out: str | None, extra: dict) -> int:
    if out is None:
        _emit(ser.frame_to_json(f))
    else:
        ser.save_frame(f, out)
        _emit({"kind": "construct", "N": f.N, "r": f.r, "real": f.real, "out": out, **extra})
    _note(f"frame: N={f.N}, r={f.r}, real={f.real}")
    return EXIT_OK


def cmd_construct(a) -> int:
    if a.kind == "simplex":
        return _write_frame_or_emit(simplex_etf(a.r), a.out, {"construction": "simplex"})
    if a.kind == "naimark":
        return _write_frame_or_emit(naimark_complement(ser.load_frame(a.infile)), a.out,
                                    {"construction": "naimark"})
    sysm = plane(a.plane, a.q)
    H = hadamard(sysm.rho + 1, a.hadamard)
    if H is None:
        raise EtfkitError(f"no real Hadamard matrix of order {sysm.rho + 1} is available")
    f = steiner_etf(sysm, H)
    return _write_frame_or_emit(f, a.out, {"construction": f"steiner-{a.plane}-{a.hadamard}"})


def cmd_verify(a) -> int:
    rep = verify_frame(ser.load_frame(a.infile))
    _emit(rep.to_dict())
    ok = rep.is_untf and (rep.welch_equality or not rep.is_etf)
    _note(f"untf={rep.is_untf} etf={rep.is_etf} coherence={rep.coherence:.12g} welch={rep.welch:.12g}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_pert(a) -> int:
    f = ser.load_frame(a.infile)
    ov = overlap_inequality_check(f)
    doc = {"N": f.N, "r": f.r, "overlap": ov.to_dict(), "gap": None}
    ok = ov.passed
    if verify_frame(f).is_etf:
        gap = etf_gap(f)
        doc["gap"] = gap.to_dict()
        ok = ok and gap.passed
    doc["passed"] = ok
    _emit(doc)
    _note(f"overlap forms: {ov.min_eig_form1:.3e}, {ov.min_eig_form2:.3e}; passed={ok}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_witness(a, parser) -> int:
    if a.action == "verify":
        if not (a.yfile and a.frame):
            parser.error("witness verify needs --y and --frame")
        f = ser.load_frame(a.frame)
        Y = ser.matrix_from_json(ser.load_json(a.yfile))
        if np.max(np.abs(Y.imag), initial=0.0) != 0:
            raise ser.ParseError("witness matrix must be real")
        rep = verify_e4_membership(Y.real, gram(f))
        _emit(rep.to_dict())
        _note(f"membership passed={rep.passed}")
        return EXIT_OK if rep.passed else EXIT_FAIL
    if not a.infile:
        parser.error("witness needs --in")
    f = ser.load_frame(a.infile)
    Y = sos_witness(f)
    rep = verify_e4_membership(Y, gram(f))
    if a.out:
        ser.atomic_write(a.out, ser.dumps(ser.matrix_to_json(Y)))
    _emit({"N": f.N, "r": f.r, "size": Y.shape[0], "out": a.out, "membership": rep.to_dict()})
    _note(f"witness {Y.shape[0]}x{Y.shape[0]}, membership passed={rep.passed}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_spark(a) -> int:
    rep = bound_report(ser.load_frame(a.infile), exact=a.exact, cap=a.cap)
    _emit(rep.to_dict())
    _note(f"spark={rep.spark_exact} cospark={rep.cospark_exact} valid={rep.valid}")
    return EXIT_OK if all(rep.valid.values()) else EXIT_FAIL


def _parse_qs(text: str, parser) -> list[int]:
    try:
        qs = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        parser.error(f"--q expects comma-separated integers, got {text!r}")
    if not qs:
        parser.error("--q is empty")
    return qs


def cmd_table1(a, parser) -> int:
    rows = [row.to_dict() for q in _parse_qs(a.q, parser) for row in table1(q)]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE1_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    if a.out:
        ser.atomic_write(a.out, buf.getvalue())
    else:
        sys.stderr.write(buf.getvalue())
    _emit({"families": list(FAMILIES), "out": a.out, "rows": rows})
    return EXIT_OK


def config_from_args(a) -> RunConfig:
    skip = {"command", "seed", "tol"}
    return RunConfig(command=a.command, args={k: v for k, v in vars(a).items() if k not in skip},
                     seed=a.seed, tol=a.tol)


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    cfg = config_from_args(a)
    saved_tol = os.environ.get("ETFKIT_TOL")
    if cfg.tol is not None:
        if not cfg.tol > 0:
            _note("etfkit: error: --tol must be positive")
            return EXIT_USAGE
        os.environ["ETFKIT_TOL"] = repr(cfg.tol)
    try:
        return _run(a, parser)
    finally:
        if saved_tol is None:
            os.environ.pop("ETFKIT_TOL", None)
        else:
            os.environ["ETFKIT_TOL"] = saved_tol


def _run(a, parser) -> int:
    try:
        if a.command == "construct":
            return cmd_construct(a)
        if a.command == "verify":
            return cmd_verify(a)
        if a.command == "pert":
            return cmd_pert(a)
        if a.command == "witness":
            return cmd_witness(a, parser)
        if a.command == "spark":
            return cmd_spark(a)
        return cmd_table1(a, parser)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except FAILURE_ERRORS as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        _note(f"etfkit: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    except (EtfkitError, OSError, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        _note(f"etfkit: {type(exc).__name__}: {exc}")
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
