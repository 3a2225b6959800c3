"""Command-line front end.

Exit codes: 0 success, 1 acceptance or oracle check failure, 2 usage or malformed input,
3 mathematical errors raised by the library.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from ._accel import BACKEND, set_threads
from .acceptance import run_all
from .bases import CATALOG, catalog, matrix_from_dict, matrix_to_dict, stats
from .coinc import hierarchy, is_coinc, uncertainty_diagram
from .errors import FormatError, KDCoincError, ValidationError
from .kd import (is_kd_classical, kd_distribution, state_from_dict,
                 support_profile, witness)
from .linalg import Tolerance, enumerate_minors
from .oracle import diagram_by_sampling
from .perturb import coincify, near_mub_coinc


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def _write(text: str, path: str = None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _complex_grid(A) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(A)]


def _parse_complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(parts[0], parts[1])


def _tol(args) -> Tolerance:
    try:
        return Tolerance(zero_abs=args.tol_zero, rank_rel=args.tol_rank)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None


def _load_matrix(args):
    return matrix_from_dict(_read_json(args.matrix), _tol(args))


# --- subcommands -----------------------------------------------------------

def cmd_gen(args) -> int:
    if args.name == "dft" and args.d is None:
        raise UsageError("gen dft needs --d")
    T = catalog(args.name, d=args.d, s=args.s, tol=_tol(args))
    _write(json.dumps(matrix_to_dict(T)) + "\n", args.out)
    return 0


def cmd_coinc(args) -> int:
    T = _load_matrix(args)
    rep = enumerate_minors(T.U, T.tol)
    coinc = rep.n_vanishing == 0
    if args.json:
        _write(_dump({"coinc": coinc, "minors": rep.to_dict()}))
        return 0
    lines = [f"COINC: {'true' if coinc else 'false'}"]
    for k in range(1, T.d + 1):
        lines.append(f"  k={k}: {rep.vanishing[k - 1]}/{rep.total(k)} vanishing, "
                     f"min |minor| = {rep.min_modulus[k - 1]:.3e}")
    if rep.first_vanishing is not None:
        r, c = rep.first_vanishing
        lines.append(f"  first vanishing minor: rows {[i + 1 for i in r]} cols {[j + 1 for j in c]}")
    _write("\n".join(lines) + "\n")
    return 0


def cmd_hierarchy(args) -> int:
    T = _load_matrix(args)
    rep = hierarchy(T)
    if args.json:
        _write(_dump(rep.to_dict()))
        return 0
    yn = lambda b: "yes" if b else "no"  # noqa: E731
    lines = [
        f"(i)   COINC:                          {yn(rep.coinc)}",
        f"(ii)  no commuting projector pair:    {yn(rep.all_projectors_noncommute)}",
        f"(iii) m_ab > 0:                       {yn(rep.m_positive)}",
        f"(iv)  M_ab < 1:                       {yn(rep.M_below_one)}",
    ]
    if rep.first_commuting_pair is not None:
        S, Tb = rep.first_commuting_pair
        lines.append(f"commuting pair: S={[i + 1 for i in S]} T={[j + 1 for j in Tb]}")
    _write("\n".join(lines) + "\n")
    return 0


def cmd_diagram(args) -> int:
    T = _load_matrix(args)
    diag = uncertainty_diagram(T)
    out = diag.to_dict()
    agree = None
    if args.oracle:
        sampled = diagram_by_sampling(T, samples_per_cell=args.samples, seed=args.seed)
        agree = sampled.members() == diag.members() and np.array_equal(sampled.max_dim, diag.max_dim)
        out["oracle"] = {"samples_per_cell": args.samples, "seed": args.seed, "agrees": agree}
    if args.csv:
        _write(diag.to_csv(), args.csv)
    if args.json:
        _write(_dump(out))
    elif args.csv != "-":
        lines = [f"d={diag.d} n_min={diag.n_min} lower edge={list(diag.lower_edge)}"]
        for nb in range(diag.d, 0, -1):
            row = "".join("#" if diag.member[na - 1, nb - 1] else "." for na in range(1, diag.d + 1))
            lines.append(f"{nb:3d} {row}")
        if agree is not None:
            lines.append(f"oracle agrees: {'true' if agree else 'false'}")
        _write("\n".join(lines) + "\n")
    return 0 if agree is not False else 1


def cmd_kd(args) -> int:
    T = _load_matrix(args)
    psi = state_from_dict(_read_json(args.state), normalize=args.normalize)
    q = kd_distribution(T, psi)
    prof = support_profile(T, psi)
    verdict = witness(T, psi)
    classical = is_kd_classical(T, psi)
    out = {
        "Q": _complex_grid(q.Q),
        "row_sums": [float(x.real) for x in q.row_sums],
        "col_sums": [float(x.real) for x in q.col_sums],
        "total": [q.total.real, q.total.imag],
        "kd_classical": classical,
        "min_real": q.min_real,
        "max_abs_imag": q.max_abs_imag,
        "support": {"S": [i + 1 for i in prof.S], "T": [j + 1 for j in prof.T],
                    "n_a": prof.n_a, "n_b": prof.n_b, "n_ab": prof.n_ab},
        "witness": {"outcome": verdict.outcome, "rule": verdict.rule, "details": verdict.details},
    }
    if args.json:
        _write(_dump(out))
        return 0
    lines = ["Q ="]
    for row in q.Q:
        lines.append("  " + "  ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in row))
    lines += [
        f"row sums: {np.round(q.row_sums.real, 9).tolist()}",
        f"col sums: {np.round(q.col_sums.real, 9).tolist()}",
        f"KD classical: {'true' if classical else 'false'}",
        f"support: n_a={prof.n_a} n_b={prof.n_b} n_ab={prof.n_ab}",
        f"witness: {verdict.outcome}" + (f" ({verdict.rule})" if verdict.rule else ""),
    ]
    _write("\n".join(lines) + "\n")
    return 0


def cmd_perturb(args) -> int:
    T = _load_matrix(args)
    if args.target_mub:
        if args.delta is None:
            raise UsageError("--target-mub needs --delta")
        out, trace = near_mub_coinc(T.d, args.delta, tol=T.tol, with_trace=True)
    else:
        if args.eps is None:
            raise UsageError("perturb needs --eps")
        out, trace = coincify(T, args.eps)
    doc = {"matrix": matrix_to_dict(out), "trace": trace.to_dict(),
           "coinc": is_coinc(out), "m_ab": stats(out).m_ab}
    text = json.dumps(doc, sort_keys=True) + "\n"
    _write(text, args.out)
    if args.out and not args.json:
        print(f"wrote {args.out}: {len(trace.rounds)} rounds, deviation {trace.total_deviation:.3e}")
    return 0


def cmd_verify(args) -> int:
    results = []
    for c in run_all(quick=args.quick):
        results.append(c)
        if not args.json:
            print(c.line(), flush=True)
    failed = [c.number for c in results if not c.passed]
    if args.json:
        _write(_dump({"quick": args.quick, "failed": failed,
                      "criteria": [{"number": c.number, "name": c.name, "passed": c.passed,
                                    "detail": c.detail} for c in results]}))
    else:
        print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


# --- parser ----------------------------------------------------------------

def _global_options(parser, suppress: bool):
    # subparsers repeat the globals with suppressed defaults so flags may go before or after
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = parser.add_argument_group("global options")
    g.add_argument("--tol-zero", type=float, default=dflt(1e-9), help="absolute zero threshold")
    g.add_argument("--tol-rank", type=float, default=dflt(1e-10), help="relative rank threshold")
    g.add_argument("--json", action="store_true", default=dflt(False), help="machine-readable output")
    g.add_argument("--threads", type=int, default=dflt(None), help="worker threads for kernels")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kdcoinc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        _global_options(sp, suppress=True)
        sp.set_defaults(func=func)
        return sp

    sp = add("gen", cmd_gen, "emit a catalog matrix as JSON")
    sp.add_argument("name", choices=CATALOG)
    sp.add_argument("--d", type=int, help="dimension (dft only)")
    sp.add_argument("--s", type=_parse_complex, default=1.0, help="mub4 phase as RE,IM")
    sp.add_argument("--out", help="output file (default stdout)")

    sp = add("coinc", cmd_coinc, "COINC verdict and minor report")
    sp.add_argument("matrix", help="matrix JSON file or - for stdin")

    sp = add("hierarchy", cmd_hierarchy, "incompatibility hierarchy report")
    sp.add_argument("matrix")

    sp = add("diagram", cmd_diagram, "exact support uncertainty diagram")
    sp.add_argument("matrix")
    sp.add_argument("--csv", help="write the diagram CSV here (- for stdout)")
    sp.add_argument("--oracle", action="store_true", help="cross-check by random sampling")
    sp.add_argument("--samples", type=int, default=20, help="oracle samples per cell")
    sp.add_argument("--seed", type=int, default=0, help="oracle seed")

    sp = add("kd", cmd_kd, "KD distribution, support profile and witness verdict")
    sp.add_argument("matrix")
    sp.add_argument("state")
    sp.add_argument("--normalize", action="store_true", help="normalize the state first")

    sp = add("perturb", cmd_perturb, "deform a matrix into a nearby COINC one")
    sp.add_argument("matrix")
    sp.add_argument("--eps", type=float, help="step size for the rotations")
    sp.add_argument("--target-mub", action="store_true", help="build a COINC matrix near a MUB")
    sp.add_argument("--delta", type=float, help="allowed drop of m_ab below 1/sqrt(d)")
    sp.add_argument("--out", help="output file (default stdout)")

    sp = add("verify", cmd_verify, "run the acceptance suite")
    sp.add_argument("--quick", action="store_true", help="smaller random samples")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.threads is not None:
            set_threads(args.threads)
        return args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"kdcoinc: error: {exc}", file=sys.stderr)
        return 2
    except KDCoincError as exc:
        print(f"kdcoinc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
