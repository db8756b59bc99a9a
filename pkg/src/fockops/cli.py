"""
Command-line front end.

    fockops classify --space classical --a 0.5 --n 1 --p 2 --q 2
    fockops norm --space focktype --m 1 --p 1 --f-poly 1,1
    fockops matrix --a 1 --b 1 --u-expo 0,-1,0 --N 20 --format csv
    fockops probe --a 0.5 --n 1 --N-list 10,20,40,80
    fockops sweep ratio --m 1 --p 2 --q 2 --k-max 200
    fockops sweep boundary --p-list 1,2 --q-list 2,4 --m-min 0.5 --m-max 2 --m-steps 16
    fockops verify --only norms

Exit codes: 0 when every verdict is decided, 2 when a verdict is
``needs_probe``, 1 on errors (including usage errors and failed verification).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources

import numpy as np

from . import __version__
from .functions import AffineSymbol, ExpPolyFunction, TaylorFunction, function_from_dict
from .norms import FockTypeParams, fock_norm, hu_norm, paley_norm
from .sections import build_matrix, ratio_test, sigma_min, spectral_radius_estimate
from .symbols import OperatorSpec, Verdict, classify_D_focktype, classify_WCD
from .verify import GROUPS, INJECTIONS, run_verify

EXIT_OK, EXIT_ERROR, EXIT_PROBE = 0, 1, 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; here 2 means needs_probe."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_ERROR)


# --------------------------------------------------------------------------
# flag parsing


def parse_exponent(text: str) -> float:
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "oo"):
        return math.inf
    v = float(t)
    if not 1 <= v:
        raise argparse.ArgumentTypeError(f"exponent must be >= 1 or inf, got {text!r}")
    return v


def parse_complex(text: str) -> complex:
    """ "re,im" or a bare real."""
    parts = str(text).split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im' or a real number, got {text!r}")


def parse_clist(text: str) -> list:
    """Comma-separated coefficients, each a Python complex literal ("1", "-0.5", "0.2+1j")."""
    try:
        return [complex(s.strip().replace(" ", "")) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coefficient list {text!r}") from None


def parse_flist(text: str) -> list:
    return [parse_exponent(s) if s.strip().lower().startswith("inf") else float(s)
            for s in str(text).split(",") if s.strip()]


def parse_ilist(text: str) -> list:
    return [int(s) for s in str(text).split(",") if s.strip()]


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    return x


def _spec_from_args(args) -> OperatorSpec:
    if getattr(args, "spec", None):
        with open(args.spec) as fh:
            data = json.load(fh)
        try:
            return OperatorSpec.from_dict(data)
        except KeyError as e:
            raise UsageError(f"spec file is missing field {e.args[0]!r}") from None
    expo = args.u_expo if args.u_expo is not None else [0, 0, 0]
    if len(expo) != 3:
        raise UsageError(f"--u-expo needs exactly three entries (a0,a1,a2), got {len(expo)}")
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    u = ExpPolyFunction(args.u_poly if args.u_poly is not None else [1], tuple(expo))
    psi = AffineSymbol(args.a, args.b, bool(args.psi_constant))
    return OperatorSpec(u, psi, args.n)


def _function_from_args(args):
    if args.function:
        with open(args.function) as fh:
            return function_from_dict(json.load(fh))
    if args.f_taylor is not None:
        return TaylorFunction(args.f_taylor)
    expo = args.f_expo if args.f_expo is not None else [0, 0, 0]
    if len(expo) != 3:
        raise UsageError(f"--f-expo needs exactly three entries (a0,a1,a2), got {len(expo)}")
    return ExpPolyFunction(args.f_poly if args.f_poly is not None else [1], tuple(expo))


def _config(args) -> dict:
    skip = {"func", "out", "format"}
    cfg = {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["version"] = __version__
    return cfg


# --------------------------------------------------------------------------
# output


def _emit(args, payload=None, rows=None, header=None) -> None:
    fmt = args.format
    if fmt == "csv":
        if header is None:
            raise UsageError(f"{args.command} has no CSV form; use --format json")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        for r in rows or []:
            w.writerow(r)
        text = buf.getvalue()
    else:
        text = json.dumps(_jsonable(payload), indent=2, allow_nan=False) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def schema_path(name: str):
    return resources.files("fockops") / "schemas" / f"{name}.schema.json"


# --------------------------------------------------------------------------
# subcommands


def run_classify(args) -> int:
    if args.space == "focktype":
        if args.m is None:
            raise UsageError("--m is required for --space focktype")
        rep = classify_D_focktype(args.m, args.p, args.q)
    else:
        rep = classify_WCD(_spec_from_args(args), args.p, args.q, numeric=not args.symbolic)
    d = rep.to_dict()
    rows = [[k, v] for k, v in d["verdicts"].items()]
    _emit(args, {"config": _config(args), **d}, rows, ["property", "verdict"])
    return EXIT_PROBE if Verdict.NEEDS_PROBE in rep.verdicts().values() else EXIT_OK


def run_norm(args) -> int:
    f = _function_from_args(args)
    if args.kind == "hu":
        res = hu_norm(f, args.p, args.order)
    elif args.kind == "paley":
        res = paley_norm(f, args.m if args.m is not None else 1.0, args.p)
    else:
        params = (FockTypeParams.classical(args.p) if args.space == "classical"
                  else FockTypeParams(args.m if args.m is not None else 1.0, args.p))
        res = fock_norm(f, params)
    d = res.to_dict()
    payload = {"config": _config(args), "value": d["value"], "log_value": d["log_value"],
               "tail_bound": d["tail_bound"], "error_estimate": d["error_estimate"], "family": d["family"],
               "divergent": d["divergent"], "flags": d["flags"]}
    rows = [[payload["value"], payload["log_value"], payload["tail_bound"], payload["error_estimate"],
             payload["family"], payload["divergent"]]]
    _emit(args, payload, rows, ["value", "log_value", "tail_bound", "error_estimate", "family", "divergent"])
    return EXIT_OK


def run_matrix(args) -> int:
    mat = build_matrix(_spec_from_args(args), args.N, offset=args.offset, buffer=args.buffer)
    if args.format == "csv":
        text = mat.to_csv()
        if args.out:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    payload = {"config": _config(args), "N": mat.N, "offset": mat.offset, "basis": mat.basis_note,
               "tail": mat.tail, "exact": mat.exact, "flags": mat.flags,
               "entries": [[[z.real, z.imag] for z in row] for row in mat.entries]}
    _emit(args, payload)
    return EXIT_OK


def run_probe(args) -> int:
    spec = _spec_from_args(args)
    rows, sig = [], []
    for N in args.N_list:
        mat = build_matrix(spec, N, offset=args.offset, buffer=args.buffer)
        s = sigma_min(mat, args.mode)
        sig.append({"N": N, "sigma_min": s})
        rows.append([N, s])
    radius = []
    if args.powers:
        mat = build_matrix(spec, max(args.N_list) if args.N_list else 60, offset=args.offset, buffer=args.buffer)
        radius = spectral_radius_estimate(mat, args.powers).tolist()
    note = "finite sections act on F_2; for p != 2 use the ratio sweep"
    payload = {"config": _config(args), "sigma_min": sig, "spectral_radius": radius, "note": note}
    _emit(args, payload, rows, ["N", "sigma_min"])
    return EXIT_OK


def run_sweep(args) -> int:
    if args.sweep == "ratio":
        if args.k_max < 1:
            _emit(args, {"config": _config(args), "rows": [], "exponent": None, "floor": None}, [],
                  ["k", "ratio", "exponent"])
            return EXIT_OK
        rt = ratio_test(args.m, args.p, args.q, args.k_max, method=args.method)
        rows = [[k, r, rt.exponent] for k, r in rt.rows()]
        payload = {"config": _config(args), "rows": [{"k": k, "ratio": r} for k, r in rt.rows()],
                   "exponent": rt.exponent, "floor": rt.floor, "fit_range": list(rt.fit_range)}
        _emit(args, payload, rows, ["k", "ratio", "exponent"])
        return EXIT_OK
    ms = np.linspace(args.m_min, args.m_max, args.m_steps) if args.m_steps > 0 else []
    if args.m_list is not None:
        ms = args.m_list
    rows = []
    for p in args.p_list:
        for q in args.q_list:
            for m in ms:
                rep = classify_D_focktype(float(m), p, q)
                thr = rep.evidence[0].value
                v = rep.verdicts()
                rows.append([_jsonable(p), _jsonable(q), float(m), thr, v["bounded"], v["compact"],
                             v["closed_range"]])
    header = ["p", "q", "m", "threshold", "bounded", "compact", "closed_range"]
    payload = {"config": _config(args), "rows": [dict(zip(header, r)) for r in rows]}
    _emit(args, payload, rows, header)
    return EXIT_OK


def run_verify_cmd(args) -> int:
    only = [g for g in args.only.split(",") if g] if args.only else None
    inject = [g for g in args.inject.split(",") if g] if args.inject else []
    manifest = run_verify(only, inject)
    rows = [[c["id"], c["group"], c["passed"], c["difference"], c["tolerance"]] for c in manifest["checks"]]
    _emit(args, {"config": _config(args), **manifest}, rows, ["id", "group", "passed", "difference", "tolerance"])
    return EXIT_OK if manifest["passed"] else EXIT_ERROR


# --------------------------------------------------------------------------
# parser


def _common(p):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH", help="write here instead of stdout")


def _spec_flags(p):
    g = p.add_argument_group("operator D_(u,psi,n)")
    g.add_argument("--spec", metavar="FILE", help="JSON spec file (overrides the flags below)")
    g.add_argument("--a", type=parse_complex, default=1 + 0j, help="psi(z) = a z + b; 're,im' or real")
    g.add_argument("--b", type=parse_complex, default=0j)
    g.add_argument("--psi-constant", action="store_true", help="psi is the constant b")
    g.add_argument("--n", type=int, default=0, help="derivative order")
    g.add_argument("--u-poly", type=parse_clist, default=None, help="ascending coefficients of P_u")
    g.add_argument("--u-expo", type=parse_clist, default=None, help="a0,a1,a2 of exp(a0 + a1 z + a2 z^2)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fockops", description="Operators on Fock spaces: classifiers, norms, finite sections.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="verdicts for D on F_(m,p) or D_(u,psi,n) on F_p")
    _common(p)
    p.add_argument("--space", choices=("focktype", "classical"), default="classical")
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--p", type=parse_exponent, default=2.0)
    p.add_argument("--q", type=parse_exponent, default=2.0)
    p.add_argument("--symbolic", action="store_true", help="skip numeric cross-checks")
    _spec_flags(p)
    p.set_defaults(func=run_classify)

    p = sub.add_parser("norm", help="norm of a function")
    _common(p)
    p.add_argument("--space", choices=("focktype", "classical"), default="classical")
    p.add_argument("--kind", choices=("fock", "paley", "hu"), default="fock")
    p.add_argument("--order", type=int, default=1, help="derivative order for --kind hu")
    p.add_argument("--m", type=float, default=None)
    p.add_argument("--p", type=parse_exponent, default=2.0)
    p.add_argument("--function", metavar="FILE", help="JSON function file")
    p.add_argument("--f-poly", type=parse_clist, default=None)
    p.add_argument("--f-expo", type=parse_clist, default=None)
    p.add_argument("--f-taylor", type=parse_clist, default=None)
    p.set_defaults(func=run_norm)

    p = sub.add_parser("matrix", help="finite section in the basis z^k/sqrt(k!)")
    _common(p)
    _spec_flags(p)
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--buffer", type=int, default=64)
    p.set_defaults(func=run_matrix)

    p = sub.add_parser("probe", help="sigma_min of nested sections and power-norm radius estimates")
    _common(p)
    _spec_flags(p)
    p.add_argument("--N-list", type=parse_ilist, default=[10, 20, 40, 80], dest="N_list")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--buffer", type=int, default=64)
    p.add_argument("--mode", choices=("column", "square"), default="column")
    p.add_argument("--powers", type=int, default=0, help="also estimate ||T^m||^(1/m) for m up to this")
    p.set_defaults(func=run_probe)

    p = sub.add_parser("sweep", help="monomial ratio sweep or boundedness boundary sweep")
    ssub = p.add_subparsers(dest="sweep", required=True, parser_class=_Parser)
    r = ssub.add_parser("ratio")
    _common(r)
    r.add_argument("--m", type=float, required=True)
    r.add_argument("--p", type=parse_exponent, required=True)
    r.add_argument("--q", type=parse_exponent, required=True)
    r.add_argument("--k-max", type=int, default=200)
    r.add_argument("--method", choices=("exact", "asymptotic", "quadrature"), default="exact")
    r.set_defaults(func=run_sweep, format="csv")
    bnd = ssub.add_parser("boundary")
    _common(bnd)
    bnd.add_argument("--p-list", type=parse_flist, default=[1.0, 2.0])
    bnd.add_argument("--q-list", type=parse_flist, default=[2.0, 4.0])
    bnd.add_argument("--m-min", type=float, default=0.25)
    bnd.add_argument("--m-max", type=float, default=2.0)
    bnd.add_argument("--m-steps", type=int, default=8)
    bnd.add_argument("--m-list", type=parse_flist, default=None)
    bnd.set_defaults(func=run_sweep, format="csv")

    p = sub.add_parser("verify", help="oracle-vs-module suite")
    _common(p)
    p.add_argument("--only", default=None, help=f"comma list from {','.join(GROUPS)}")
    p.add_argument("--inject", default=None, help=f"fault injection for testing: {','.join(INJECTIONS)}")
    p.set_defaults(func=run_verify_cmd)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, ArithmeticError, OSError, json.JSONDecodeError) as e:
        sys.stderr.write(f"fockops {args.command}: error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
