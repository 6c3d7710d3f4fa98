"""Command-line interface: verification runs and artifact dumps.

Subcommands:
  verify    run the full certification suite, emit a JSON/CSV report
  spectrum  Casimir spectrum per (n, weight) sector with j labels
  ladders   exact sigma table and right functions for one spin
  kernel    the (n, j) lattice report as JSON
  basis     Fock basis dump, or the spin-1 canonical basis with --canonical
  dump-op   one named operator in coordinate-triplet JSON

Reports and dumps go to stdout (or --out FILE); progress and summaries go to
stderr.  ``verify`` exits 0 iff every check passed, otherwise with the number
of failed checks.  The environment variable SU2LADDERS_TOLERANCE overrides
the default tolerance of every check not pinned via --tolerance-override;
the --tolerance flag takes precedence over the environment.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .casimir import (build_families, build_taus, canonical_basis_s1,
                      lattice_report)
from .fock import enumerate_sector
from .ladder import build_alpha, right_functions, solve_sigma
from .operators import (SparseOperator, annihilation_op, creation_op,
                        number_op)
from .schwinger import su2_generators
from .verify import SuiteConfig, run_suite

TOLERANCE_ENV_VAR = "SU2LADDERS_TOLERANCE"


def _emit(text: str, out_path) -> None:
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise SystemExit(f"cannot write to {out_path!r}: {exc}")
    else:
        sys.stdout.write(text)


def _json_dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _cmd_verify(args) -> int:
    spins = [int(x) for x in str(args.spin).split(",") if x]
    default_tol = args.tolerance
    if default_tol is None and os.environ.get(TOLERANCE_ENV_VAR):
        default_tol = float(os.environ[TOLERANCE_ENV_VAR])
    overrides = {}
    for item in args.tolerance_override or []:
        name, _, value = item.partition("=")
        if not value:
            raise SystemExit(f"bad --tolerance-override {item!r}; "
                             "expected NAME=VALUE")
        overrides[name] = float(value)
    config = SuiteConfig(spins=spins, n_max=args.nmax,
                         tolerance_overrides=overrides,
                         output_format=args.format,
                         parallelism=args.parallelism,
                         default_tolerance=default_tol)
    report = run_suite(config)
    payload = report.to_json() if args.format == "json" else report.to_csv()
    _emit(payload, args.out)
    for line in report.summary_lines():
        print(line, file=sys.stderr)
    return 0 if report.overall_pass else min(report.failed_count, 255)


def _cmd_spectrum(args) -> int:
    basis = enumerate_sector(args.spin, args.nmax)
    gens = su2_generators(basis)
    sector_filter = None
    if args.sector:
        n_str, _, w_str = args.sector.partition(",")
        sector_filter = (int(n_str), int(w_str))
    rows = []
    for key, idx, vals, vecs in gens.j2_decomposition().sectors:
        if sector_filter and key != sector_filter:
            continue
        counts: dict[int, int] = {}
        labels = []
        for lam in vals:
            j = round(0.5 * (math.sqrt(max(1.0 + 4.0 * lam, 0.0)) - 1.0))
            counts[j] = counts.get(j, 0) + 1
            labels.append((float(lam), j))
        for lam, j in labels:
            rows.append((key[0], key[1], lam, j, counts[j]))
    if args.format == "json":
        payload = _json_dump([{"n": n, "weight": w, "eigenvalue": lam,
                               "j": j, "multiplicity": m}
                              for n, w, lam, j, m in rows])
    else:
        lines = ["sector_n,sector_weight,eigenvalue,j_label,multiplicity"]
        lines += [f"{n},{w},{lam!r},{j},{m}" for n, w, lam, j, m in rows]
        payload = "\n".join(lines) + "\n"
    _emit(payload, args.out)
    return 0


def _cmd_ladders(args) -> int:
    s = args.spin
    payload = {"spin": s, "right_functions": [], "sigmas": []}
    for rf in right_functions(s):
        payload["right_functions"].append({
            "theta": rf.theta,
            "family": rf.family,
            "poly": rf.poly.to_pairs(),
        })
        sigma = solve_sigma(build_alpha(s, rf.family), rf.theta)
        payload["sigmas"].append({
            "theta": rf.theta,
            "family": rf.family,
            "sigma": {str(k): poly.to_pairs()
                      for k, poly in sorted(sigma.sigmas.items())},
        })
    _emit(_json_dump(payload), args.out)
    return 0


def _cmd_kernel(args) -> int:
    basis = enumerate_sector(args.spin, args.nmax)
    gens = su2_generators(basis)
    families = build_families(basis, gens)
    taus = build_taus(families, gens, certify=False)
    report = lattice_report(basis, gens, taus, args.nmax - 1)
    _emit(_json_dump(report.to_json_dict()), args.out)
    return 0


def _cmd_basis(args) -> int:
    if args.canonical:
        if args.spin != 1:
            raise SystemExit("--canonical is available for --spin 1 only")
        basis = enumerate_sector(1, args.nmax)
        gens = su2_generators(basis)
        families = build_families(basis, gens)
        vectors = canonical_basis_s1(basis, gens, families, args.nmax - 1)
        payload = []
        for cv in vectors:
            amps = []
            for i in np.flatnonzero(np.abs(cv.vector) > 1e-12):
                amps.append([list(basis.states[i]),
                             float(cv.vector[i].real),
                             float(cv.vector[i].imag)])
            payload.append({"n": cv.n, "j": cv.j, "jz": cv.jz,
                            "vector": amps})
        _emit(_json_dump(payload), args.out)
        return 0
    basis = enumerate_sector(args.spin, args.nmax, n=args.n,
                             weight=args.weight)
    _emit(_json_dump(basis.to_json_list()), args.out)
    return 0


def _resolve_operator(name: str, basis, gens, families, taus):
    if ":" in name:
        kind, _, arg = name.partition(":")
        value = int(arg)
        if kind == "a":
            return annihilation_op(basis, value)
        if kind == "adag":
            return creation_op(basis, value)
        if kind == "n":
            return number_op(basis, value)
        if kind == "p":
            return families().p_ops[value]
        if kind == "m":
            return families().m_ops[value - 1]
        if kind == "tau":
            return taus()[value].op
        if kind == "taulow":
            return taus()[value].op.adjoint()
        raise SystemExit(f"unknown operator kind {kind!r}")
    plain = {
        "N": lambda: gens.Ntot,
        "Jz": lambda: gens.Jz,
        "Jp": lambda: gens.Jplus,
        "Jm": lambda: gens.Jminus,
        "J2": lambda: gens.J2,
        "jhat": lambda: gens.j_hat(),
        "I": lambda: SparseOperator.identity(basis),
    }
    if name not in plain:
        raise SystemExit(
            f"unknown operator {name!r}; use one of {sorted(plain)} or "
            "a:<mu>, adag:<mu>, n:<mu>, p:<k>, m:<k>, tau:<theta>, "
            "taulow:<theta>")
    return plain[name]()


def _cmd_dump_op(args) -> int:
    basis = enumerate_sector(args.spin, args.nmax)
    gens = su2_generators(basis)
    fam_cache = {}
    tau_cache = {}

    def families():
        if "f" not in fam_cache:
            fam_cache["f"] = build_families(basis, gens)
        return fam_cache["f"]

    def taus():
        if "t" not in tau_cache:
            tau_cache["t"] = build_taus(families(), gens, certify=False)
        return tau_cache["t"]

    op = _resolve_operator(args.op, basis, gens, families, taus)
    _emit(_json_dump(op.to_coo_json()), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su2ladders",
        description="Bosonic su(2) ladder construction and verification")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the certification suite")
    v.add_argument("--spin", default="1,2",
                   help="comma-separated list of spins (default 1,2)")
    v.add_argument("--nmax", type=int, default=4)
    v.add_argument("--tolerance", type=float, default=None,
                   help="replace the default tolerance of every check")
    v.add_argument("--tolerance-override", action="append", metavar="NAME=VAL",
                   help="per-check tolerance override (repeatable)")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out", default=None)
    v.add_argument("--parallelism", type=int, default=1,
                   help="hint only; execution is sequential")
    v.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("spectrum", help="Casimir spectrum with j labels")
    sp.add_argument("--spin", type=int, required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--sector", default=None, metavar="N,W")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=_cmd_spectrum)

    la = sub.add_parser("ladders", help="sigma table and right functions")
    la.add_argument("--spin", type=int, required=True)
    la.add_argument("--out", default=None)
    la.set_defaults(func=_cmd_ladders)

    ke = sub.add_parser("kernel", help="(n, j) lattice report")
    ke.add_argument("--spin", type=int, required=True)
    ke.add_argument("--nmax", type=int, required=True)
    ke.add_argument("--out", default=None)
    ke.set_defaults(func=_cmd_kernel)

    ba = sub.add_parser("basis", help="basis dumps")
    ba.add_argument("--spin", type=int, required=True)
    ba.add_argument("--nmax", type=int, required=True)
    ba.add_argument("--n", type=int, default=None)
    ba.add_argument("--weight", type=int, default=None)
    ba.add_argument("--canonical", action="store_true",
                    help="spin-1 canonical basis vectors")
    ba.add_argument("--out", default=None)
    ba.set_defaults(func=_cmd_basis)

    du = sub.add_parser("dump-op", help="export one operator as JSON")
    du.add_argument("--spin", type=int, required=True)
    du.add_argument("--nmax", type=int, required=True)
    du.add_argument("--op", required=True)
    du.add_argument("--out", default=None)
    du.set_defaults(func=_cmd_dump_op)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
