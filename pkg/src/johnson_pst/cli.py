"""Command-line front end: ``johnson-pst {design,verify,sweep,spectrum}``.

Exit codes: 0 ok, 1 certification failure, 2 usage, 3 infeasible oracle,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb, pi

import numpy as np

from .design import design_johnson
from .errors import CapacityError, PSTError
from .evolution import (
    DEFAULT_DENSE_CAP,
    DEFAULT_SPIN_CAP,
    FULL_SPACE_MAX_M,
    DenseSectorOracle,
    fidelity_sweep,
    heisenberg_oracle,
    spectral_amplitudes,
)
from .io import read_design, write_design, write_sweep
from .spectral import eigenvalue_support, gauss_weights, johnson_qd

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3, 4
CERT_TOL = 1e-8


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="johnson-pst", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="compute coupling constants")
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--t0", type=float, default=1.0)
    th = d.add_mutually_exclusive_group()
    th.add_argument("--theta", type=float, default=None, help="target phase in radians")
    th.add_argument("--theta-pi", type=float, default=None, help="target phase as a multiple of pi")
    d.add_argument("--l-offsets", type=_int_list, default=None, help="m+1 comma-separated integers")
    d.add_argument("--float", dest="exact", action="store_false",
                   help="double-precision spectral stage (default: exact rationals)")
    d.add_argument("-o", "--output", default=None, help="write the JSON design document here")

    v = sub.add_parser("verify", help="certify a design document")
    v.add_argument("design")
    v.add_argument("--oracle", choices=["spectral", "dense", "heisenberg", "all"], default="all")
    v.add_argument("--dense-cap", type=int, default=DEFAULT_DENSE_CAP)
    v.add_argument("--spin-cap", type=int, default=DEFAULT_SPIN_CAP)

    s = sub.add_parser("sweep", help="amplitude time series as CSV")
    s.add_argument("design")
    s.add_argument("--t-min", type=float, default=0.0)
    s.add_argument("--t-max", type=float, required=True)
    s.add_argument("--steps", type=int, default=201)
    s.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("spectrum", help="spectral data of J(2m, m)")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--exact", action="store_true", help="print rationals")
    return p


# ------------------------------------------------------------------

def cmd_design(args, parser) -> int:
    if args.m < 1:
        parser.error(f"--m must be >= 1, got {args.m}")
    if not args.t0 > 0:
        parser.error(f"--t0 must be positive, got {args.t0}")
    if args.l_offsets is not None and len(args.l_offsets) != args.m + 1:
        parser.error(f"--l-offsets needs {args.m + 1} values, got {len(args.l_offsets)}")
    theta = args.theta_pi * pi if args.theta_pi is not None else (args.theta or 0.0)
    design = design_johnson(args.m, args.t0, theta, args.l_offsets, exact=args.exact)

    print(f"J(2m,m) with m={design.m}, t0={design.t0:g}, theta={design.theta:.15g}")
    print(f"{'k':>3} {'x_k':>10} {'gamma_k':>22} {'f_k':>3} {'E_k':>22} {'J_k':>22}")
    for k in range(design.m + 1):
        print(f"{k:>3} {design.measure.points[k]:>10.6g} {design.measure.weights[k]:>22.15g} "
              f"{design.f_bits[k]:>3} {design.hamiltonian_eigenvalues[k]:>22.15g} "
              f"{design.couplings[k]:>22.15g}")
    if args.output:
        try:
            write_design(args.output, design, "exact" if args.exact else "float")
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {args.output}")
    return EXIT_OK


def _feasibility(m: int, oracle: str, dense_cap: int, spin_cap: int) -> list[str]:
    problems = []
    if oracle in ("dense", "all") and comb(2 * m, m) > dense_cap:
        problems.append(f"dense oracle: C({2 * m},{m}) = {comb(2 * m, m)} exceeds --dense-cap {dense_cap}")
    if oracle in ("heisenberg", "all"):
        if 4**m > spin_cap:
            problems.append(f"heisenberg oracle: 2^{2 * m} exceeds --spin-cap {spin_cap}")
        elif m > FULL_SPACE_MAX_M and comb(2 * m, m) > dense_cap:
            problems.append(f"heisenberg oracle: sector dimension {comb(2 * m, m)} exceeds --dense-cap {dense_cap}")
    return problems


def cmd_verify(args, parser) -> int:
    try:
        design = read_design(args.design)
    except OSError as exc:
        print(f"error: cannot read {args.design}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PSTError, json.JSONDecodeError) as exc:
        print(f"error: invalid design document: {exc}", file=sys.stderr)
        return EXIT_USAGE

    m, t0 = design.m, design.t0
    problems = _feasibility(m, args.oracle, args.dense_cap, args.spin_cap)
    if problems:
        for msg in problems:
            print(f"infeasible: {msg}", file=sys.stderr)
        return EXIT_INFEASIBLE

    ok = True
    f = spectral_amplitudes(design, t0)
    if args.oracle in ("spectral", "all"):
        amp, leak = abs(f[-1]), float(np.max(np.abs(f[:-1])))
        passed = amp >= 1 - CERT_TOL and leak <= CERT_TOL
        ok &= passed
        print(f"[spectral]   |f_m(t0)| = {amp:.12f}  max leakage = {leak:.3e}  {_mark(passed)}")
    try:
        if args.oracle in ("dense", "all"):
            oracle = DenseSectorOracle(design, cap=args.dense_cap)
            strata = oracle.stratum_amplitudes(t0)
            amp, leak = abs(oracle.amplitude(t0)), float(np.max(np.abs(strata[:-1])))
            passed = amp >= 1 - CERT_TOL and leak <= CERT_TOL
            ok &= passed
            print(f"[dense]      |f_m(t0)| = {amp:.12f}  max leakage = {leak:.3e}  "
                  f"N = {oracle.graph.N}  {_mark(passed)}")
        if args.oracle in ("heisenberg", "all"):
            rep = heisenberg_oracle(m, design, t0, spin_cap=args.spin_cap, dense_cap=args.dense_cap)
            passed = rep.ghz_fidelity >= 1 - CERT_TOL
            ok &= passed
            print(f"[heisenberg] GHZ fidelity = {rep.ghz_fidelity:.12f}  relative phase = "
                  f"{rep.relative_phase:.3e}  global phase = {rep.global_phase:.12f}  "
                  f"({rep.mode} space)  {_mark(passed)}")
    except CapacityError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK if ok else EXIT_FAIL


def _mark(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def cmd_sweep(args, parser) -> int:
    if args.steps < 2:
        parser.error(f"--steps must be >= 2, got {args.steps}")
    if not args.t_min < args.t_max:
        parser.error("--t-min must be smaller than --t-max")
    try:
        design = read_design(args.design)
    except OSError as exc:
        print(f"error: cannot read {args.design}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PSTError, json.JSONDecodeError) as exc:
        print(f"error: invalid design document: {exc}", file=sys.stderr)
        return EXIT_USAGE
    series = fidelity_sweep(design, args.t_min, args.t_max, args.steps)
    try:
        write_sweep(args.output, series)
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    best = int(np.argmax(np.abs(series.amplitudes[:, -1])))
    print(f"wrote {args.steps} rows to {args.output}; max |f_m| = "
          f"{abs(series.amplitudes[best, -1]):.12f} at t = {series.times[best]:.12g}")
    return EXIT_OK


def cmd_spectrum(args, parser) -> int:
    m = args.m
    if m < 1:
        parser.error(f"--m must be >= 1, got {m}")
    qd = johnson_qd(m, exact=True)
    mu = gauss_weights(qd, eigenvalue_support(qd))
    show = str if args.exact else (lambda q: f"{float(q):.15g}")
    print(f"spectral distribution of J({2 * m},{m}) seen from one vertex")
    print(f"{'k':>3} {'x_k':>12} {'gamma_k':>24}")
    for k, (x, g) in enumerate(zip(mu.points, mu.weights)):
        print(f"{k:>3} {show(x):>12} {show(g):>24}")
    print()
    print(f"{'l':>3} {'kappa_l':>12} {'alpha_l':>12} {'omega_l':>12} {'b_l':>8} {'c_l':>8}")
    for l in range(m + 1):
        omega = show(qd.omega[l - 1]) if l else "-"
        b = str((m - l) ** 2) if l < m else "-"
        c = str(l * l) if l else "-"
        print(f"{l:>3} {comb(m, l) ** 2:>12} {show(qd.alpha[l]):>12} {omega:>12} {b:>8} {c:>8}")
    return EXIT_OK


COMMANDS = {"design": cmd_design, "verify": cmd_verify, "sweep": cmd_sweep, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, parser)
    except PSTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
