"""Command-line interface.

Subcommands::

    coeffs   recurrence coefficients of the weighted basis
    nodes    Gauss rule (index, node, omega, tau)
    wce      worst-case-error table over a range of n
    perturb  perturbed-node system report (a_n, b_n, min omega, support)
    figure   reproduce one of the documented experiments
    check    run the quick invariant suite

Exit codes: 0 success, 1 usage/validation error, 2 numerical failure.
All CSV output is UTF-8, comma-separated, LF line endings, one header
row, 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FreudQuadError
from .experiments import FIGURE_IDS, figure_spec, run_figure
from .gaussquad import gauss_rule
from .kernels import mehler, sup_envelope_constant
from .mzframe import build_system, generalized_weights, perturb_nodes, support_check
from .orthopoly import basis_matrix, build_basis
from .spaces import SpaceWeight, lambda_of
from .wce import WCETable, series_truncation, tensor_wce, wce_me2, wce_series

_SPACE_NAMES = ("hs", "epq", "ms", "mse", "mse2")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _space_from_args(args) -> SpaceWeight:
    name = args.space
    if name == "hs":
        return SpaceWeight.polynomial(args.s)
    if name == "epq":
        if args.p is None or args.q is None:
            raise ValueError("--space epq needs --p and --q")
        return SpaceWeight.exponential(args.p, args.q)
    if name == "ms":
        return SpaceWeight.mod_poly(args.s)
    if name == "mse":
        return SpaceWeight.mod_exp(args.s)
    if name == "mse2":
        return SpaceWeight.mod_exp2(args.s)
    raise ValueError(f"unknown space {name!r}")


def _parse_n_range(text: str) -> list[int]:
    """Accepts 'a:b[:step]' (inclusive) or a comma list."""
    if ":" in text:
        parts = [int(v) for v in text.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 1
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise ValueError(f"bad n-range {text!r}")
        if step < 1 or hi < lo:
            raise ValueError(f"bad n-range {text!r}")
        return list(range(lo, hi + 1, step))
    return [int(v) for v in text.split(",") if v.strip()]


def _write(path: str | None, content: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(content)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(content, encoding="utf-8", newline="\n")


def _cmd_coeffs(args) -> int:
    basis = build_basis(args.alpha, args.n)
    if args.format == "json":
        payload = {
            "alpha": args.alpha,
            "c0": basis.c0,
            "coefficients": [float(a) for a in basis.coeffs],
            "tool_version": __version__,
        }
        _write(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        lines = ["k,a_k"] + [
            f"{k + 1},{_fmt(float(a))}" for k, a in enumerate(basis.coeffs)
        ]
        _write(args.out, "\n".join(lines) + "\n")
        if args.out not in (None, "-"):
            print(f"c0 = {_fmt(basis.c0)}")
    return 0


def _cmd_nodes(args) -> int:
    basis = build_basis(args.alpha, args.n + 1)
    rule = gauss_rule(basis, args.n)
    if args.format == "json":
        payload = {
            "alpha": args.alpha,
            "n": args.n,
            "nodes": [float(v) for v in rule.nodes],
            "omega": [float(v) for v in rule.omega],
            "tau": [float(v) for v in rule.tau],
            "tool_version": __version__,
        }
        _write(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        lines = ["index,node,omega,tau"]
        for j in range(rule.n):
            lines.append(
                f"{j},{_fmt(rule.nodes[j])},{_fmt(rule.omega[j])},{_fmt(rule.tau[j])}"
            )
        _write(args.out, "\n".join(lines) + "\n")
    return 0


def _emit_table(table: WCETable, args, stem: str) -> None:
    if args.out is None or args.out == "-":
        if args.format == "json":
            sys.stdout.write(json.dumps(table.summary(), indent=2) + "\n")
        else:
            sys.stdout.write(table.to_csv())
        print(f"slope = {table.slope:.6f}", file=sys.stderr)
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.csv").write_text(table.to_csv(), encoding="utf-8", newline="\n")
    (out / f"{stem}.json").write_text(
        json.dumps(table.summary(), indent=2) + "\n", encoding="utf-8", newline="\n"
    )
    print(f"{stem}: slope={table.slope:.6f} -> {out / (stem + '.csv')}")


def _cmd_wce(args) -> int:
    ns = _parse_n_range(args.n_range)
    if args.space == "mse2" and args.t is not None:
        # allow parameterizing the geometric family by t = pi/(pi - s)
        if args.t <= 1:
            raise ValueError("--t must exceed 1")
        args.s = math.pi * (1.0 - 1.0 / args.t)
    space = _space_from_args(args)
    label = args.space
    if args.space == "mse2" and args.alpha == 2.0:
        t = math.pi / (math.pi - args.s)
        values, params = [], {
            "space": label, "alpha": args.alpha, "s": args.s, "t": t,
            "seed": args.seed, "trunc_tol": args.trunc_tol,
        }
        basis = build_basis(args.alpha, max(ns) + 1)
        for n in ns:
            rule = gauss_rule(basis, n)
            values.append(wce_me2(rule.nodes, rule.omega, t))
        axis = "n"
    else:
        k_max = args.k_max
        if k_max is None and space.kind in ("poly", "mod-poly"):
            # polynomial weights decay too slowly for the envelope-based
            # auto-truncation; use a fixed recorded depth instead
            k_max = 40_000
        if k_max is None:
            sup = sup_envelope_constant(build_basis(args.alpha, 512))
            cap = series_truncation(
                space, 2 * max(ns), args.trunc_tol, args.alpha, sup
            ) + 4
        else:
            cap = k_max
        basis = build_basis(args.alpha, max(cap, max(ns) + 1))
        values, params = [], {
            "space": label, "alpha": args.alpha, "seed": args.seed,
            "trunc_tol": args.trunc_tol, **space.describe(),
        }
        if k_max is not None:
            params["k_max"] = k_max
        for n in ns:
            rule = gauss_rule(basis, n)
            values.append(
                wce_series(
                    rule.nodes, rule.omega, basis, space, start=2 * n,
                    tol=args.trunc_tol, k_max=k_max,
                )
            )
        axis = "sqrt-n" if space.kind in ("exp", "mod-exp") else "log-n"
    if args.dim > 1:
        # tensor extension: per-coordinate squared error lifts exactly
        c = 1.0 / build_basis(args.alpha, 1).c0
        lam0 = float(lambda_of(space, 0))
        values = [tensor_wce(v, c, lam0, args.dim) for v in values]
        params["dim"] = args.dim
    table = WCETable.from_rows(params, ns, values, axis=axis)
    _emit_table(table, args, f"wce_{label}")
    return 0


def _cmd_perturb(args) -> int:
    basis = build_basis(args.alpha, max(args.n + 2, 64))
    rule = gauss_rule(basis, args.n + 1)
    nodes, tau = perturb_nodes(
        rule, args.eps, sign_mode=args.sign_mode, seed=args.seed,
        allow_reorder=args.allow_reorder,
    )
    system = build_system(basis, args.n, nodes, tau)
    omega = generalized_weights(system, basis)
    report = {
        "alpha": args.alpha,
        "n": args.n,
        "eps": args.eps,
        "sign_mode": args.sign_mode,
        "seed": args.seed,
        "a_n": system.a_n,
        "b_n": system.b_n,
        "condition": system.b_n / system.a_n,
        "min_omega": float(np.min(omega)),
        "all_omega_positive": bool(np.all(omega > 0)),
        "support_check_L": args.L,
        "support_ok": support_check(nodes, args.alpha, args.n + 1, L=args.L),
        "tool_version": __version__,
    }
    if args.format == "json":
        _write(args.out, json.dumps(report, indent=2) + "\n")
    else:
        lines = ["key,value"] + [f"{k},{v}" for k, v in report.items()]
        _write(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_figure(args) -> int:
    overrides = {}
    if args.eps is not None:
        overrides["eps"] = args.eps
    if args.n_range is not None:
        overrides["n_values"] = tuple(_parse_n_range(args.n_range))
    if args.trunc_tol is not None:
        overrides["trunc_tol"] = args.trunc_tol
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.sign_mode is not None:
        overrides["sign_mode"] = args.sign_mode
    spec = figure_spec(args.id, **overrides)
    table = run_figure(spec)
    _emit_table(table, args, args.id)
    return 0


def _cmd_check(args) -> int:
    failures = 0

    def report(name: str, ok: bool, detail: str) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
        if not ok:
            failures += 1

    basis = build_basis(2.0, 320)

    rule = gauss_rule(basis, 21)
    H = basis_matrix(basis, rule.nodes, 41)
    e = H @ rule.omega
    target = np.zeros(42)
    target[0] = 2.0 ** -0.25
    resid = float(np.abs(e - target).max())
    report("gauss-exactness n=21 k<=41", resid < 1e-9, f"max residual {resid:.3e}")

    rule22 = gauss_rule(basis, 21)
    system = build_system(basis, 20, rule22.nodes, rule22.tau)
    defect = float(np.abs(system.gram - np.eye(21)).max())
    report(
        "frame-identity n=20",
        defect < 1e-8 and abs(system.a_n - 1) < 1e-8 and abs(system.b_n - 1) < 1e-8,
        f"max |S-I| {defect:.3e}",
    )

    t = 1.25
    grid = np.linspace(-3.0, 3.0, 9)
    Hg = basis_matrix(basis, grid, 300)
    lam = t ** -(np.arange(301) + 1.0)
    worst = 0.0
    for i in range(9):
        for j in range(9):
            series = float(np.sum(lam * Hg[:, i] * Hg[:, j]))
            closed = mehler(t, grid[i], grid[j])
            scale = math.sqrt(mehler(t, grid[i], grid[i]) * mehler(t, grid[j], grid[j]))
            worst = max(worst, abs(series - closed) / scale)
    report("mehler-identity t=5/4", worst < 1e-10, f"normalized error {worst:.3e}")

    return 2 if failures else 0


class _Parser(argparse.ArgumentParser):
    # usage problems are validation errors: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="freudq",
        description="Quadrature rules for Freud weights and worst-case "
        "integration errors over the associated function spaces.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--alpha", type=float, default=2.0)
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--out", default=None, help="output file or directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("coeffs", help="recurrence coefficients a_1..a_n")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("nodes", help="Gauss rule nodes and weights")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_nodes)

    p = sub.add_parser("wce", help="worst-case-error table for Gauss rules")
    common(p)
    p.add_argument("--space", choices=_SPACE_NAMES, required=True)
    p.add_argument("--n-range", default="3:21:2")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--t", type=float, default=None,
                   help="geometric decay parameter; implies --s for mse2")
    p.add_argument("--dim", type=int, default=1,
                   help="tensor-product dimension for the reported error")
    p.add_argument("--trunc-tol", type=float, default=1e-16)
    p.add_argument("--k-max", type=int, default=None)
    p.set_defaults(func=_cmd_wce)

    p = sub.add_parser("perturb", help="perturbed-node system report")
    common(p)
    p.add_argument("--n", type=int, required=True, help="system order (n+1 nodes)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument(
        "--sign-mode", choices=("random", "alternating", "positive"), default="random"
    )
    p.add_argument("--allow-reorder", action="store_true")
    p.add_argument("--L", type=float, default=3.0)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("figure", help="reproduce a documented experiment")
    common(p)
    p.add_argument("id", choices=FIGURE_IDS)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--n-range", default=None)
    p.add_argument("--trunc-tol", type=float, default=None)
    p.add_argument(
        "--sign-mode", choices=("random", "alternating", "positive"), default=None
    )
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("check", help="run the quick invariant suite")
    common(p)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FreudQuadError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
