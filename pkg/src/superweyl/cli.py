"""Command-line interface.

Subcommands::

    superweyl suite run CONFIG        run verification suites from a TOML config
    superweyl quantize                quantize a symbol, report operator diagnostics
    superweyl product                 multiply two symbols, cross-check routes
    superweyl semisuper               apply a doubled symbol to a symbol
    superweyl superproduct            multiply two doubled symbols
    superweyl liouville               commutator-map diagnostics for a Hamiltonian symbol
    superweyl expand                  semiclassical defect sweep over eps (plot-ready CSV)
    superweyl report convert          convert a report between json and csv

Global flags (where meaningful): ``--grid d,n,L --eps --lambda --seed --out
--format``.  Symbols are given inline as JSON specs, e.g.
``'{"family": "gaussian", "center_x": 0.3, "center_xi": 0.0, "sigma_x": 1.0,
"sigma_xi": 1.0}'``, ``'{"family": "planewave", "x_sites": 1, "xi_sites": -2}'``
or ``'{"family": "random", "site_sigma": 1.2}'``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import products as pr
from . import supercalc as sc
from .grid import DoubledSymbol, PhaseSymbol, make_grid
from .harness import (
    emit_report,
    gating_failures,
    load_config,
    parse_report,
    potential_from_spec,
    run_suite,
)
from .symbols import gaussian_symbol, lattice_point, plane_wave, spectral_doubled, spectral_symbol
from .weyl import quantize, wigner, operator_norm_bound

__all__ = ["main"]


def _parse_grid(text: str):
    d, n, L = text.split(",")
    return make_grid(int(d), int(n), float(L))


def _add_common(p, grid_default="1,15,12"):
    p.add_argument("--grid", default=grid_default, help="grid as d,n,L")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--out", default=None, help="output path (stdout if omitted)")
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.add_argument("--potential", default='{"family": "zero"}', help="vector potential spec (JSON)")


def symbol_from_spec(spec: dict, grid, rng, eps=1.0, lam=1.0) -> PhaseSymbol:
    family = spec.get("family", "random")
    if family == "gaussian":
        return gaussian_symbol(
            grid,
            spec.get("center_x", 0.0),
            spec.get("center_xi", 0.0),
            float(spec.get("sigma_x", 1.0)),
            float(spec.get("sigma_xi", 1.0)),
            spec.get("momentum_shift"),
            eps,
            lam,
        )
    if family == "planewave":
        Y = lattice_point(grid, spec.get("x_sites", 0), spec.get("xi_sites", 0))
        return plane_wave(grid, Y, eps, lam)
    if family == "random":
        # default spectral width scales with the grid so transforms stay
        # concentrated (wrap-safe) on small lattices
        default_sigma = max(0.3, grid.half / 6.0)
        return spectral_symbol(grid, rng, float(spec.get("site_sigma", default_sigma)), eps, lam)
    raise ValueError(f"unknown symbol family {family!r}")


def doubled_from_spec(spec: dict, grid, rng, eps=1.0, lam=1.0) -> DoubledSymbol:
    family = spec.get("family", "random")
    if family == "random":
        default_sigma = max(0.3, grid.half / 6.0)
        return spectral_doubled(grid, rng, float(spec.get("site_sigma", default_sigma)), eps, lam)
    if family == "tensor":
        fL = symbol_from_spec(spec["left"], grid, rng, eps, lam)
        fR = symbol_from_spec(spec["right"], grid, rng, eps, lam)
        return DoubledSymbol(grid, np.multiply.outer(fL.values, fR.values), eps, lam)
    if family == "liouville":
        h = symbol_from_spec(spec["h"], grid, rng, eps, lam)
        return sc.liouville_symbol(h)
    raise ValueError(f"unknown doubled symbol family {family!r}")


def _emit(payload: dict, out, fmt):
    if fmt == "csv":
        lines = [",".join(payload.keys()), ",".join(f"{v:.12g}" if isinstance(v, float) else str(v) for v in payload.values())]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, indent=2, default=float) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="superweyl", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_suite = sub.add_parser("suite", help="verification suites")
    suite_sub = p_suite.add_subparsers(dest="suite_command", required=True)
    p_run = suite_sub.add_parser("run", help="run suites from a TOML config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--format", default="json", choices=["json", "csv"])
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")

    for name, helptext in (
        ("quantize", "quantize a symbol and report operator diagnostics"),
        ("product", "multiply two symbols"),
        ("semisuper", "apply a doubled symbol to a symbol"),
        ("superproduct", "multiply two doubled symbols"),
        ("liouville", "commutator-map diagnostics"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        if name == "quantize":
            p.add_argument("--symbol", default='{"family": "random"}')
        elif name == "product":
            p.add_argument("--symbol", default='{"family": "random"}')
            p.add_argument("--symbol2", default='{"family": "random"}')
            p.add_argument("--route", default="operator", choices=["operator", "quadrature"])
        elif name == "semisuper":
            p.add_argument("--doubled", default='{"family": "random"}')
            p.add_argument("--symbol", default='{"family": "random"}')
            p.add_argument("--route", default="operator", choices=["operator", "fourier-quadrature", "direct-quadrature"])
        elif name == "superproduct":
            p.add_argument("--doubled", default='{"family": "random"}')
            p.add_argument("--doubled2", default='{"family": "random"}')
            p.add_argument("--route", default="kernel", choices=["kernel", "superop", "quadrature"])
        elif name == "liouville":
            p.add_argument("--symbol", default='{"family": "random"}')

    p_exp = sub.add_parser("expand", help="semiclassical defect sweep")
    _add_common(p_exp, grid_default="1,31,12")
    p_exp.add_argument("--symbol", default='{"family": "gaussian", "center_x": 0.5, "center_xi": 0.3, "sigma_x": 1.5, "sigma_xi": 1.5}')
    p_exp.add_argument("--symbol2", default='{"family": "gaussian", "center_x": -0.4, "center_xi": -0.5, "sigma_x": 1.5, "sigma_xi": 1.5, "momentum_shift": 0.3}')
    p_exp.add_argument("--eps-values", default="0.4,0.2,0.1,0.05")

    p_rep = sub.add_parser("report", help="report utilities")
    rep_sub = p_rep.add_subparsers(dest="report_command", required=True)
    p_conv = rep_sub.add_parser("convert", help="convert a report between formats")
    p_conv.add_argument("input")
    p_conv.add_argument("--from", dest="from_format", default="json", choices=["json", "csv"])
    p_conv.add_argument("--to", dest="to_format", default="csv", choices=["json", "csv"])
    p_conv.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    if args.command == "suite":
        cfg = load_config(args.config)
        if args.seed is not None:
            from dataclasses import replace

            cfg = replace(cfg, seed=args.seed)
        report = run_suite(cfg)
        text = emit_report(report, args.out, args.format)
        if not args.out:
            sys.stdout.write(text)
        failures = gating_failures(report)
        for rec in report.checks:
            status = "pass" if rec.passed else "FAIL"
            sys.stderr.write(f"{status}  {rec.id}  residual={rec.residual:.3e} tol={rec.tol:.1e}\n")
        return 1 if failures else 0

    if args.command == "report":
        with open(args.input, encoding="utf-8") as fh:
            report = parse_report(fh.read(), args.from_format)
        text = emit_report(report, args.out, args.to_format)
        if not args.out:
            sys.stdout.write(text)
        return 0

    rng = np.random.default_rng(args.seed)
    grid = _parse_grid(args.grid)
    A = potential_from_spec(json.loads(args.potential), d=grid.d)

    if args.command == "quantize":
        f = symbol_from_spec(json.loads(args.symbol), grid, rng, args.eps, args.lam)
        T = quantize(A, f)
        back = wigner(A, T)
        payload = {
            "grid": args.grid,
            "eps": args.eps,
            "lambda": args.lam,
            "operator_norm": float(np.linalg.norm(T.entries, 2)),
            "norm_bound": operator_norm_bound(f),
            "roundtrip_residual": float(np.abs(back.values - f.values).max()),
        }
        if np.allclose(f.values.imag, 0):
            payload["hermiticity_defect"] = float(np.abs(T.entries - T.entries.conj().T).max())
        _emit(payload, args.out, args.format)
        return 0

    if args.command == "product":
        f = symbol_from_spec(json.loads(args.symbol), grid, rng, args.eps, args.lam)
        h = symbol_from_spec(json.loads(args.symbol2), grid, rng, args.eps, args.lam)
        p = pr.moyal_product(A, f, h, args.route)
        payload = {"grid": args.grid, "route": args.route, "result_max": float(np.abs(p.values).max())}
        other = "quadrature" if args.route == "operator" else "operator"
        try:
            q = pr.moyal_product(A, f, h, other)
            payload["route_agreement"] = float(np.abs(p.values - q.values).max())
        except ValueError as exc:
            payload["route_agreement_note"] = str(exc)
        _emit(payload, args.out, args.format)
        return 0

    if args.command == "semisuper":
        F = doubled_from_spec(json.loads(args.doubled), grid, rng, args.eps, args.lam)
        h = symbol_from_spec(json.loads(args.symbol), grid, rng, args.eps, args.lam)
        p = sc.semi_super_product(A, F, h, args.route)
        payload = {"grid": args.grid, "route": args.route, "result_max": float(np.abs(p.values).max())}
        if args.route != "operator":
            ref = sc.semi_super_product(A, F, h, "operator")
            payload["vs_operator_route"] = float(np.abs(p.values - ref.values).max())
        _emit(payload, args.out, args.format)
        return 0

    if args.command == "superproduct":
        F = doubled_from_spec(json.loads(args.doubled), grid, rng, args.eps, args.lam)
        G = doubled_from_spec(json.loads(args.doubled2), grid, rng, args.eps, args.lam)
        p = sc.super_product(A, F, G, args.route)
        payload = {"grid": args.grid, "route": args.route, "result_max": float(np.abs(p.values).max())}
        trace_lhs = complex(grid.mu**2 * np.sum(p.values))
        trace_rhs = complex(grid.mu**2 * np.sum(F.values * G.values))
        payload["trace_identity_residual"] = abs(trace_lhs - trace_rhs)
        _emit(payload, args.out, args.format)
        return 0

    if args.command == "liouville":
        h = symbol_from_spec(json.loads(args.symbol), grid, rng, args.eps, args.lam)
        Lh = sc.liouville_symbol(h)
        S = sc.super_quantize(A, Lh)
        oph = quantize(A, h).entries
        T = rng.standard_normal((grid.n_state, grid.n_state)) + 1j * rng.standard_normal((grid.n_state, grid.n_state))
        resid = float(np.abs(S.apply(T) - (-1j) * (oph @ T - T @ oph)).max())
        _emit(
            {"grid": args.grid, "commutator_residual": resid, "transpose_antisymmetry": float(np.abs(sc.transpose_doubled(Lh).values + Lh.values).max())},
            args.out,
            args.format,
        )
        return 0

    if args.command == "expand":
        f = symbol_from_spec(json.loads(args.symbol), grid, rng, args.eps, args.lam)
        h = symbol_from_spec(json.loads(args.symbol2), grid, rng, args.eps, args.lam)
        eps_values = [float(v) for v in args.eps_values.split(",")]
        rows = []
        for eps in eps_values:
            rows.append((eps, pr.semiclassical_defect(A, f, h, eps=eps)))
        lines = ["eps,defect,ratio_to_next"]
        for i, (eps, dv) in enumerate(rows):
            ratio = rows[i][1] / rows[i + 1][1] if i + 1 < len(rows) else float("nan")
            lines.append(f"{eps:.12g},{dv:.12g},{ratio:.12g}")
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    parser.error("unknown command")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
