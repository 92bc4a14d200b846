"""Command-line client for the analysis service.

Every subcommand builds the same request model the HTTP endpoint takes and
calls the handler in-process; `serve` starts the HTTP server itself.  JSON
output rounds to 10 significant digits; regression tables print a 4-decimal
human summary on stderr.

Exit codes: 0 success, 1 usage or invalid input, 2 regression failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any

from pydantic import ValidationError

from .charpoly import RootInconsistencyError
from .reference import TABLE_TOL
from .service import schemas
from .service.app import (
    handle_branch,
    handle_charpoly,
    handle_optimize,
    handle_simulate,
    handle_slem,
    handle_sweep,
    handle_table1,
)
from .simulator import iterate, random_initial_state, trace_to_csv
from .topology import ChainSpec, InvalidHostError, InvalidSpecError, build_chain
from .weights import assemble, baseline_weights, optimal_weights

USAGE_EXIT = 1
REGRESSION_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:   # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _round10(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.10g}")
    if isinstance(value, list):
        return [_round10(v) for v in value]
    if isinstance(value, dict):
        return {k: _round10(v) for k, v in value.items()}
    return value


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json_text(model) -> str:
    return json.dumps(_round10(model.model_dump()), indent=2)


def _parse_orders(text: str) -> list[int]:
    return list(ChainSpec.from_text(text).orders)


def _cmd_slem(args) -> int:
    req = schemas.SlemRequest(orders=_parse_orders(args.orders), scheme=args.scheme)
    _emit(_json_text(handle_slem(req)), args.out)
    return 0


def _cmd_charpoly(args) -> int:
    req = schemas.CharpolyRequest(orders=_parse_orders(args.orders))
    resp = handle_charpoly(req)
    if args.format == "json":
        _emit(_json_text(resp), args.out)
    else:
        # u-coefficients, highest power first
        _emit(",".join(str(c) for c in reversed(resp.u_coefficients)), args.out)
    return 0


def _cmd_table1(args) -> int:
    resp = handle_table1()
    if args.format == "json":
        _emit(_json_text(resp), args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["orders", "slem_charpoly", "slem_eig", "table_value", "abs_err"])
        for row in resp.rows:
            writer.writerow(
                [
                    ",".join(str(n) for n in row.orders),
                    f"{row.slem_charpoly:.10g}",
                    f"{row.slem_eig:.10g}",
                    f"{row.table_value:.4f}",
                    f"{row.abs_err:.10g}",
                ]
            )
        _emit(buf.getvalue(), args.out)
    ok = sum(1 for r in resp.rows if r.abs_err <= resp.tolerance)
    print(
        f"{ok}/{len(resp.rows)} rows within {TABLE_TOL:.0e} of the published values"
        f" (worst {resp.max_abs_err:.1e})",
        file=sys.stderr,
    )
    return 0 if resp.passed else REGRESSION_EXIT


def _cmd_optimize(args) -> int:
    req = schemas.OptimizeRequest(
        orders=_parse_orders(args.orders),
        budget=args.budget,
        tol=args.tol,
        seed=args.seed,
    )
    _emit(_json_text(handle_optimize(req)), args.out)
    return 0


def _cmd_simulate(args) -> int:
    req = schemas.SimulateRequest(
        orders=_parse_orders(args.orders),
        scheme=args.scheme,
        steps=args.steps,
        seed=args.seed,
        burn_in=args.burn_in,
    )
    if args.format == "csv":
        # full trace export; same run the summary is computed from
        spec = ChainSpec(tuple(req.orders))
        if req.scheme == "optimal":
            W = assemble(spec, optimal_weights(spec))
        else:
            W = baseline_weights(build_chain(spec), req.scheme)
        trace = iterate(W, random_initial_state(spec.node_count, req.seed), req.steps)
        _emit(trace_to_csv(trace), args.out)
        return 0
    _emit(_json_text(handle_simulate(req)), args.out)
    return 0


def _cmd_branch(args) -> int:
    req = schemas.BranchRequest(
        orders=_parse_orders(args.orders),
        host=args.host,
        attach=args.attach,
        budget=args.budget,
        seed=args.seed,
    )
    _emit(_json_text(handle_branch(req)), args.out)
    return 0


def _cmd_sweep(args) -> int:
    resp = handle_sweep(schemas.SweepRequest(range_spec=args.orders_range))
    if args.format == "json":
        _emit(_json_text(resp), args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["orders", "slem"])
        for row in resp.rows:
            writer.writerow([",".join(str(n) for n in row.orders), f"{row.slem:.10g}"])
        _emit(buf.getvalue(), args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("rhombusnet.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="rhombusnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", default=None, help="write output to this file")
        return p

    p = add("slem", _cmd_slem, "SLEM report for a chain")
    p.add_argument("--orders", required=True, help='block orders, e.g. "3,2,4"')
    p.add_argument("--scheme", default="optimal",
                   choices=["optimal", "max-degree", "metropolis"])

    p = add("charpoly", _cmd_charpoly, "recursion polynomial at optimal weights")
    p.add_argument("--orders", required=True)
    p.add_argument("--format", default="csv", choices=["json", "csv"])

    p = add("table1", _cmd_table1, "45-row published-value regression report")
    p.add_argument("--format", default="csv", choices=["json", "csv"])

    p = add("optimize", _cmd_optimize, "numerical weight optimization")
    p.add_argument("--orders", required=True)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)

    p = add("simulate", _cmd_simulate, "averaging iteration and empirical factor")
    p.add_argument("--orders", required=True)
    p.add_argument("--scheme", default="optimal",
                   choices=["optimal", "max-degree", "metropolis"])
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--format", default="json", choices=["json", "csv"])

    p = add("branch", _cmd_branch, "branch optimization with a host graph")
    p.add_argument("--orders", required=True)
    p.add_argument("--host", default="node",
                   help='"node" | "triangle" | "random:<n>:<p>:<seed>"')
    p.add_argument("--attach", type=int, default=0)
    p.add_argument("--budget", type=int, default=60000)
    p.add_argument("--seed", type=int, default=0)

    p = add("sweep", _cmd_sweep, "SLEM as the middle block order grows")
    p.add_argument("--orders-range", required=True, help='e.g. "m=3;inner=1..50"')
    p.add_argument("--format", default="csv", choices=["json", "csv"])

    p = add("serve", _cmd_serve, "run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidSpecError, InvalidHostError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (RootInconsistencyError, RuntimeError) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return REGRESSION_EXIT


if __name__ == "__main__":
    sys.exit(main())
