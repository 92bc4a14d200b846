"""FastAPI service wrapping the core analysis operations.

The handle_* functions do the work and are also what the CLI calls
in-process; the route functions only translate domain errors to HTTP ones.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..charpoly import charpoly, charpoly_roots
from ..optimizer import branch_bridge, minimize_slem
from ..reference import (
    TABLE_TOL,
    benchmark_passed,
    benchmark_rows,
    parse_sweep_spec,
    sweep_inner,
)
from ..simulator import (
    convergence_factor,
    iterate,
    random_initial_state,
    widest_valid_burn_in,
)
from ..spectral import slem, slem_of_matrix
from ..topology import ChainSpec, build_chain, parse_host
from ..weights import assemble, baseline_weights, optimal_weights, orbit_weights_of_matrix
from . import schemas


def handle_slem(req: schemas.SlemRequest) -> schemas.SlemResponse:
    spec = ChainSpec(tuple(req.orders))
    if req.scheme == "optimal":
        w = optimal_weights(spec)
        report = slem(spec, w)
    else:
        t = build_chain(spec)
        W = baseline_weights(t, req.scheme)
        w = orbit_weights_of_matrix(t, W)
        report = slem_of_matrix(W)
    return schemas.SlemResponse(
        orders=list(spec.orders),
        scheme=req.scheme,
        weights=[float(x) for x in w],
        slem=report.slem,
        lambda2=report.lambda2,
        lambda_min=report.lambda_min,
        attaining_source=report.attaining_source,
        stratified=report.stratified,
    )


def handle_charpoly(req: schemas.CharpolyRequest) -> schemas.CharpolyResponse:
    spec = ChainSpec(tuple(req.orders))
    poly = charpoly(spec)
    roots = charpoly_roots(poly)
    return schemas.CharpolyResponse(
        orders=list(spec.orders),
        degree=poly.degree,
        u_coefficients=list(poly.u_coefficients),
        roots=[float(r) for r in roots],
        largest_root=float(roots[0]),
    )


def handle_table1() -> schemas.Table1Response:
    rows = benchmark_rows()
    return schemas.Table1Response(
        rows=[
            schemas.BenchmarkRowModel(
                orders=list(r.orders),
                slem_charpoly=r.slem_charpoly,
                slem_eig=r.slem_eig,
                table_value=r.table_value,
                abs_err=r.abs_err,
            )
            for r in rows
        ],
        passed=benchmark_passed(rows),
        max_abs_err=max(r.abs_err for r in rows),
        tolerance=TABLE_TOL,
    )


def handle_optimize(req: schemas.OptimizeRequest) -> schemas.OptimizeResponse:
    spec = ChainSpec(tuple(req.orders))
    result = minimize_slem(
        spec, init=req.init, budget=req.budget, tol=req.tol, seed=req.seed
    )
    return schemas.OptimizeResponse(
        orders=list(spec.orders),
        weights=[float(x) for x in result.weights],
        slem=result.achieved_slem,
        evaluations=result.evaluations,
        converged=result.converged,
        seed=result.seed,
    )


def handle_simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    spec = ChainSpec(tuple(req.orders))
    if req.scheme == "optimal":
        W = assemble(spec, optimal_weights(spec))
        analytic = slem(spec, optimal_weights(spec)).slem
    else:
        W = baseline_weights(build_chain(spec), req.scheme)
        analytic = slem_of_matrix(W).slem
    trace = iterate(W, random_initial_state(spec.node_count, req.seed), req.steps)
    burn_in = req.burn_in if req.burn_in is not None else widest_valid_burn_in(trace)
    factor = convergence_factor(trace, burn_in)
    return schemas.SimulateResponse(
        orders=list(spec.orders),
        scheme=req.scheme,
        steps=req.steps,
        seed=req.seed,
        burn_in=burn_in,
        empirical_factor=factor,
        analytic_slem=analytic,
        initial_deviation=float(trace.deviations[0]),
        final_deviation=float(trace.deviations[-1]),
    )


def handle_branch(req: schemas.BranchRequest) -> schemas.BranchResponse:
    spec = ChainSpec(tuple(req.orders))
    host = parse_host(req.host)
    result = branch_bridge(spec, host, attach=req.attach, budget=req.budget, seed=req.seed)
    return schemas.BranchResponse(
        orders=list(spec.orders),
        host=req.host,
        attach=req.attach,
        interior_weights=[float(x) for x in result.interior_weights],
        bridge_weight=result.bridge_weight,
        host_edge_weights=[float(x) for x in result.host_edge_weights],
        interior_match=result.interior_match,
        slem=result.achieved_slem,
        evaluations=result.evaluations,
        converged=result.converged,
        seed=result.seed,
    )


def handle_sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    m, lo, hi = parse_sweep_spec(req.range_spec)
    rows = sweep_inner(m, lo, hi)
    return schemas.SweepResponse(
        rows=[
            schemas.SweepRowModel(orders=list(orders), slem=value)
            for orders, value in rows
        ]
    )


app = FastAPI(
    title="rhombusnet",
    version=__version__,
    description="Consensus-averaging analysis of chain-of-rhombus networks",
)


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


def _run(handler, *args):
    try:
        return handler(*args)
    except (ValueError, RuntimeError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/slem", response_model=schemas.SlemResponse)
def slem_route(req: schemas.SlemRequest) -> schemas.SlemResponse:
    return _run(handle_slem, req)


@app.post("/charpoly", response_model=schemas.CharpolyResponse)
def charpoly_route(req: schemas.CharpolyRequest) -> schemas.CharpolyResponse:
    return _run(handle_charpoly, req)


@app.get("/table1", response_model=schemas.Table1Response)
def table1_route() -> schemas.Table1Response:
    return _run(handle_table1)


@app.post("/optimize", response_model=schemas.OptimizeResponse)
def optimize_route(req: schemas.OptimizeRequest) -> schemas.OptimizeResponse:
    return _run(handle_optimize, req)


@app.post("/simulate", response_model=schemas.SimulateResponse)
def simulate_route(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
    return _run(handle_simulate, req)


@app.post("/branch", response_model=schemas.BranchResponse)
def branch_route(req: schemas.BranchRequest) -> schemas.BranchResponse:
    return _run(handle_branch, req)


@app.post("/sweep", response_model=schemas.SweepResponse)
def sweep_route(req: schemas.SweepRequest) -> schemas.SweepResponse:
    return _run(handle_sweep, req)
